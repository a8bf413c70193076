"""Circuits and branching programs, their evaluators and normal forms.

Layered programs store ``length`` instruction layers of ``width`` nodes each.
Every node of layer ``k`` reads a variable and moves to a node of layer
``k+1``; layer ``length+1`` is the terminal layer whose nodes are marked
accepting (``accept``) or rejecting.  Rows and layers are 1-based.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from itertools import product
from typing import NamedTuple, Sequence

from .errors import InvariantError, MalformedError, PreconditionError

# --- circuits ----------------------------------------------------------------

GATE_ARITY = {"INPUT": 1, "CONST": 1, "NOT": 1, "AND": 2, "OR": 2}


class Gate(NamedTuple):
    op: str
    args: tuple[int, ...]


@dataclass(frozen=True)
class Circuit:
    """Fan-in-2 AND/OR/NOT circuit; gate arguments index earlier gates."""

    n: int
    gates: tuple[Gate, ...]
    output: int
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        gates = tuple(Gate(op, tuple(args)) for op, args in self.gates)
        object.__setattr__(self, "gates", gates)
        for k, g in enumerate(gates):
            if g.op not in GATE_ARITY or len(g.args) != GATE_ARITY[g.op]:
                raise MalformedError(f"gate {k}: bad gate {g}")
            if g.op == "INPUT":
                if not 1 <= g.args[0] <= self.n:
                    raise MalformedError(f"gate {k}: input {g.args[0]} outside [1, {self.n}]")
            elif g.op == "CONST":
                if g.args[0] not in (0, 1):
                    raise MalformedError(f"gate {k}: constant must be 0 or 1")
            elif any(not 0 <= a < k for a in g.args):
                raise MalformedError(f"gate {k}: dangling or forward reference {g.args}")
        if not 0 <= self.output < len(gates):
            raise MalformedError(f"output {self.output} is not a gate")
        if self.names is not None and len(self.names) != len(gates):
            raise MalformedError("names must match gates one to one")

    @property
    def size(self) -> int:
        return sum(g.op in ("NOT", "AND", "OR") for g in self.gates)


def eval_circuit(c: Circuit, x: Sequence[int]) -> int:
    if len(x) != c.n:
        raise ValueError(f"input has {len(x)} bits, circuit expects {c.n}")
    val = []
    for op, args in c.gates:
        if op == "INPUT":
            v = x[args[0] - 1]
        elif op == "CONST":
            v = args[0]
        elif op == "NOT":
            v = 1 - val[args[0]]
        elif op == "AND":
            v = val[args[0]] & val[args[1]]
        else:
            v = val[args[0]] | val[args[1]]
        val.append(v)
    return val[c.output]


def input_column(n: int, i: int) -> int:
    """Bitset over all 2^n inputs (lexicographic index) where x_i = 1."""
    block = 1 << (n - i)
    unit = ((1 << block) - 1) << block  # zeros then ones
    pattern, width = unit, 2 * block
    total = 1 << n
    while width < total:
        pattern |= pattern << width
        width *= 2
    return pattern


def truth_table(c: Circuit) -> int:
    """Evaluate on all inputs at once; bit ``idx`` is f(bits_of(idx))."""
    full = (1 << (1 << c.n)) - 1
    val = []
    for op, args in c.gates:
        if op == "INPUT":
            v = input_column(c.n, args[0])
        elif op == "CONST":
            v = full if args[0] else 0
        elif op == "NOT":
            v = full ^ val[args[0]]
        elif op == "AND":
            v = val[args[0]] & val[args[1]]
        else:
            v = val[args[0]] | val[args[1]]
        val.append(v)
    return val[c.output]


def bits_of(idx: int, n: int) -> tuple[int, ...]:
    return tuple((idx >> (n - i)) & 1 for i in range(1, n + 1))


def index_of(x: Sequence[int]) -> int:
    idx = 0
    for b in x:
        idx = (idx << 1) | b
    return idx


def _gate_depths(c: Circuit, counted) -> list[int]:
    depth = []
    for op, args in c.gates:
        if op in ("INPUT", "CONST"):
            depth.append(0)
        else:
            depth.append(max(depth[a] for a in args) + (op in counted))
    return depth


def circuit_depth(c: Circuit) -> int:
    """Longest input-to-output path counting AND, OR and NOT gates."""
    return _gate_depths(c, ("AND", "OR", "NOT"))[c.output]


def and_or_depth(c: Circuit) -> int:
    """Longest path counting only AND and OR gates."""
    return _gate_depths(c, ("AND", "OR"))[c.output]


def dump_circ(c: Circuit) -> str:
    names = c.names or tuple(f"g{k}" for k in range(len(c.gates)))
    lines = ["circuit v1", f"inputs {c.n}"]
    for k, (op, args) in enumerate(c.gates):
        if op in ("INPUT", "CONST"):
            rhs = f"{op} {args[0]}"
        else:
            rhs = " ".join([op] + [names[a] for a in args])
        lines.append(f"let {names[k]} = {rhs}")
    lines.append(f"output {names[c.output]}")
    return "\n".join(lines) + "\n"


def parse_circ(text: str) -> Circuit:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != "circuit v1":
        raise MalformedError("expected 'circuit v1' header")
    n = None
    index: dict[str, int] = {}
    gates, names = [], []
    output = None
    for ln in lines[1:]:
        tok = ln.split()
        try:
            if tok[0] == "inputs" and len(tok) == 2:
                n = int(tok[1])
            elif tok[0] == "let" and len(tok) >= 4 and tok[2] == "=":
                name, op, rest = tok[1], tok[3], tok[4:]
                if name in index:
                    raise MalformedError(f"gate {name!r} defined twice")
                if op not in GATE_ARITY or len(rest) != GATE_ARITY[op]:
                    raise MalformedError(f"bad gate line {ln!r}")
                if op in ("INPUT", "CONST"):
                    args = (int(rest[0]),)
                else:
                    missing = [r for r in rest if r not in index]
                    if missing:
                        raise MalformedError(f"undefined gate(s) {missing} in {ln!r}")
                    args = tuple(index[r] for r in rest)
                index[name] = len(gates)
                gates.append(Gate(op, args))
                names.append(name)
            elif tok[0] == "output" and len(tok) == 2:
                if tok[1] not in index:
                    raise MalformedError(f"output {tok[1]!r} is not defined")
                output = index[tok[1]]
            else:
                raise MalformedError(f"unrecognised line: {ln!r}")
        except ValueError as exc:
            if isinstance(exc, MalformedError):
                raise
            raise MalformedError(f"bad line {ln!r}: {exc}") from exc
    if n is None or output is None:
        raise MalformedError("circuit needs 'inputs' and 'output' lines")
    return Circuit(n, tuple(gates), output, tuple(names))


# --- general branching programs ----------------------------------------------


class BPNode(NamedTuple):
    kind: str  # "var", "accept" or "reject"
    var: int = 0
    goto0: int = 0
    goto1: int = 0


ACCEPT = BPNode("accept")
REJECT = BPNode("reject")


@dataclass(frozen=True)
class GeneralBP:
    """DAG program; ``nodes[q-1]`` is node ``q``."""

    n: int
    nodes: tuple[BPNode, ...]
    start: int = 1

    def __post_init__(self):
        nodes = tuple(BPNode(*nd) for nd in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        H = len(nodes)
        if not 1 <= self.start <= H:
            raise MalformedError(f"start node {self.start} outside [1, {H}]")
        for q, nd in enumerate(nodes, 1):
            if nd.kind == "var":
                if not 1 <= nd.var <= self.n:
                    raise MalformedError(f"node {q}: variable {nd.var} outside [1, {self.n}]")
                if not (1 <= nd.goto0 <= H and 1 <= nd.goto1 <= H):
                    raise MalformedError(f"node {q}: edge to a missing node")
            elif nd.kind not in ("accept", "reject"):
                raise MalformedError(f"node {q}: unknown kind {nd.kind!r}")

    @property
    def H(self) -> int:
        return len(self.nodes)

    def accept_nodes(self) -> list[int]:
        return [q for q, nd in enumerate(self.nodes, 1) if nd.kind == "accept"]

    def is_topo_indexed(self) -> bool:
        return self.start == 1 and all(
            nd.kind != "var" or (nd.goto0 > q and nd.goto1 > q)
            for q, nd in enumerate(self.nodes, 1)
        )


@dataclass(frozen=True)
class LayeredBP:
    """Width-``width`` program; ``layers[k-1][j-1]`` is node ``(k, j)``."""

    n: int
    width: int
    layers: tuple[tuple[BPNode, ...], ...]
    accept: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        J = self.width
        layers = tuple(tuple(BPNode(*nd) for nd in layer) for layer in self.layers)
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "accept", frozenset(self.accept))
        if J < 1:
            raise MalformedError("width must be at least 1")
        for k, layer in enumerate(layers, 1):
            if len(layer) != J:
                raise MalformedError(f"layer {k} has {len(layer)} nodes, expected {J}")
            for j, nd in enumerate(layer, 1):
                if nd.kind != "var":
                    raise MalformedError(f"node ({k},{j}): layered nodes must be variable nodes")
                if not 1 <= nd.var <= self.n:
                    raise MalformedError(f"node ({k},{j}): variable {nd.var} outside [1, {self.n}]")
                if not (1 <= nd.goto0 <= J and 1 <= nd.goto1 <= J):
                    raise MalformedError(f"node ({k},{j}): edge outside [1, {J}]")
        if any(not 1 <= a <= J for a in self.accept):
            raise MalformedError("accept rows must lie in [1, width]")

    @property
    def length(self) -> int:
        return len(self.layers)

    def goto(self, k: int, bit: int) -> tuple[int, ...]:
        return tuple(nd.goto1 if bit else nd.goto0 for nd in self.layers[k - 1])

    def is_permutation(self) -> bool:
        rows = set(range(1, self.width + 1))
        return len(self.accept) == 1 and all(
            set(self.goto(k, b)) == rows for k in range(1, self.length + 1) for b in (0, 1)
        )


class PermutationBP(LayeredBP):
    """Layered program whose 0- and 1-edges are bijections in every layer."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.accept) != 1:
            raise InvariantError("a permutation program has exactly one accept node")
        rows = set(range(1, self.width + 1))
        for k in range(1, self.length + 1):
            for b in (0, 1):
                if set(self.goto(k, b)) != rows:
                    raise InvariantError(f"layer {k}: goto{b} is not a permutation")

    @classmethod
    def from_layered(cls, bp: LayeredBP) -> "PermutationBP":
        return cls(bp.n, bp.width, bp.layers, bp.accept)

    @property
    def accept_row(self) -> int:
        return next(iter(self.accept))


def eval_bp(bp, x: Sequence[int]) -> int:
    if len(x) != bp.n:
        raise ValueError(f"input has {len(x)} bits, program expects {bp.n}")
    if isinstance(bp, LayeredBP):
        row = 1
        for layer in bp.layers:
            nd = layer[row - 1]
            row = nd.goto1 if x[nd.var - 1] else nd.goto0
        return int(row in bp.accept)
    q = bp.start
    for _ in range(bp.H + 1):
        nd = bp.nodes[q - 1]
        if nd.kind != "var":
            return int(nd.kind == "accept")
        q = nd.goto1 if x[nd.var - 1] else nd.goto0
    raise MalformedError("walk exceeded the node count: program has a cycle")


def bp_truth_table(bp: LayeredBP) -> int:
    """Layered program on all inputs at once, in the bit order of :func:`truth_table`.

    Each row holds the set of inputs whose walk is currently on it.
    """
    full = (1 << (1 << bp.n)) - 1
    cols = {}
    rows = [0] * (bp.width + 1)
    rows[1] = full
    for layer in bp.layers:
        nxt = [0] * (bp.width + 1)
        for j, nd in enumerate(layer, 1):
            if rows[j]:
                if nd.var not in cols:
                    cols[nd.var] = input_column(bp.n, nd.var)
                on = rows[j] & cols[nd.var]
                nxt[nd.goto1] |= on
                nxt[nd.goto0] |= rows[j] ^ on
        rows = nxt
    out = 0
    for a in bp.accept:
        out |= rows[a]
    return out


def layered_to_general(bp: LayeredBP) -> GeneralBP:
    """Index node (k, j) as (k-1)*J + j; the terminal layer becomes sinks."""
    J = bp.width
    nodes = []
    for k, layer in enumerate(bp.layers, 1):
        base = k * J
        nodes += [BPNode("var", nd.var, base + nd.goto0, base + nd.goto1) for nd in layer]
    nodes += [ACCEPT if j in bp.accept else REJECT for j in range(1, J + 1)]
    return GeneralBP(bp.n, tuple(nodes), 1)


def topo_index(bp: GeneralBP) -> GeneralBP:
    """Renumber so edges only go forward and the start node is node 1.

    Ties are broken by the original index, so a sorted program is unchanged.
    """
    H = bp.H
    indeg = [0] * (H + 1)
    for nd in bp.nodes:
        if nd.kind == "var":
            indeg[nd.goto0] += 1
            if nd.goto1 != nd.goto0:
                indeg[nd.goto1] += 1
    if indeg[bp.start]:
        raise MalformedError("start node has incoming edges")
    heap = [(-1 if q == bp.start else q, q) for q in range(1, H + 1) if indeg[q] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, q = heapq.heappop(heap)
        order.append(q)
        nd = bp.nodes[q - 1]
        if nd.kind == "var":
            for t in {nd.goto0, nd.goto1}:
                indeg[t] -= 1
                if indeg[t] == 0:
                    heapq.heappush(heap, (t, t))
    if len(order) != H:
        raise MalformedError("program has a cycle")
    new = {old: k for k, old in enumerate(order, 1)}
    nodes = []
    for old in order:
        nd = bp.nodes[old - 1]
        if nd.kind == "var":
            nd = nd._replace(goto0=new[nd.goto0], goto1=new[nd.goto1])
        nodes.append(nd)
    return GeneralBP(bp.n, tuple(nodes), 1)


def normalize_single_accept(bp: GeneralBP) -> GeneralBP:
    """Keep the last accept node; others become variable nodes pointing at it.

    A program with no accept node gets an unreachable one appended.
    """
    bp = topo_index(bp)
    acc = bp.accept_nodes()
    if not acc:
        return GeneralBP(bp.n, bp.nodes + (ACCEPT,), 1)
    keep = acc[-1]
    if len(acc) > 1 and bp.n < 1:
        raise PreconditionError("cannot redirect accept nodes of a 0-input program")
    nodes = tuple(
        BPNode("var", 1, keep, keep) if (nd.kind == "accept" and q != keep) else nd
        for q, nd in enumerate(bp.nodes, 1)
    )
    return GeneralBP(bp.n, nodes, 1)


def merge_accepts(bp: LayeredBP) -> LayeredBP:
    """Redirect the last layer so only the lowest accepting row accepts."""
    if len(bp.accept) <= 1:
        return bp
    keep = min(bp.accept)
    fix = lambda t: keep if t in bp.accept else t
    layers = list(bp.layers)
    if layers:
        layers[-1] = tuple(nd._replace(goto0=fix(nd.goto0), goto1=fix(nd.goto1)) for nd in layers[-1])
    elif 1 in bp.accept:
        keep = 1
    return LayeredBP(bp.n, bp.width, tuple(layers), frozenset({keep}))


def _compose(p, q):
    """(p o q) on 1-based tuples: apply q, then p."""
    return tuple(p[q[j] - 1] for j in range(len(q)))


def _inverse(p):
    inv = [0] * len(p)
    for j, t in enumerate(p, 1):
        inv[t - 1] = j
    return tuple(inv)


def normalize_goto0_identity(pbp: LayeredBP, *, accept_last: bool = False) -> PermutationBP:
    """Relabel layers so every 0-edge keeps its row.

    Layer ``k+1`` is relabelled by the accumulated 0-edge permutations of the
    layers before it.  Rows 2..J of the first layer may also be relabelled; with
    ``accept_last`` this is used to put the accept node on row ``width`` when the
    all-zero walk rejects.
    """
    if not isinstance(pbp, PermutationBP):
        if not pbp.is_permutation():
            raise InvariantError("input is not a permutation branching program")
        pbp = PermutationBP.from_layered(pbp)
    J, K = pbp.width, pbp.length
    ident = tuple(range(1, J + 1))
    g = ident
    for k in range(1, K + 1):
        g = _compose(pbp.goto(k, 0), g)
    rho = list(ident)
    if accept_last:
        u = _inverse(g)[pbp.accept_row - 1]
        if u != 1 and u != J:
            rho[u - 1], rho[J - 1] = J, u
    rho = tuple(rho)
    layers = []
    for k in range(1, K + 1):
        nxt = _compose(rho, _inverse(pbp.goto(k, 0)))
        old = pbp.layers[k - 1]
        new = [None] * J
        for j, nd in enumerate(old, 1):
            new[rho[j - 1] - 1] = BPNode("var", nd.var, rho[j - 1], nxt[nd.goto1 - 1])
        layers.append(tuple(new))
        rho = nxt
    return PermutationBP(pbp.n, J, tuple(layers), frozenset({rho[pbp.accept_row - 1]}))


def flip_inputs(bp: LayeredBP, mask: Sequence[int]) -> LayeredBP:
    """Program computing f(x XOR mask): swap the edges of flipped variables."""
    if len(mask) != bp.n:
        raise ValueError("mask length must equal the input count")
    layers = tuple(
        tuple(nd._replace(goto0=nd.goto1, goto1=nd.goto0) if mask[nd.var - 1] else nd for nd in layer)
        for layer in bp.layers
    )
    out = LayeredBP(bp.n, bp.width, layers, bp.accept)
    if isinstance(bp, PermutationBP):
        if not out.is_permutation():
            raise InvariantError("flipping these variables breaks the permutation layers")
        return PermutationBP.from_layered(out)
    return out


def has_identity_goto0(bp: LayeredBP) -> bool:
    ident = tuple(range(1, bp.width + 1))
    return all(bp.goto(k, 0) == ident for k in range(1, bp.length + 1))


# --- .bp text format ---------------------------------------------------------


def dump_bp(bp) -> str:
    if isinstance(bp, GeneralBP):
        lines = ["bp v1 general", f"inputs {bp.n}"]
        for q, nd in enumerate(bp.nodes, 1):
            if nd.kind == "var":
                lines.append(f"node {q} var {nd.var} goto0 {nd.goto0} goto1 {nd.goto1}")
            else:
                lines.append(f"node {q} {nd.kind}")
        lines.append(f"start {bp.start}")
        return "\n".join(lines) + "\n"
    kind = "permutation" if isinstance(bp, PermutationBP) else "layered"
    lines = [f"bp v1 {kind}", f"inputs {bp.n}", f"width {bp.width} length {bp.length}"]
    for k, layer in enumerate(bp.layers, 1):
        for j, nd in enumerate(layer, 1):
            lines.append(f"node {k} {j} var {nd.var} goto0 {nd.goto0} goto1 {nd.goto1}")
    for a in sorted(bp.accept):
        lines.append(f"accept {bp.length + 1} {a}")
    return "\n".join(lines) + "\n"


def parse_bp(text: str):
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    head = lines[0].split() if lines else []
    if len(head) != 3 or head[:2] != ["bp", "v1"] or head[2] not in ("general", "layered", "permutation"):
        raise MalformedError("expected 'bp v1 <general|layered|permutation>' header")
    kind = head[2]
    try:
        return _parse_general(lines[1:]) if kind == "general" else _parse_layered(lines[1:], kind)
    except (ValueError, IndexError) as exc:
        if isinstance(exc, MalformedError):
            raise
        raise MalformedError(str(exc)) from exc


def _parse_general(lines):
    n = start = None
    nodes = {}
    for ln in lines:
        tok = ln.split()
        if tok[0] == "inputs" and len(tok) == 2:
            n = int(tok[1])
        elif tok[0] == "start" and len(tok) == 2:
            start = int(tok[1])
        elif tok[0] == "node" and len(tok) == 3 and tok[2] in ("accept", "reject"):
            nodes[int(tok[1])] = ACCEPT if tok[2] == "accept" else REJECT
        elif tok[0] == "node" and len(tok) == 8 and tok[2::2] == ["var", "goto0", "goto1"]:
            nodes[int(tok[1])] = BPNode("var", int(tok[3]), int(tok[5]), int(tok[7]))
        else:
            raise MalformedError(f"unrecognised line: {ln!r}")
    if n is None or start is None:
        raise MalformedError("general program needs 'inputs' and 'start'")
    if sorted(nodes) != list(range(1, len(nodes) + 1)):
        raise MalformedError("nodes must be numbered 1..H without gaps")
    return GeneralBP(n, tuple(nodes[q] for q in range(1, len(nodes) + 1)), start)


def _parse_layered(lines, kind):
    n = J = K = None
    cells = {}
    accept = set()
    for ln in lines:
        tok = ln.split()
        if tok[0] == "inputs" and len(tok) == 2:
            n = int(tok[1])
        elif tok[0] == "width" and len(tok) == 4 and tok[2] == "length":
            J, K = int(tok[1]), int(tok[3])
        elif tok[0] == "node" and len(tok) == 9 and tok[3::2] == ["var", "goto0", "goto1"]:
            cells[int(tok[1]), int(tok[2])] = BPNode("var", int(tok[4]), int(tok[6]), int(tok[8]))
        elif tok[0] == "accept" and len(tok) == 3:
            accept.add((int(tok[1]), int(tok[2])))
        else:
            raise MalformedError(f"unrecognised line: {ln!r}")
    if n is None or J is None:
        raise MalformedError("layered program needs 'inputs' and 'width ... length ...'")
    want = {(k, j) for k in range(1, K + 1) for j in range(1, J + 1)}
    if set(cells) != want:
        raise MalformedError(f"expected exactly {K * J} node lines covering every (layer, row)")
    if any(k != K + 1 for k, _ in accept):
        raise MalformedError(f"accept nodes must lie in the terminal layer {K + 1}")
    layers = tuple(tuple(cells[k, j] for j in range(1, J + 1)) for k in range(1, K + 1))
    cls = PermutationBP if kind == "permutation" else LayeredBP
    return cls(n, J, layers, frozenset(j for _, j in accept))


def all_inputs(n: int):
    return product((0, 1), repeat=n)
