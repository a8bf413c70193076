"""Branching programs to Benenson automata.

Five constructions, from most to least expensive enzyme:

``general``       one unique segment per node, cuts jump whole segments
``fixed``         layered programs, segments keyed by (var, jump0, jump1)
``fixed-constd``  same keys, constant cutting range via skip rules
``perm``          permutation programs with identity 0-edges, keys (var, jump1)
``sparse1``       permutation programs, a reading and a skip segment per node

The constant-range layouts start each segment with a marker symbol that
occurs nowhere else in the state.  A segment rule fires only on a
marker-initial sticky end and cuts ``d`` symbols; from then on every sticky
end lacks the marker and an input-independent skip rule cuts ``D`` symbols.
With segments of length ``m = D*k + 1`` the misalignment shrinks by one at
each segment boundary, so the chain lands exactly on the start of segment
``q + d``.

Reject nodes of the terminal layer get a halting code (no rules) and the
accept node is placed last whenever a spare code exists and the layout
allows it; rejecting runs then stop at least one segment before the accept
position.  Otherwise terminal segments reuse the code with the longest
jumps, which carries rejecting runs past the accept position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .core import Alphabet, BenensonAutomaton, CuttingRule, dump_ben, input_independent, sparseness
from .errors import InvariantError, PreconditionError, UnsupportedAlphabetError
from .machines import (
    Circuit,
    GeneralBP,
    LayeredBP,
    PermutationBP,
    eval_bp,
    flip_inputs,
    has_identity_goto0,
    normalize_goto0_identity,
)

CONSTRUCTIONS = ("general", "fixed", "fixed-constd", "perm", "sparse1")


def ceil_log(base: int, x: int) -> int:
    """Smallest t >= 0 with base**t >= x (exact integer arithmetic)."""
    t, power = 0, 1
    while power < x:
        power *= base
        t += 1
    return t


@dataclass
class CompilationReport:
    construction: str
    n: int
    sigma: str
    S: int
    D: int
    L: int
    accept_pos: int
    segment_length: int
    sparseness: int
    width: int = 0
    node_layers: int = 0  # instruction layers + terminal layer
    nodes: int = 0
    skip_k: int = 0
    formula: dict = field(default_factory=dict)
    codes: dict = field(default_factory=dict)  # segment key -> code prefix
    slots: dict = field(default_factory=dict)  # node label -> offset
    polarity: tuple = ()
    reject_convention: bool = False
    notes: list = field(default_factory=list)

    @property
    def sticky_span_L(self) -> int:
        """The length figure with sticky-end size in place of segment length."""
        if self.construction == "general":
            return self.nodes * self.S
        per = 2 if self.construction == "sparse1" else 1
        return per * self.node_layers * self.width * self.S

    def to_text(self) -> str:
        out = [
            f"construction {self.construction}",
            f"n={self.n} |sigma|={len(self.sigma)} width={self.width} "
            f"node_layers={self.node_layers} nodes={self.nodes}",
            f"produced S={self.S} D={self.D} L={self.L} p={self.accept_pos} "
            f"m={self.segment_length} k={self.skip_k} sparseness={self.sparseness}",
            "formula " + " ".join(f"{k}={v}" for k, v in self.formula.items()),
            f"L with S per segment: {self.sticky_span_L}",
            f"reject convention: {'yes' if self.reject_convention else 'no'}",
        ]
        if any(self.polarity):
            out.append("polarity " + "".join(map(str, self.polarity)))
        out += [f"note: {t}" for t in self.notes]
        out.append(f"codes ({len(self.codes)}):")
        out += [f"  {key} -> {code}" for key, code in self.codes.items()]
        out.append("segment offsets:")
        rows: dict[str, list[str]] = {}
        for label, off in self.slots.items():
            layer = label.split(".")[0]
            rows.setdefault(layer, []).append(f"{label}@{off}")
        out += ["  " + " ".join(v) for v in rows.values()]
        return "\n".join(out)


@dataclass(frozen=True)
class Compiled:
    automaton: BenensonAutomaton
    report: CompilationReport

    def to_ben(self) -> str:
        return dump_ben(self.automaton, self.report.to_text().splitlines())


# --- code tables -------------------------------------------------------------


def full_code(sigma: str, index: int, S: int) -> str:
    digits = []
    for _ in range(S):
        index, r = divmod(index, len(sigma))
        digits.append(sigma[r])
    if index:
        raise ValueError("index does not fit in S symbols")
    return "".join(reversed(digits))


def marker_code(sigma: str, index: int, S: int) -> str:
    return sigma[0] + full_code(sigma[1:], index, S - 1)


def _sigma(alphabet) -> str:
    return str(alphabet) if not isinstance(alphabet, str) else Alphabet(alphabet).symbols


def _need_marker_alphabet(sigma: str):
    if len(sigma) < 3:
        raise UnsupportedAlphabetError("constant-range constructions need at least 3 symbols")


def skip_length(S: int, D: int) -> int:
    """Smallest k >= 1 with D*k + 1 >= S."""
    k = 1
    while D * k + 1 < S:
        k += 1
    return k


def _skip_rules(state: str, S: int, D: int, sigma: str, exhaustive: bool) -> set:
    marker = sigma[0]
    if exhaustive:
        windows = ("".join(w) for w in product(sigma, repeat=S) if w[0] != marker)
    else:
        windows = {state[j : j + S] for j in range(len(state) - S + 1) if state[j] != marker}
    rules = set()
    for w in windows:
        rules.update(input_independent(w, D))
    return rules


def _polarity(polarity, n) -> tuple[int, ...]:
    c = tuple(polarity) if polarity is not None else (0,) * n
    if len(c) != n or set(c) - {0, 1}:
        raise ValueError("polarity must be n bits")
    return c


# --- general programs --------------------------------------------------------


def compile_general(bp: GeneralBP, alphabet="ACGT") -> Compiled:
    """Each node gets its own S-symbol segment; cuts skip whole segments."""
    sigma = _sigma(alphabet)
    if not bp.is_topo_indexed():
        raise PreconditionError("program must be topologically indexed (see topo_index)")
    acc = bp.accept_nodes()
    if len(acc) != 1:
        raise PreconditionError("program must have exactly one accept node")
    notes = []
    nodes = list(bp.nodes)
    a = acc[0]
    if a != bp.H:
        # a sink can move to the end without breaking the forward order
        remap = {q: (q if q < a else q - 1) for q in range(1, bp.H + 1)}
        remap[a] = bp.H
        moved = [None] * bp.H
        for q, nd in enumerate(nodes, 1):
            if nd.kind == "var":
                nd = nd._replace(goto0=remap[nd.goto0], goto1=remap[nd.goto1])
            moved[remap[q] - 1] = nd
        nodes = moved
        notes.append(f"accept node {a} relocated to {bp.H}")
    H = len(nodes)
    S = ceil_log(len(sigma), H)
    D = (H - 1) * S
    codes = {q: full_code(sigma, q - 1, S) for q in range(1, H + 1)}
    rules = set()
    for q, nd in enumerate(nodes, 1):
        if nd.kind == "var":
            rules.add(CuttingRule(nd.var, 0, codes[q], (nd.goto0 - q) * S))
            rules.add(CuttingRule(nd.var, 1, codes[q], (nd.goto1 - q) * S))
    state = "".join(codes[q] for q in range(1, H + 1))
    aut = BenensonAutomaton(Alphabet(sigma), bp.n, S, D, state, frozenset(rules), (H - 1) * S)
    report = CompilationReport(
        construction="general", n=bp.n, sigma=sigma, S=S, D=D, L=aut.L,
        accept_pos=aut.accept_pos, segment_length=S, sparseness=sparseness(aut),
        nodes=H, formula={"S": S, "D": D, "L": H * S},
        codes={str(q): c for q, c in codes.items()},
        slots={str(q): (q - 1) * S for q in range(1, H + 1)},
        reject_convention=True, notes=notes,
    )
    return Compiled(aut, report)


# --- layered programs ----------------------------------------------------------


class _Layout:
    """Physical order of segments for a layered program."""

    def __init__(self, K: int, J: int, terminal_order: Sequence[int]):
        self.K, self.J = K, J
        self.pos = {row: t for t, row in enumerate(terminal_order, 1)}

    def index(self, k: int, j: int) -> int:
        if k == self.K + 1:
            return self.K * self.J + self.pos[j]
        return (k - 1) * self.J + j


def compile_fixed_width(bp: LayeredBP, alphabet="ACGT", *, constant_range: bool = False,
                        exhaustive_windows: bool = False) -> Compiled:
    """Width-J layered program; segments keyed by (var, jump on 0, jump on 1).

    With ``constant_range`` the cutting range drops to 2J-1 using skip rules.
    """
    sigma = _sigma(alphabet)
    if constant_range:
        _need_marker_alphabet(sigma)
    if len(bp.accept) != 1:
        raise PreconditionError("program must have exactly one accept node (see merge_accepts)")
    n, J, K = bp.n, bp.width, bp.length
    accept = next(iter(bp.accept))
    # with no instruction layers the start node is terminal row 1 and must stay first
    order = [j for j in range(1, J + 1) if j != accept] + [accept] if K else list(range(1, J + 1))
    lay = _Layout(K, J, order)

    node_key = {}
    for k, layer in enumerate(bp.layers, 1):
        for j, nd in enumerate(layer, 1):
            here = lay.index(k, j)
            node_key[k, j] = (nd.var, lay.index(k + 1, nd.goto0) - here, lay.index(k + 1, nd.goto1) - here)
    keys = sorted(set(node_key.values()))
    bound = n * (2 * J - 1) ** 2
    if constant_range:
        S = 1 + ceil_log(len(sigma) - 1, bound)
        D = 2 * J - 1
        k_skip = skip_length(S, D)
        m = D * k_skip + 1
        capacity = (len(sigma) - 1) ** (S - 1)
        encode, scale = marker_code, 1
    else:
        S = max(1, ceil_log(len(sigma), bound))  # n = J = 1 would give S = 0
        D = (2 * J - 1) * S
        k_skip, m = 0, S
        capacity = len(sigma) ** S
        encode, scale = full_code, S
    if len(keys) > capacity:
        raise PreconditionError(f"{len(keys)} segment keys exceed {capacity} codes")
    code = {key: encode(sigma, t, S) for t, key in enumerate(keys)}

    notes = []
    halt = None
    if len(keys) < capacity:
        halt = encode(sigma, len(keys), S)
        terminal = halt
    else:
        far = max(keys, key=lambda kk: (min(kk[1], kk[2]), kk))
        terminal = code[far]
        notes.append("code space full: terminal segments reuse the longest-jump code")

    def segment(c):
        return c + sigma[1] * (m - S) if constant_range else c

    slots, parts = {}, []
    for k in range(1, K + 2):
        rows = range(1, J + 1) if k <= K else order
        for j in rows:
            c = code[node_key[k, j]] if k <= K else terminal
            slots[f"{k}.{j}"] = len(parts) * m
            parts.append(segment(c))
    state = "".join(parts)
    rules = set()
    for (var, d0, d1), c in code.items():
        rules.add(CuttingRule(var, 0, c, d0 * scale))
        rules.add(CuttingRule(var, 1, c, d1 * scale))
    if constant_range:
        rules |= _skip_rules(state, S, D, sigma, exhaustive_windows)
    p = slots[f"{K + 1}.{accept}"]
    aut = BenensonAutomaton(Alphabet(sigma), n, S, D, state, frozenset(rules), p)
    name = "fixed-constd" if constant_range else "fixed"
    codes = {str(kk): c for kk, c in code.items()}
    if halt is not None:
        codes["halt"] = halt
    report = CompilationReport(
        construction=name, n=n, sigma=sigma, S=S, D=D, L=aut.L, accept_pos=p,
        segment_length=m, sparseness=sparseness(aut), width=J, node_layers=K + 1,
        nodes=(K + 1) * J, skip_k=k_skip,
        formula={"S": S, "D": D, "L": (K + 1) * J * m, "sparseness<=": (2 * J - 1) ** 2},
        codes=codes, slots=slots, reject_convention=halt is not None, notes=notes,
    )
    return Compiled(aut, report)


def compile_fixed_width_constD(bp: LayeredBP, alphabet="ACGT", *, exhaustive_windows: bool = False) -> Compiled:
    return compile_fixed_width(bp, alphabet, constant_range=True, exhaustive_windows=exhaustive_windows)


def _check_perm_input(pbp, sigma):
    _need_marker_alphabet(sigma)
    if not isinstance(pbp, PermutationBP):
        if not pbp.is_permutation():
            raise InvariantError("input is not a permutation branching program")
        pbp = PermutationBP.from_layered(pbp)
    if not has_identity_goto0(pbp):
        raise PreconditionError("0-edges must be the identity (see normalize_goto0_identity)")
    return pbp


def compile_permutation(pbp: PermutationBP, alphabet="ACGT", *, polarity=None,
                        exhaustive_windows: bool = False) -> Compiled:
    """Permutation program with identity 0-edges; segments keyed by (var, jump on 1).

    The automaton computes ``eval_bp(pbp, x XOR polarity)``: the bit value
    ``polarity[i]`` of variable ``i`` is the one that always skips ``J`` segments.
    """
    sigma = _sigma(alphabet)
    pbp = _check_perm_input(pbp, sigma)
    n, J, K = pbp.n, pbp.width, pbp.length
    c = _polarity(polarity, n)
    accept = pbp.accept_row

    node_key = {}
    for k, layer in enumerate(pbp.layers, 1):
        for j, nd in enumerate(layer, 1):
            node_key[k, j] = (nd.var, J + nd.goto1 - j)
    keys = sorted(set(node_key.values()))
    S = 1 + ceil_log(len(sigma) - 1, n * (2 * J - 1))
    D = 2 * J - 1
    k_skip = skip_length(S, D)
    m = D * k_skip + 1
    capacity = (len(sigma) - 1) ** (S - 1)
    if len(keys) > capacity:
        raise PreconditionError(f"{len(keys)} segment keys exceed {capacity} codes")
    code = {key: marker_code(sigma, t, S) for t, key in enumerate(keys)}
    notes = []
    halt = marker_code(sigma, len(keys), S) if len(keys) < capacity else None
    if halt is None:
        terminal = code[max(keys, key=lambda kk: (kk[1], kk))]
        notes.append("code space full: terminal segments reuse the longest-jump code")
    else:
        terminal = halt
    if accept != J:
        notes.append(f"accept on row {accept}, not last: rejecting runs may pass the accept position")

    slots, parts = {}, []
    for k in range(1, K + 2):
        for j in range(1, J + 1):
            slots[f"{k}.{j}"] = len(parts) * m
            parts.append((code[node_key[k, j]] if k <= K else terminal) + sigma[1] * (m - S))
    state = "".join(parts)
    rules = set()
    for (var, d1), cd in code.items():
        rules.add(CuttingRule(var, c[var - 1], cd, J))
        rules.add(CuttingRule(var, 1 - c[var - 1], cd, d1))
    rules |= _skip_rules(state, S, D, sigma, exhaustive_windows)
    p = slots[f"{K + 1}.{accept}"]
    aut = BenensonAutomaton(Alphabet(sigma), n, S, D, state, frozenset(rules), p)
    codes = {str(kk): cd for kk, cd in code.items()}
    if halt is not None:
        codes["halt"] = halt
    report = CompilationReport(
        construction="perm", n=n, sigma=sigma, S=S, D=D, L=aut.L, accept_pos=p,
        segment_length=m, sparseness=sparseness(aut), width=J, node_layers=K + 1,
        nodes=(K + 1) * J, skip_k=k_skip,
        formula={"S": S, "D": D, "L": (K + 1) * J * m, "sparseness<=": 2 * J - 1},
        codes=codes, slots=slots, polarity=c,
        reject_convention=halt is not None and accept == J, notes=notes,
    )
    return Compiled(aut, report)


def compile_sparse1(pbp: PermutationBP, alphabet="ACGT", *, polarity=None,
                    exhaustive_windows: bool = False) -> Compiled:
    """1-sparse layout: each node is a reading segment then a skip segment.

    The reading segment of a node on variable i skips 2J segments (to the
    same row of the next layer) or moves to its own skip segment, which jumps
    2*jump1 - 1 segments to the target's reading segment.
    """
    sigma = _sigma(alphabet)
    pbp = _check_perm_input(pbp, sigma)
    n, J, K = pbp.n, pbp.width, pbp.length
    c = _polarity(polarity, n)
    accept = pbp.accept_row

    read_key, skip_key = {}, {}
    for k, layer in enumerate(pbp.layers, 1):
        for j, nd in enumerate(layer, 1):
            read_key[k, j] = ("read", nd.var)
            skip_key[k, j] = ("skip", 2 * (J + nd.goto1 - j) - 1)
    keys = sorted(set(read_key.values()) | set(skip_key.values()))
    S = 1 + ceil_log(len(sigma) - 1, n + 2 * J - 1)
    D = max(4 * J - 3, 2 * J)
    k_skip = skip_length(S, D)
    m = D * k_skip + 1
    capacity = (len(sigma) - 1) ** (S - 1)
    if len(keys) > capacity:
        raise PreconditionError(f"{len(keys)} segment keys exceed {capacity} codes")
    code = {key: marker_code(sigma, t, S) for t, key in enumerate(keys)}
    notes = []
    if J == 1:
        notes.append("width 1: cutting range raised to 2 so a reading segment can skip a layer")
    halt = marker_code(sigma, len(keys), S) if len(keys) < capacity else None
    if halt is None:
        terminal = code[max(keys, key=lambda kk: (kk[0] == "skip", kk[1]))]
        notes.append("code space full: terminal segments reuse the longest-skip code")
    else:
        terminal = halt
    if accept != J:
        notes.append(f"accept on row {accept}, not last: rejecting runs may pass the accept position")

    slots, parts = {}, []
    for k in range(1, K + 2):
        for j in range(1, J + 1):
            slots[f"{k}.{j}"] = len(parts) * m
            if k <= K:
                parts.append(code[read_key[k, j]] + sigma[1] * (m - S))
                parts.append(code[skip_key[k, j]] + sigma[1] * (m - S))
            else:
                parts += [terminal + sigma[1] * (m - S)] * 2
    state = "".join(parts)
    rules = set()
    for key, cd in code.items():
        if key[0] == "read":
            var = key[1]
            rules.add(CuttingRule(var, c[var - 1], cd, 2 * J))
            rules.add(CuttingRule(var, 1 - c[var - 1], cd, 1))
        else:
            rules.update(input_independent(cd, key[1]))
    rules |= _skip_rules(state, S, D, sigma, exhaustive_windows)
    p = slots[f"{K + 1}.{accept}"]
    aut = BenensonAutomaton(Alphabet(sigma), n, S, D, state, frozenset(rules), p)
    codes = {f"{kind} {v}": cd for (kind, v), cd in code.items()}
    if halt is not None:
        codes["halt"] = halt
    report = CompilationReport(
        construction="sparse1", n=n, sigma=sigma, S=S, D=D, L=aut.L, accept_pos=p,
        segment_length=m, sparseness=sparseness(aut), width=J, node_layers=K + 1,
        nodes=(K + 1) * J, skip_k=k_skip,
        formula={"S": S, "D": D, "L": 2 * (K + 1) * J * m, "sparseness<=": 1},
        codes=codes, slots=slots, polarity=c,
        reject_convention=halt is not None and accept == J, notes=notes,
    )
    return Compiled(aut, report)


# --- pipelines -----------------------------------------------------------------


def _candidate_masks(n: int, limit: int):
    yield (0,) * n
    yield (1,) * n
    for t, bits in enumerate(product((0, 1), repeat=n)):
        if t >= limit:
            return
        yield bits


def prepare_permutation(pbp: PermutationBP, *, search_limit: int = 4096):
    """Normalise a permutation program for compilation.

    Looks for a rejected input ``c``; flipping the variables set in ``c`` and
    normalising the 0-edges then puts the accept node on the last row, so
    rejecting runs halt before the accept position.  Returns the normalised
    program and the polarity to pass to the compiler.
    """
    for mask in _candidate_masks(pbp.n, search_limit):
        if eval_bp(pbp, mask):
            continue
        try:
            flipped = flip_inputs(pbp, mask)
        except InvariantError:
            continue
        return normalize_goto0_identity(flipped, accept_last=True), mask
    return normalize_goto0_identity(pbp, accept_last=True), (0,) * pbp.n


def compile_permutation_program(pbp: PermutationBP, alphabet="ACGT", construction: str = "perm",
                                **kw) -> Compiled:
    prepared, mask = prepare_permutation(pbp)
    fn = {"perm": compile_permutation, "sparse1": compile_sparse1}[construction]
    return fn(prepared, alphabet, polarity=mask, **kw)


def compile_circuit(circuit: Circuit, alphabet="ACGT", construction: str = "perm", **kw) -> Compiled:
    from .barrington import barrington_compile

    return compile_permutation_program(barrington_compile(circuit), alphabet, construction, **kw)
