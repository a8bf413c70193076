"""Benenson automata to fan-in-2 circuits.

The state is split into segments of length D (1-based index q).  For a fixed
input, the table ``phi_q`` maps an entry offset ``j`` into segment q to the
offset at which the cut chain leaves segment q+1's window, or ``None``
(bottom) if it halts first.  Acceptance is a question about the composition
of these tables evaluated at 0, and each table only depends on the few input
bits that rules near the segment read.  The circuit therefore has three
kinds of gadget:

A  per segment: a selector over the relevant bits with hardwired tables
B  composition of two encoded tables (a mux per row)
C  comparison of row 0 against the accept offset within its segment

Tables are encoded row by row, ``w = ceil(log2(D+1))`` bits per row, most
significant bit first, with bottom stored as the value D.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .core import BenensonAutomaton, check_determinism
from .errors import PreconditionError
from .machines import Circuit, Gate

BOT = None


@dataclass(frozen=True)
class PhiTable:
    rows: tuple  # int in [0, D) or None

    @property
    def D(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, D: int) -> "PhiTable":
        return cls(tuple(range(D)))

    @classmethod
    def bottom(cls, D: int) -> "PhiTable":
        return cls((BOT,) * D)

    def encode(self) -> tuple[int, ...]:
        return tuple(self.D if r is BOT else r for r in self.rows)

    @classmethod
    def decode(cls, values: Sequence[int]) -> "PhiTable":
        D = len(values)
        return cls(tuple(v if v < D else BOT for v in values))


def row_bits(D: int) -> int:
    """ceil(log2(D+1)): bits needed for values 0..D."""
    return max(1, D.bit_length())


def compose_tables(first: PhiTable, second: PhiTable) -> PhiTable:
    """Row j = second[first[j]], bottom absorbing."""
    if first.D != second.D:
        raise ValueError("tables must have the same number of rows")
    return PhiTable(tuple(BOT if h is BOT else second.rows[h] for h in first.rows))


def num_segments(aut: BenensonAutomaton) -> int:
    return -(-aut.L // aut.D) if aut.D else 0


def compute_phi(aut: BenensonAutomaton, q: int, x: Sequence[int]) -> PhiTable:
    """Table for segment q under input x.

    Row j follows the chain from offset (q-1)D + j and reports the last offset
    it visits inside segment q+1, relative to that segment's start.  The chain
    stops at the accept position, as a run does.
    """
    D, L, p = aut.D, aut.L, aut.accept_pos
    if not 1 <= q <= max(1, num_segments(aut)):
        raise ValueError(f"segment {q} outside [1, {num_segments(aut)}]")
    lo, hi = q * D, (q + 1) * D
    moves = aut.moves
    rows = []
    for j in range(D):
        o = (q - 1) * D + j
        best = BOT
        while o <= L:
            if o >= hi:
                break
            if o >= lo:
                best = o - lo
            if o == p:
                break
            nxt = None
            for r in moves[o]:
                if x[r.var - 1] == r.bit:
                    nxt = o + r.dist
                    break
            if nxt is None:
                break
            o = nxt
        rows.append(best)
    return PhiTable(tuple(rows))


def relevant_variables(aut: BenensonAutomaton, q: int) -> list[int]:
    """Variables whose value changes a cut somewhere in segments q and q+1."""
    D, L = aut.D, aut.L
    found = set()
    for o in range((q - 1) * D, min((q + 1) * D, L + 1)):
        dists: dict[int, tuple[set, set]] = {}
        for r in aut.moves[o]:
            dists.setdefault(r.var, (set(), set()))[r.bit].add(r.dist)
        found.update(v for v, (d0, d1) in dists.items() if d0 != d1)
    return sorted(found)


# --- gate-level construction ---------------------------------------------------


class CircuitBuilder:
    """Hash-consed gate list with constant folding.

    Gates 0..n-1 are the inputs, n and n+1 the constants 0 and 1.
    """

    def __init__(self, n: int):
        self.n = n
        self.gates: list[Gate] = [Gate("INPUT", (i,)) for i in range(1, n + 1)]
        self.names: list[str] = [f"x{i}" for i in range(1, n + 1)]
        self.gates += [Gate("CONST", (0,)), Gate("CONST", (1,))]
        self.names += ["zero", "one"]
        self.zero, self.one = n, n + 1
        self._index = {g: k for k, g in enumerate(self.gates)}
        self._count = 0
        self.prefix = "g_"

    def input(self, i: int) -> int:
        return i - 1

    def const(self, b) -> int:
        return self.one if b else self.zero

    def _add(self, op, args) -> int:
        g = Gate(op, args)
        k = self._index.get(g)
        if k is None:
            k = len(self.gates)
            self.gates.append(g)
            self.names.append(f"{self.prefix}{self._count}")
            self._count += 1
            self._index[g] = k
        return k

    def NOT(self, a: int) -> int:
        if a == self.zero:
            return self.one
        if a == self.one:
            return self.zero
        op, args = self.gates[a]
        if op == "NOT":
            return args[0]
        return self._add("NOT", (a,))

    def AND(self, a: int, b: int) -> int:
        if self.zero in (a, b):
            return self.zero
        if a == self.one or a == b:
            return b
        if b == self.one:
            return a
        return self._add("AND", (min(a, b), max(a, b)))

    def OR(self, a: int, b: int) -> int:
        if self.one in (a, b):
            return self.one
        if a == self.zero or a == b:
            return b
        if b == self.zero:
            return a
        return self._add("OR", (min(a, b), max(a, b)))

    def MUX(self, s: int, a: int, b: int) -> int:
        """a if s == 0 else b."""
        if a == b:
            return a
        if a == self.zero and b == self.one:
            return s
        if a == self.one and b == self.zero:
            return self.NOT(s)
        return self.OR(self.AND(self.NOT(s), a), self.AND(s, b))

    def select(self, sel: Sequence[int], leaves: Sequence[int]) -> int:
        """leaves[v] where v is the value of the selector wires (MSB first)."""
        if not sel:
            return leaves[0]
        half = len(leaves) // 2
        return self.MUX(sel[0], self.select(sel[1:], leaves[:half]), self.select(sel[1:], leaves[half:]))

    def constant_word(self, value: int, w: int) -> list[int]:
        return [self.const((value >> (w - 1 - b)) & 1) for b in range(w)]

    def encode_table(self, t: PhiTable) -> list[list[int]]:
        w = row_bits(t.D)
        return [self.constant_word(v, w) for v in t.encode()]

    def build(self, output: int) -> Circuit:
        return Circuit(self.n, tuple(self.gates), output, tuple(self.names))


Bundle = list  # D rows of w wires each


def build_gadget_A(b: CircuitBuilder, aut: BenensonAutomaton, q: int, relevant: Sequence[int]) -> Bundle:
    """Encoded phi_q as a function of the relevant variables."""
    D, w = aut.D, row_bits(aut.D)
    b.prefix = f"A{q}_"
    tables = []
    x = [0] * aut.n
    for bits in product((0, 1), repeat=len(relevant)):
        for v, bit in zip(relevant, bits):
            x[v - 1] = bit
        tables.append(b.encode_table(compute_phi(aut, q, x)))
    sel = [b.input(v) for v in relevant]
    return [[b.select(sel, [t[j][k] for t in tables]) for k in range(w)] for j in range(D)]


def build_gadget_B(b: CircuitBuilder, first: Bundle, second: Bundle, D: int, *, label: str = "B_") -> Bundle:
    """Encoding of compose_tables(first, second)."""
    w = row_bits(D)
    b.prefix = label
    bot = b.constant_word(D, w)
    leaves = [second[v] if v < D else bot for v in range(1 << w)]
    return [[b.select(first[j], [leaf[k] for leaf in leaves]) for k in range(w)] for j in range(D)]


def build_gadget_C(b: CircuitBuilder, table: Bundle, D: int, j_star: int) -> int:
    """1 iff row 0 of the table holds j_star."""
    w = row_bits(D)
    b.prefix = "C_"
    out = b.one
    for k, wire in enumerate(table[0]):
        bit = (j_star >> (w - 1 - k)) & 1
        out = b.AND(out, wire if bit else b.NOT(wire))
    return out


@dataclass
class Extraction:
    circuit: Circuit
    q_star: int
    j_star: int
    tables: int  # segments composed before padding
    padded: int
    levels: int
    relevant: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)


def extract(aut: BenensonAutomaton, *, budget: int | None = None) -> Extraction:
    """Equivalent circuit for a deterministic automaton, with build details."""
    if check_determinism(aut):
        raise PreconditionError("extraction needs a deterministic automaton")
    b = CircuitBuilder(aut.n)
    D, p = aut.D, aut.accept_pos
    if D == 0:
        # nothing can be cut; only the start offset is reachable
        return Extraction(b.build(b.const(p == 0)), 1, 0, 0, 1, 0)
    q_star, j_star = p // D + 1, p % D
    budget = D if budget is None else budget
    count = q_star - 1
    relevant, notes = {}, []
    bundles = []
    for q in range(1, count + 1):
        rel = relevant_variables(aut, q)
        relevant[q] = rel
        if len(rel) > budget:
            msg = f"segment {q} reads {len(rel)} variables, over the budget of {budget}"
            warnings.warn(msg)
            notes.append(msg)
        bundles.append(build_gadget_A(b, aut, q, rel))
    padded = 1
    while padded < max(count, 1):
        padded *= 2
    ident = b.encode_table(PhiTable.identity(D))
    bundles += [ident] * (padded - len(bundles))
    level = 0
    while len(bundles) > 1:
        level += 1
        bundles = [
            build_gadget_B(b, bundles[i], bundles[i + 1], D, label=f"B{level}_{i // 2}_")
            for i in range(0, len(bundles), 2)
        ]
    out = build_gadget_C(b, bundles[0], D, j_star)
    return Extraction(b.build(out), q_star, j_star, count, padded, level, relevant, notes)


def extract_circuit(aut: BenensonAutomaton, **kw) -> Circuit:
    return extract(aut, **kw).circuit
