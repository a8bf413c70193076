"""Benenson automata: a state string cut repeatedly by input-dependent rules.

An automaton holds a state string ``state`` of length ``L`` and a set of
cutting rules ``(var, bit, sticky, dist)``.  At offset ``j`` the sticky end is
``state[j:j+S]``; a rule whose sticky end matches and whose bit agrees with
``x[var]`` removes ``dist`` more symbols.  The automaton accepts ``x`` when the
offset ``accept_pos`` is reachable from 0.

Offsets are 0-based, input variables are 1-based (``x[0]`` is variable 1).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .errors import DeterminismError, InvalidOffsetError, MalformedError

DNA = "ACGT"


@dataclass(frozen=True)
class Alphabet:
    symbols: str = DNA

    def __post_init__(self):
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"duplicate symbols in alphabet {self.symbols!r}")
        if len(self.symbols) < 2:
            raise ValueError("alphabet needs at least 2 symbols")

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, item):
        return len(item) == 1 and item in self.symbols

    def __str__(self):
        return self.symbols


class CuttingRule(NamedTuple):
    var: int
    bit: int
    sticky: str
    dist: int

    def sort_key(self):
        return (self.sticky, self.var, self.bit, self.dist)

    def __str__(self):
        return f"({self.var},{self.bit},{self.sticky},{self.dist})"


def input_independent(sticky: str, dist: int) -> tuple[CuttingRule, CuttingRule]:
    """An input-independent rule, stored as the pair on variable 1."""
    return CuttingRule(1, 0, sticky, dist), CuttingRule(1, 1, sticky, dist)


@dataclass(frozen=True)
class BenensonAutomaton:
    alphabet: Alphabet
    n: int
    S: int
    D: int
    state: str
    rules: frozenset = field(default_factory=frozenset)
    accept_pos: int = 0

    def __post_init__(self):
        if isinstance(self.alphabet, str):
            object.__setattr__(self, "alphabet", Alphabet(self.alphabet))
        rules = frozenset(CuttingRule(*r) for r in self.rules)
        object.__setattr__(self, "rules", rules)
        if self.n < 0 or self.S < 0 or self.D < 0:
            raise ValueError("n, S, D must be non-negative")
        bad = set(self.state) - set(self.alphabet.symbols)
        if bad:
            raise ValueError(f"state uses symbols outside the alphabet: {sorted(bad)}")
        if not 0 <= self.accept_pos <= self.L:
            raise ValueError(f"accept_pos {self.accept_pos} outside [0, {self.L}]")
        for r in rules:
            if not 1 <= r.var <= self.n:
                raise ValueError(f"rule {r}: variable outside [1, {self.n}]")
            if r.bit not in (0, 1):
                raise ValueError(f"rule {r}: bit must be 0 or 1")
            if len(r.sticky) != self.S or set(r.sticky) - set(self.alphabet.symbols):
                raise ValueError(f"rule {r}: sticky end must be {self.S} alphabet symbols")
            if not 1 <= r.dist <= self.D:
                raise ValueError(f"rule {r}: distance outside [1, {self.D}]")

    @property
    def L(self) -> int:
        return len(self.state)

    @cached_property
    def by_sticky(self) -> dict[str, tuple[CuttingRule, ...]]:
        table = defaultdict(list)
        for r in self.rules:
            table[r.sticky].append(r)
        return {k: tuple(sorted(v, key=CuttingRule.sort_key)) for k, v in table.items()}

    @cached_property
    def moves(self) -> tuple[tuple[CuttingRule, ...], ...]:
        """Rules applicable at each offset 0..L, ignoring the input."""
        out = []
        empty = ()
        for j in range(self.L + 1):
            w = sticky_end(self, j)
            if w is None:
                out.append(empty)
            else:
                out.append(tuple(r for r in self.by_sticky.get(w, empty) if j + r.dist <= self.L))
        return tuple(out)

    def canonical_rules(self) -> list[CuttingRule]:
        return sorted(self.rules, key=CuttingRule.sort_key)


@dataclass(frozen=True)
class CutTrace:
    offsets: tuple[int, ...]
    applied: tuple[CuttingRule, ...]
    accepted: bool


def _check_input(aut: BenensonAutomaton, x: Sequence[int]):
    if len(x) != aut.n:
        raise ValueError(f"input has {len(x)} bits, automaton expects {aut.n}")


def sticky_end(aut: BenensonAutomaton, j: int) -> str | None:
    if not 0 <= j <= aut.L:
        raise InvalidOffsetError(f"offset {j} outside [0, {aut.L}]")
    if aut.L - j < aut.S:
        return None
    return aut.state[j : j + aut.S]


def step(aut: BenensonAutomaton, x: Sequence[int], j: int) -> set[int]:
    _check_input(aut, x)
    if not 0 <= j <= aut.L:
        raise InvalidOffsetError(f"offset {j} outside [0, {aut.L}]")
    return {j + r.dist for r in aut.moves[j] if x[r.var - 1] == r.bit}


def run(aut: BenensonAutomaton, x: Sequence[int]) -> CutTrace:
    """Follow the unique cut chain from offset 0.

    Stops when no rule applies or the offset reaches ``accept_pos``; raises
    :class:`DeterminismError` if two different cuts are possible.
    """
    _check_input(aut, x)
    p = aut.accept_pos
    moves = aut.moves
    j = 0
    offsets = [0]
    applied = []
    while j < p:
        nxt = None
        chosen = None
        for r in moves[j]:
            if x[r.var - 1] == r.bit:
                t = j + r.dist
                if nxt is None:
                    nxt, chosen = t, r
                elif t != nxt:
                    raise DeterminismError(f"offset {j}: cuts to {nxt} and {t} both apply")
        if nxt is None:
            break
        j = nxt
        offsets.append(j)
        applied.append(chosen)
    return CutTrace(tuple(offsets), tuple(applied), j == p)


def accepts(aut: BenensonAutomaton, x: Sequence[int]) -> bool:
    return run(aut, x).accepted


def reachable_offsets(aut: BenensonAutomaton, x: Sequence[int]) -> set[int]:
    """Least set containing 0 and closed under :func:`step`."""
    _check_input(aut, x)
    moves = aut.moves
    seen = {0}
    frontier = [0]
    while frontier:
        j = frontier.pop()
        for r in moves[j]:
            if x[r.var - 1] == r.bit:
                t = j + r.dist
                if t not in seen:
                    seen.add(t)
                    frontier.append(t)
    return seen


def check_determinism(aut: BenensonAutomaton) -> list[tuple[CuttingRule, CuttingRule]]:
    """Every pair of rules that could fire together with different distances.

    An empty list means the automaton is deterministic.
    """
    bad = []
    for sticky in sorted(aut.by_sticky):
        for r, s in combinations(aut.by_sticky[sticky], 2):
            if r.dist != s.dist and not (r.var == s.var and r.bit != s.bit):
                bad.append((r, s))
    return bad


def is_deterministic(aut: BenensonAutomaton) -> bool:
    return not check_determinism(aut)


def sparseness(aut: BenensonAutomaton) -> int:
    """Largest number of sticky ends whose cut depends on a single variable."""
    dists = defaultdict(lambda: (set(), set()))
    for r in aut.rules:
        dists[r.var, r.sticky][r.bit].add(r.dist)
    per_var = defaultdict(int)
    for (var, _), (d0, d1) in dists.items():
        if d0 and d1 and len(d0 | d1) > 1:
            per_var[var] += 1
    return max(per_var.values(), default=0)


# --- .ben text format -------------------------------------------------------

HEADER = "benenson v1"


def dump_ben(aut: BenensonAutomaton, comments: Iterable[str] = ()) -> str:
    lines = [HEADER]
    lines += [f"# {c}" if c else "#" for c in comments]
    lines += [
        f"sigma {aut.alphabet}",
        f"n {aut.n}",
        f"S {aut.S}",
        f"D {aut.D}",
        f"p {aut.accept_pos}",
        f"state {aut.state}".rstrip(),
    ]
    rules = aut.rules
    for r in aut.canonical_rules():
        if r.var == 1 and (1, 1 - r.bit, r.sticky, r.dist) in rules:
            if r.bit == 0:
                lines.append(f"irule {r.sticky} {r.dist}")
            continue
        lines.append(f"rule {r.var} {r.bit} {r.sticky} {r.dist}")
    return "\n".join(lines) + "\n"


def parse_ben(text: str) -> BenensonAutomaton:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != HEADER:
        raise MalformedError(f"expected '{HEADER}' header")
    fields: dict[str, str] = {}
    rules = []
    for ln in lines[1:]:
        tok = ln.split()
        key = tok[0]
        try:
            if key == "rule" and len(tok) == 5:
                rules.append(CuttingRule(int(tok[1]), int(tok[2]), tok[3], int(tok[4])))
            elif key == "irule" and len(tok) == 3:
                rules.extend(input_independent(tok[1], int(tok[2])))
            elif key == "state" and len(tok) <= 2:
                fields["state"] = tok[1] if len(tok) == 2 else ""
            elif key in ("sigma", "n", "S", "D", "p") and len(tok) == 2:
                if key in fields:
                    raise MalformedError(f"duplicate '{key}' line")
                fields[key] = tok[1]
            else:
                raise MalformedError(f"unrecognised line: {ln!r}")
        except ValueError as exc:
            raise MalformedError(f"bad line {ln!r}: {exc}") from exc
    missing = {"sigma", "n", "S", "D", "p", "state"} - fields.keys()
    if missing:
        raise MalformedError(f"missing fields: {sorted(missing)}")
    try:
        return BenensonAutomaton(
            alphabet=Alphabet(fields["sigma"]),
            n=int(fields["n"]),
            S=int(fields["S"]),
            D=int(fields["D"]),
            state=fields["state"],
            rules=frozenset(rules),
            accept_pos=int(fields["p"]),
        )
    except ValueError as exc:
        raise MalformedError(str(exc)) from exc


def parse_bits(s: str) -> tuple[int, ...]:
    if set(s) - {"0", "1"}:
        raise ValueError(f"input must be a 0/1 string, got {s!r}")
    return tuple(int(c) for c in s)
