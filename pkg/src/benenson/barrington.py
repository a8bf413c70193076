"""Circuit to width-5 permutation program compilation.

A program "computes" a 5-cycle ``s`` for ``f`` when the product of its layer
permutations is ``s`` on inputs with f(x) = 1 and the identity otherwise.
Permutations here are 0-based tuples: ``p[i]`` is the image of ``i``; layers
compose left to right, so the product of layers ``p1, p2`` is ``p2 o p1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

from .errors import PreconditionError
from .machines import BPNode, Circuit, PermutationBP, and_or_depth

WIDTH = 5
IDENTITY = tuple(range(WIDTH))

Perm = tuple[int, ...]


def compose(p: Perm, q: Perm) -> Perm:
    """p o q: apply q first."""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, t in enumerate(p):
        inv[t] = i
    return tuple(inv)


def from_cycle(cycle, size: int = WIDTH) -> Perm:
    """Build a permutation from 1-based cycle notation, e.g. (1, 2, 3, 4, 5)."""
    p = list(range(size))
    for a, b in zip(cycle, cycle[1:] + cycle[:1]):
        p[a - 1] = b - 1
    return tuple(p)


def cycle_type(p: Perm) -> tuple[int, ...]:
    seen, lengths = set(), []
    for i in range(len(p)):
        if i in seen:
            continue
        k, j = 0, i
        while j not in seen:
            seen.add(j)
            j = p[j]
            k += 1
        lengths.append(k)
    return tuple(sorted(lengths, reverse=True))


def is_five_cycle(p: Perm) -> bool:
    return cycle_type(p) == (WIDTH,)


def commutator(b: Perm, g: Perm) -> Perm:
    return compose(compose(b, g), compose(inverse(b), inverse(g)))


@dataclass(frozen=True)
class CyclePair:
    alpha: Perm
    beta: Perm
    gamma: Perm

    def check(self) -> bool:
        return (
            all(is_five_cycle(p) for p in (self.alpha, self.beta, self.gamma))
            and commutator(self.beta, self.gamma) == self.alpha
        )


def select_cycles() -> CyclePair:
    beta = from_cycle((1, 2, 3, 4, 5))
    gamma = from_cycle((1, 3, 5, 4, 2))
    pair = CyclePair(commutator(beta, gamma), beta, gamma)
    assert pair.check()
    return pair


@lru_cache(maxsize=None)
def conjugator(target: Perm, base: Perm) -> Perm:
    """Lexicographically smallest t with t o base o t^-1 == target."""
    for t in permutations(range(WIDTH)):
        if compose(compose(t, base), inverse(t)) == target:
            return t
    raise ValueError(f"{target} and {base} are not conjugate")


Instr = tuple[int, Perm, Perm]  # (variable, permutation on 0, permutation on 1)


def _pad(prog: tuple[Instr, ...], length: int) -> tuple[Instr, ...]:
    return prog + ((1, IDENTITY, IDENTITY),) * (length - len(prog))


def compile_instructions(c: Circuit, target: Perm | None = None, *, pad: bool = True) -> tuple[Instr, ...]:
    """Instruction sequence computing ``target`` (default alpha) for ``c``.

    With ``pad`` every AND operand is padded with identity layers to
    ``4**(d-1)``, so the result has length exactly ``4**and_or_depth(c)``.
    """
    if c.n < 1:
        raise PreconditionError("circuits need at least one input")
    cyc = select_cycles()
    target = cyc.alpha if target is None else target
    if not is_five_cycle(target):
        raise ValueError("target must be a 5-cycle")

    depth = []
    for op, args in c.gates:
        if op in ("INPUT", "CONST"):
            depth.append(0)
        else:
            depth.append(max(depth[a] for a in args) + (op in ("AND", "OR")))

    memo: dict = {}

    def build_and(a, b, d, s, neg):
        # product computes s for (a' AND b'), a' = a or NOT a per neg
        t = conjugator(s, cyc.alpha)
        bt = compose(compose(t, cyc.beta), inverse(t))
        gt = compose(compose(t, cyc.gamma), inverse(t))
        parts = [
            build(b, inverse(gt), neg),
            build(a, inverse(bt), neg),
            build(b, gt, neg),
            build(a, bt, neg),
        ]
        if pad:
            parts = [_pad(p, 4 ** (d - 1)) for p in parts]
        return sum(parts, ())

    def build(g, s, neg=False):
        key = (g, s, neg)
        if key in memo:
            return memo[key]
        if neg:
            # NOT g computing s: compute s^-1 for g, then fold s into the last layer
            inner = build(g, inverse(s))
            v, p0, p1 = inner[-1]
            out = inner[:-1] + ((v, compose(s, p0), compose(s, p1)),)
        else:
            op, args = c.gates[g]
            if op == "INPUT":
                out = ((args[0], IDENTITY, s),)
            elif op == "CONST":
                out = ((1, s, s) if args[0] else (1, IDENTITY, IDENTITY),)
            elif op == "NOT":
                out = build(args[0], s, True)
            elif op == "AND":
                out = build_and(args[0], args[1], depth[g], s, False)
            else:  # OR(a, b) = NOT(AND(NOT a, NOT b))
                inner = build_and(args[0], args[1], depth[g], inverse(s), True)
                v, p0, p1 = inner[-1]
                out = inner[:-1] + ((v, compose(s, p0), compose(s, p1)),)
        memo[key] = out
        return out

    return build(c.output, target)


def program_product(instrs, x) -> Perm:
    p = IDENTITY
    for v, p0, p1 in instrs:
        p = compose(p1 if x[v - 1] else p0, p)
    return p


def instructions_to_pbp(n: int, instrs, accept_row: int) -> PermutationBP:
    layers = tuple(
        tuple(BPNode("var", v, p0[j] + 1, p1[j] + 1) for j in range(WIDTH)) for v, p0, p1 in instrs
    )
    return PermutationBP(n, WIDTH, layers, frozenset({accept_row}))


def barrington_compile(c: Circuit, *, pad: bool = True) -> PermutationBP:
    """Width-5 permutation program equivalent to ``c``.

    The start row 1 ends on row alpha(1) exactly when the circuit outputs 1.
    """
    alpha = select_cycles().alpha
    instrs = compile_instructions(c, alpha, pad=pad)
    return instructions_to_pbp(c.n, instrs, alpha[0] + 1)


def expected_length(c: Circuit) -> int:
    return 4 ** and_or_depth(c)
