"""Equivalence checks between circuits, branching programs and automata.

Random sampling uses a counter-based SplitMix64 stream so that any
implementation reproduces the same inputs from the same seed:

    out(k) = mix64(seed + (k + 1) * 0x9E3779B97F4A7C15  mod 2**64),  k = 0, 1, ...
    mix64(z): z = (z ^ z >> 30) * 0xBF58476D1CE4E5B9
              z = (z ^ z >> 27) * 0x94D049BB133111EB
              return z ^ z >> 31                       (all mod 2**64)

Trial t uses words out(t*W) .. out(t*W + W - 1) with W = ceil(n / 64);
bit i of the input (variable i+1) is bit i % 64 of word i // 64.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence

from .core import BenensonAutomaton, parse_ben, run
from .errors import InvariantError, MalformedError, PreconditionError
from .machines import (
    Circuit,
    GeneralBP,
    LayeredBP,
    bits_of,
    eval_bp,
    eval_circuit,
    parse_bp,
    parse_circ,
    truth_table,
)

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
EXHAUSTIVE_LIMIT = 20


def mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def splitmix64(seed: int, k: int) -> int:
    return mix64((seed + (k + 1) * GOLDEN) & MASK64)


def random_input(n: int, seed: int, trial: int) -> tuple[int, ...]:
    W = max(1, -(-n // 64))
    words = [splitmix64(seed, trial * W + w) for w in range(W)]
    return tuple((words[i // 64] >> (i % 64)) & 1 for i in range(n))


@dataclass(frozen=True)
class Evaluator:
    """Uniform handle on anything that computes a Boolean function of n bits."""

    obj: object
    label: str = ""

    @property
    def kind(self) -> str:
        if isinstance(self.obj, Circuit):
            return "circuit"
        if isinstance(self.obj, BenensonAutomaton):
            return "automaton"
        if isinstance(self.obj, (GeneralBP, LayeredBP)):
            return "bp"
        raise TypeError(f"cannot evaluate {type(self.obj).__name__}")

    @property
    def n(self) -> int:
        return self.obj.n

    @cached_property
    def _table(self):
        if self.kind == "circuit" and self.n <= EXHAUSTIVE_LIMIT:
            return truth_table(self.obj)
        return None

    def direct(self, x: Sequence[int]) -> int:
        """Evaluation without any caching."""
        if self.kind == "circuit":
            return eval_circuit(self.obj, x)
        if self.kind == "automaton":
            return int(run(self.obj, x).accepted)
        return eval_bp(self.obj, x)

    def __call__(self, x: Sequence[int]) -> int:
        t = self._table
        if t is not None:
            idx = 0
            for b in x:
                idx = idx << 1 | b
            return (t >> idx) & 1
        return self.direct(x)

    @classmethod
    def load(cls, path) -> "Evaluator":
        text = Path(path).read_text()
        head = next((ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")), "")
        if head.startswith("benenson"):
            return cls(parse_ben(text), str(path))
        if head.startswith("circuit"):
            return cls(parse_circ(text), str(path))
        if head.startswith("bp"):
            return cls(parse_bp(text), str(path))
        raise MalformedError(f"{path}: unknown file type (header {head!r})")


@dataclass(frozen=True)
class Equivalence:
    equal: bool
    checked: int
    method: str
    x: tuple | None = None
    a: int | None = None
    b: int | None = None

    def line(self) -> str:
        if self.equal:
            return "PASS"
        return f"FAIL x={''.join(map(str, self.x))} a={self.a} b={self.b}"

    def __bool__(self):
        return self.equal


def _confirm(a: Evaluator, b: Evaluator, x, checked, method) -> Equivalence:
    va, vb = a.direct(x), b.direct(x)
    if va == vb:
        raise InvariantError(f"counterexample {x} did not reproduce on direct evaluation")
    return Equivalence(False, checked, method, tuple(x), va, vb)


def _first_difference(a: Evaluator, b: Evaluator, lo: int, hi: int):
    n = a.n
    for idx in range(lo, hi):
        x = bits_of(idx, n)
        if a(x) != b(x):
            return idx
    return None


def equivalence_exhaustive(a: Evaluator, b: Evaluator, *, limit: int = EXHAUSTIVE_LIMIT, jobs: int = 1) -> Equivalence:
    """Compare on all 2**n inputs in lexicographic order (x1 most significant)."""
    if a.n != b.n:
        raise PreconditionError(f"input counts differ: {a.n} vs {b.n}")
    n = a.n
    if n > limit:
        raise PreconditionError(f"n={n} exceeds the exhaustive limit {limit}; sample instead")
    total = 1 << n
    if jobs <= 1 or total < 1024:
        first = _first_difference(a, b, 0, total)
    else:
        step = -(-total // (jobs * 4))
        bounds = [(lo, min(lo + step, total)) for lo in range(0, total, step)]
        with ProcessPoolExecutor(jobs) as pool:
            found = pool.map(_first_difference, [a] * len(bounds), [b] * len(bounds),
                             *zip(*bounds))
            first = min((f for f in found if f is not None), default=None)
    if first is None:
        return Equivalence(True, total, "exhaustive")
    return _confirm(a, b, bits_of(first, n), first + 1, "exhaustive")


def equivalence_random(a: Evaluator, b: Evaluator, trials: int = 10_000, seed: int = 0) -> Equivalence:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if a.n != b.n:
        raise PreconditionError(f"input counts differ: {a.n} vs {b.n}")
    for t in range(trials):
        x = random_input(a.n, seed, t)
        if a(x) != b(x):
            return _confirm(a, b, x, t + 1, f"random seed={seed}")
    return Equivalence(True, trials, f"random seed={seed}")


# --- parameter audit -----------------------------------------------------------


def _digits(value: int, base: int) -> int:
    """Number of base-`base` digits of value (0 has none)."""
    count = 0
    while value:
        value //= base
        count += 1
    return count


def _clog(base: int, x: int) -> int:
    # smallest t with base**t >= x equals the digit count of x-1
    return _digits(max(x - 1, 0), base)


def expected_parameters(construction: str, *, n: int, sigma: int, J: int = 0, layers: int = 0, H: int = 0) -> dict:
    """Construction formulas: sticky-end size, range, length and sparseness bound.

    ``layers`` counts node layers including the terminal one.
    """
    if construction == "general":
        S = _clog(sigma, H)
        return {"S": S, "D": (H - 1) * S, "L": H * S}
    if construction == "fixed":
        S = max(1, _clog(sigma, n * (2 * J - 1) ** 2))
        return {"S": S, "D": (2 * J - 1) * S, "L": layers * J * S, "sparseness<=": (2 * J - 1) ** 2}
    if construction == "fixed-constd":
        S, D, bound = 1 + _clog(sigma - 1, n * (2 * J - 1) ** 2), 2 * J - 1, (2 * J - 1) ** 2
        per = 1
    elif construction == "perm":
        S, D, bound = 1 + _clog(sigma - 1, n * (2 * J - 1)), 2 * J - 1, 2 * J - 1
        per = 1
    elif construction == "sparse1":
        S, D, bound = 1 + _clog(sigma - 1, n + 2 * J - 1), max(4 * J - 3, 2 * J), 1
        per = 2
    else:
        raise ValueError(f"unknown construction {construction!r}")
    k = max(1, -(-(S - 1) // D))
    m = D * k + 1
    return {"S": S, "D": D, "m": m, "L": per * layers * J * m, "sparseness<=": bound}


def audit_parameters(report) -> list[str]:
    """Discrepancies between a compilation report and the formulas; empty means pass."""
    exp = expected_parameters(
        report.construction, n=report.n, sigma=len(report.sigma), J=report.width,
        layers=report.node_layers, H=report.nodes,
    )
    got = {"S": report.S, "D": report.D, "L": report.L, "m": report.segment_length}
    out = [f"{key}: produced {got[key]}, formula {v}" for key, v in exp.items() if key in got and got[key] != v]
    bound = exp.get("sparseness<=")
    if bound is not None:
        if report.construction == "sparse1" and report.sparseness != 1:
            out.append(f"sparseness: produced {report.sparseness}, expected exactly 1")
        elif report.sparseness > bound:
            out.append(f"sparseness: produced {report.sparseness}, bound {bound}")
    return out
