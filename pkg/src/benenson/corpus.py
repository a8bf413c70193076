"""Seeded random instances for tests and experiments.

Every generator takes a ``random.Random`` (or a seed) so corpora are
reproducible across runs and platforms.
"""

from __future__ import annotations

import random
from typing import Union

from .machines import ACCEPT, REJECT, BPNode, Circuit, Gate, GeneralBP, LayeredBP, PermutationBP

RngLike = Union[random.Random, int, None]


def rng_of(rng: RngLike) -> random.Random:
    return rng if isinstance(rng, random.Random) else random.Random(rng)


def random_circuit(n: int, gates: int, rng: RngLike = 0, *, ops=("AND", "OR", "NOT")) -> Circuit:
    """Random fan-in-2 circuit with ``gates`` internal gates over ``n`` inputs."""
    r = rng_of(rng)
    gs = [Gate("INPUT", (i,)) for i in range(1, n + 1)]
    for _ in range(gates):
        op = r.choice(ops)
        if op == "NOT":
            gs.append(Gate("NOT", (r.randrange(len(gs)),)))
        else:
            gs.append(Gate(op, (r.randrange(len(gs)), r.randrange(len(gs)))))
    return Circuit(n, tuple(gs), len(gs) - 1)


def random_and_not_circuit(n: int, gates: int, rng: RngLike = 0) -> Circuit:
    return random_circuit(n, gates, rng, ops=("AND", "NOT"))


def random_formula(n: int, depth: int, rng: RngLike = 0) -> Circuit:
    """Random tree of AND/OR/NOT with exactly ``depth`` AND/OR levels on its spine."""
    r = rng_of(rng)
    gs = [Gate("INPUT", (i,)) for i in range(1, n + 1)]

    def grow(d):
        if d == 0:
            g = r.randrange(n)
        else:
            a, b = grow(d - 1), grow(r.randrange(d))
            gs.append(Gate(r.choice(("AND", "OR")), (a, b)))
            g = len(gs) - 1
        if r.random() < 0.3:
            gs.append(Gate("NOT", (g,)))
            g = len(gs) - 1
        return g

    out = grow(depth)
    return Circuit(n, tuple(gs), out)


def random_layered(n: int, width: int, length: int, rng: RngLike = 0, *, accepts: int = 1) -> LayeredBP:
    r = rng_of(rng)
    layers = tuple(
        tuple(
            BPNode("var", r.randint(1, n), r.randint(1, width), r.randint(1, width))
            for _ in range(width)
        )
        for _ in range(length)
    )
    acc = frozenset(r.sample(range(1, width + 1), accepts))
    return LayeredBP(n, width, layers, acc)


def random_pbp(n: int, width: int, length: int, rng: RngLike = 0, *, identity_goto0: bool = False) -> PermutationBP:
    r = rng_of(rng)
    rows = list(range(1, width + 1))
    layers = []
    for _ in range(length):
        p0 = rows[:] if identity_goto0 else r.sample(rows, width)
        p1 = r.sample(rows, width)
        v = r.randint(1, n)
        layers.append(tuple(BPNode("var", v, p0[j], p1[j]) for j in range(width)))
    return PermutationBP(n, width, tuple(layers), frozenset({r.randint(1, width)}))


def random_general_bp(n: int, inner: int, rng: RngLike = 0) -> GeneralBP:
    """Topologically indexed program: ``inner`` variable nodes, then reject, accept."""
    r = rng_of(rng)
    H = inner + 2
    nodes = [
        BPNode("var", r.randint(1, n), r.randint(q + 1, H), r.randint(q + 1, H))
        for q in range(1, inner + 1)
    ]
    nodes += [REJECT, ACCEPT]
    return GeneralBP(n, tuple(nodes), 1)


def skip_chain_program() -> LayeredBP:
    """Width-3 program whose walk makes a 2-segment jump from node (2, 2) to (3, 1).

    Compiled with constant range over a 3-symbol alphabet this gives D = 5,
    k = 2, m = 11, so the jump is a cut of 2 followed by four skips.
    """
    any_row = BPNode("var", 1, 1, 1)
    layers = (
        (BPNode("var", 1, 2, 2), any_row, any_row),
        (any_row, BPNode("var", 2, 1, 1), any_row),
        (BPNode("var", 2, 3, 3), any_row, any_row),
    )
    return LayeredBP(2, 3, layers, frozenset({3}))


def fold_variables(bp: LayeredBP, n: int) -> LayeredBP:
    """Same program over n inputs: variable v reads input ((v - 1) mod n) + 1."""
    layers = tuple(tuple(nd._replace(var=(nd.var - 1) % n + 1) for nd in layer) for layer in bp.layers)
    return type(bp)(n, bp.width, layers, bp.accept)
