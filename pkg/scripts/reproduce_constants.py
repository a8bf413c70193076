"""Compile seeded corpora and print the constants each construction reaches.

Usage: python3 scripts/reproduce_constants.py [--seed N]
"""

import argparse
import random

from benenson.compiler import compile_circuit, compile_permutation_program
from benenson.core import sparseness
from benenson.corpus import random_circuit, random_pbp
from benenson.verify import Evaluator, audit_parameters, equivalence_exhaustive, equivalence_random


def row(label, res, verdict):
    a, rep = res.automaton, res.report
    print(f"{label:<28} S={a.S} D={a.D:<3} L={a.L:<7} sparseness={sparseness(a)} "
          f"audit={'ok' if not audit_parameters(rep) else 'MISMATCH'} {verdict}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    r = random.Random(args.seed)

    for t in range(3):
        c = random_circuit(3, r.randint(2, 6), r.getrandbits(32))
        res = compile_circuit(c, "ACGT", "perm")
        row(f"perm n=3 #{t}", res, equivalence_exhaustive(Evaluator(res.automaton), Evaluator(c)).line())

    for K in (8, 64):
        p = random_pbp(22, 3, K, r.getrandbits(32))
        res = compile_permutation_program(p, "ACGT", "sparse1")
        row(f"sparse1 width3 n=22 K={K}", res,
            equivalence_random(Evaluator(res.automaton), Evaluator(p), 10_000, args.seed).line())

    for n in (2, 6, 12, 18):
        c = random_circuit(n, r.randint(2, 6), r.getrandbits(32))
        res = compile_circuit(c, "ACGT", "sparse1")
        check = equivalence_exhaustive if n <= 12 else equivalence_random
        row(f"sparse1 circuit n={n}", res, check(Evaluator(res.automaton), Evaluator(c)).line())


if __name__ == "__main__":
    main()
