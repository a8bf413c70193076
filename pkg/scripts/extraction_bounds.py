"""Extract circuits from compiled automata and compare size and depth with the bounds.

Usage: python3 scripts/extraction_bounds.py [--seed N] [--count N]
"""

import argparse
import math
import random
import time

from benenson.compiler import compile_permutation_program
from benenson.corpus import fold_variables, random_pbp
from benenson.extractor import extract, row_bits
from benenson.machines import bp_truth_table, circuit_depth, truth_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=6)
    args = ap.parse_args()
    r = random.Random(args.seed)
    print(f"{'construction':<9} {'n':>2} {'K':>3} {'D':>3} {'L':>6} {'levels':>6} "
          f"{'gates':>7} {'bound':>10} {'depth':>5} {'secs':>5} equal")
    for _ in range(args.count):
        K = r.choice((4, 8, 16, 32, 64))
        construction = r.choice(("perm", "sparse1"))
        p = fold_variables(random_pbp(22, 3, K, r.getrandbits(32)), 10)
        a = compile_permutation_program(p, "ACGT", construction).automaton
        t0 = time.time()
        ex = extract(a)
        secs = time.time() - t0
        bound = 64 * row_bits(a.D) * 2 ** a.D * a.L
        equal = truth_table(ex.circuit) == bp_truth_table(p)
        composed = a.accept_pos // a.D
        assert ex.levels == (math.ceil(math.log2(composed)) if composed > 1 else 0)
        print(f"{construction:<9} {a.n:>2} {K:>3} {a.D:>3} {a.L:>6} {ex.levels:>6} "
              f"{ex.circuit.size:>7} {bound:>10} {circuit_depth(ex.circuit):>5} {secs:>5.2f} {equal}")


if __name__ == "__main__":
    main()
