"""Trace a constant-D skip chain across one segment of a compiled automaton.

Usage: python3 scripts/skip_chain_demo.py [--slot 2.2]
"""

import argparse

from benenson.compiler import compile_fixed_width_constD
from benenson.core import run
from benenson.corpus import skip_chain_program
from benenson.machines import all_inputs


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--slot", default="2.2")
    args = ap.parse_args()
    res = compile_fixed_width_constD(skip_chain_program(), "abc")
    a, rep = res.automaton, res.report
    print(rep.to_text())
    start = rep.slots[args.slot]
    end = start + 2 * rep.segment_length
    for x in all_inputs(a.n):
        offsets = [o for o in run(a, x).offsets if start <= o <= end]
        rel = " ".join(f"+{o - start}" for o in offsets)
        print(f"x={''.join(map(str, x))} slot {args.slot} at {start}: {rel}")
        for o in offsets:
            kinds = sorted({(r.var, r.dist) for r in a.moves[o]})
            print(f"   {o:>4} {a.state[o:o + a.S]} rules(var,dist)={kinds}")


if __name__ == "__main__":
    main()
