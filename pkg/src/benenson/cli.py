"""Command-line entry point: ``benenson <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 malformed input,
3 precondition violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import compiler
from .core import check_determinism, parse_bits, parse_ben, reachable_offsets, run, sparseness
from .errors import BenensonError, DeterminismError, GeometryError, MalformedError, PreconditionError
from .extractor import extract
from .machines import (
    GeneralBP,
    LayeredBP,
    PermutationBP,
    dump_circ,
    layered_to_general,
    merge_accepts,
    normalize_single_accept,
    parse_bp,
    parse_circ,
)
from .verify import Evaluator, equivalence_exhaustive, equivalence_random, EXHAUSTIVE_LIMIT
from .wetlab import FOKI, emit_molecules, load_profile, plausibility_check, stem_margin

TRACE_CAP = 10_000
EXIT_OK, EXIT_FAIL, EXIT_MALFORMED, EXIT_PRECONDITION = 0, 1, 2, 3


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise MalformedError(f"cannot read {path}: {exc.strerror}") from exc


def _write_or_print(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_compiled(res: compiler.Compiled, out):
    _write_or_print(res.to_ben(), out)
    if out:
        print(res.report.to_text())


def cmd_compile_circuit(args):
    circ = parse_circ(_read(args.input))
    res = compiler.compile_circuit(circ, args.sigma, args.construction, exhaustive_windows=args.exhaustive_windows)
    _emit_compiled(res, args.output)


def cmd_compile_bp(args):
    bp = parse_bp(_read(args.input))
    con = args.construction
    kw = {"exhaustive_windows": args.exhaustive_windows} if con not in ("general", "fixed") else {}
    if con == "general":
        g = layered_to_general(merge_accepts(bp)) if isinstance(bp, LayeredBP) else normalize_single_accept(bp)
        res = compiler.compile_general(g, args.sigma)
    elif isinstance(bp, GeneralBP):
        raise PreconditionError(f"construction {con} needs a layered program")
    elif con in ("fixed", "fixed-constd"):
        res = compiler.compile_fixed_width(merge_accepts(bp), args.sigma, constant_range=con == "fixed-constd", **kw)
    else:
        if not isinstance(bp, PermutationBP):
            if len(bp.accept) != 1 or not bp.is_permutation():
                raise PreconditionError(f"construction {con} needs a permutation program with one accept row")
            bp = PermutationBP.from_layered(bp)
        res = compiler.compile_permutation_program(bp, args.sigma, con, **kw)
    _emit_compiled(res, args.output)


def _offsets(offs) -> str:
    shown = ",".join(map(str, offs[: TRACE_CAP + 1]))
    return shown + (",...(truncated)" if len(offs) > TRACE_CAP + 1 else "")


def cmd_simulate(args):
    aut = parse_ben(_read(args.input))
    try:
        x = parse_bits(args.input_bits)
    except ValueError as exc:
        raise MalformedError(str(exc)) from exc
    if len(x) != aut.n:
        raise MalformedError(f"input has {len(x)} bits, automaton expects {aut.n}")
    try:
        tr = run(aut, x)
    except DeterminismError:
        reach = sorted(reachable_offsets(aut, x))
        verdict = "ACCEPTED" if aut.accept_pos in reach else "REJECTED"
        print(f"{verdict} nondeterministic reachable={_offsets(reach)}")
        return
    print(f"{'ACCEPTED' if tr.accepted else 'REJECTED'} offsets={_offsets(tr.offsets)}")
    if args.trace:
        for t, (j, r) in enumerate(zip(tr.offsets, tr.applied)):
            if t == TRACE_CAP:
                print(f"... truncated after {TRACE_CAP} steps")
                break
            print(f"{j}\t{aut.state[j:j + aut.S]}\trule {r}\t-> {j + r.dist}")


def cmd_extract(args):
    aut = parse_ben(_read(args.input))
    ex = extract(aut)
    _write_or_print(dump_circ(ex.circuit), args.output)
    if args.output:
        print(f"gates={ex.circuit.size} segments={ex.tables} padded={ex.padded} levels={ex.levels} "
              f"q*={ex.q_star} j*={ex.j_star}")
        for w in ex.warnings:
            print(f"warning: {w}")


def cmd_verify(args):
    a, b = Evaluator.load(args.a), Evaluator.load(args.b)
    if a.n != b.n:
        raise PreconditionError(f"input counts differ: {a.n} vs {b.n}")
    if args.random is not None or (not args.exhaustive and a.n > EXHAUSTIVE_LIMIT):
        res = equivalence_random(a, b, args.random or 10_000, args.seed)
    else:
        res = equivalence_exhaustive(a, b, jobs=args.jobs)
    print(res.line())
    print(f"checked {res.checked} inputs ({res.method})")
    return EXIT_OK if res.equal else EXIT_FAIL


def cmd_emit(args):
    aut = parse_ben(_read(args.input))
    profile = load_profile(_read(args.enzyme)) if args.enzyme else FOKI
    _write_or_print(emit_molecules(aut, profile, args.bases), args.output)
    if args.output:
        print(plausibility_check(aut, profile, args.bases).to_text())


def cmd_stats(args):
    aut = parse_ben(_read(args.input))
    bad = check_determinism(aut)
    print(f"S={aut.S} D={aut.D} L={aut.L} p={aut.accept_pos} n={aut.n} rules={len(aut.rules)}")
    print(f"deterministic={'yes' if not bad else f'no ({len(bad)} conflicting pairs)'}")
    print(f"sparseness={sparseness(aut)}")
    if bad:
        print("stem_margin=n/a (nondeterministic)")
    else:
        m = stem_margin(aut)
        print("stem_margin=undefined (f = 1)" if m is None else f"stem_margin={m}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="benenson", description="Benenson automata toolchain")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile-circuit", help="circuit -> width-5 permutation program -> automaton")
    p.add_argument("input")
    p.add_argument("--construction", choices=("perm", "sparse1"), default="perm")
    p.add_argument("--sigma", default="ACGT")
    p.add_argument("--exhaustive-windows", action="store_true", help="skip rules for every non-marker window")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_compile_circuit)

    p = sub.add_parser("compile-bp", help="branching program -> automaton")
    p.add_argument("input")
    p.add_argument("--construction", choices=compiler.CONSTRUCTIONS, default="perm")
    p.add_argument("--sigma", default="ACGT")
    p.add_argument("--exhaustive-windows", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_compile_bp)

    p = sub.add_parser("simulate", help="run an automaton on one input")
    p.add_argument("input")
    p.add_argument("--input", dest="input_bits", required=True, metavar="BITS")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("extract", help="automaton -> circuit")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_extract)

    p = sub.add_parser("verify", help="compare two of .circ/.bp/.ben")
    p.add_argument("a")
    p.add_argument("b")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--random", type=int, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("emit", help="automaton -> DNA molecules")
    p.add_argument("input")
    p.add_argument("--enzyme", help="profile file (default: built-in FokI)")
    p.add_argument("--bases", default="ACGT", help="bases assigned to the alphabet symbols in order")
    p.add_argument("-o", "--output")
    p.set_defaults(fn=cmd_emit)

    p = sub.add_parser("stats", help="parameters, determinism, sparseness, stem margin")
    p.add_argument("input")
    p.set_defaults(fn=cmd_stats)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code = args.fn(args)
    except MalformedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except (PreconditionError, GeometryError, DeterminismError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (BenensonError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    return code or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
