from pathlib import Path

import pytest

from benenson.cli import main
from benenson.core import parse_ben
from benenson.corpus import random_pbp
from benenson.machines import dump_bp, dump_circ
from benenson.corpus import random_circuit

DATA = Path(__file__).resolve().parent.parent / "data"


def cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_simulate_toy(capsys):
    code, out, _ = cli(capsys, "simulate", DATA / "toy.ben", "--input", "1")
    assert code == 0 and out.strip() == "ACCEPTED offsets=0,2,6"
    code, out, _ = cli(capsys, "simulate", DATA / "toy.ben", "--input", "0", "--trace")
    assert out.startswith("REJECTED offsets=0")


def test_simulate_trace_lines(capsys):
    code, out, _ = cli(capsys, "simulate", DATA / "toy.ben", "--input", "1", "--trace")
    assert out.splitlines()[1:] == ["0\tab\trule (1,1,ab,2)\t-> 2", "2\tac\trule (1,1,ac,4)\t-> 6"]


def test_compile_circuit_and_stats(capsys, tmp_path):
    out_ben = tmp_path / "and3.ben"
    code, out, _ = cli(capsys, "compile-circuit", DATA / "and3.circ", "--construction", "perm", "-o", out_ben)
    assert code == 0 and "construction perm" in out
    code, out, _ = cli(capsys, "stats", out_ben)
    assert code == 0 and out.startswith("S=4 D=9 ")
    assert "deterministic=yes" in out
    code, out, _ = cli(capsys, "verify", DATA / "and3.circ", out_ben, "--exhaustive")
    assert code == 0 and out.startswith("PASS")


def test_compile_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.ben", tmp_path / "b.ben"
    for f in (a, b):
        cli(capsys, "compile-circuit", DATA / "and3.circ", "--construction", "sparse1", "-o", f)
    assert a.read_bytes() == b.read_bytes()


def test_compile_to_stdout(capsys):
    code, out, _ = cli(capsys, "compile-circuit", DATA / "and3.circ")
    assert code == 0 and parse_ben(out).n == 3


@pytest.mark.parametrize("construction,source", [
    ("general", "majority3.bp"),
    ("general", "layered_w3.bp"),
    ("fixed", "layered_w3.bp"),
    ("fixed-constd", "layered_w3.bp"),
    ("perm", "xor3.bp"),
    ("sparse1", "xor3.bp"),
])
def test_compile_bp_verifies(capsys, tmp_path, construction, source):
    f = tmp_path / "out.ben"
    code, _, _ = cli(capsys, "compile-bp", DATA / source, "--construction", construction, "-o", f)
    assert code == 0
    code, out, _ = cli(capsys, "verify", f, DATA / source)
    assert code == 0 and out.startswith("PASS")


def test_compile_bp_preconditions(capsys, tmp_path):
    code, _, err = cli(capsys, "compile-bp", DATA / "majority3.bp", "--construction", "perm")
    assert code == 3 and "layered" in err
    code, _, _ = cli(capsys, "compile-bp", DATA / "layered_w3.bp", "--construction", "sparse1")
    assert code == 3
    code, _, _ = cli(capsys, "compile-bp", DATA / "xor3.bp", "--construction", "perm", "--sigma", "ab")
    assert code == 3


def test_extract_roundtrip(capsys, tmp_path):
    ben, circ = tmp_path / "x.ben", tmp_path / "x.circ"
    cli(capsys, "compile-bp", DATA / "xor3.bp", "--construction", "perm", "-o", ben)
    code, out, _ = cli(capsys, "extract", ben, "-o", circ)
    assert code == 0 and "levels=" in out
    code, out, _ = cli(capsys, "verify", circ, DATA / "xor3.bp", "--jobs", "2")
    assert code == 0


def test_extract_nondeterministic_is_precondition(capsys, tmp_path):
    f = tmp_path / "nd.ben"
    f.write_text("benenson v1\nsigma ab\nn 2\nS 1\nD 3\np 4\nstate aaaa\nrule 1 0 a 1\nrule 2 1 a 3\n")
    code, _, _ = cli(capsys, "extract", f)
    assert code == 3
    code, out, _ = cli(capsys, "stats", f)
    assert code == 0 and "deterministic=no" in out
    code, out, _ = cli(capsys, "simulate", f, "--input", "01")
    assert code == 0 and "nondeterministic" in out


def test_verify_failure_exit_code(capsys, tmp_path):
    a, b = tmp_path / "a.circ", tmp_path / "b.circ"
    a.write_text(dump_circ(random_circuit(3, 4, 1)))
    b.write_text("circuit v1\ninputs 3\nlet z = CONST 0\nlet o = NOT z\noutput o\n")
    code, out, _ = cli(capsys, "verify", a, b)
    assert code == 1 and out.startswith("FAIL x=")
    code, out, _ = cli(capsys, "verify", a, b, "--random", "50", "--seed", "3")
    assert code == 1 and "random seed=3" in out


def test_verify_large_n_samples(capsys, tmp_path):
    bp = tmp_path / "p.bp"
    bp.write_text(dump_bp(random_pbp(22, 3, 6, 0)))
    ben = tmp_path / "p.ben"
    cli(capsys, "compile-bp", bp, "--construction", "sparse1", "-o", ben)
    code, out, _ = cli(capsys, "verify", ben, bp, "--random", "300")
    assert code == 0 and "checked 300 inputs" in out


def test_emit(capsys, tmp_path):
    ben, fa = tmp_path / "a.ben", tmp_path / "a.fa"
    cli(capsys, "compile-circuit", DATA / "and3.circ", "-o", ben)
    code, out, _ = cli(capsys, "emit", ben, "--enzyme", DATA / "foki.profile", "-o", fa)
    assert code == 0 and ">state_top" in fa.read_text()
    code, _, err = cli(capsys, "emit", DATA / "toy.ben")
    assert code == 3 and "S=2" in err


@pytest.mark.parametrize("argv", [
    ["simulate", "missing.ben", "--input", "1"],
    ["simulate", str(DATA / "toy.ben"), "--input", "2"],
    ["simulate", str(DATA / "toy.ben"), "--input", "11"],
    ["stats", str(DATA / "and3.circ")],
    ["verify", str(DATA / "foki.profile"), str(DATA / "toy.ben")],
])
def test_malformed_exit_code(capsys, argv):
    code, _, err = cli(capsys, *argv)
    assert code == 2 and err.startswith("error:")
