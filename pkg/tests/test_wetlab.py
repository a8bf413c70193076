from pathlib import Path

import pytest

from benenson.compiler import compile_circuit, compile_permutation_program
from benenson.core import BenensonAutomaton, CuttingRule, input_independent
from benenson.corpus import random_circuit, random_pbp
from benenson.errors import GeometryError, MalformedError, PreconditionError, ProfileMismatchError, UnsupportedAlphabetError
from benenson.wetlab import (
    FOKI,
    EnzymeProfile,
    complement,
    emit_molecules,
    load_profile,
    parse_bundle,
    plausibility_check,
    reverse_complement,
    rule_molecule,
    stem_margin,
)

DATA = Path(__file__).resolve().parent.parent / "data"
BASE = dict(zip("ACGT", "ACGT"))


def dna(rules, n=2, state="ACGTACGTAA", p=8, D=9):
    return BenensonAutomaton("ACGT", n, 4, D, state, frozenset(rules), p)


def test_foki_profile():
    assert (FOKI.top_cut, FOKI.bottom_cut, FOKI.sticky_size) == (9, 13, 4)
    assert load_profile((DATA / "foki.profile").read_text()) == FOKI
    with pytest.raises(MalformedError):
        load_profile("name X\ntop_cut 3\n")
    with pytest.raises(ValueError):
        EnzymeProfile("bad", "GGATG", 5, 5)


def test_spacer_arithmetic():
    m = rule_molecule(CuttingRule(1, 0, "TGGC", 7), FOKI, BASE)
    assert m == "GGATG" + "AT" + "ACCG"
    assert rule_molecule(CuttingRule(1, 0, "TGGC", 9), FOKI, BASE) == "GGATG" + "ACCG"
    with pytest.raises(GeometryError):
        rule_molecule(CuttingRule(1, 0, "TGGC", 10), FOKI, BASE)


def test_emit_layout_and_roundtrip():
    a = dna({(1, 1, "ACGT", 4), (2, 0, "ACGT", 4)} | set(input_independent("TACG", 9)))
    text = emit_molecules(a)
    lines = text.splitlines()
    top = lines[lines.index(">state_top") + 1]
    bottom = lines[lines.index(">state_bottom") + 1]
    assert top == a.state and bottom == reverse_complement(a.state[4:])
    assert parse_bundle(text) == a
    for ln, seq in zip(lines, lines[1:]):
        if ln.startswith(">rule_"):
            omega = ln.split("_")[3]
            assert seq[-4:] == complement(omega)


def test_custom_base_map_roundtrip():
    a = BenensonAutomaton("wxyz", 1, 4, 9, "wxyzzyxw", frozenset({(1, 1, "wxyz", 3)}), 4)
    text = emit_molecules(a, FOKI, "TGCA")
    assert ">state_top\nTGCAACGT" in text
    assert parse_bundle(text) == a


def test_emit_preconditions():
    with pytest.raises(ProfileMismatchError):
        emit_molecules(BenensonAutomaton("ACGT", 1, 3, 9, "ACGT", frozenset(), 0))
    with pytest.raises(GeometryError):
        emit_molecules(BenensonAutomaton("ACGT", 1, 4, 12, "ACGT", frozenset(), 0))
    with pytest.raises(UnsupportedAlphabetError):
        emit_molecules(BenensonAutomaton("abcde", 1, 4, 9, "abcd", frozenset(), 0))


def test_parse_bundle_errors():
    good = emit_molecules(dna({(1, 1, "ACGT", 4)}))
    with pytest.raises(MalformedError):
        parse_bundle(good.replace(">state_bottom\n", ">state_bottom\nA"))
    with pytest.raises(MalformedError):
        parse_bundle("ACGT\n")
    with pytest.raises(MalformedError):
        parse_bundle(good.replace("GGATG", "GGATC", 1))


def test_plausibility_flags():
    rep = plausibility_check(dna({(1, 1, "CCCC", 1), (1, 0, "CCCC", 4)}))
    assert rep.nick_adjacent == [CuttingRule(1, 1, "CCCC", 1)] and not rep.clean
    rep = plausibility_check(dna({(1, 1, "CCCA", 10)}, D=10))
    assert rep.out_of_reach
    rep = plausibility_check(dna({(1, 1, "ACGT", 5)}))
    assert rep.self_complementary == ["ACGT"]
    rep = plausibility_check(dna({(1, 1, "CCCA", 5)}))
    assert rep.clean and any("not scanned" in t for t in rep.notes)


def test_compiled_automata_fit_foki():
    # perm compilations over ACGT with n <= 3 have S = 4 and D = 9, inside FokI's reach
    for seed in range(5):
        a = compile_permutation_program(random_pbp(3, 5, 4, seed), "ACGT", "perm").automaton
        rep = plausibility_check(a)
        assert not rep.out_of_reach
        assert {r for r in a.rules if r.dist == 1} == set(rep.nick_adjacent)
        assert parse_bundle(emit_molecules(a)) == a


def test_stem_margin_examples():
    toy = BenensonAutomaton("abc", 1, 2, 4, "abacbc", frozenset({(1, 1, "ab", 2), (1, 1, "ac", 4)}), 6)
    assert stem_margin(toy) == 6
    always = BenensonAutomaton("ab", 2, 1, 1, "ab", frozenset(), 0)
    assert stem_margin(always) is None
    bad = BenensonAutomaton("ab", 2, 1, 3, "aaaa", frozenset({(1, 0, "a", 1), (2, 1, "a", 3)}), 4)
    with pytest.raises(PreconditionError):
        stem_margin(bad)


def test_stem_margin_reject_convention():
    for seed in range(6):
        res = compile_permutation_program(random_pbp(3, 3, 4, seed), "ACGT", "perm")
        m = stem_margin(res.automaton)
        if res.report.reject_convention and m is not None:
            assert m >= res.report.segment_length


def test_stem_margin_sampled():
    res = compile_circuit(random_circuit(3, 4, 2))
    assert stem_margin(res.automaton, exhaustive_limit=0, samples=200) >= stem_margin(res.automaton)
