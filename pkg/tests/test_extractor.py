import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from benenson.compiler import compile_fixed_width_constD, compile_permutation_program
from benenson.core import BenensonAutomaton, accepts, reachable_offsets, run
from benenson.corpus import random_layered, random_pbp
from benenson.errors import PreconditionError
from benenson.extractor import (
    BOT,
    CircuitBuilder,
    PhiTable,
    build_gadget_A,
    build_gadget_B,
    build_gadget_C,
    compose_tables,
    compute_phi,
    extract,
    extract_circuit,
    num_segments,
    relevant_variables,
    row_bits,
)
from benenson.machines import all_inputs, bits_of, eval_circuit, truth_table


def toy():
    return BenensonAutomaton("abc", 1, 2, 4, "abacbc", frozenset({(1, 1, "ab", 2), (1, 1, "ac", 4)}), 6)


def random_table(r, D):
    return PhiTable(tuple(r.choice(list(range(D)) + [BOT]) for _ in range(D)))


def wires_value(b_circuit_builder, bundle, n, x):
    # evaluate a bundle of wires at input x through a throwaway circuit
    out = []
    for row in bundle:
        v = 0
        for w in row:
            c = b_circuit_builder.build(w)
            v = v << 1 | eval_circuit(c, x)
        out.append(v)
    return out


def test_row_bits():
    assert [row_bits(D) for D in (1, 2, 3, 4, 7, 8, 9)] == [1, 2, 2, 3, 3, 4, 4]


def test_encode_decode():
    t = PhiTable((0, BOT, 2))
    assert t.encode() == (0, 3, 2)
    assert PhiTable.decode(t.encode()) == t


def test_compose_basics():
    r = random.Random(1)
    for D in range(1, 9):
        F = random_table(r, D)
        assert compose_tables(PhiTable.identity(D), F) == F
        assert compose_tables(F, PhiTable.bottom(D)) == PhiTable.bottom(D)
        G, H = random_table(r, D), random_table(r, D)
        assert compose_tables(compose_tables(F, G), H) == compose_tables(F, compose_tables(G, H))
    with pytest.raises(ValueError):
        compose_tables(PhiTable.identity(2), PhiTable.identity(3))


def test_phi_no_rules_is_bottom():
    a = BenensonAutomaton("ab", 1, 1, 3, "abababab", frozenset(), 8)
    assert compute_phi(a, 1, (0,)) == PhiTable.bottom(3)


def test_phi_toy_against_reachability():
    a = toy()
    t = compute_phi(a, 1, (1,))
    reach = reachable_offsets(a, (1,))
    # from offset 0 the chain enters segment 2 (offsets 4..7) at 6 = p
    assert t.rows[0] == max(o - 4 for o in reach if 4 <= o < 8)
    with pytest.raises(ValueError):
        compute_phi(a, 3, (1,))


def test_phi_deterministic_single_candidate():
    res = compile_permutation_program(random_pbp(3, 3, 4, 0), "ACGT", "sparse1")
    a = res.automaton
    for q in range(1, num_segments(a)):
        for x in all_inputs(3):
            for j, h in enumerate(compute_phi(a, q, x).rows):
                if h is not BOT:
                    # the start offset of row j reaches the reported offset
                    start = (q - 1) * a.D + j
                    assert h + q * a.D >= start


def test_phi_composition_matches_run():
    for seed in range(4):
        a = compile_permutation_program(random_pbp(3, 3, 3, seed), "ACGT", "perm").automaton
        D, p = a.D, a.accept_pos
        qs, js = p // D + 1, p % D
        for x in all_inputs(3):
            t = PhiTable.identity(D)
            for q in range(1, qs):
                t = compose_tables(t, compute_phi(a, q, x))
            assert (t.rows[0] == js) == run(a, x).accepted


def test_gadget_A_matches_phi():
    a = compile_fixed_width_constD(random_layered(3, 2, 3, 2), "abc").automaton
    for q in (1, 2, 3):
        b = CircuitBuilder(3)
        rel = relevant_variables(a, q)
        bundle = build_gadget_A(b, a, q, rel)
        for x in all_inputs(3):
            assert wires_value(b, bundle, 3, x) == list(compute_phi(a, q, x).encode())


def test_gadget_A_rule_free_is_constant_bottom():
    a = BenensonAutomaton("ab", 1, 1, 3, "abababab", frozenset(), 8)
    b = CircuitBuilder(1)
    bundle = build_gadget_A(b, a, 1, [])
    assert all(w in (b.zero, b.one) for row in bundle for w in row)
    assert wires_value(b, bundle, 1, (0,)) == [3, 3, 3]


@pytest.mark.parametrize("D", [1, 2, 3, 4, 5, 6])
def test_gadget_B_matches_compose(D):
    # the two tables are fed as inputs, so the gadget is checked on every encoding sampled
    w = row_bits(D)
    n = 2 * D * w
    b = CircuitBuilder(n)
    wires = [b.input(i) for i in range(1, n + 1)]
    first = [wires[j * w:(j + 1) * w] for j in range(D)]
    second = [wires[(D + j) * w:(D + j + 1) * w] for j in range(D)]
    out = build_gadget_B(b, first, second, D)
    r = random.Random(D)
    for _ in range(60):
        F, G = random_table(r, D), random_table(r, D)
        x = []
        for v in F.encode() + G.encode():
            x += list(bits_of(v, w))
        assert wires_value(b, out, n, x) == list(compose_tables(F, G).encode())


def test_gadget_C():
    b = CircuitBuilder(1)
    ident = b.encode_table(PhiTable.identity(4))
    assert build_gadget_C(b, ident, 4, 0) == b.one
    assert build_gadget_C(b, ident, 4, 1) == b.zero


def test_extract_accept_at_zero():
    a = BenensonAutomaton("ab", 2, 1, 2, "abab", frozenset(), 0)
    c = extract_circuit(a)
    assert truth_table(c) == 0b1111


def test_extract_toy():
    ex = extract(toy())
    assert (ex.q_star, ex.j_star, ex.levels) == (2, 2, 0)
    assert [eval_circuit(ex.circuit, (b,)) for b in (0, 1)] == [0, 1]


def test_extract_rejects_nondeterminism():
    a = BenensonAutomaton("ab", 2, 1, 3, "aaaa", frozenset({(1, 0, "a", 1), (2, 1, "a", 3)}), 4)
    with pytest.raises(PreconditionError):
        extract(a)


def test_budget_warning():
    # a cut happens when any bit is set: three relevant variables with D = 1
    rules = frozenset((v, 1, "a", 1) for v in range(1, 4))
    a = BenensonAutomaton("ab", 3, 1, 1, "aaaa", rules, 4)
    with pytest.warns(UserWarning):
        ex = extract(a)
    assert ex.warnings
    for x in all_inputs(3):
        assert eval_circuit(ex.circuit, x) == accepts(a, x)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 5), st.sampled_from(["perm", "sparse1"]),
       st.integers(0, 10**6))
def test_extract_equivalence(n, J, K, construction, seed):
    a = compile_permutation_program(random_pbp(n, J, K, seed), "ACGT", construction).automaton
    ex = extract(a)
    tt = truth_table(ex.circuit)
    for idx, x in enumerate(all_inputs(n)):
        assert (tt >> idx) & 1 == accepts(a, x)
    count = a.accept_pos // a.D
    assert ex.levels == (math.ceil(math.log2(count)) if count > 1 else 0)
    assert ex.padded == 2 ** ex.levels


def test_gate_names_carry_gadget_prefixes():
    a = compile_permutation_program(random_pbp(2, 3, 3, 1), "ACGT", "perm").automaton
    names = extract(a).circuit.names
    assert any(s.startswith("A1_") for s in names)
    assert any(s.startswith("B1_0_") for s in names)
