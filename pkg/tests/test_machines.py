import itertools

import pytest
from hypothesis import given, settings, strategies as st

from benenson.corpus import random_circuit, random_general_bp, random_layered, random_pbp
from benenson.errors import InvariantError, MalformedError
from benenson.machines import (
    ACCEPT,
    REJECT,
    BPNode,
    Circuit,
    Gate,
    GeneralBP,
    LayeredBP,
    PermutationBP,
    all_inputs,
    and_or_depth,
    circuit_depth,
    dump_bp,
    dump_circ,
    eval_bp,
    eval_circuit,
    flip_inputs,
    has_identity_goto0,
    index_of,
    layered_to_general,
    merge_accepts,
    normalize_goto0_identity,
    normalize_single_accept,
    parse_bp,
    parse_circ,
    topo_index,
    truth_table,
)


def same_function(a, b, n):
    return all(eval_bp(a, x) == eval_bp(b, x) for x in all_inputs(n))


def walk(nodes, q, x):
    # recursive oracle for general programs
    nd = nodes[q - 1]
    if nd.kind != "var":
        return int(nd.kind == "accept")
    return walk(nodes, nd.goto1 if x[nd.var - 1] else nd.goto0, x)


def test_eval_circuit_basics():
    c = Circuit(2, (Gate("INPUT", (1,)), Gate("INPUT", (2,)), Gate("AND", (0, 1))), 2)
    assert eval_circuit(c, (1, 1)) == 1 and eval_circuit(c, (1, 0)) == 0
    nc = Circuit(1, (Gate("CONST", (0,)), Gate("NOT", (0,))), 1)
    assert eval_circuit(nc, (0,)) == 1 and circuit_depth(nc) == 1


@pytest.mark.parametrize("gates", [
    ((("AND", (0, 1))),),
    (("INPUT", (3,)),),
    (("INPUT", (1,)), ("XOR", (0, 0))),
    (("INPUT", (1,)), ("NOT", (1,))),
])
def test_circuit_validation(gates):
    with pytest.raises(MalformedError):
        Circuit(2, gates, len(gates) - 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 12), st.integers(0, 10**6))
def test_truth_table_matches_eval(n, g, seed):
    c = random_circuit(n, g, seed)
    tt = truth_table(c)
    for x in all_inputs(n):
        assert (tt >> index_of(x)) & 1 == eval_circuit(c, x)
    assert parse_circ(dump_circ(c)).gates == c.gates


def test_parse_circ_errors():
    with pytest.raises(MalformedError):
        parse_circ("circuit v1\ninputs 1\nlet a = AND b c\noutput a\n")
    with pytest.raises(MalformedError):
        parse_circ("circuit v1\ninputs 1\nlet a = INPUT 1\nlet a = INPUT 1\noutput a\n")
    with pytest.raises(MalformedError):
        parse_circ("circuit v1\ninputs 1\nlet a = INPUT 1\n")


def test_depths():
    c = parse_circ("circuit v1\ninputs 2\nlet a = INPUT 1\nlet b = INPUT 2\nlet n = NOT a\n"
                   "let g = AND n b\nlet h = OR g a\noutput h\n")
    assert circuit_depth(c) == 3
    assert and_or_depth(c) == 2


def test_general_bp_eval_and_sinks():
    assert all(eval_bp(GeneralBP(2, (ACCEPT,), 1), x) == 1 for x in all_inputs(2))
    for seed in range(20):
        g = random_general_bp(3, 7, seed)
        assert all(eval_bp(g, x) == walk(g.nodes, 1, x) for x in all_inputs(3))


def test_width_one_constant():
    bp = LayeredBP(2, 1, ((BPNode("var", 1, 1, 1),), (BPNode("var", 2, 1, 1),)), frozenset({1}))
    assert {eval_bp(bp, x) for x in all_inputs(2)} == {1}


def test_topo_index_sorted_is_unchanged():
    g = random_general_bp(3, 7, 4)
    assert topo_index(g) == g


def test_topo_index_reversed():
    g = random_general_bp(3, 7, 5)
    H = g.H
    rev = {q: H + 1 - q for q in range(1, H + 1)}
    nodes = [None] * H
    for q, nd in enumerate(g.nodes, 1):
        if nd.kind == "var":
            nd = nd._replace(goto0=rev[nd.goto0], goto1=rev[nd.goto1])
        nodes[rev[q] - 1] = nd
    r = GeneralBP(3, tuple(nodes), H)
    t = topo_index(r)
    assert t.is_topo_indexed() and t.start == 1
    assert same_function(r, t, 3)


def test_normalize_single_accept():
    nodes = (BPNode("var", 1, 2, 3), BPNode("var", 2, 4, 5), BPNode("var", 3, 5, 6), ACCEPT, ACCEPT, ACCEPT)
    g = GeneralBP(3, nodes, 1)
    h = normalize_single_accept(g)
    assert len(h.accept_nodes()) == 1
    assert same_function(g, h, 3)
    assert len(normalize_single_accept(GeneralBP(1, (BPNode("var", 1, 2, 2), REJECT), 1)).accept_nodes()) == 1


def test_cycle_is_malformed():
    g = GeneralBP(1, (BPNode("var", 1, 2, 2), BPNode("var", 1, 3, 2), ACCEPT), 1)
    with pytest.raises(MalformedError):
        topo_index(g)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 6), st.integers(0, 10**6))
def test_layered_conversions(n, J, K, seed):
    bp = random_layered(n, J, K, seed, accepts=min(J, 2))
    m = merge_accepts(bp)
    assert len(m.accept) == 1 and same_function(bp, m, n)
    g = layered_to_general(m)
    assert g.is_topo_indexed() and same_function(m, g, n)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.integers(0, 6), st.integers(0, 10**6))
def test_normalize_goto0_identity(n, J, K, seed):
    p = random_pbp(n, J, K, seed)
    q = normalize_goto0_identity(p)
    assert has_identity_goto0(q) and same_function(p, q, n)
    assert normalize_goto0_identity(q) == q
    last = normalize_goto0_identity(p, accept_last=True)
    assert has_identity_goto0(last) and same_function(p, last, n)
    if J > 1 and not eval_bp(p, (0,) * n):
        assert last.accept_row == J


def test_flip_inputs():
    p = random_pbp(3, 3, 4, 1)
    mask = (1, 0, 1)
    f = flip_inputs(p, mask)
    for x in all_inputs(3):
        y = tuple(a ^ b for a, b in zip(x, mask))
        assert eval_bp(f, x) == eval_bp(p, y)


def test_permutation_invariant():
    with pytest.raises(InvariantError):
        PermutationBP(1, 2, ((BPNode("var", 1, 1, 1), BPNode("var", 1, 2, 1)),), frozenset({1}))


def test_bp_format_roundtrip():
    for bp in (random_general_bp(3, 6, 2), random_layered(3, 3, 4, 2, accepts=2), random_pbp(3, 5, 4, 2)):
        assert parse_bp(dump_bp(bp)) == bp
        assert type(parse_bp(dump_bp(bp))) is type(bp)


@pytest.mark.parametrize("text", [
    "bp v1 weird\n",
    "bp v1 general\ninputs 1\nnode 1 accept\n",
    "bp v1 general\ninputs 1\nnode 2 accept\nstart 2\n",
    "bp v1 layered\ninputs 1\nwidth 1 length 1\naccept 2 1\n",
    "bp v1 layered\ninputs 1\nwidth 1 length 1\nnode 1 1 var 1 goto0 1 goto1 1\naccept 1 1\n",
])
def test_parse_bp_malformed(text):
    with pytest.raises(MalformedError):
        parse_bp(text)


def test_all_inputs_lexicographic():
    assert list(all_inputs(2)) == list(itertools.product((0, 1), repeat=2))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 4), st.integers(0, 8), st.integers(0, 10**6))
def test_bp_truth_table_matches_walks(n, J, K, seed):
    from benenson.machines import bp_truth_table

    bp = random_layered(n, J, K, seed, accepts=min(J, 2))
    tt = bp_truth_table(bp)
    assert all((tt >> index_of(x)) & 1 == eval_bp(bp, x) for x in all_inputs(n))


def test_fold_variables():
    from benenson.corpus import fold_variables

    p = random_pbp(22, 3, 10, 4)
    q = fold_variables(p, 10)
    assert q.n == 10 and isinstance(q, PermutationBP)
    for x in all_inputs(10):
        assert eval_bp(q, x) == eval_bp(p, tuple(x[(v - 1) % 10] for v in range(1, 23)))
