import random

import pytest
from hypothesis import given, settings, strategies as st

from irsgeom import words as W
from irsgeom.errors import UnsupportedKind
from irsgeom.irs import action_from_cycles, random_transitive_action, stabilizer
from irsgeom.models.halfplane import SL2
from irsgeom.subgroups import (
    INFINITE,
    CosetTableHandle,
    CyclicHandle,
    LampWindowHandle,
    conjugate_handle,
    conjugate_return_check,
    contains,
    handle_from_json,
    index,
    recurrence_check,
    same_subgroup,
    stallings_from_generators,
    stallings_graph,
    trace,
    trivial_handle,
)

P = W.parse_word
word = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=10).map(W.reduce_word)
KERNEL = CosetTableHandle(((1, 0), (1, 0)))  # a, b -> 1 in Z/2


@pytest.fixture
def stab1(three_point):
    return stabilizer(three_point, 0)


def test_single_loop_graph():
    H = stallings_from_generators([(1,)])
    assert H.edges() == [(0, 1, 0)]
    assert H.index() == INFINITE


def test_commutator_graph_is_a_square():
    H = stallings_from_generators([P("abAB")])
    assert len(H.trans) == 4 and len(H.edges()) == 4
    assert H.index() == INFINITE


def test_folded_membership():
    H = stallings_from_generators([P("aa"), P("ab")])
    assert H.contains(P("BaaB")) is False
    assert H.contains(P("Baab"))
    assert not H.contains(P("b"))
    # independent check: Baab = (ab)^-1 (aa) (ab) ... written in the generators
    assert W.multiply(W.inverse(P("ab")), P("aa"), P("ab")) == P("Baab")


def test_cyclic_membership(free):
    H = CyclicHandle((1,), free)
    assert contains(H, W.power((1,), 5))
    assert not contains(H, P("baB"))


def test_kernel_and_stabilizer_membership(stab1):
    assert KERNEL.contains(P("ab")) and not KERNEL.contains(P("a"))
    assert stab1.contains(P("aaa"))
    assert not stab1.contains(P("a")) and not stab1.contains(P("b"))


def test_conjugation_examples(free, stab1, three_point):
    H = conjugate_handle(CyclicHandle((1,), free), (2,))
    assert H.contains(P("baB")) and not H.contains((1,))
    probes = W.ball(2, 3)
    K = conjugate_handle(KERNEL, P("ab"))
    assert all(K.contains(w) == KERNEL.contains(w) for w in probes)
    # a Stab(x) a^-1 = Stab(a.x); a sends point 1 to point 2
    assert same_subgroup(conjugate_handle(stab1, (1,)), stabilizer(three_point, 1))


def test_trace_examples(free, stab1):
    assert trace(CyclicHandle((1,), free), [(1,), (2,), (1, 2)]).trace == [(1,)]
    assert trace(trivial_handle(free), [(1,), (2,)]).trace == []
    ball = W.ball(2, 2)
    t = trace(stab1, ball).trace
    # frozen: the radius-2 ball has 17 elements, 7 of them stabilize point 1
    assert len(ball) == 17
    assert [W.format_word(w) for w in t] == ["1", "Ab", "AB", "ba", "bb", "Ba", "BB"]


def test_trace_against_permutation_oracle(three_point, stab1):
    for w in W.ball(2, 4):
        assert stab1.contains(w) == (three_point.apply_word(w, 0) == 0)


def test_recurrence_examples(free, stab1):
    ball = W.ball(2, 2)
    for g in W.ball(2, 2)[1:]:
        assert str(recurrence_check(KERNEL, g, ball, 1)) == "Verified(1)"
    assert str(recurrence_check(stab1, (1,), ball, 10)) == "Verified(3)"
    for N in (50, 1000):
        v = recurrence_check(CyclicHandle((1,), free), (2,), [(1,)], N)
        assert str(v) == f"RefutedUpTo({N})"


def test_conjugate_return_examples(free, stab1):
    assert conjugate_return_check(KERNEL, P("ab"), (1,), 6) == [1, 2, 3, 4, 5, 6]
    assert conjugate_return_check(stab1, P("aaa"), (2,), 10) == list(range(1, 11))
    assert conjugate_return_check(CyclicHandle((1,), free), (1,), (2,), 20) == []


def test_index(free, stab1):
    assert index(stallings_from_generators([(1,)])) == INFINITE
    assert index(KERNEL) == 2
    assert index(stab1) == 3
    with pytest.raises(UnsupportedKind):
        index(CyclicHandle((1,), free))


def test_finite_index_graph_matches_table(stab1):
    G = stallings_from_generators(stab1.generators())
    assert G.index() == 3
    for w in W.ball(2, 4):
        assert G.contains(w) == stab1.contains(w)


@settings(max_examples=30, deadline=None)
@given(st.lists(word.filter(bool), min_size=1, max_size=3), st.randoms(use_true_random=False))
def test_folding_is_confluent(gens, rnd):
    ref, _ = stallings_graph(gens, 2)
    n_edges = sum(len(g) for g in gens)
    for _ in range(10):
        order = list(range(n_edges))
        rnd.shuffle(order)
        assert stallings_graph(gens, 2, edge_order=order)[0] == ref


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(0, 10**6), word)
def test_graph_and_table_agree(m, seed, w):
    act = random_transitive_action(random.Random(seed), m)
    T = stabilizer(act, 0)
    G = stallings_from_generators(T.generators())
    assert G.contains(w) == T.contains(w)


@settings(max_examples=50, deadline=None)
@given(st.lists(word.filter(bool), min_size=1, max_size=2), word)
def test_conjugation_consistency(gens, g):
    H = stallings_from_generators(gens)
    K = H.conjugate(g)
    for x in W.ball(2, 3):
        assert K.contains(x) == H.contains(W.multiply(W.inverse(g), x, g))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 10**6), word.filter(bool))
def test_finite_index_subgroups_recur(m, seed, g):
    import math

    act = random_transitive_action(random.Random(seed), m)
    H = stabilizer(act, 0)
    v = recurrence_check(H, g, W.ball(2, 2), math.factorial(H.index()))
    assert v.status == "Verified"


def test_matrix_cyclic_handle(plane):
    S = SL2(0, -1, 1, 0)
    H = CyclicHandle(S, plane)
    assert H.contains(SL2(-1, 0, 0, -1)) and H.contains(S @ S @ S)
    assert not H.contains(SL2(1, 1, 0, 1))


def test_lamp_window(lamp):
    H = LampWindowHandle(-2, 2, lamp)
    assert H.contains(lamp.lamp(-2)) and not H.contains(lamp.lamp(3))
    assert H.conjugate(lamp.t(1)).canonical() == ("lamps", -1, 3)
    assert H.order() == 32


def test_json_round_trip(free, stab1):
    for H in (stab1, stallings_from_generators([P("aa"), P("ab")]), CyclicHandle((1,), free),
              trivial_handle(free)):
        K = handle_from_json(H.to_json(), free)
        assert same_subgroup(H, K, W.ball(2, 3))
    assert handle_from_json(LampWindowHandle(-1, 1).to_json()).canonical() == ("lamps", -1, 1)


def test_same_subgroup_identifies_equal_tables():
    act = action_from_cycles(4, [(1, 2, 3, 4)], [(1, 2, 3, 4)])
    assert same_subgroup(stabilizer(act, 0), stabilizer(act, 2))
