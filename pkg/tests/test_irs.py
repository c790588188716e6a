import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from irsgeom import words as W
from irsgeom.errors import NotInvariant
from irsgeom.irs import (
    FiniteAction,
    IRSMeasure,
    action_from_cycles,
    dirac,
    disjoint_union,
    load_action,
    merge_atoms,
    random_transitive_action,
    stabilizer,
    stabilizer_irs,
    verify_ergodicity,
    verify_invariance,
)
from irsgeom.subgroups import CosetTableHandle, CyclicHandle, conjugate_handle, same_subgroup

PROBES = W.ball(2, 3)


def test_stabilizers_of_the_three_point_action(three_point):
    H = stabilizer(three_point, 0)
    assert H.index() == 3
    assert H.contains(W.parse_word("aaa")) and not H.contains((2,))
    mu = stabilizer_irs(three_point)
    assert [w for _, w in mu.atoms] == [Fraction(1, 3)] * 3


def test_trivial_action_gives_full_group():
    act = FiniteAction(((0, 1, 2), (0, 1, 2)))
    H = stabilizer(act, 1)
    assert H.contains((1,)) and H.contains((2,))
    mu = stabilizer_irs(act)
    assert len(mu.atoms) == 1 and mu.atoms[0][1] == 1
    assert mu.atoms[0][0].index() == 1


def test_swap_action_gives_parity_kernel():
    H = stabilizer(action_from_cycles(2, [(1, 2)], [(1, 2)]), 0)
    assert same_subgroup(H, CosetTableHandle(((1, 0), (1, 0))))


def test_equal_cycles_merge_to_one_atom():
    act = action_from_cycles(5, [(1, 2, 3, 4, 5)], [(1, 2, 3, 4, 5)])
    mu = stabilizer_irs(act)
    assert len(mu.atoms) == 1 and mu.total() == 1


def test_invariance_examples(free, three_point):
    assert verify_invariance(stabilizer_irs(three_point), [(1,), (2,)], PROBES).invariant
    with pytest.raises(NotInvariant) as e:
        verify_invariance(dirac(CyclicHandle((1,), free)), [(1,), (2,)], [(1,), W.parse_word("baB")])
    assert e.value.generator == (2,)
    assert verify_invariance(dirac(CosetTableHandle(((1, 0), (1, 0)))), [(1,), (2,)], PROBES).invariant


def test_ergodicity_examples(three_point):
    assert verify_ergodicity(three_point).ergodic
    v = verify_ergodicity(disjoint_union(three_point, three_point))
    assert not v.ergodic and len(v.orbits) == 2 and str(v) == "NotErgodic(2 orbits)"
    six = action_from_cycles(6, [(1, 2, 3), (4, 5, 6)], [(1, 4)])
    assert verify_ergodicity(six).ergodic
    weighted = FiniteAction(((1, 0), (0, 1)), weights=(Fraction(1, 3), Fraction(2, 3)))
    with pytest.raises(ValueError):
        verify_ergodicity(weighted)


def test_action_validation():
    with pytest.raises(ValueError):
        FiniteAction(((0, 0, 1), (0, 1, 2)))
    with pytest.raises(ValueError):
        FiniteAction(((1, 0), (0, 1)), weights=(Fraction(1, 2), Fraction(1, 3)))


def test_action_json(tmp_path, three_point):
    path = tmp_path / "act.json"
    path.write_text(json.dumps(three_point.to_json()))
    act = load_action(str(path))
    assert act.perms == three_point.perms and act.generator_names() == ["a", "b"]


def test_measure_json(free, three_point):
    mu = stabilizer_irs(three_point)
    doc = mu.to_json()
    assert doc["atoms"][0]["weight"] == "1/3"
    back = IRSMeasure.from_json(doc, free)
    assert all(same_subgroup(h, k) for (h, _), (k, _) in zip(mu.atoms, back.atoms))


actions = st.builds(
    lambda m, seed: random_transitive_action(random.Random(seed), m),
    st.integers(1, 12),
    st.integers(0, 10**6),
)


@settings(max_examples=60, deadline=None)
@given(actions)
def test_stabilizer_irs_properties(act):
    mu = stabilizer_irs(act)
    assert mu.total() == 1
    assert len(mu.atoms) <= act.m
    assert all(h.index() == act.m for h, _ in mu.atoms)
    assert verify_invariance(mu, [(1,), (2,)], PROBES).invariant
    again, _ = merge_atoms(mu.atoms, PROBES)
    assert [w for _, w in again] == [w for _, w in mu.atoms]


@settings(max_examples=200, deadline=None)
@given(actions, st.lists(st.sampled_from([1, -1, 2, -2]), max_size=6).map(W.reduce_word), st.data())
def test_conjugation_identity(act, g, data):
    x = data.draw(st.integers(0, act.m - 1))
    lhs = conjugate_handle(stabilizer(act, x), g)
    rhs = stabilizer(act, act.apply_word(g, x))
    assert all(lhs.contains(w) == rhs.contains(w) for w in PROBES)
