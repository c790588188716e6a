import random

import pytest
from hypothesis import given, settings, strategies as st

from irsgeom import words as W
from irsgeom.errors import DegenerateStart, NotLoxodromic, PreconditionFail, RadiusTooSmall
from irsgeom.irs import stabilizer
from irsgeom.isometry import (
    ELLIPTIC,
    GENERAL_TYPE,
    LINEAL,
    LOXODROMIC,
    PARABOLIC,
    QUASI_PARABOLIC,
    action_type,
    classification_rows,
    classify,
    find_loxodromic_with_endpoints,
    fixed_points,
    independent,
    limit_set_approx,
    north_south_verify,
)
from irsgeom.models import LampElement
from irsgeom.models.free import make_ray
from irsgeom.models.halfplane import SL2
from irsgeom.subgroups import CosetTableHandle, CyclicHandle, stallings_from_generators
from irsgeom.surd import QuadSurd

from conftest import CAT, SHEAR

word = st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=8).map(W.reduce_word).filter(bool)


def test_free_classification(free):
    c = classify(W.parse_word("bAB"), free)
    assert c.kind == LOXODROMIC and c.translation_length == 1
    assert classify((), free).kind == ELLIPTIC


def test_free_fixed_points(free):
    plus, minus = fixed_points((1, 2), free)
    assert str(plus) == "(ab)^inf" and str(minus) == "(BA)^inf"
    plus, minus = fixed_points(W.parse_word("bAB"), free)
    assert (plus, minus) == (make_ray((2,), (-1,)), make_ray((2,), (1,)))


def test_halfplane_classification(plane):
    assert classify(SHEAR, plane).kind == PARABOLIC
    assert classify(SL2(0, -1, 1, 0), plane).kind == ELLIPTIC
    assert classify(SL2(-1, 0, 0, -1), plane).kind == ELLIPTIC
    c = classify(CAT, plane)
    assert c.kind == LOXODROMIC
    # translation length 2 acosh(3/2) = 2 log(golden ratio)
    assert abs(float(c.translation_length) - 1.9248473002384139) < 1e-12


def test_halfplane_fixed_points_solve_the_quadratic(plane):
    plus, minus = fixed_points(CAT, plane)
    assert plus == QuadSurd(0.5, 0.5, 5) and minus == QuadSurd(0.5, -0.5, 5)
    for r in (plus, minus):
        # c z^2 + (d - a) z - b = 0
        assert abs(float(r) ** 2 - float(r) - 1) < 1e-12


def test_lamplighter_classification(lamp):
    c = classify(LampElement(frozenset({0}), 0), lamp)
    assert c.kind == ELLIPTIC and c.evidence["orbit_radius"] <= 2
    c = classify(LampElement(frozenset(), 1), lamp)
    assert c.kind == LOXODROMIC and c.translation_length == 1


def test_not_loxodromic(plane):
    with pytest.raises(NotLoxodromic):
        fixed_points(SHEAR, plane)


def test_independence(free, plane):
    assert independent((1,), (2,), free)
    assert not independent((1,), (-1,), free)
    assert independent(CAT, SL2(1, 1, 1, 2), plane)


@settings(max_examples=300)
@given(word)
def test_free_classification_matches_displacement_slope(g):
    from irsgeom.models import FreeGroupModel

    m = FreeGroupModel(2)
    c = classify(g, m)
    d = [m.distance((), W.power(g, n)) for n in (20, 21)]
    assert c.kind == LOXODROMIC
    assert d[1] - d[0] == c.translation_length


def test_halfplane_class_is_conjugation_invariant(plane):
    rng = random.Random(4)
    for _ in range(300):
        g = plane.random_element(rng, 5)
        h = plane.random_element(rng, 5)
        assert classify(g, plane).kind == classify(plane.conjugate(g, h), plane).kind


@settings(max_examples=100)
@given(word, word)
def test_fixed_points_are_equivariant(g, h):
    from irsgeom.models import FreeGroupModel

    m = FreeGroupModel(2)
    conj = W.multiply(h, g, W.inverse(h))
    plus, minus = fixed_points(g, m)
    assert fixed_points(conj, m) == (m.boundary_action(h, plus), m.boundary_action(h, minus))


def test_action_types(free, lamp, plane):
    for r in (2, 3, 4):
        at = action_type(free.generators(), free, r)
        assert at.kind == GENERAL_TYPE
    assert at.evidence["independent_pair"] == ((1,), (2,))
    assert action_type([(1,)], free, 4).kind == LINEAL
    assert action_type(lamp.generators(), lamp, 3).kind == QUASI_PARABOLIC
    assert action_type(plane.generators(), plane, 3).kind == GENERAL_TYPE


def test_lamp_subgroup_action_is_parabolic(lamp):
    K = 4
    at = action_type([lamp.lamp(i) for i in range(-K, K + 1)], lamp, 3, threshold=2 * K)
    assert at.kind == PARABOLIC
    assert at.evidence["loxodromics"] == 0 and at.evidence["orbit_diameter"] >= 2 * K


def test_limit_set_of_cyclic_subgroup(free):
    ls = limit_set_approx(CyclicHandle((1,), free), free, 3, 10)
    assert ls.as_set() == {(1, 1, 1), (-1, -1, -1)}
    # same answer from the graph
    assert limit_set_approx(stallings_from_generators([(1,)]), free, 3, 10).as_set() == ls.as_set()


def test_limit_set_of_full_group(free):
    full = CosetTableHandle(((0,), (0,)))
    assert len(limit_set_approx(full, free, 2, 8).prefixes) == 12


def test_limit_set_of_index_three_stabilizer(free, three_point):
    H = stabilizer(three_point, 0)
    assert limit_set_approx(H, free, 3, 14).as_set() == set(W.reduced_words(2, 3))


@settings(max_examples=40, deadline=None)
@given(word)
def test_limit_set_of_cyclic_is_its_two_ends(g):
    from irsgeom.models import FreeGroupModel

    m = FreeGroupModel(2)
    plus, minus = fixed_points(g, m)
    ls = limit_set_approx(stallings_from_generators([g]), m, 3, 6 * len(g) + 12)
    assert ls.as_set() == {plus.head(3), minus.head(3)}


def test_limit_set_needs_room(free):
    with pytest.raises(RadiusTooSmall):
        limit_set_approx(CyclicHandle((1,), free), free, 4, 7)


def test_north_south(free, plane):
    assert north_south_verify((1, 2), (), free, 30).converges
    assert north_south_verify((1,), make_ray((), (2,)), free, 30).converges
    assert north_south_verify((1,), (), free, 30, backward=True).converges
    with pytest.raises(DegenerateStart):
        north_south_verify((1,), make_ray((), (-1,)), free, 30)
    assert north_south_verify(CAT, plane.basepoint, plane, 25).converges


def test_find_loxodromic_with_endpoints(free):
    for u, v in (("ab", "ba"), ("a", "A"), ("ab", "aB"), ("b", "aa")):
        u, v = W.parse_word(u), W.parse_word(v)
        g = find_loxodromic_with_endpoints(u, v, free)
        plus, minus = fixed_points(g, free)
        assert plus.head(len(u)) == u and minus.head(len(v)) == v
    assert W.format_word(find_loxodromic_with_endpoints((1, 2), (2, 1), free)) == "abAAB"
    assert W.format_word(find_loxodromic_with_endpoints((1,), (-1,), free)) == "aaa"
    with pytest.raises(PreconditionFail):
        find_loxodromic_with_endpoints((1,), (1,), free)


def test_classification_rows(free):
    rows = classification_rows([(1,), ()], free)
    assert rows[0]["class"] == LOXODROMIC and rows[0]["fixed_plus"] == "(a)^inf"
    assert rows[1]["translation_length"] == "0"
