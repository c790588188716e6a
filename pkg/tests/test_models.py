import random

import pytest

from irsgeom import words as W
from irsgeom.errors import MixedModels
from irsgeom.isometry import fixed_points
from irsgeom.models import DOWN, LampElement, LampVertex, hpoint, make_model, model_from_json
from irsgeom.models.acylindricity import acylindricity_probe
from irsgeom.models.free import make_ray
from irsgeom.models.halfplane import SL2
from irsgeom.surd import INF, QuadSurd

from conftest import CAT, SHEAR


def test_free_action_reduces(free):
    assert free.apply(W.parse_word("ab"), W.parse_word("B")) == (1,)


def test_halfplane_translation(plane):
    assert plane.apply(SHEAR, plane.basepoint) == hpoint(1, 1)


def test_lamplighter_lamp_moves_root(lamp):
    v = lamp.apply(LampElement(frozenset({-2}), 0), lamp.basepoint)
    assert v == LampVertex(0, frozenset({-2}))
    assert lamp.distance(lamp.basepoint, v) == 4


def test_boundary_actions(free, plane):
    assert free.boundary_action((1,), make_ray((), (2,))) == make_ray((1,), (2,))
    assert plane.boundary_action(SL2(0, -1, 1, 0), QuadSurd(0)) is INF
    golden = QuadSurd(0.5, 0.5, 5)
    assert plane.boundary_action(CAT, golden) == golden


def test_ray_normal_form(free):
    # a b^inf written two ways is one end
    assert make_ray((1, 2), (2,)) == make_ray((1,), (2, 2))
    # b B^inf cancels back to B^inf
    assert make_ray((2,), (-2,)) == make_ray((), (-2,))
    assert make_ray((2,), (1,)) != make_ray((), (1,))
    assert str(make_ray((2,), (1,))) == "b(a)^inf"
    assert str(make_ray(W.parse_word("bAB"), (1,))) == "bAB(a)^inf"


@pytest.mark.parametrize("kind", ["free", "halfplane", "lamplighter"])
def test_isometry_and_action_laws(kind):
    m = make_model(kind)
    rng = random.Random(11)
    for _ in range(300):
        g, h = m.random_element(rng, 4), m.random_element(rng, 4)
        x, y = m.random_point(rng, 3), m.random_point(rng, 3)
        assert m.le(abs(m.distance(m.apply(g, x), m.apply(g, y)) - m.distance(x, y)), 0)
        assert m.apply(m.multiply(g, h), x) == m.apply(g, m.apply(h, x))


def test_lamplighter_tree_has_degree_three(lamp):
    rng = random.Random(5)
    for _ in range(200):
        v = lamp.random_point(rng, 6)
        assert len(set(lamp.neighbors(v))) == 3
        assert lamp.parent(lamp.children(v)[0]) == v
        assert v in lamp.children(lamp.parent(v))
    assert all(lamp.boundary_action(g, DOWN) is DOWN for g in lamp.generators())


def test_halfplane_fixed_points_are_fixed(plane):
    rng = random.Random(2)
    seen = 0
    for _ in range(200):
        g = plane.random_element(rng, 6)
        if abs(g.trace) > 2:
            seen += 1
            for b in fixed_points(g, plane):
                assert plane.boundary_action(g, b) == b
    assert seen > 20


def test_mixed_models_rejected(free, plane):
    with pytest.raises(MixedModels):
        plane.check_point((1,))
    with pytest.raises(MixedModels):
        free.check_element(SHEAR)


def test_model_description_round_trip(free, plane, lamp):
    for m in (free, plane, lamp):
        assert model_from_json(m.describe()) == m


def test_ball_records_shortlex_words(free):
    ball = free.ball(free.generators(), 2)
    assert len(ball) == 17
    assert [e.word for e in ball[:5]] == [(), (1,), (-1,), (2,), (-2,)]


def test_acylindricity_free_exact_case(free):
    rep = acylindricity_probe(free, free.generators(), 0, 3, 10, 4, seed=1)
    assert rep.N_observed == 1


def test_acylindricity_free_count_stable_in_R(free):
    a = acylindricity_probe(free, free.generators(), 2, 20, 20, 6, seed=42)
    b = acylindricity_probe(free, free.generators(), 2, 40, 20, 6, seed=42)
    assert a.N_observed == b.N_observed == 1


def test_acylindricity_lamplighter_is_reported(lamp):
    rep = acylindricity_probe(lamp, lamp.generators(), 2, 10, 10, 5, seed=42)
    assert rep.N_observed >= 1 and rep.pairs_tested == 10


def test_acylindricity_halfplane_runs(plane):
    rep = acylindricity_probe(plane, plane.generators(), 1, 3, 3, 3, seed=0)
    assert rep.N_observed >= 1


def test_acylindricity_rejects_bad_parameters(free):
    with pytest.raises(ValueError):
        acylindricity_probe(free, free.generators(), -1, 3, 1, 1, seed=0)
