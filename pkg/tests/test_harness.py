import json

import pytest

from irsgeom.errors import PreconditionFail
from irsgeom.harness import (
    DENSE,
    IN_RADICAL,
    INCONSISTENT,
    ExperimentConfig,
    run_dichotomy,
    run_lemma_suite,
    run_radical_suite,
)
from irsgeom.report import dumps

EMPTY = dict(
    displacement_instances=0,
    doubling_instances=0,
    commutator_instances=0,
    matrix_commutator_instances=0,
    convergence_instances=0,
)


def test_config_round_trip(tmp_path):
    cfg = ExperimentConfig(seed=7, actions=3)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_json()))
    assert ExperimentConfig.load(str(path)) == cfg
    with pytest.raises(ValueError):
        ExperimentConfig.from_json({"sed": 1})


def test_small_dichotomy():
    rep = run_dichotomy(ExperimentConfig(actions=5))
    doc = rep.to_json()
    first = doc["sources"][0]
    assert first["name"] == "three_point"
    assert [r["classification"] for r in first["rows"]] == [DENSE] * 3
    assert doc["sources"][-1]["rows"][0]["classification"] == IN_RADICAL
    assert doc["rejected"][0]["generator"] == "b"
    assert doc["rejected"][0]["recurrence_b"].startswith("RefutedUpTo")
    assert rep.counts()[INCONSISTENT] == 0 and rep.exit_code == 0
    assert "finitely supported" in doc["scope"]
    assert doc["ambient"]["truncation"]["depth"] == 3


def test_dichotomy_is_deterministic():
    a = dumps(run_dichotomy(ExperimentConfig(actions=4, seed=3)).to_json())
    b = dumps(run_dichotomy(ExperimentConfig(actions=4, seed=3)).to_json())
    assert a == b


def test_dichotomy_needs_the_free_model():
    with pytest.raises(PreconditionFail):
        run_dichotomy(ExperimentConfig(model="halfplane"))


def test_empty_lemma_suite():
    rep = run_lemma_suite(ExperimentConfig(**EMPTY))
    assert rep["exit_code"] == 0 and set(rep) == {"config", "exit_code"}


def test_small_lemma_suite():
    cfg = ExperimentConfig(
        displacement_instances=40,
        doubling_instances=5,
        commutator_instances=10,
        matrix_commutator_instances=3,
        convergence_instances=3,
    )
    rep = run_lemma_suite(cfg)
    assert rep["exit_code"] == 0
    assert rep["displacement"]["free"]["passed_premises"] == 40
    assert rep["doubling"]["free_a_b"]["D"] == "1"
    assert rep["conjugate_convergence"]["free_b_a"]["limit"] == "(A)^inf"


def test_radical_suite_with_minimal_chain():
    rep = run_radical_suite(ExperimentConfig(chain_length=1, radical_samples=20))
    assert rep["exit_code"] == 0
    assert rep["free_trivial"]["confirmed"]
    assert rep["halfplane_plus_minus_identity"]["confirmed"]
    assert not rep["negative_control_cyclic_a"]["fixes_limit_set"]
    assert rep["lineal_gate"].startswith("HypothesisFail")
    assert rep["lamplighter_chain"]["diameters"] == [2]
    assert rep["precondition_controls"]["index_two_kernel"].startswith("NotElliptic")
