"""Seeded experiment drivers behind the command line.

All randomness flows from ``ExperimentConfig.seed``, and reports contain
no timings, so equal configurations give byte-identical output.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

from . import words as W
from .errors import (
    FixesAttractor,
    HypothesisFail,
    Inconclusive,
    NotElliptic,
    NotFoundWithin,
    NotInvariant,
    NotNormal,
    PreconditionFail,
)
from .irs import (
    FiniteAction,
    IRSMeasure,
    action_from_cycles,
    dirac,
    random_transitive_action,
    stabilizer_irs,
    verify_ergodicity,
    verify_invariance,
)
from .isometry import GENERAL_TYPE, LOXODROMIC, action_type, classify, fixed_points, limit_set_approx
from .lemmas import (
    COUNTEREXAMPLE,
    DisplacementWitness,
    check_displacement_criterion,
    conjugate_convergence,
    doubling_estimate,
    loxodromic_commutator,
)
from .models import FreeGroupModel, HalfPlaneModel, LamplighterModel, make_model
from .models.halfplane import SL2
from .radical import (
    lamplighter_no_maximal,
    negative_control,
    normal_elliptic_implies_radical,
    radical_verify,
    standard_candidates,
)
from .report import fmt
from .subgroups import CosetTableHandle, CyclicHandle, FiniteSetHandle, recurrence_check, trivial_handle

DENSE = "GeometricallyDense"
IN_RADICAL = "InRadical"
INCONSISTENT = "INCONSISTENT"

EXIT_OK = 0
EXIT_LEMMA_FAILURE = 2
EXIT_INCONSISTENT = 3
EXIT_PRECONDITION = 4

SCOPE_NOTE = (
    "finitely supported IRSs only: stabilizer measures of finite transitive actions "
    "and hand-built point masses; verdicts hold at the stated truncation"
)


@dataclass
class ExperimentConfig:
    model: str = "free"
    rank: int = 2
    seed: int = 42
    actions: int = 50
    max_points: int = 12
    depth: int = 3
    radius: int = 14
    n_max: int = 10
    search_radius: int = 3
    probe_radius: int = 3
    recurrence_radius: int = 2
    chain_length: int = 8
    displacement_instances: int = 500
    doubling_instances: int = 100
    commutator_instances: int = 200
    matrix_commutator_instances: int = 50
    convergence_instances: int = 10
    radical_samples: int = 100
    generators: list | None = None
    out: str | None = None
    format: str = "json"

    @classmethod
    def from_json(cls, doc: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**doc)

    @classmethod
    def load(cls, path: str) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        doc = asdict(self)
        doc.pop("out")
        return doc


# -- dichotomy -----------------------------------------------------------


@dataclass
class AtomRow:
    atom_id: str
    weight: Fraction
    handle: dict
    recurrence: dict
    recurrent: bool
    limit_set_equal: bool
    limit_set_size: int
    fixed_point: str | None
    in_radical: bool
    classification: str

    def to_json(self) -> dict:
        return {
            "id": self.atom_id,
            "weight": f"{self.weight.numerator}/{self.weight.denominator}",
            "handle": self.handle,
            "recurrence": self.recurrence,
            "recurrent": self.recurrent,
            "limit_set_equal": self.limit_set_equal,
            "limit_set_size": self.limit_set_size,
            "common_fixed_point": self.fixed_point,
            "in_radical": self.in_radical,
            "classification": self.classification,
        }


@dataclass
class DichotomyReport:
    config: dict
    ambient: dict
    sources: list
    rejected: list

    def rows(self) -> list[AtomRow]:
        return [r for s in self.sources for r in s["rows"]]

    def counts(self) -> dict:
        out = {DENSE: 0, IN_RADICAL: 0, INCONSISTENT: 0}
        for r in self.rows():
            out[r.classification] += 1
        return out

    @property
    def exit_code(self) -> int:
        return EXIT_INCONSISTENT if self.counts()[INCONSISTENT] else EXIT_OK

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "scope": SCOPE_NOTE,
            "ambient": self.ambient,
            "sources": [
                {**{k: v for k, v in s.items() if k != "rows"}, "rows": [r.to_json() for r in s["rows"]]}
                for s in self.sources
            ],
            "rejected": self.rejected,
            "counts": self.counts(),
        }

    def csv_rows(self) -> list[dict]:
        out = []
        for s in self.sources:
            for r in s["rows"]:
                d = r.to_json()
                d.pop("handle")
                d["recurrence"] = json.dumps(d["recurrence"], sort_keys=True)
                d["source"] = s["name"]
                out.append(d)
        return out


class _Ambient:
    """Data about ``G`` shared by every atom: limit set and fixed-point candidates."""

    def __init__(self, model: FreeGroupModel, config: ExperimentConfig):
        self.model = model
        self.gens = model.generators()
        at = action_type(self.gens, model, 2)
        if at.kind != GENERAL_TYPE:
            raise PreconditionFail("ambient action is not of general type", {"verdict": at.kind})
        self.action = at
        full = CosetTableHandle(tuple((0,) for _ in range(model.rank)))
        self.limit = limit_set_approx(full, model, config.depth, config.radius).as_set()
        cands = list(model.sentinels())
        for e in model.ball(self.gens, config.search_radius):
            c = classify(e.element, model)
            if c.kind == LOXODROMIC:
                cands.extend(c.fixed)
        self.candidates = list(dict.fromkeys(cands))
        letters = W.letters(model.rank)
        self.grid = [(x,) for x in letters] + [(1, 2)]
        self.F = W.ball(model.rank, config.recurrence_radius)
        self.radical = trivial_handle(model)
        self.truncation = {
            "depth": config.depth,
            "radius": config.radius,
            "fixed_point_search_radius": config.search_radius,
            "recurrence_radius": config.recurrence_radius,
            "recurrence_n_min": config.n_max,
        }

    def to_json(self) -> dict:
        return {
            "truncation": self.truncation,
            "action_type": self.action.kind,
            "independent_pair": [W.format_word(g) for g in self.action.evidence["independent_pair"]],
            "limit_set_size": len(self.limit),
            "fixed_point_candidates": len(self.candidates),
        }


def _common_fixed_point(H, amb: _Ambient):
    gens = H.schreier_generators() if hasattr(H, "schreier_generators") else H.generators()
    for b in amb.candidates:
        if all(amb.model.boundary_action(g, b) == b for g in gens):
            return b
    return None


def classify_atom(H, weight, atom_id: str, amb: _Ambient, config: ExperimentConfig) -> AtomRow:
    model = amb.model
    try:
        N = max(config.n_max, int(H.index()))
    except Exception:
        N = config.n_max
    rec = {}
    for g in amb.grid:
        rec[W.format_word(g)] = str(recurrence_check(H, g, amb.F, N))
    recurrent = all(v.startswith("Verified") for v in rec.values())
    lim = limit_set_approx(H, model, config.depth, config.radius).as_set()
    same_limit = lim == amb.limit
    fixed = _common_fixed_point(H, amb)
    gens = H.generators()
    in_rad = all(amb.radical.contains(g) for g in gens)
    if same_limit and fixed is None:
        verdict = DENSE
    elif in_rad:
        verdict = IN_RADICAL
    else:
        verdict = INCONSISTENT
    return AtomRow(
        atom_id,
        weight,
        H.to_json(),
        rec,
        recurrent,
        same_limit,
        len(lim),
        None if fixed is None else model.format_boundary(fixed),
        in_rad,
        verdict,
    )


def dichotomy_actions(config: ExperimentConfig) -> list[tuple[str, FiniteAction]]:
    rng = random.Random(config.seed)
    out = [("three_point", action_from_cycles(3, [(1, 2, 3)], [(1, 2)]))]
    for i in range(config.actions):
        m = rng.randint(1, config.max_points)
        out.append((f"random_{i:03d}", random_transitive_action(rng, m, config.rank)))
    return out


def run_dichotomy(config: ExperimentConfig) -> DichotomyReport:
    """Classify every atom of every stabilizer IRS as dense, radical or inconsistent."""
    if config.model != "free":
        raise PreconditionFail("the dichotomy harness runs on the free group model", {"model": config.model})
    model = FreeGroupModel(config.rank)
    amb = _Ambient(model, config)
    probes = W.ball(config.rank, config.probe_radius)
    sources = []
    for name, act in dichotomy_actions(config):
        erg = verify_ergodicity(act)
        if not erg.ergodic:
            raise PreconditionFail("source action is not ergodic", {"action": name})
        mu = stabilizer_irs(act, probe_radius=config.probe_radius)
        try:
            verify_invariance(mu, amb.gens, probes)
        except NotInvariant as e:
            raise PreconditionFail("stabilizer measure is not invariant", {"action": name, "generator": str(e.generator)})
        rows = [
            classify_atom(h, w, f"{name}.{j}", amb, config) for j, (h, w) in enumerate(mu.atoms)
        ]
        sources.append(
            {
                "name": name,
                "action": act.to_json(),
                "ergodic": True,
                "invariant": True,
                "unseparated_by_probes": [list(p) for p in mu.unseparated],
                "rows": rows,
            }
        )
    # hand-built point masses
    triv = dirac(trivial_handle(model), "point mass at the trivial subgroup")
    verify_invariance(triv, amb.gens, probes)
    sources.append(
        {
            "name": "point_mass_trivial",
            "action": None,
            "ergodic": True,
            "invariant": True,
            "unseparated_by_probes": [],
            "rows": [classify_atom(triv.atoms[0][0], Fraction(1), "point_mass_trivial.0", amb, config)],
        }
    )
    rejected = []
    cyc = dirac(CyclicHandle((1,), model), "point mass at <a>")
    try:
        verify_invariance(cyc, amb.gens, [(1,), (2, 1, -2)])
    except NotInvariant as e:
        ref = recurrence_check(cyc.atoms[0][0], (2,), [(1,)], 50)
        rejected.append(
            {
                "name": "point_mass_cyclic_a",
                "reason": "not invariant",
                "generator": W.format_word(e.generator),
                "trace_class": [W.format_word(w) for w in e.trace],
                "recurrence_b": str(ref),
            }
        )
    return DichotomyReport(config.to_json(), amb.to_json(), sources, rejected)


# -- lemma suite ---------------------------------------------------------


def random_loxodromic(model, rng, radius):
    while True:
        g = model.random_element(rng, radius)
        try:
            if classify(g, model).kind == LOXODROMIC:
                return g
        except Inconclusive:
            continue


def moves_ends(model, f, g) -> bool:
    plus, minus = fixed_points(g, model)
    return model.boundary_action(f, plus) != plus and model.boundary_action(f, minus) != minus


def _displacement_candidates(model, rng):
    """Witness proposals: commutator-shaped ones that tend to pass, and plain random ones."""
    while True:
        if rng.random() < 0.7 and not isinstance(model, LamplighterModel):
            f = model.random_element(rng, 3)
            if model.acts_trivially(f):
                continue
            g = random_loxodromic(model, rng, 4)
            n = rng.randint(1, 8)
            gn = model.power(g, n)
            x = model.basepoint
            C = model.distance(model.apply(f, x), x)
            if C == 0:
                C = 1
            b = model.product(gn, model.inverse(f), model.inverse(gn))
            yield DisplacementWitness(f, b, x, model.apply(gn, x), C)
        else:
            a = model.random_element(rng, 4)
            b = model.random_element(rng, 6)
            x = model.random_point(rng, 3)
            y = model.random_point(rng, 6)
            C = max(model.distance(x, model.apply(a, x)), model.distance(y, model.apply(b, y)))
            if C == 0:
                continue
            yield DisplacementWitness(a, b, x, y, C)


def displacement_sweep(model, rng, wanted: int, max_tries: int) -> dict:
    counts = {"passed_premises": 0, "confirmed": 0, "vacuous": 0, "undecided": 0, "counterexamples": 0}
    examples = []
    tries = 0
    for w in _displacement_candidates(model, rng):
        if counts["passed_premises"] >= wanted or tries >= max_tries:
            break
        tries += 1
        v = check_displacement_criterion(w, model)
        if v.status == "vacuous":
            counts["vacuous"] += 1
            continue
        counts["passed_premises"] += 1
        if v.status == COUNTEREXAMPLE:
            counts["counterexamples"] += 1
            examples.append(fmt({"a": w.a, "b": w.b, "x": w.x, "y": w.y}, model))
        elif v.status == "confirmed":
            counts["confirmed"] += 1
        else:
            counts["undecided"] += 1
    counts["tries"] = tries
    counts["counterexample_witnesses"] = examples
    return counts


def _doubling_sweep(model, rng, count: int, n_max: int) -> dict:
    held = 0
    worst = None
    done = 0
    while done < count:
        g = random_loxodromic(model, rng, 4)
        f = model.random_element(rng, 3)
        try:
            est = doubling_estimate(g, f, model.basepoint, n_max, model)
        except FixesAttractor:
            continue
        done += 1
        held += est.holds
        slack = min(est.D - d for d in est.deviations)
        worst = slack if worst is None else min(worst, slack)
    return {"instances": done, "held": held, "min_slack": fmt(worst)}


def _commutator_sweep(model, rng, count: int, n_max: int, extra: int) -> dict:
    ok = 0
    n0s = []
    failures = []
    done = 0
    while done < count:
        g = random_loxodromic(model, rng, 3)
        f = model.random_element(rng, 3)
        if not moves_ends(model, f, g):
            continue
        done += 1
        try:
            n0, cert = loxodromic_commutator(f, g, model, n_max)
        except NotFoundWithin:
            failures.append(fmt({"f": f, "g": g}, model))
            continue
        n0s.append(n0)
        top = n_max if extra is None else n0 + extra
        comms = [classify(model.commutator(f, model.power(g, n)), model).kind for n in range(n0, top + 1)]
        if all(k == LOXODROMIC for k in comms):
            ok += 1
        else:
            failures.append(fmt({"f": f, "g": g, "n0": n0}, model))
    return {
        "instances": done,
        "certified": ok,
        "max_n0": max(n0s) if n0s else None,
        "failures": failures,
    }


def _convergence_sweep(model, rng, count: int, n_max: int, burn_in: int) -> dict:
    ok = 0
    done = 0
    while done < count:
        g = random_loxodromic(model, rng, 3)
        h = model.random_element(rng, 3)
        try:
            r = conjugate_convergence(h, g, model.basepoint, n_max, model, burn_in=burn_in)
        except FixesAttractor:
            continue
        done += 1
        ok += r.ok
    return {"instances": done, "verified": ok, "n_max": n_max, "burn_in": burn_in}


def run_lemma_suite(config: ExperimentConfig) -> dict:
    """Seeded sweeps of the lemma verifiers over the free group and SL(2, Z)."""
    rng = random.Random(config.seed)
    free, plane, lamp = FreeGroupModel(config.rank), HalfPlaneModel(), LamplighterModel()
    rep: dict = {"config": config.to_json()}
    counts = (
        config.displacement_instances,
        config.doubling_instances,
        config.commutator_instances,
        config.matrix_commutator_instances,
        config.convergence_instances,
    )
    if not any(counts):
        rep["exit_code"] = EXIT_OK
        return rep
    k = config.displacement_instances
    rep["displacement"] = {
        "free": displacement_sweep(free, rng, k, 20 * k + 10),
        "halfplane": displacement_sweep(plane, rng, k, 20 * k + 10),
        # the lamplighter action fixes an end, so passing witnesses are rare; reported only
        "lamplighter_informational": displacement_sweep(lamp, rng, k, 4 * k),
    }
    a, b = (1,), (2,)
    exact = doubling_estimate(a, b, (), 40, free)
    rep["doubling"] = {
        "free_a_b": {
            "D": fmt(exact.D),
            "C0": fmt(exact.C0),
            "distances_2n_plus_1": all(
                free.distance(W.multiply(b, W.power(a, n)), W.power(a, n)) == 2 * n + 1
                for n in range(1, 41)
            ),
        },
        "halfplane": _doubling_sweep(plane, rng, config.doubling_instances, 20),
    }
    rep["commutator"] = {
        "free": _commutator_sweep(free, rng, config.commutator_instances, 30, 10),
        "halfplane": _commutator_sweep(plane, rng, config.matrix_commutator_instances, 30, None),
    }
    ab = conjugate_convergence(b, a, (), 30, free)
    rep["conjugate_convergence"] = {
        "free_b_a": {
            "products_equal_n": all(p == n for n, p in enumerate(ab.products)),
            "limit": free.format_boundary(ab.limit) if ab.limit is not None else None,
            "ok": ab.ok,
        },
        # random h lags the conjugate sequence by a bounded amount, so the
        # tail starts later than for the exact (b, a) instance
        "free": _convergence_sweep(free, rng, config.convergence_instances, 40, 20),
        "halfplane": _convergence_sweep(plane, rng, config.convergence_instances, 15, 10),
    }
    rep["exit_code"] = lemma_exit_code(rep)
    return rep


def lemma_exit_code(rep: dict) -> int:
    bad = 0
    for key in ("free", "halfplane"):
        bad += rep["displacement"][key]["counterexamples"]
        c = rep["commutator"][key]
        bad += len(c["failures"])
        bad += rep["conjugate_convergence"][key]["instances"] - rep["conjugate_convergence"][key]["verified"]
    d = rep["doubling"]["halfplane"]
    bad += d["instances"] - d["held"]
    bad += not rep["doubling"]["free_a_b"]["distances_2n_plus_1"]
    bad += not rep["conjugate_convergence"]["free_b_a"]["ok"]
    return EXIT_LEMMA_FAILURE if bad else EXIT_OK


# -- radical suite -------------------------------------------------------


def run_radical_suite(config: ExperimentConfig) -> dict:
    free, plane = FreeGroupModel(config.rank), HalfPlaneModel()
    rep: dict = {"config": config.to_json()}
    ok = True
    v = radical_verify(standard_candidates(free)["trivial"], free.generators(), free, radius=4)
    rep["free_trivial"] = v.to_json(free)
    ok &= v.confirmed
    v = radical_verify(
        standard_candidates(plane)["plus_minus_identity"],
        plane.generators(),
        plane,
        samples=config.radical_samples,
        radius=4,
    )
    rep["halfplane_plus_minus_identity"] = v.to_json(plane)
    ok &= v.confirmed
    v = radical_verify(negative_control(free), free.generators(), free)
    rep["negative_control_cyclic_a"] = v.to_json(free)
    ok &= not v.fixes_limit_set
    fix = normal_elliptic_implies_radical(
        standard_candidates(plane)["plus_minus_identity"], plane.generators(), plane
    )
    rep["normal_elliptic_plus_minus_identity"] = fix.to_json(plane)
    ok &= fix.fixes_limit_set
    controls = {}
    for name, N, model in (
        ("index_two_kernel", CosetTableHandle(((1, 0), (1, 0))), free),
        ("rotation_subgroup", CyclicHandle(SL2(0, -1, 1, 0), plane), plane),
    ):
        try:
            normal_elliptic_implies_radical(N, model.generators(), model)
            controls[name] = "passed"
        except (NotElliptic, NotNormal) as e:
            controls[name] = f"{type(e).__name__}: {e}"
    rep["precondition_controls"] = controls
    try:
        radical_verify(FiniteSetHandle(((),), free), [(1,)], free)
        rep["lineal_gate"] = "no error"
        ok = False
    except HypothesisFail as e:
        rep["lineal_gate"] = f"HypothesisFail: {e}"
    # on its own axis <a> fixes both limit points although it is loxodromic
    plus, minus = fixed_points((1,), free)
    rep["lineal_radical_not_elliptic"] = {
        "limit_points": [str(plus), str(minus)],
        "a_fixes_both": free.boundary_action((1,), plus) == plus
        and free.boundary_action((1,), minus) == minus,
        "a_class": classify((1,), free).kind,
    }
    rep["lamplighter_chain"] = lamplighter_no_maximal(config.chain_length).to_json()
    rep["exit_code"] = EXIT_OK if ok else EXIT_LEMMA_FAILURE
    return rep


def model_for(config: ExperimentConfig):
    return make_model(config.model, config.rank)


__all__ = [
    "DENSE",
    "INCONSISTENT",
    "IN_RADICAL",
    "DichotomyReport",
    "ExperimentConfig",
    "IRSMeasure",
    "run_dichotomy",
    "run_lemma_suite",
    "run_radical_suite",
]
