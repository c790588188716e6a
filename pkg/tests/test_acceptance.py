"""Acceptance checks, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line (visible with ``-s``
or in the captured summary) before asserting.
"""

import random
import subprocess
import sys
import time

from irsgeom import words as W
from irsgeom.harness import (
    DENSE,
    INCONSISTENT,
    IN_RADICAL,
    ExperimentConfig,
    dichotomy_actions,
    displacement_sweep,
    moves_ends,
    random_loxodromic,
    run_dichotomy,
)
from irsgeom.hypcore import four_point_check, random_quadruples
from irsgeom.irs import action_from_cycles, stabilizer, stabilizer_irs, verify_invariance
from irsgeom.isometry import LOXODROMIC, classify, fixed_points
from irsgeom.lemmas import conjugate_convergence, doubling_estimate, loxodromic_commutator
from irsgeom.models.halfplane import SL2
from irsgeom.radical import lamplighter_no_maximal, negative_control, radical_verify, sample_limit_points, standard_candidates
from irsgeom.subgroups import CosetTableHandle, CyclicHandle, conjugate_handle, recurrence_check, same_subgroup

GENS = [(1,), (2,)]


def report(capsys, number, title, ok, detail):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {detail}")


def test_four_point_condition_on_the_tree(capsys, free):
    start = time.perf_counter()
    quads = random_quadruples(free, 10_000, 10, seed=2024)
    est = four_point_check(quads, 0, free)
    elapsed = time.perf_counter() - start
    ok = est.violations == 0 and est.delta_hat == 0 and elapsed < 5
    report(capsys, 1, "four-point condition", ok,
           f"{est.samples} quadruples, {est.violations} violations, {elapsed:.2f}s")
    assert ok


def test_displacement_criterion_soundness(capsys, free, plane, lamp):
    start = time.perf_counter()
    rng = random.Random(42)
    counts = {name: displacement_sweep(m, rng, 500, 10_010) for name, m in (("free", free), ("halfplane", plane))}
    # no lamplighter witness can pass the premises (see the lamplighter min-set test)
    lamp_counts = displacement_sweep(lamp, rng, 500, 2000)
    elapsed = time.perf_counter() - start
    ok = (
        all(c["passed_premises"] >= 500 and c["confirmed"] == c["passed_premises"] for c in counts.values())
        and lamp_counts["counterexamples"] == 0
        and elapsed < 30
    )
    detail = ", ".join(f"{k} {c['confirmed']}/{c['passed_premises']} loxodromic" for k, c in counts.items())
    report(capsys, 2, "displacement criterion", ok,
           f"{detail}; lamplighter {lamp_counts['passed_premises']} passing of {lamp_counts['tries']}; {elapsed:.1f}s")
    assert ok


def test_doubling_estimate(capsys, free, plane):
    a, b = (1,), (2,)
    exact = all(
        free.distance(W.multiply(b, W.power(a, n)), W.power(a, n)) == 2 * n + 1 for n in range(1, 41)
    )
    est = doubling_estimate(a, b, (), 40, free)
    rng = random.Random(42)
    held = done = 0
    while done < 100:
        g = random_loxodromic(plane, rng, 4)
        f = plane.random_element(rng, 3)
        plus = fixed_points(g, plane)[0]
        if plane.boundary_action(f, plus) == plus:
            continue
        e = doubling_estimate(g, f, plane.basepoint, 20, plane)
        done += 1
        held += all(dev <= e.D + plane.tolerance for dev in e.deviations)
    ok = exact and est.D == 1 and held == 100
    report(capsys, 3, "doubling estimate", ok, f"tree D = {est.D}, half-plane {held}/100 within tolerance")
    assert ok


def test_loxodromic_commutators(capsys, free, plane):
    rng = random.Random(42)
    tree_ok, n0s = 0, []
    while len(n0s) < 200:
        g = random_loxodromic(free, rng, 3)
        f = free.random_element(rng, 3)
        if not moves_ends(free, f, g):
            continue
        n0, _ = loxodromic_commutator(f, g, free, 30)
        n0s.append(n0)
        tree_ok += n0 <= 20 and all(
            classify(free.commutator(f, W.power(g, n)), free).kind == LOXODROMIC for n in range(n0, n0 + 11)
        )
    matrix_ok = done = 0
    while done < 50:
        g = random_loxodromic(plane, rng, 3)
        f = plane.random_element(rng, 3)
        if not moves_ends(plane, f, g):
            continue
        done += 1
        n0, _ = loxodromic_commutator(f, g, plane, 30)
        matrix_ok += all(abs(plane.commutator(f, plane.power(g, n)).trace) > 2 for n in range(n0, 31))
    ok = tree_ok == 200 and matrix_ok == 50
    report(capsys, 4, "loxodromic commutators", ok,
           f"tree {tree_ok}/200 (max n0 {max(n0s)}), matrices {matrix_ok}/50")
    assert ok


def test_conjugate_convergence(capsys, free):
    a, b = (1,), (2,)
    r = conjugate_convergence(b, a, (), 30, free)
    exact = all(p == n for n, p in enumerate(r.products))
    ok = exact and len(r.products) == 31 and r.limit == fixed_points(a, free)[1]
    report(capsys, 5, "conjugate convergence", ok,
           f"products equal n for n <= 30: {exact}, limit {free.format_boundary(r.limit) if r.limit else None}")
    assert ok


def test_recurrence_checker(capsys, free):
    start = time.perf_counter()
    kernel = CosetTableHandle(((1, 0), (1, 0)))
    gs = W.ball(2, 3)[1:21]
    Fs = [W.ball(2, k) for k in range(1, 6)]
    grid = [str(recurrence_check(kernel, g, F, 10)) for g in gs for F in Fs]
    stab = stabilizer(action_from_cycles(3, [(1, 2, 3)], [(1, 2)]), 0)
    v2 = recurrence_check(stab, (1,), W.ball(2, 2), 10)
    v3 = recurrence_check(CyclicHandle((1,), free), (2,), [(1,)], 1000)
    elapsed = time.perf_counter() - start
    ok = (
        len(grid) == 100
        and all(s == "Verified(1)" for s in grid)
        and v2.status == "Verified" and v2.n <= 3
        and str(v3) == "RefutedUpTo(1000)"
        and elapsed < 10
    )
    report(capsys, 6, "recurrence checker", ok,
           f"kernel grid {grid.count('Verified(1)')}/100 Verified(1), stabilizer {v2}, <a> {v3}, {elapsed:.2f}s")
    assert ok


def test_irs_invariance_and_conjugation_identity(capsys):
    actions = [a for name, a in dichotomy_actions(ExperimentConfig(seed=42)) if name.startswith("random")]
    probes = W.ball(2, 3)
    conj = W.ball(2, 2)
    invariant = identity = 0
    for act in actions:
        mu = stabilizer_irs(act)
        invariant += verify_invariance(mu, GENS, probes).invariant
        identity += all(
            same_subgroup(conjugate_handle(stabilizer(act, x), g), stabilizer(act, act.apply_word(g, x)))
            and all(
                conjugate_handle(stabilizer(act, x), g).contains(w)
                == stabilizer(act, act.apply_word(g, x)).contains(w)
                for w in probes
            )
            for x in range(act.m)
            for g in conj
        )
    ok = len(actions) == 50 and max(a.m for a in actions) <= 12 and invariant == 50 and identity == 50
    report(capsys, 7, "IRS invariance", ok,
           f"{invariant}/{len(actions)} invariant, conjugation identity on {identity}/{len(actions)}")
    assert ok


def test_dichotomy_harness(capsys):
    start = time.perf_counter()
    rep = run_dichotomy(ExperimentConfig(seed=42, actions=50, depth=3, radius=14))
    elapsed = time.perf_counter() - start
    by_source = {s["name"]: s["rows"] for s in rep.sources}
    dirac_rows = by_source.pop("point_mass_trivial")
    rows = [r for rs in by_source.values() for r in rs]
    ok = (
        len(by_source) == 51
        and all(r.classification == DENSE for r in rows)
        and rep.counts()[INCONSISTENT] == 0
        and [r.classification for r in dirac_rows] == [IN_RADICAL]
        and elapsed < 60
    )
    report(capsys, 8, "dichotomy harness", ok,
           f"{len(rows)} stabilizer atoms dense, {rep.counts()[INCONSISTENT]} inconsistent, "
           f"trivial point mass {dirac_rows[0].classification}, {elapsed:.1f}s")
    assert ok


def test_elliptic_radical(capsys, free, plane):
    v_free = radical_verify(standard_candidates(free)["trivial"], free.generators(), free)
    v_plane = radical_verify(standard_candidates(plane)["plus_minus_identity"], plane.generators(), plane,
                             samples=100)
    minus_i = SL2(-1, 0, 0, -1)
    pts = sample_limit_points(plane.generators(), plane, 100, 4)
    fixed = sum(plane.boundary_action(minus_i, p) == p for p, _ in pts)
    v_neg = radical_verify(negative_control(free), free.generators(), free)
    ok = v_free.confirmed and v_plane.confirmed and len(pts) >= 100 and fixed == len(pts) and not v_neg.fixes_limit_set
    report(capsys, 9, "elliptic radical", ok,
           f"F2 trivial {v_free.confirmed}, half-plane +-I {v_plane.confirmed} ({fixed} points fixed), "
           f"<a> fixes limit set {v_neg.fixes_limit_set}")
    assert ok


def test_lamplighter_chain(capsys, lamp):
    start = time.perf_counter()
    ch = lamplighter_no_maximal(16, lamp)
    elapsed = time.perf_counter() - start
    cert = ch.parabolic_certificate
    ok = (
        ch.diameters == [2 * k for k in range(1, 17)]
        and len(ch.strictness_witnesses) == 15
        and all(w["in_next"] and not w["in_this"] for w in ch.strictness_witnesses)
        and all(ch.normal)
        and cert["verdict"] == "Parabolic"
        and cert["orbit_diameter"] >= 32
        and cert["loxodromics"] == 0
        and elapsed < 10
    )
    report(capsys, 10, "lamplighter chain", ok,
           f"diameters 2..{ch.diameters[-1]}, {cert['verdict']} with orbit diameter {cert['orbit_diameter']}, "
           f"{cert['loxodromics']} loxodromics, {elapsed:.2f}s")
    assert ok


def test_cli_determinism(capsys):
    cmd = [sys.executable, "-m", "irsgeom", "dichotomy", "--seed", "42"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    ok = first == second and len(first) > 0
    report(capsys, 11, "determinism", ok, f"two runs, {len(first)} bytes each, identical: {first == second}")
    assert ok
