"""The elliptic radical: elements fixing the whole limit set.

For actions of general type it is the unique maximal normal elliptic
subgroup.  For the lamplighter group acting on its Bass-Serre tree, the
lamp subgroup is parabolic and has an unbounded increasing chain of
normal elliptic subgroups, so no maximal one exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from . import words as W
from .errors import HypothesisFail, Inconclusive, NotConvergent, NotElliptic, NotNormal
from .hypcore import same_boundary_point
from .isometry import (
    ELLIPTIC,
    GENERAL_TYPE,
    LOXODROMIC,
    PARABOLIC,
    action_type,
    classify,
    find_loxodromic_with_endpoints,
)
from .models.free import FreeGroupModel
from .models.lamplighter import LamplighterModel
from .report import fmt
from .subgroups import CyclicHandle, FiniteSetHandle, LampWindowHandle, SubgroupHandle


# -- sampling helpers ----------------------------------------------------


def sample_limit_points(gens: Sequence, model, samples: int, radius: int) -> list[tuple]:
    """Pairs ``(point, loxodromic)`` with ``point`` a fixed end of ``loxodromic``.

    Takes the fixed ends of every loxodromic in the word ball, enlarging
    the radius until ``samples`` distinct points are found; free groups
    also get the outputs of the endpoint constructor on depth-2 cylinders.
    """
    found: dict = {}
    r = radius
    while True:
        for e in model.ball(gens, r):
            try:
                c = classify(e.element, model)
            except Inconclusive:
                continue
            if c.kind != LOXODROMIC:
                continue
            plus, minus = c.fixed
            found.setdefault(plus, e.element)
            found.setdefault(minus, model.inverse(e.element))
        if isinstance(model, FreeGroupModel) and r == radius:
            cyl = W.reduced_words(model.rank, 2)
            cyl = list(cyl)
            for u in cyl:
                for v in cyl:
                    if u[0] != v[0] or u[1] != v[1]:
                        g = find_loxodromic_with_endpoints(u, v, model)
                        c = classify(g, model)
                        found.setdefault(c.fixed[0], g)
        if len(found) >= samples or r >= radius + 4:
            break
        r += 1
    return list(found.items())


def _probe_elements(H: SubgroupHandle, model, radius: int = 3) -> list:
    if isinstance(H, FiniteSetHandle):
        return list(H.elements)
    gens = H.generators()
    if not gens:
        return [model.identity]
    return [e.element for e in model.ball(gens, radius)]


def _orbit_diameters(H: SubgroupHandle, model, radius: int) -> tuple:
    """Orbit diameters of the basepoint under ``H``-balls of radius ``radius - 1`` and ``radius``."""
    if isinstance(H, FiniteSetHandle):
        d = model.diameter(model.orbit(H.elements))
        return d, d
    gens = H.generators()
    if not gens:
        return 0, 0
    ball = model.ball(gens, radius)
    inner = model.orbit(e.element for e in ball if e.length < radius)
    outer = model.orbit(e.element for e in ball)
    return model.diameter(inner), model.diameter(outer)


def _normality_failures(H: SubgroupHandle, conjugators: Sequence, model) -> list:
    bad = []
    for c in H.generators():
        for h in conjugators:
            x = model.product(h, c, model.inverse(h))
            if not H.contains(x):
                bad.append((h, c))
                break
        if bad:
            break
    return bad


# -- radical verification ------------------------------------------------


@dataclass
class RadicalVerdict:
    candidate: Any
    fixes_limit_set: bool
    normal_check: bool
    elliptic_check: bool
    orbit_diameter: Any
    maximality_probe: list = field(default_factory=list)
    limit_points: int = 0
    moved: list = field(default_factory=list)

    @property
    def confirmed(self) -> bool:
        return (
            self.fixes_limit_set
            and self.normal_check
            and self.elliptic_check
            and all(p["contained"] for p in self.maximality_probe if p["kind"] == "supplied")
        )

    def to_json(self, model=None) -> dict:
        return {
            "candidate": self.candidate.to_json(),
            "fixes_limit_set": self.fixes_limit_set,
            "normal_check": self.normal_check,
            "elliptic_check": self.elliptic_check,
            "orbit_diameter": fmt(self.orbit_diameter),
            "maximality_probe": fmt(self.maximality_probe, model),
            "limit_points": self.limit_points,
            "moved": fmt(self.moved[:5], model),
            "confirmed": self.confirmed,
        }


def radical_verify(
    candidate: SubgroupHandle,
    gens: Sequence,
    model,
    samples: int = 20,
    radius: int = 4,
    supplied: Sequence[SubgroupHandle] = (),
) -> RadicalVerdict:
    """Check that ``candidate`` behaves as the elliptic radical of ``<gens>``."""
    at = action_type(gens, model, min(radius, 3))
    if at.kind != GENERAL_TYPE:
        raise HypothesisFail(f"action is {at.kind}, not of general type")
    points = sample_limit_points(gens, model, samples, radius)
    probes = _probe_elements(candidate, model)
    moved = []
    for p, _ in points:
        for c in probes:
            if model.boundary_action(c, p) != p:
                moved.append((c, p))
                break
    conj = [e.element for e in model.ball(gens, min(radius, 3))]
    normal = not _normality_failures(candidate, conj, model)
    d_in, d_out = _orbit_diameters(candidate, model, 3)
    elliptic = isinstance(candidate, FiniteSetHandle) or not d_out > d_in + model.tolerance
    if not isinstance(candidate, FiniteSetHandle):
        try:
            elliptic = elliptic and all(
                classify(g, model).kind == ELLIPTIC for g in candidate.generators()
            )
        except Inconclusive:
            elliptic = False
    maxi = []
    for N in supplied:
        contained = all(candidate.contains(x) for x in _probe_elements(N, model))
        maxi.append({"kind": "supplied", "handle": N.to_json(), "contained": contained})
    maxi.extend(_larger_elliptic_probe(candidate, conj, model))
    return RadicalVerdict(
        candidate, not moved, normal, elliptic, d_out, maxi, len(points), moved
    )


def _larger_elliptic_probe(candidate: SubgroupHandle, ball: Sequence, model) -> list:
    """For elliptic ball elements outside the candidate, exhibit a conjugate product that is not elliptic.

    Such an element has a non-elliptic normal closure, so it lies in no
    normal elliptic subgroup.
    """
    out = []
    for e in ball:
        if candidate.contains(e):
            continue
        try:
            if classify(e, model).kind != ELLIPTIC:
                continue
        except Inconclusive:
            continue
        witness = None
        for h in ball:
            x = model.multiply(e, model.product(h, e, model.inverse(h)))
            try:
                if classify(x, model).kind != ELLIPTIC:
                    witness = h
                    break
            except Inconclusive:
                continue
        out.append({"kind": "elliptic_outside", "element": e, "escape_conjugator": witness,
                    "contained": witness is None})
    return out


# -- normal elliptic subgroups fix the limit set --------------------------


@dataclass
class FixingVerdict:
    fixes_limit_set: bool
    orbit_diameter: Any
    checked_points: int
    failures: list = field(default_factory=list)

    def to_json(self, model=None) -> dict:
        return {
            "fixes_limit_set": self.fixes_limit_set,
            "orbit_diameter": fmt(self.orbit_diameter),
            "checked_points": self.checked_points,
            "failures": fmt(self.failures, model),
        }


def normal_elliptic_implies_radical(
    N: SubgroupHandle,
    gens: Sequence,
    model,
    samples: int = 20,
    radius: int = 3,
    steps: int = 25,
) -> FixingVerdict:
    """Check on approach sequences ``g^i s`` that a normal elliptic ``N`` fixes limit points.

    With ``D`` the orbit diameter of ``N``, ``d(a g s, g s) = d(g^-1 a g s, s) <= D``
    for ``a`` in ``N``, so ``(a g^i s)`` and ``(g^i s)`` have the same limit.
    """
    d_in, d_out = _orbit_diameters(N, model, 3)
    if d_out > d_in + model.tolerance:
        raise NotElliptic(f"orbit diameter still grows ({fmt(d_in)} -> {fmt(d_out)})")
    conj = [e.element for e in model.ball(gens, radius)]
    bad = _normality_failures(N, conj, model)
    if bad:
        h, c = bad[0]
        raise NotNormal(f"{model.format_element(h)} conjugates {model.format_element(c)} outside")
    D = d_out
    probes = _probe_elements(N, model)
    s = model.basepoint
    points = sample_limit_points(gens, model, samples, radius)
    failures = []
    for p, g in points:
        seq = [s]
        for _ in range(steps):
            seq.append(model.apply(g, seq[-1]))
        for a in probes:
            moved = [model.apply(a, x) for x in seq]
            try:
                same = same_boundary_point(moved, seq, s, model, distance_bound=D + model.tolerance)
            except NotConvergent:
                same = False
            if not same or model.boundary_action(a, p) != p:
                failures.append((a, p))
    return FixingVerdict(not failures, D, len(points), failures)


# -- the lamplighter chain -----------------------------------------------


@dataclass
class EllipticChain:
    handles: list
    diameters: list
    diameter_witnesses: list
    strictness_witnesses: list
    normal: list
    parabolic_certificate: dict

    def to_json(self) -> dict:
        return {
            "handles": [h.to_json() for h in self.handles],
            "diameters": self.diameters,
            "diameter_witnesses": self.diameter_witnesses,
            "strictness_witnesses": self.strictness_witnesses,
            "normal": self.normal,
            "parabolic_certificate": self.parabolic_certificate,
        }


def lamp_window_orbit_diameter(H: LampWindowHandle, model: LamplighterModel) -> tuple[int, str]:
    """Exact orbit diameter of the root under ``<a_lo..a_hi>`` with a witness.

    Orbit points sit at level 0 with patterns inside ``[min(lo, 0), -1]``,
    so two of them agree at every level ``<= lo`` and are at distance at
    most ``2 max(0, -lo)``; the root and ``a_lo`` applied to it realize it.
    """
    v0 = model.basepoint
    w = model.apply(model.lamp(H.lo), v0)
    lower = model.distance(v0, w)
    upper = 2 * max(0, -H.lo)
    if lower != upper:
        raise AssertionError("orbit diameter witness does not attain the bound")
    return lower, f"d({v0}, {w}) = {lower}"


def lamplighter_no_maximal(K: int, model: LamplighterModel | None = None) -> EllipticChain:
    """Strict chain ``N_1 < ... < N_K`` of normal elliptic subgroups ``N_k = <a_-k, ..., a_k>``.

    All live in the lamp subgroup ``G = <a_i : i in Z>``, whose action is
    certified parabolic at truncation ``K``: no loxodromic in the radius-3
    ball of ``N_K``'s generators and an orbit diameter of at least ``2K``.
    """
    if K < 1:
        raise ValueError("chain length must be at least 1")
    model = model or LamplighterModel()
    handles, diams, dwit, swit, normal = [], [], [], [], []
    outside = [model.lamp(i) for i in range(-K - 1, K + 2)]
    for k in range(1, K + 1):
        H = LampWindowHandle(-k, k, model)
        handles.append(H)
        d, wit = lamp_window_orbit_diameter(H, model)
        diams.append(d)
        dwit.append(wit)
        if k < K:
            nxt = model.lamp(-(k + 1))
            swit.append({"element": f"a_{-(k + 1)}", "in_next": LampWindowHandle(-k - 1, k + 1).contains(nxt),
                         "in_this": H.contains(nxt)})
        normal.append(
            all(
                model.is_identity(model.commutator(x, y))
                for x in H.generators()
                for y in outside
            )
        )
    at = action_type([model.lamp(i) for i in range(-K, K + 1)], model, 3, threshold=2 * K)
    cert = {
        "verdict": at.kind,
        "radius": 3,
        "orbit_diameter": at.evidence.get("orbit_diameter"),
        "loxodromics": at.evidence.get("loxodromics"),
        "ball_size": at.evidence.get("ball_size"),
        "truncation": K,
    }
    if at.kind != PARABOLIC:
        raise AssertionError(f"expected a parabolic certificate, got {at.kind}")
    return EllipticChain(handles, diams, dwit, swit, normal, cert)


def standard_candidates(model) -> dict:
    """Radical candidates used by the suite: the kernel of the action."""
    if isinstance(model, FreeGroupModel):
        return {"trivial": FiniteSetHandle((model.identity,), model)}
    from .models.halfplane import SL2

    return {"plus_minus_identity": FiniteSetHandle((SL2(1, 0, 0, 1), SL2(-1, 0, 0, -1)), model)}


def negative_control(model: FreeGroupModel) -> SubgroupHandle:
    return CyclicHandle((1,), model)
