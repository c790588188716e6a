"""Executable checks of the quantitative loxodromic lemmas.

Each check separates the premises from the conclusion: failing premises
is a vacuous outcome, and only a confirmed premise with a failed
conclusion counts against a lemma.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

from .errors import FixesAttractor, HypothesisFail, Inconclusive, NotConvergent, NotFoundWithin
from .hypcore import DEFAULT_BURN_IN, DEFAULT_THRESHOLD, gromov_product, same_boundary_point
from .isometry import LOXODROMIC, classify, fixed_points, ray_sequence
from .report import fmt

CONFIRMED = "confirmed"
VACUOUS = "vacuous"
COUNTEREXAMPLE = "COUNTEREXAMPLE"
UNDECIDED = "undecided"


@dataclass
class DisplacementWitness:
    a: Any
    b: Any
    x: Any
    y: Any
    C: Any


@dataclass
class DisplacementVerdict:
    premises_hold: bool
    conclusion_holds: bool | None
    status: str
    values: dict = field(default_factory=dict)


def displacement_premises(w: DisplacementWitness, model) -> tuple[bool, dict]:
    d = model.distance
    vals = {
        "d(x,ax)": d(w.x, model.apply(w.a, w.x)),
        "d(y,by)": d(w.y, model.apply(w.b, w.y)),
        "d(x,bx)": d(w.x, model.apply(w.b, w.x)),
        "d(y,ay)": d(w.y, model.apply(w.a, w.y)),
        "d(x,y)": d(w.x, w.y),
        "C": w.C,
    }
    near = max(vals["d(x,ax)"], vals["d(y,by)"])
    far = min(vals["d(x,bx)"], vals["d(y,ay)"])
    # rounding slack is the evaluation error bound, never the looser tolerance
    eps = model.error_bound
    ok = w.C > 0 and near <= w.C + eps and far + eps >= vals["d(x,y)"] + 3 * w.C
    return ok, vals


def check_displacement_criterion(w: DisplacementWitness, model) -> DisplacementVerdict:
    """Premises ``max{d(x,ax), d(y,by)} <= C`` and ``min{d(x,bx), d(y,ay)} >= d(x,y) + 3C``
    (with ``C > 0``); conclusion: ``ab`` is loxodromic."""
    for g in (w.a, w.b):
        model.check_element(g)
    for p in (w.x, w.y):
        model.check_point(p)
    ok, vals = displacement_premises(w, model)
    try:
        concl = classify(model.multiply(w.a, w.b), model).kind == LOXODROMIC
    except Inconclusive:
        concl = None
    if not ok:
        status = VACUOUS
    elif concl is None:
        status = UNDECIDED
    else:
        status = CONFIRMED if concl else COUNTEREXAMPLE
    return DisplacementVerdict(ok, concl, status, vals)


# -- distance doubling ---------------------------------------------------


@dataclass
class DoublingEstimate:
    g: Any
    f: Any
    s: Any
    D: Any
    C0: Any
    checked_range: list
    deviations: list
    holds: bool

    def to_json(self, model=None) -> dict:
        return {
            "g": fmt(self.g, model),
            "f": fmt(self.f, model),
            "s": fmt(self.s, model),
            "D": fmt(self.D),
            "C0": fmt(self.C0),
            "checked_range": [min(self.checked_range), max(self.checked_range)],
            "deviations": fmt(self.deviations),
            "holds": self.holds,
        }


def _orbit(model, g, s, ns: list[int]) -> dict:
    out = {}
    p = s
    k = 0
    for n in sorted(ns):
        while k < n:
            p = model.apply(g, p)
            k += 1
        out[n] = p
    return out


def _range(n_range) -> list[int]:
    if isinstance(n_range, int):
        return list(range(1, n_range + 1))
    return list(n_range)


def doubling_estimate(g, f, s, n_range, model) -> DoublingEstimate:
    """Check ``|d(f g^n s, g^n s) - 2 d(g^n s, s)| <= D`` with ``D = d(fs, s) + 2 C0``.

    ``C0`` is the largest Gromov product ``(f g^n s, g^n s)_s`` over the range.
    """
    plus, _ = fixed_points(g, model)
    if model.boundary_action(f, plus) == plus:
        raise FixesAttractor("f fixes the attracting point of g")
    ns = _range(n_range)
    pts = _orbit(model, g, s, ns)
    prods = {}
    devs = []
    for n in ns:
        p = pts[n]
        fp = model.apply(f, p)
        prods[n] = gromov_product(fp, p, s, model).value
        devs.append(abs(model.distance(fp, p) - 2 * model.distance(p, s)))
    c0 = max(prods.values()) if prods else 0
    D = model.distance(model.apply(f, s), s) + 2 * c0
    holds = all(model.le(x, D) for x in devs)
    return DoublingEstimate(g, f, s, D, c0, ns, devs, holds)


# -- commutators ---------------------------------------------------------


@dataclass
class CommutatorCertificate:
    n0: int
    C: Any
    premises: dict
    classes: dict

    def to_json(self) -> dict:
        return {
            "n0": self.n0,
            "C": fmt(self.C),
            "premises": {str(k): v for k, v in self.premises.items()},
            "classes": {str(k): v for k, v in self.classes.items()},
        }


def loxodromic_commutator(f, g, model, n_max: int) -> tuple[int, CommutatorCertificate]:
    """Least ``n0 <= n_max`` for which the displacement premises certify ``[f, g^n0]``.

    The witness is ``a = f``, ``b = g^n f^-1 g^-n``, ``x`` the basepoint,
    ``y = g^n x`` and ``C = d(fx, x)`` (``C = 1`` when ``f`` fixes ``x``,
    since the criterion needs ``C > 0`` and any larger ``C`` keeps the
    first premise).  The certificate also classifies ``[f, g^n]`` for every
    ``n`` in ``[n0, n_max]``.
    """
    plus, minus = fixed_points(g, model)
    if model.boundary_action(f, plus) == plus or model.boundary_action(f, minus) == minus:
        raise HypothesisFail("f fixes an endpoint of g")
    x = model.basepoint
    C = model.distance(model.apply(f, x), x)
    if C == 0:
        C = 1
    finv = model.inverse(f)
    premises = {}
    n0 = None
    gn = model.identity
    powers = {}
    for n in range(1, n_max + 1):
        gn = model.multiply(gn, g)
        powers[n] = gn
        b = model.product(gn, finv, model.inverse(gn))
        ok, _ = displacement_premises(DisplacementWitness(f, b, x, model.apply(gn, x), C), model)
        premises[n] = ok
        if ok and n0 is None:
            n0 = n
    if n0 is None:
        raise NotFoundWithin(n_max)
    classes = {}
    for n in range(n0, n_max + 1):
        comm = model.commutator(f, powers[n])
        try:
            classes[n] = classify(comm, model).kind
        except Inconclusive:
            classes[n] = "Inconclusive"
    return n0, CommutatorCertificate(n0, C, premises, classes)


# -- conjugate convergence -----------------------------------------------


@dataclass
class ConjugateConvergence:
    D: Any
    products: list
    bounds: list
    intermediate: list
    chain_holds: bool
    equivalent: bool
    limit: Any

    @property
    def ok(self) -> bool:
        return self.chain_holds and self.equivalent

    def to_json(self, model=None) -> dict:
        return {
            "D": fmt(self.D),
            "products": fmt(self.products),
            "bounds": fmt(self.bounds),
            "intermediate_slack": fmt(self.intermediate),
            "chain_holds": self.chain_holds,
            "equivalent": self.equivalent,
            "limit": fmt(self.limit, model),
        }


def conjugate_convergence(
    h,
    g,
    s,
    n_max: int,
    model,
    threshold=DEFAULT_THRESHOLD,
    burn_in: int = DEFAULT_BURN_IN,
) -> ConjugateConvergence:
    """Check that ``g^-n h g^n s`` follows ``g^-n s`` towards ``g-``.

    Verifies ``2 (h^(g^n) s, g^-n s)_s >= 2 d(s, g^n s) - D - d(hs, s)`` for
    ``n <= n_max`` (``D`` from :func:`doubling_estimate` with ``f = h``) and
    the truncated equivalence of the two sequences.  ``intermediate`` records
    the slack of the middle estimate ``d(h g^n s, g^n s) >= 2 d(g^n s, s) - D``.
    """
    plus, minus = fixed_points(g, model)
    if model.boundary_action(h, plus) == plus:
        raise FixesAttractor("h fixes the attracting point of g")
    ns = list(range(0, n_max + 1))
    est = doubling_estimate(g, h, s, ns, model)
    D = est.D
    ginv = model.inverse(g)
    fwd = _orbit(model, g, s, ns)
    back = _orbit(model, ginv, s, ns)
    hs_s = model.distance(model.apply(h, s), s)
    conj_pts = []
    products, bounds, slack = [], [], []
    holds = True
    gn = model.identity
    for n in ns:
        if n:
            gn = model.multiply(gn, g)
        p = model.apply(model.conjugate(h, gn), s)
        conj_pts.append(p)
        prod = gromov_product(p, back[n], s, model).value
        d_n = model.distance(s, fwd[n])
        bound = 2 * d_n - D - hs_s
        products.append(prod)
        bounds.append(bound)
        slack.append(model.distance(model.apply(h, fwd[n]), fwd[n]) - (2 * d_n - D))
        if not model.le(bound, 2 * prod):
            holds = False
    seq_b = [back[n] for n in ns]
    try:
        equivalent = same_boundary_point(conj_pts, seq_b, s, model, threshold, burn_in)
        limit_ok = same_boundary_point(
            conj_pts, ray_sequence(model, minus, n_max), s, model, threshold, burn_in
        )
    except NotConvergent:
        equivalent = limit_ok = False
    return ConjugateConvergence(
        D, products, bounds, slack, holds, equivalent and limit_ok, minus if limit_ok else None
    )


def lemma_trace(name: str, inputs: dict, result, model) -> dict:
    """JSON trace of a verifier run."""
    if hasattr(result, "to_json"):
        try:
            body = result.to_json(model)
        except TypeError:
            body = result.to_json()
    else:
        body = fmt(result.__dict__ if hasattr(result, "__dict__") else result, model)
    return {"lemma": name, "inputs": fmt(inputs, model), "result": body}


def sweep(witnesses: Iterable[DisplacementWitness], model) -> dict:
    """Counts of displacement verdict statuses over a witness stream."""
    counts = {CONFIRMED: 0, VACUOUS: 0, COUNTEREXAMPLE: 0, UNDECIDED: 0}
    for w in witnesses:
        counts[check_displacement_criterion(w, model).status] += 1
    return counts
