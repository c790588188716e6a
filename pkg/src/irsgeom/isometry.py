"""Classification of isometries and of actions, fixed points and limit sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from . import words as W
from .errors import (
    DegenerateStart,
    Inconclusive,
    NoConnector,
    NotConvergent,
    NotLoxodromic,
    PreconditionFail,
    RadiusTooSmall,
)
from .hypcore import (
    DEFAULT_BURN_IN,
    DEFAULT_THRESHOLD,
    ConvergenceVerdict,
    boundary_converges,
    converges_at_infinity,
    same_boundary_point,
)
from .models.free import FreeGroupModel, make_ray
from .models.halfplane import HalfPlaneModel, SL2
from .models.lamplighter import DOWN, LamplighterModel
from .surd import QuadSurd, ctx, mobius_derivative_abs_lt_one

ELLIPTIC = "Elliptic"
PARABOLIC = "Parabolic"
LOXODROMIC = "Loxodromic"

LINEAL = "Lineal"
QUASI_PARABOLIC = "QuasiParabolic"
GENERAL_TYPE = "GeneralType"

DEFAULT_ORBIT_BUDGET = 64


@dataclass
class IsometryClass:
    kind: str
    translation_length: Any = 0
    fixed: tuple | None = None
    evidence: dict = field(default_factory=dict)

    def __str__(self):
        return self.kind


# -- single isometries ---------------------------------------------------


def _classify_halfplane(g: SL2, model: HalfPlaneModel) -> IsometryClass:
    tr = abs(g.trace)
    if tr > 2:
        length = 2 * ctx.acosh(ctx.mpf(tr) / 2)
        return IsometryClass(LOXODROMIC, length, _halfplane_fixed(g), {"trace": g.trace})
    if tr == 2 and not model.acts_trivially(g):
        return IsometryClass(PARABOLIC, 0, None, {"trace": g.trace})
    # finite order: the orbit of i is finite, its radius is the witness
    z = model.basepoint
    radius = ctx.mpf(0)
    p = g
    for _ in range(12):
        if model.acts_trivially(p):
            break
        radius = max(radius, model.distance(z, model.apply(p, z)))
        p = p @ g
    return IsometryClass(ELLIPTIC, 0, None, {"trace": g.trace, "orbit_radius": radius})


def _halfplane_fixed(g: SL2) -> tuple:
    # roots of c z^2 + (d - a) z - b = 0; c != 0 for loxodromic matrices
    disc = g.trace**2 - 4
    r1 = QuadSurd(Fraction(g.a - g.d, 2 * g.c), Fraction(1, 2 * g.c), disc)
    r2 = r1.conjugate()
    if mobius_derivative_abs_lt_one(g.c, g.d, r1):
        return (r1, r2)
    return (r2, r1)


def _classify_lamplighter(g, model: LamplighterModel, budget: int) -> IsometryClass:
    v0 = model.basepoint
    dist = [0]
    v = v0
    for _ in range(budget):
        v = model.apply(g, v)
        dist.append(model.distance(v0, v))
    half = budget // 2
    tail = dist[half:]
    steps = {b - a for a, b in zip(tail, tail[1:])}
    if len(tail) >= 3 and len(steps) == 1 and min(steps) > 0:
        tau = steps.pop()
        return IsometryClass(
            LOXODROMIC, tau, _lamplighter_fixed(g, model), {"orbit_distances": dist[: half + 3]}
        )
    if max(tail) <= max(dist[: half + 1]):
        return IsometryClass(ELLIPTIC, 0, None, {"orbit_radius": max(dist)})
    raise Inconclusive(f"orbit of {g} neither linear nor bounded within {budget} steps", dist)


def _lamplighter_fixed(g, model: LamplighterModel) -> tuple:
    if g.shift > 0:
        return (model.attracting_end(g), DOWN)
    return (DOWN, model.attracting_end(model.inverse(g)))


def classify(g, model, orbit_budget: int = DEFAULT_ORBIT_BUDGET) -> IsometryClass:
    """Elliptic, parabolic or loxodromic, with a model-specific certificate."""
    if orbit_budget < 1:
        raise ValueError("orbit_budget must be at least 1")
    model.check_element(g)
    if isinstance(model, FreeGroupModel):
        if not g:
            return IsometryClass(ELLIPTIC, 0, None, {"orbit_radius": 0})
        u, c = W.cyclic_decomposition(g)
        fixed = (make_ray(u, c), make_ray(u, W.inverse(c)))
        return IsometryClass(LOXODROMIC, len(c), fixed, {"cyclic_reduction": W.format_word(c)})
    if isinstance(model, HalfPlaneModel):
        return _classify_halfplane(g, model)
    if isinstance(model, LamplighterModel):
        return _classify_lamplighter(g, model, orbit_budget)
    raise TypeError(f"unsupported model {model!r}")


def fixed_points(g, model) -> tuple:
    """``(g+, g-)``: the attracting and repelling fixed ends of a loxodromic."""
    cls = classify(g, model)
    if cls.kind != LOXODROMIC:
        raise NotLoxodromic(f"{model.format_element(g)} is {cls.kind}")
    return cls.fixed


def independent(g, h, model) -> bool:
    gp, gm = fixed_points(g, model)
    hp, hm = fixed_points(h, model)
    return not ({gp, gm} & {hp, hm})


def classification_rows(elements: Sequence, model) -> list[dict]:
    """One row per element: class, translation length and fixed ends."""
    rows = []
    for g in elements:
        try:
            c = classify(g, model)
            kind, tl = c.kind, c.translation_length
            plus, minus = (model.format_boundary(b) for b in c.fixed) if c.fixed else ("", "")
        except Inconclusive:
            kind, tl, plus, minus = "Inconclusive", "", "", ""
        rows.append(
            {
                "element": model.format_element(g),
                "class": kind,
                "translation_length": _fmt_number(tl),
                "fixed_plus": plus,
                "fixed_minus": minus,
            }
        )
    return rows


def _fmt_number(x) -> str:
    if x == "":
        return ""
    if isinstance(x, int):
        return str(x)
    return ctx.nstr(ctx.mpf(x), 15)


# -- actions -------------------------------------------------------------


@dataclass
class ActionType:
    kind: str
    radius: int
    evidence: dict = field(default_factory=dict)

    def __str__(self):
        return self.kind


def _fixes(model, gens, b) -> bool:
    return all(model.boundary_action(g, b) == b for g in gens)


def action_type(gens: Sequence, model, search_radius: int, threshold=None) -> ActionType:
    """Classify the action of ``<gens>`` from evidence in a word ball.

    Without loxodromics the verdict rests on the orbit diameter of the
    basepoint: ``Parabolic`` when it reaches ``threshold`` (or, with no
    threshold, when it still grows at the last radius), ``Elliptic`` when it
    has stopped growing below the threshold.
    """
    if search_radius < 1:
        raise ValueError("search_radius must be at least 1")
    ball = model.ball(gens, search_radius)
    lox = []
    undecided = []
    for e in ball:
        try:
            c = classify(e.element, model)
        except Inconclusive:
            undecided.append(e.element)
            continue
        if c.kind == LOXODROMIC:
            lox.append((e.element, c.fixed))
    ev: dict = {"ball_size": len(ball), "loxodromics": len(lox), "undecided": len(undecided)}
    if not lox:
        inner = [model.apply(e.element, model.basepoint) for e in ball if e.length < search_radius]
        outer = model.orbit(e.element for e in ball)
        d_in, d_out = model.diameter(inner), model.diameter(outer)
        ev["orbit_diameter"] = d_out
        ev["previous_diameter"] = d_in
        growing = d_out > d_in + model.tolerance
        if threshold is not None and d_out >= threshold:
            return ActionType(PARABOLIC, search_radius, ev)
        if threshold is None and growing:
            return ActionType(PARABOLIC, search_radius, ev)
        if not growing and not undecided:
            return ActionType(ELLIPTIC, search_radius, ev)
        raise Inconclusive("orbit growth undecided at this radius", ev)
    first_pair = set(lox[0][1])
    if all(set(fx) == first_pair for _, fx in lox):
        ev["axis"] = lox[0][1]
        return ActionType(LINEAL, search_radius, ev)
    for i in range(len(lox)):
        for j in range(i + 1, len(lox)):
            if not (set(lox[i][1]) & set(lox[j][1])):
                ev["independent_pair"] = (lox[i][0], lox[j][0])
                return ActionType(GENERAL_TYPE, search_radius, ev)
    candidates = list(model.sentinels())
    for _, fx in lox:
        candidates.extend(fx)
    for b in dict.fromkeys(candidates):
        if _fixes(model, gens, b):
            ev["common_fixed_point"] = b
            ev["loxodromic"] = lox[0][0]
            return ActionType(QUASI_PARABOLIC, search_radius, ev)
    raise Inconclusive("loxodromics share endpoints but no common fixed point found", ev)


# -- limit sets ----------------------------------------------------------


@dataclass
class LimitSetApprox:
    depth: int
    prefixes: list
    generation_radius: int

    def as_set(self) -> frozenset:
        return frozenset(self.prefixes)


def _automaton_prefixes(trans: list[dict], base: int, rank: int, depth: int, lo_len: int, hi_len: int):
    """Length-``depth`` prefixes of reduced loops at ``base`` of length in ``[lo_len, hi_len]``.

    ``trans[v][x]`` is the target of the edge labeled by letter ``x`` at ``v``.
    """
    letters = W.letters(rank)
    n = len(trans)
    # fin[k][v][last]: a reduced path of exactly k letters from v back to base
    # whose first letter does not cancel ``last`` (0 for none)
    keys = [0] + letters
    fin = [{(v, last): v == base for v in range(n) for last in keys}]
    for k in range(1, hi_len - depth + 1):
        prev = fin[-1]
        cur = {}
        for v in range(n):
            reach = {x: trans[v][x] for x in letters if x in trans[v]}
            for last in keys:
                cur[(v, last)] = any(
                    prev[(w, x)] for x, w in reach.items() if x != -last
                )
        fin.append(cur)
    lo = max(lo_len - depth, 0)
    hi = hi_len - depth
    out = []

    def walk(v, word):
        if len(word) == depth:
            last = word[-1] if word else 0
            if any(fin[k][(v, last)] for k in range(lo, hi + 1)):
                out.append(tuple(word))
            return
        for x in letters:
            if word and x == -word[-1]:
                continue
            if x in trans[v]:
                walk(trans[v][x], word + [x])

    walk(base, [])
    return out


def limit_set_approx(H, model, depth: int, radius: int) -> LimitSetApprox:
    """Depth-``depth`` cylinders met by the orbit of ``H`` near word length ``radius``.

    ``H`` is a subgroup handle or a list of generators.  Free-group
    subgroups are read off their graphs exactly, from reduced loops of
    length between ``radius - 2`` and ``radius - 2 + max(2, 2n)`` on an
    ``n``-vertex graph; other tree models enumerate
    the word ball; the half-plane reports attracting fixed points of
    loxodromics in the ball.
    """
    if radius < 2 * depth:
        raise RadiusTooSmall(f"radius {radius} < 2 * depth {depth}")
    from . import subgroups as S

    if isinstance(model, FreeGroupModel):
        if isinstance(H, S.CyclicHandle):
            pre = _cyclic_prefixes(H.generator, depth, radius)
        else:
            handle = H
            if not hasattr(handle, "automaton"):
                gens = H.generators() if isinstance(H, S.SubgroupHandle) else list(H)
                handle = S.stallings_from_generators(gens, model.rank)
            trans, base = handle.automaton()
            # loop lengths of an n-vertex graph can skip up to 2n values
            # (<g> has lengths 2|u| + k|c|), so the window widens with n
            hi = radius - 2 + max(2, 2 * len(trans))
            pre = _automaton_prefixes(trans, base, model.rank, depth, radius - 2, hi)
        return LimitSetApprox(depth, sorted(set(pre), key=W.shortlex_key), radius)
    gens = H.generators() if isinstance(H, S.SubgroupHandle) else list(H)
    ball = model.ball(gens, radius)
    if isinstance(model, HalfPlaneModel):
        pts = set()
        for e in ball:
            c = classify(e.element, model)
            if c.kind == LOXODROMIC:
                pts.add(c.fixed[0])
        return LimitSetApprox(depth, sorted(pts, key=lambda b: b.sort_key()), radius)
    v0 = model.basepoint
    pre = set()
    for e in ball:
        if e.length < radius - 2:
            continue
        v = model.apply(e.element, v0)
        if model.distance(v0, v) >= depth:
            pre.add(model.geodesic_point(v0, v, depth))
    return LimitSetApprox(depth, sorted(pre, key=str), radius)


def _cyclic_prefixes(w, depth: int, radius: int) -> list:
    if not w:
        return []
    out = []
    for sign in (1, -1):
        n = 1
        while len(W.power(w, sign * n)) < max(radius - 2, depth):
            n += 1
        out.append(W.power(w, sign * n)[:depth])
    return out


# -- dynamics ------------------------------------------------------------


def ray_sequence(model, b, n: int) -> list:
    """``n + 1`` points approaching the end ``b`` with Gromov products growing at least linearly."""
    if isinstance(model, HalfPlaneModel):
        return model.ray_points(b, 2 * n)[::2]
    return model.ray_points(b, n)


def north_south_verify(
    g,
    s,
    model,
    n_max: int,
    backward: bool = False,
    threshold=DEFAULT_THRESHOLD,
    burn_in: int = DEFAULT_BURN_IN,
) -> ConvergenceVerdict:
    """Check ``g^n s -> g+`` (or ``g^-n s -> g-`` when ``backward``)."""
    plus, minus = fixed_points(g, model)
    step = model.inverse(g) if backward else g
    target, excluded = (minus, plus) if backward else (plus, minus)
    if model.is_boundary(s):
        if s == excluded:
            raise DegenerateStart("start is the excluded fixed point")
        pts = [s]
        for _ in range(n_max):
            pts.append(model.boundary_action(step, pts[-1]))
        return boundary_converges(pts, target, model, threshold, burn_in)
    seq = [s]
    for _ in range(n_max):
        seq.append(model.apply(step, seq[-1]))
    verdict = converges_at_infinity(seq, model.basepoint, model, threshold, burn_in)
    try:
        same = same_boundary_point(
            seq, ray_sequence(model, target, n_max), model.basepoint, model, threshold, burn_in
        )
    except NotConvergent:
        same = False
    verdict.converges = verdict.converges and same
    return verdict


def find_loxodromic_with_endpoints(u, v, model: FreeGroupModel, gens=None):
    """A loxodromic ``g = u c v^-1`` with ``g+`` in the cylinder of ``u`` and ``g-`` in that of ``v``.

    Connectors ``c`` are single letters in shortlex order, then two-letter
    reduced words.  ``g`` is reduced; it is cyclically reduced unless ``u``
    and ``v`` share a first letter, which does not affect its endpoints.
    """
    u, v = W.reduce_word(u), W.reduce_word(v)
    k = W.common_prefix_length(u, v)
    if k == len(u) or k == len(v):
        raise PreconditionFail("cylinders are not disjoint", {"u": u, "v": v})
    letters = W.letters(model.rank)
    connectors = [(x,) for x in letters]
    connectors += [(x, y) for x in letters for y in letters if x != -y]
    for c in connectors:
        g = u + c + W.inverse(v)
        if not W.is_reduced(g):
            continue
        plus, minus = fixed_points(g, model)
        if plus.head(len(u)) == u and minus.head(len(v)) == v:
            return g
    raise NoConnector(f"no connector for {W.format_word(u)}, {W.format_word(v)}")
