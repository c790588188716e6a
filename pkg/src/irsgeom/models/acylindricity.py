"""Empirical probe of acylindricity: how many elements nearly fix two far points."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ..errors import NoPairsFound
from .halfplane import HPoint

_MAX_TRIES = 200


@dataclass
class AcylindricityReport:
    epsilon: Any
    R: Any
    N_observed: int
    witnesses: list = field(default_factory=list)
    pairs_tested: int = 0
    elements_searched: int = 0


def _far_point(model, rng: random.Random, x, R):
    if model.is_tree:
        # a non-backtracking walk of length R in a tree ends at distance R
        prev, cur = None, x
        for _ in range(int(R)):
            options = [v for v in model.neighbors(cur) if v != prev]
            prev, cur = cur, rng.choice(options)
        return cur
    # half-plane: d(z, z + h i) grows like log h; go up by a power of two
    k = 1
    while True:
        y = HPoint(x.x + Fraction(rng.randint(-4, 4), 8), x.y * 2**k)
        if model.distance(x, y) >= R:
            return y
        k += 1


def acylindricity_probe(
    model,
    gens,
    epsilon,
    R,
    sample_pairs: int,
    element_radius: int,
    seed: int,
    start_radius: int = 1,
) -> AcylindricityReport:
    """Count ball elements moving both ``x`` and ``y`` by at most ``epsilon``.

    Pairs ``(x, y)`` have ``x`` within ``start_radius`` of the basepoint and
    ``d(x, y) >= R``.  The report carries the maximum count over the pairs.
    """
    if not (epsilon >= 0 and R > 0):
        raise ValueError("need epsilon >= 0 and R > 0")
    rng = random.Random(seed)
    ball = [e.element for e in model.ball(gens, element_radius)]
    best = -1
    witnesses: list = []
    tested = 0
    for _ in range(sample_pairs):
        for _attempt in range(_MAX_TRIES):
            x = model.random_point(rng, start_radius)
            y = _far_point(model, rng, x, R)
            if model.distance(x, y) >= R:
                break
        else:
            raise NoPairsFound(f"could not sample a pair at distance >= {R}")
        tested += 1
        count = sum(
            1
            for g in ball
            if model.le(model.distance(x, model.apply(g, x)), epsilon)
            and model.le(model.distance(y, model.apply(g, y)), epsilon)
        )
        if count > best:
            best, witnesses = count, [(x, y)]
        elif count == best and len(witnesses) < 5:
            witnesses.append((x, y))
    return AcylindricityReport(epsilon, R, best, witnesses, tested, len(ball))
