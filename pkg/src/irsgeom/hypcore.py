"""Model-independent hyperbolic metric primitives.

Limits ``i, j -> infinity`` are replaced by finite checks: a sequence
prefix "converges at infinity" when every pair of indices beyond a burn-in
``B`` has Gromov product above a threshold ``T`` (defaults ``B = T = 10``).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .errors import MixedModels, NotConvergent

DEFAULT_BURN_IN = 10
DEFAULT_THRESHOLD = 10


@dataclass(frozen=True)
class GromovProduct:
    value: Any
    basepoint: Any
    error_bound: Any = 0


@dataclass
class HyperbolicityEstimate:
    delta_hat: Any
    samples: int
    delta: Any
    violations: int = 0
    max_violation_witness: tuple | None = None
    worst_defect_witness: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.violations == 0


@dataclass(frozen=True)
class TrajectoryEntry:
    i: int
    j: int
    value: Any


@dataclass
class ConvergenceVerdict:
    converges: bool
    threshold: Any
    burn_in: int
    product_trajectory: list = field(default_factory=list)
    running_min: Any = None


def _check_points(space, *points):
    for p in points:
        if not space.is_point(p):
            raise MixedModels(f"{p!r} is not a point of {space!r}")


def _half(x):
    return Fraction(x, 2) if isinstance(x, int) else x / 2


def gromov_product(x, y, z, space) -> GromovProduct:
    """``(x, y)_z = (d(x, z) + d(y, z) - d(x, y)) / 2``."""
    _check_points(space, x, y, z)
    v = _half(space.distance(x, z) + space.distance(y, z) - space.distance(x, y))
    return GromovProduct(v, z, space.error_bound)


def _product(space, x, y, z):
    return _half(space.distance(x, z) + space.distance(y, z) - space.distance(x, y))


def four_point_check(quadruples: Sequence[tuple], delta, space) -> HyperbolicityEstimate:
    """Test ``(x,z)_t >= min{(x,y)_t, (y,z)_t} - 8 delta`` on each quadruple.

    ``delta_hat`` is the largest observed ``min{(x,y)_t,(y,z)_t} - (x,z)_t``,
    clamped at zero.  Violations are counted, not raised.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if not quadruples:
        raise ValueError("need at least one quadruple")
    slack = 8 * delta
    tol = space.tolerance
    worst = 0
    worst_q = None
    violations = 0
    witness = None
    witness_gap = None
    for q in quadruples:
        x, y, z, t = q
        _check_points(space, x, y, z, t)
        xz = _product(space, x, z, t)
        m = min(_product(space, x, y, t), _product(space, y, z, t))
        defect = m - xz
        if defect > worst:
            worst, worst_q = defect, q
        gap = defect - slack
        if gap > tol:
            violations += 1
            if witness_gap is None or gap > witness_gap:
                witness, witness_gap = q, gap
    return HyperbolicityEstimate(
        delta_hat=worst,
        samples=len(quadruples),
        delta=delta,
        violations=violations,
        max_violation_witness=witness,
        worst_defect_witness=worst_q,
    )


def random_quadruples(space, n: int, radius: int, seed: int) -> list[tuple]:
    rng = random.Random(seed)
    return [tuple(space.random_point(rng, radius) for _ in range(4)) for _ in range(n)]


def _tail_pairs(n: int, burn_in: int):
    for i in range(burn_in + 1, n):
        for j in range(i + 1, n):
            yield i, j


def converges_at_infinity(
    seq: Sequence,
    base,
    space,
    threshold=DEFAULT_THRESHOLD,
    burn_in: int = DEFAULT_BURN_IN,
) -> ConvergenceVerdict:
    """Truncated test of ``(x_i, x_j)_base -> infinity``.

    Every pair ``burn_in < i < j < len(seq)`` must have product strictly
    above ``threshold``; with no such pair the verdict is negative.
    """
    if len(seq) < 2:
        raise ValueError("need at least two points")
    _check_points(space, base, *seq)
    to_base = [space.distance(x, base) for x in seq]
    traj = []
    running = None
    for i, j in _tail_pairs(len(seq), burn_in):
        v = _half(to_base[i] + to_base[j] - space.distance(seq[i], seq[j]))
        traj.append(TrajectoryEntry(i, j, v))
        running = v if running is None else min(running, v)
    ok = running is not None and running > threshold + space.tolerance
    return ConvergenceVerdict(ok, threshold, burn_in, traj, running)


def same_boundary_point(
    seq_a: Sequence,
    seq_b: Sequence,
    base,
    space,
    threshold=DEFAULT_THRESHOLD,
    burn_in: int = DEFAULT_BURN_IN,
    distance_bound=None,
) -> bool:
    """Truncated test that two convergent sequences have the same limit.

    Fast path: if ``d(x_i, y_i) <= distance_bound`` (default: the threshold)
    for every index beyond the burn-in, the limits agree.  Otherwise all
    cross products ``(x_i, y_j)_base`` over tail pairs must exceed the
    threshold.
    """
    for s in (seq_a, seq_b):
        if not converges_at_infinity(s, base, space, threshold, burn_in).converges:
            raise NotConvergent("sequence does not converge at the given truncation")
    bound = threshold if distance_bound is None else distance_bound
    n = min(len(seq_a), len(seq_b))
    tail = range(burn_in + 1, n)
    if all(space.le(space.distance(seq_a[i], seq_b[i]), bound) for i in tail):
        return True
    da = [space.distance(x, base) for x in seq_a]
    db = [space.distance(y, base) for y in seq_b]
    for i in range(burn_in + 1, len(seq_a)):
        for j in range(burn_in + 1, len(seq_b)):
            v = _half(da[i] + db[j] - space.distance(seq_a[i], seq_b[j]))
            if not v > threshold + space.tolerance:
                return False
    return True


def boundary_converges(points: Sequence, target, space, threshold=DEFAULT_THRESHOLD,
                       burn_in: int = DEFAULT_BURN_IN) -> ConvergenceVerdict:
    """Truncated test that boundary points ``points[n]`` converge to ``target``.

    Uses the model's Gromov product of ends at the basepoint.
    """
    traj = []
    running = None
    for i in range(burn_in + 1, len(points)):
        v = space.boundary_gromov_product(points[i], target)
        traj.append(TrajectoryEntry(i, -1, v))
        running = v if running is None else min(running, v)
    ok = running is not None and (running == math.inf or running > threshold + space.tolerance)
    return ConvergenceVerdict(ok, threshold, burn_in, traj, running)
