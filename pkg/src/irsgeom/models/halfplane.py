"""SL(2, Z) acting on the upper half-plane by Moebius transformations.

Points are kept exactly as pairs of rationals, so the action and
``cosh d`` are exact; only the final ``arccosh`` is evaluated, at 60
significant digits.  Comparisons use the tolerance ``tau = 1e-9``.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from ..surd import INF, QuadSurd, _Infinity, ctx, mobius, parse_extended_real
from .base import ModelSpace

TAU = ctx.mpf("1e-9")


@dataclass(frozen=True)
class SL2:
    """Integer matrix ``[[a, b], [c, d]]`` with determinant 1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self.rows()} is not 1")

    @classmethod
    def of(cls, rows) -> "SL2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, o: "SL2") -> "SL2":
        return SL2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inv(self) -> "SL2":
        return SL2(self.d, -self.b, -self.c, self.a)

    def max_entry(self) -> int:
        return max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def __str__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


I2 = SL2(1, 0, 0, 1)


@dataclass(frozen=True)
class HPoint:
    """The point ``x + i y`` with ``y > 0``."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        if not self.y > 0:
            raise ValueError("imaginary part must be positive")

    def __str__(self):
        return f"{self.x}+{self.y}i"


def hpoint(x, y) -> HPoint:
    return HPoint(Fraction(x), Fraction(y))


def cosh_distance(p: HPoint, q: HPoint) -> Fraction:
    """Exact ``cosh d(p, q) = 1 + |p - q|^2 / (2 Im p Im q)``."""
    dx = p.x - q.x
    dy = p.y - q.y
    return 1 + (dx * dx + dy * dy) / (2 * p.y * q.y)


def _mpf(q: Fraction):
    return ctx.mpf(q.numerator) / q.denominator


class HalfPlaneModel(ModelSpace):
    kind = "halfplane"
    exact = False
    is_tree = False
    tolerance = TAU
    # accumulated rounding of three 60-digit arccosh evaluations
    error_bound = ctx.mpf("1e-50")

    def __init__(self, generators=None):
        self.identity = I2
        self.basepoint = hpoint(0, 1)
        self._gens = list(generators) if generators else [SL2(1, 1, 0, 1), SL2(1, 0, 1, 1)]

    def __eq__(self, other):
        return isinstance(other, HalfPlaneModel)

    def __hash__(self):
        return hash("halfplane")

    def __repr__(self):
        return "HalfPlaneModel()"

    def generators(self) -> list:
        return list(self._gens)

    def multiply(self, g: SL2, h: SL2) -> SL2:
        return g @ h

    def inverse(self, g: SL2) -> SL2:
        return g.inv()

    def acts_trivially(self, g: SL2) -> bool:
        return g.b == 0 and g.c == 0 and g.a == g.d

    def is_element(self, g) -> bool:
        return isinstance(g, SL2)

    def is_point(self, x) -> bool:
        return isinstance(x, HPoint)

    def apply(self, g: SL2, z: HPoint) -> HPoint:
        den = (g.c * z.x + g.d) ** 2 + (g.c * z.y) ** 2
        re = ((g.a * z.x + g.b) * (g.c * z.x + g.d) + g.a * g.c * z.y * z.y) / den
        return HPoint(re, z.y / den)

    def distance(self, p: HPoint, q: HPoint):
        u = cosh_distance(p, q) - 1
        if u == 0:
            return ctx.mpf(0)
        u = _mpf(u)
        return ctx.log1p(u + ctx.sqrt(u * (u + 2)))

    # -- boundary --------------------------------------------------------
    def boundary_action(self, g: SL2, b):
        return mobius(g.a, g.b, g.c, g.d, b)

    def is_boundary(self, b) -> bool:
        return isinstance(b, (QuadSurd, _Infinity))

    def boundary_gromov_product(self, b1, b2):
        """Gromov product at ``i`` of two ends: ``-log(sin(theta / 2))``.

        ``theta`` is the visual angle at ``i`` between the ends, and
        ``sin(theta/2) = |x - y| / sqrt((1 + x^2)(1 + y^2))``.
        """
        if b1 == b2 or (b1 is INF and b2 is INF):
            return math.inf
        if b1 is INF:
            b1, b2 = b2, b1
        x = b1.to_mpf()
        if b2 is INF:
            s = 1 / ctx.sqrt(1 + x * x)
        else:
            y = b2.to_mpf()
            s = abs(x - y) / ctx.sqrt((1 + x * x) * (1 + y * y))
        return -ctx.log(s)

    def ray_points(self, b, n: int) -> list:
        """Points ``q_k + i 2^-k`` with ``|q_k - b| <= 4^-k`` approaching ``b``."""
        if b is INF:
            return [hpoint(0, 2**k) for k in range(n + 1)]
        out = []
        for k in range(n + 1):
            out.append(HPoint(rational_approximation(b, 2 * k + 2), Fraction(1, 2**k)))
        return out

    # -- sampling and formatting -----------------------------------------
    def random_point(self, rng: random.Random, radius: int = 2) -> HPoint:
        den = rng.randint(1, 8)
        x = Fraction(rng.randint(-radius * den, radius * den), den)
        y = Fraction(rng.randint(1, 3 * den), den)
        return HPoint(x, y)

    def random_element(self, rng: random.Random, radius: int = 4) -> SL2:
        out = I2
        for _ in range(rng.randint(0, radius)):
            g = rng.choice(self._gens)
            out = out @ (g if rng.random() < 0.5 else g.inv())
        return out

    def format_element(self, g: SL2) -> str:
        return str(g)

    def parse_element(self, s: str) -> SL2:
        return SL2.of(json.loads(s))

    def format_point(self, z: HPoint) -> str:
        return str(z)

    def parse_point(self, s: str) -> HPoint:
        re, im = s.strip().rstrip("i").rsplit("+", 1)
        return hpoint(Fraction(re), Fraction(im))

    def format_boundary(self, b) -> str:
        return str(b)

    def parse_boundary(self, s: str):
        return parse_extended_real(s)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "generators": [g.rows() for g in self._gens],
            "tolerance": "1e-9",
        }


def rational_approximation(b: QuadSurd, bits: int) -> Fraction:
    """A rational within ``2^-bits`` of ``b`` (exact integer square roots)."""
    if b.is_rational:
        return b.a
    scale = 1 << (bits + 4 + abs(b.b).numerator.bit_length())
    root = Fraction(math.isqrt(b.D * scale * scale), scale)
    return b.a + b.b * root
