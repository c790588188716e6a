"""Exact extended reals: rationals, real quadratic surds and infinity.

Boundary points of the upper half-plane fixed by integer matrices are
always of the form ``(p + q*sqrt(D)) / r``.  Equality and hashing use the
key ``(p/r, sign(q) * q^2 * D / r^2)`` which is canonical without needing
to factor ``D``; the printed triple additionally strips square factors of
``D`` found by trial division.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering

import mpmath

_SQUARE_TRIAL_LIMIT = 10_000

ctx = mpmath.MPContext()
ctx.dps = 60


def _strip_squares(D: int) -> tuple[int, int]:
    """Return ``(s, core)`` with ``D == s*s*core`` removing every square found."""
    s = 1
    p = 2
    while p * p <= D and p <= _SQUARE_TRIAL_LIMIT:
        while D % (p * p) == 0:
            D //= p * p
            s *= p
        p += 1 if p == 2 else 2
    r = math.isqrt(D)
    if r * r == D:
        return s * r, 1
    return s, D


def _sign(a: Fraction, b: Fraction, D: int) -> int:
    """Sign of ``a + b*sqrt(D)`` for ``D >= 1``."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    lhs = a * a
    rhs = b * b * D
    if lhs == rhs:
        return 0
    return sa if lhs > rhs else sb


class _Infinity:
    """The point at infinity of the extended real line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def to_mpf(self):
        return ctx.inf

    def sort_key(self):
        return (1, 0, ())

    def triple(self):
        return None


INF = _Infinity()


@total_ordering
class QuadSurd:
    """The real number ``a + b*sqrt(D)`` with rational ``a, b``."""

    __slots__ = ("a", "b", "D", "_key")

    def __init__(self, a, b=0, D: int = 1):
        a = Fraction(a)
        b = Fraction(b)
        if D < 1:
            raise ValueError("D must be positive")
        if b != 0:
            s, core = _strip_squares(D)
            b *= s
            D = core
        if b == 0 or D == 1:
            a, b, D = a + b, Fraction(0), 1
        self.a = a
        self.b = b
        self.D = D
        sq = b * b * D
        self._key = (a, sq if b > 0 else -sq)

    @classmethod
    def rational(cls, x) -> "QuadSurd":
        return cls(Fraction(x))

    @classmethod
    def from_triple(cls, p: int, q: int, r: int, D: int) -> "QuadSurd":
        return cls(Fraction(p, r), Fraction(q, r), D)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def triple(self) -> tuple[int, int, int, int]:
        """Normalized ``(p, q, r, D)`` with ``r > 0`` and ``gcd(p, q, r) == 1``."""
        r = math.lcm(self.a.denominator, self.b.denominator)
        p = int(self.a * r)
        q = int(self.b * r)
        g = math.gcd(math.gcd(p, q), r)
        return (p // g, q // g, r // g, self.D)

    def conjugate(self) -> "QuadSurd":
        return QuadSurd(self.a, -self.b, self.D)

    def sign(self) -> int:
        return _sign(self.a, self.b, self.D)

    def to_mpf(self):
        return ctx.mpf(self.a.numerator) / self.a.denominator + (
            ctx.mpf(self.b.numerator) / self.b.denominator
        ) * ctx.sqrt(self.D)

    def __float__(self):
        return float(self.to_mpf())

    def sort_key(self):
        return (0, self.to_mpf(), self._key)

    def __eq__(self, other):
        if isinstance(other, QuadSurd):
            return self._key == other._key
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash(self._key)

    def __lt__(self, other):
        if isinstance(other, _Infinity):
            return True
        if not isinstance(other, QuadSurd):
            other = QuadSurd(other)
        if self.D == other.D or self.D == 1 or other.D == 1:
            D = max(self.D, other.D)
            return _sign(self.a - other.a, self.b - other.b, D) < 0
        return (self.to_mpf(), self._key) < (other.to_mpf(), other._key)

    def __repr__(self):
        return f"QuadSurd({self})"

    def __str__(self):
        p, q, r, D = self.triple()
        if q == 0:
            return str(Fraction(p, r))
        term = f"{'' if abs(q) == 1 else abs(q)}sqrt({D})"
        if p == 0:
            body = term if q > 0 else f"-{term}"
        else:
            body = f"{p}{'+' if q > 0 else '-'}{term}"
        return body if r == 1 else f"({body})/{r}"


def _field_div(na, nb, ma, mb, D):
    """(na + nb√D) / (ma + mb√D) in Q(√D)."""
    den = ma * ma - mb * mb * D
    a = (na * ma - nb * mb * D) / den
    b = (nb * ma - na * mb) / den
    return a, b


def mobius(a: int, b: int, c: int, d: int, x) -> "QuadSurd | _Infinity":
    """Image of an extended real under ``z -> (a z + b) / (c z + d)``."""
    if x is INF:
        if c == 0:
            return INF
        return QuadSurd(Fraction(a, c))
    D = x.D
    na, nb = a * x.a + b, a * x.b
    ma, mb = c * x.a + d, c * x.b
    if ma == 0 and mb == 0:
        return INF
    if mb == 0:
        return QuadSurd(na / ma, nb / ma, D)
    qa, qb = _field_div(na, nb, ma, mb, D)
    return QuadSurd(qa, qb, D)


def mobius_derivative_abs_lt_one(c: int, d: int, x: QuadSurd) -> bool:
    """True iff ``|1 / (c x + d)^2| < 1``, i.e. ``|c x + d| > 1``, exactly."""
    ma, mb = c * x.a + d, c * x.b
    # |m| > 1  <=>  m > 1 or m < -1
    return _sign(ma - 1, mb, x.D) > 0 or _sign(ma + 1, mb, x.D) < 0


def parse_extended_real(s: str):
    s = s.strip()
    if s.lower() in ("inf", "infinity", "oo"):
        return INF
    if s.startswith("(") and s.endswith(")") and s.count(",") == 3:
        p, q, r, D = (int(t) for t in s[1:-1].split(","))
        return QuadSurd.from_triple(p, q, r, D)
    return QuadSurd(Fraction(s))
