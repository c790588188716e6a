"""The free group acting on its Cayley tree."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .. import words as W
from .base import ModelSpace


@dataclass(frozen=True)
class Ray:
    """The eventually periodic end ``prefix * period^inf`` of the tree.

    Build instances with :func:`make_ray`, which puts them in canonical form
    (primitive period, shortest preperiod), so that ``==`` is equality of ends.
    """

    prefix: tuple
    period: tuple

    def letter(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]

    def head(self, n: int) -> tuple:
        return tuple(self.letter(i) for i in range(n))

    def __str__(self):
        pre = W.format_word(self.prefix) if self.prefix else ""
        return f"{pre}({W.format_word(self.period)})^inf"


def make_ray(u, v) -> Ray:
    """Canonical form of the end ``u v^inf`` for reduced words ``u`` and nonempty ``v``."""
    u = W.reduce_word(u)
    v = W.reduce_word(v)
    if not v:
        raise ValueError("period must be a nontrivial element")
    w, c = W.cyclic_decomposition(v)
    c = W.primitive_root(c)
    # u v^inf = u w c^inf; enough copies of c survive any cancellation with u w
    n = (len(u) + len(w)) // len(c) + 2
    word = list(W.multiply(u, w, c * n))
    period = list(c)
    while word and word[-1] == period[-1]:
        word.pop()
        period = period[-1:] + period[:-1]
    return Ray(tuple(word), tuple(period))


def parse_ray(s: str) -> Ray:
    s = s.strip()
    if not s.endswith(")^inf"):
        raise ValueError(f"not a ray: {s!r}")
    body = s[: -len("^inf")]
    i = body.rindex("(")
    return make_ray(W.parse_word(body[:i]), W.parse_word(body[i + 1:-1]))


class FreeGroupModel(ModelSpace):
    """Free group of rank ``k`` acting on its 2k-regular Cayley tree.

    Points and elements are both reduced words; the basepoint is the empty
    word and ``d(u, v) = |u^-1 v|``.
    """

    kind = "free"
    exact = True
    is_tree = True
    tolerance = 0

    def __init__(self, rank: int = 2):
        if rank < 2:
            raise ValueError("rank must be at least 2")
        self.rank = rank
        self.identity = ()
        self.basepoint = ()

    def __eq__(self, other):
        return isinstance(other, FreeGroupModel) and other.rank == self.rank

    def __hash__(self):
        return hash(("free", self.rank))

    def __repr__(self):
        return f"FreeGroupModel(rank={self.rank})"

    def generators(self) -> list:
        return [(i,) for i in range(1, self.rank + 1)]

    def multiply(self, g, h):
        return W.multiply(g, h)

    def inverse(self, g):
        return W.inverse(g)

    def power(self, g, n):
        return W.power(g, n)

    def is_element(self, g) -> bool:
        return (
            isinstance(g, tuple)
            and all(isinstance(x, int) and 0 < abs(x) <= self.rank for x in g)
            and W.is_reduced(g)
        )

    is_point = is_element

    def apply(self, g, x):
        return W.multiply(g, x)

    def distance(self, x, y) -> int:
        return len(x) + len(y) - 2 * W.common_prefix_length(x, y)

    def neighbors(self, x) -> list:
        return [W.multiply(x, (c,)) for c in W.letters(self.rank)]

    def geodesic_point(self, x, y, t: int):
        """Vertex at distance ``t`` from ``x`` on the geodesic ``[x, y]``."""
        k = W.common_prefix_length(x, y)
        up = len(x) - k
        if t <= up:
            return x[: len(x) - t]
        return y[: k + (t - up)]

    # -- boundary --------------------------------------------------------
    def boundary_action(self, g, b: Ray) -> Ray:
        return make_ray(W.multiply(g, b.prefix), b.period)

    def boundary_gromov_product(self, b1: Ray, b2: Ray):
        """Common-prefix length of two ends (``math.inf`` when equal)."""
        if b1 == b2:
            return math.inf
        n = max(len(b1.prefix), len(b2.prefix)) + math.lcm(len(b1.period), len(b2.period))
        for i in range(n):
            if b1.letter(i) != b2.letter(i):
                return i
        return math.inf

    def ray_points(self, b: Ray, n: int) -> list:
        return [b.head(i) for i in range(n + 1)]

    def is_boundary(self, b) -> bool:
        return isinstance(b, Ray)

    # -- sampling and formatting -----------------------------------------
    def random_element(self, rng: random.Random, radius: int):
        return W.random_reduced_word(rng, self.rank, rng.randint(0, radius))

    random_point = random_element

    def format_element(self, g) -> str:
        return W.format_word(g)

    format_point = format_element

    def parse_element(self, s: str):
        return W.parse_word(s)

    parse_point = parse_element

    def format_boundary(self, b: Ray) -> str:
        return str(b)

    def parse_boundary(self, s: str) -> Ray:
        return parse_ray(s)

    def describe(self) -> dict:
        return {"kind": self.kind, "rank": self.rank, "tolerance": "0"}
