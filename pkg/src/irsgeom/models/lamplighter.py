"""The lamplighter group Z_2 wr Z acting on its Bass-Serre tree.

Group elements are pairs ``(f, n)``: a finite set ``f`` of lit lamps and a
shift ``n``, multiplied by ``(f, n)(h, m) = (f xor (h + n), n + m)``.  The
lamp at position ``i`` is ``a_i = ({i}, 0)`` and ``t = ({}, 1)``.

Tree vertices are cosets of the vertex group ``{(f, 0) : f >= 0}``: the
vertex ``(level n, pattern p)`` stores ``p`` restricted to positions below
``n``.  Each vertex has one parent ``(n-1, p below n-1)`` and two children
``(n+1, p plus an optional lamp at n)``, so the tree is 3-regular.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

from .base import ModelSpace


@dataclass(frozen=True)
class LampElement:
    support: frozenset
    shift: int

    def __str__(self):
        return f"({sorted(self.support)},{self.shift})"


@dataclass(frozen=True)
class LampVertex:
    level: int
    pattern: frozenset

    def __post_init__(self):
        if any(x >= self.level for x in self.pattern):
            raise ValueError("pattern must lie strictly below the level")

    def __str__(self):
        return f"<{self.level}:{sorted(self.pattern)}>"


class _DownEnd:
    """The end reached by descending levels; fixed by the whole group."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __reduce__(self):
        return (_DownEnd, ())

    def __repr__(self):
        return "DOWN"

    __str__ = __repr__


DOWN = _DownEnd()


@dataclass(frozen=True)
class UpEnd:
    """An ascending end: the lamp pattern ``P`` seen from infinitely high.

    ``P`` is ``low`` below ``start`` and repeats ``period`` from ``start`` on.
    Build with :func:`make_up_end` for the canonical form.
    """

    low: frozenset
    start: int
    period: tuple

    def value(self, x: int) -> int:
        if x < self.start:
            return 1 if x in self.low else 0
        return self.period[(x - self.start) % len(self.period)]

    def window(self, hi: int) -> frozenset:
        """Lit positions strictly below ``hi``."""
        lit = {x for x in self.low if x < hi}
        lit.update(x for x in range(self.start, hi) if self.value(x))
        return frozenset(lit)

    def first_lit(self):
        if self.low:
            return min(self.low)
        for j, bit in enumerate(self.period):
            if bit:
                return self.start + j
        return None

    def __str__(self):
        bits = "".join(map(str, self.period))
        return f"up({sorted(self.low)};{self.start};({bits})^inf)"


def make_up_end(low, start: int, period) -> UpEnd:
    period = list(period)
    n = len(period)
    for p in range(1, n + 1):
        if n % p == 0 and period[:p] * (n // p) == period:
            period = period[:p]
            break
    low = {x for x in low if x < start}
    if period == [0]:
        return UpEnd(frozenset(low), max(low) + 1 if low else 0, (0,))
    while (1 if start - 1 in low else 0) == period[-1]:
        low.discard(start - 1)
        start -= 1
        period = period[-1:] + period[:-1]
    return UpEnd(frozenset(low), start, tuple(period))


class LamplighterModel(ModelSpace):
    kind = "lamplighter"
    exact = True
    is_tree = True
    tolerance = 0

    def __init__(self):
        self.identity = LampElement(frozenset(), 0)
        self.basepoint = LampVertex(0, frozenset())

    def __eq__(self, other):
        return isinstance(other, LamplighterModel)

    def __hash__(self):
        return hash("lamplighter")

    def __repr__(self):
        return "LamplighterModel()"

    @staticmethod
    def lamp(i: int) -> LampElement:
        return LampElement(frozenset([i]), 0)

    @staticmethod
    def t(n: int = 1) -> LampElement:
        return LampElement(frozenset(), n)

    def generators(self) -> list:
        return [self.lamp(0), self.t()]

    def multiply(self, g: LampElement, h: LampElement) -> LampElement:
        return LampElement(g.support ^ frozenset(x + g.shift for x in h.support), g.shift + h.shift)

    def inverse(self, g: LampElement) -> LampElement:
        return LampElement(frozenset(x - g.shift for x in g.support), -g.shift)

    def is_element(self, g) -> bool:
        return isinstance(g, LampElement)

    def is_point(self, x) -> bool:
        return isinstance(x, LampVertex)

    def apply(self, g: LampElement, v: LampVertex) -> LampVertex:
        level = v.level + g.shift
        moved = frozenset(x + g.shift for x in v.pattern)
        return LampVertex(level, frozenset(x for x in g.support ^ moved if x < level))

    @staticmethod
    def meet_level(v: LampVertex, w: LampVertex) -> int:
        """Highest level at which the truncated patterns of ``v`` and ``w`` agree."""
        top = min(v.level, w.level)
        diff = [x for x in v.pattern ^ w.pattern if x < top]
        return min(diff) if diff else top

    def distance(self, v: LampVertex, w: LampVertex) -> int:
        k = self.meet_level(v, w)
        return (v.level - k) + (w.level - k)

    def parent(self, v: LampVertex) -> LampVertex:
        return LampVertex(v.level - 1, frozenset(x for x in v.pattern if x < v.level - 1))

    def children(self, v: LampVertex) -> list:
        return [
            LampVertex(v.level + 1, v.pattern),
            LampVertex(v.level + 1, v.pattern | {v.level}),
        ]

    def neighbors(self, v: LampVertex) -> list:
        return [self.parent(v)] + self.children(v)

    def geodesic_point(self, v: LampVertex, w: LampVertex, t: int) -> LampVertex:
        k = self.meet_level(v, w)
        down = v.level - k
        if t <= down:
            lvl = v.level - t
            return LampVertex(lvl, frozenset(x for x in v.pattern if x < lvl))
        lvl = k + (t - down)
        return LampVertex(lvl, frozenset(x for x in w.pattern if x < lvl))

    # -- boundary --------------------------------------------------------
    def sentinels(self) -> list:
        return [DOWN]

    def is_boundary(self, b) -> bool:
        return b is DOWN or isinstance(b, UpEnd)

    def boundary_action(self, g: LampElement, b):
        if b is DOWN:
            return DOWN
        start = b.start + g.shift
        hi = max([start] + [x + 1 for x in g.support])
        moved = {x + g.shift for x in b.low}
        moved.update(x + g.shift for x in range(b.start, hi - g.shift) if b.value(x))
        lit = moved ^ set(g.support)
        n = len(b.period)
        period = [b.value(hi - g.shift + j) for j in range(n)]
        return make_up_end({x for x in lit if x < hi}, hi, period)

    def attracting_end(self, g: LampElement) -> UpEnd:
        """The ascending end fixed by ``g`` when ``g.shift > 0``."""
        m = g.shift
        if m <= 0:
            raise ValueError("shift must be positive")
        if not g.support:
            return make_up_end((), 0, (0,))
        lo, top = min(g.support), max(g.support)
        start = top - m + 1
        # P(x) = xor over j >= 0 of f(x - j m); periodic with period m from start
        def value(x):
            return sum(1 for j in range(0, (x - lo) // m + 1) if x - j * m in g.support) % 2

        low = {x for x in range(lo, start) if value(x)}
        period = [value(x) for x in range(start, start + m)]
        return make_up_end(low, start, period)

    def ray_points(self, b, n: int) -> list:
        """First ``n + 1`` vertices of the geodesic ray from the basepoint to ``b``."""
        if b is DOWN:
            return [LampVertex(-k, frozenset()) for k in range(n + 1)]
        first = b.first_lit()
        bottom = 0 if first is None else min(0, first)
        out = [LampVertex(lvl, frozenset()) for lvl in range(0, bottom - 1, -1)]
        lvl = bottom
        while len(out) < n + 1:
            lvl += 1
            out.append(LampVertex(lvl, b.window(lvl)))
        return out[: n + 1]

    def boundary_gromov_product(self, b1, b2):
        if b1 == b2:
            return math.inf
        n = 64
        while True:
            p1, p2 = self.ray_points(b1, n), self.ray_points(b2, n)
            for i, (x, y) in enumerate(zip(p1, p2)):
                if x != y:
                    return i - 1
            n *= 2

    # -- sampling and formatting -----------------------------------------
    def random_element(self, rng: random.Random, radius: int = 4) -> LampElement:
        gens = self.generators()
        out = self.identity
        for _ in range(rng.randint(0, radius)):
            g = rng.choice(gens)
            out = self.multiply(out, g if rng.random() < 0.5 else self.inverse(g))
        return out

    def random_point(self, rng: random.Random, radius: int = 4) -> LampVertex:
        v = self.basepoint
        for _ in range(rng.randint(0, radius)):
            v = rng.choice(self.neighbors(v))
        return v

    def format_element(self, g: LampElement) -> str:
        return str(g)

    def parse_element(self, s: str) -> LampElement:
        sup, shift = json.loads(s.replace("(", "[").replace(")", "]"))
        return LampElement(frozenset(sup), int(shift))

    def format_point(self, v: LampVertex) -> str:
        return str(v)

    def format_boundary(self, b) -> str:
        return str(b)

    def describe(self) -> dict:
        return {"kind": self.kind, "generators": ["a_0", "t"], "tolerance": "0"}
