"""Shared machinery for the concrete model spaces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Sequence

from ..errors import MixedModels


@dataclass(frozen=True)
class BallEntry:
    """A group element found by word-ball enumeration.

    ``word`` lists signed generator indices (1-based, negative for inverses)
    of the shortlex-first word reaching ``element``.
    """

    element: Any
    length: int
    word: tuple


class ModelSpace:
    """Common interface of the model spaces.

    Subclasses provide ``identity``, ``basepoint``, ``multiply``, ``inverse``,
    ``apply``, ``distance``, ``boundary_action`` and the formatting hooks.
    """

    kind = "abstract"
    exact = True
    is_tree = True
    tolerance = 0
    error_bound = 0

    # -- group structure -------------------------------------------------
    def generators(self) -> list:
        raise NotImplementedError

    def multiply(self, g, h):
        raise NotImplementedError

    def inverse(self, g):
        raise NotImplementedError

    def product(self, *elements):
        out = self.identity
        for g in elements:
            out = self.multiply(out, g)
        return out

    def power(self, g, n: int):
        if n < 0:
            g, n = self.inverse(g), -n
        out = self.identity
        base = g
        while n:
            if n & 1:
                out = self.multiply(out, base)
            base = self.multiply(base, base)
            n >>= 1
        return out

    def conjugate(self, x, y):
        """``x^y = y^-1 x y``."""
        return self.product(self.inverse(y), x, y)

    def commutator(self, f, g):
        """``[f, g] = f g f^-1 g^-1``."""
        return self.product(f, g, self.inverse(f), self.inverse(g))

    def is_identity(self, g) -> bool:
        return g == self.identity

    def acts_trivially(self, g) -> bool:
        """True if ``g`` is the identity isometry (kernel of the action)."""
        return self.is_identity(g)

    def evaluate(self, word: Sequence[int], gens: Sequence) -> Any:
        """Evaluate a word in signed generator indices over ``gens``."""
        out = self.identity
        for x in word:
            g = gens[abs(x) - 1]
            out = self.multiply(out, g if x > 0 else self.inverse(g))
        return out

    def ball(self, gens: Sequence, radius: int) -> list[BallEntry]:
        """Elements of word length at most ``radius`` over ``gens``.

        Breadth first with letters ordered ``g1 < g1^-1 < g2 < ...``; each
        element is recorded once, at its shortlex-first word.
        """
        letters = []
        for i, g in enumerate(gens, start=1):
            letters.append((i, g))
            letters.append((-i, self.inverse(g)))
        start = BallEntry(self.identity, 0, ())
        seen = {self.key(self.identity)}
        out = [start]
        frontier = [start]
        for n in range(1, radius + 1):
            nxt = []
            for entry in frontier:
                for idx, g in letters:
                    if entry.word and entry.word[-1] == -idx:
                        continue
                    h = self.multiply(entry.element, g)
                    k = self.key(h)
                    if k in seen:
                        continue
                    seen.add(k)
                    e = BallEntry(h, n, entry.word + (idx,))
                    nxt.append(e)
            out.extend(nxt)
            frontier = nxt
        return out

    def key(self, g) -> Hashable:
        return g

    # -- points ----------------------------------------------------------
    def check_point(self, x) -> None:
        if not self.is_point(x):
            raise MixedModels(f"{x!r} is not a point of the {self.kind} model")

    def check_element(self, g) -> None:
        if not self.is_element(g):
            raise MixedModels(f"{g!r} is not an element of the {self.kind} model")

    def is_point(self, x) -> bool:
        raise NotImplementedError

    def is_element(self, g) -> bool:
        raise NotImplementedError

    def le(self, a, b) -> bool:
        """``a <= b`` within the model tolerance."""
        return a <= b + self.tolerance

    def diameter(self, points: Iterable) -> Any:
        """Diameter of a finite point set.

        Exact double sweep in trees; exhaustive pairs otherwise.
        """
        pts = list(dict.fromkeys(points))
        if len(pts) < 2:
            return 0
        if self.is_tree:
            far = max(pts, key=lambda p: self.distance(pts[0], p))
            return max(self.distance(far, p) for p in pts)
        best = 0
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                best = max(best, self.distance(pts[i], pts[j]))
        return best

    def orbit(self, elements: Iterable, x=None) -> list:
        x = self.basepoint if x is None else x
        return [self.apply(g, x) for g in elements]

    def describe(self) -> dict:
        return {"kind": self.kind, "tolerance": str(self.tolerance)}

    def sentinels(self) -> list:
        """Boundary points singled out by the model (special ends)."""
        return []
