"""Invariant random subgroups from finite measure-preserving actions.

A finite action of the free group assigns a permutation of ``{0..m-1}``
to each generator; a word acts on the left, ``(uv).x = u.(v.x)``.  The
stabilizer IRS pushes the point weights forward along ``x -> Stab(x)``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import words as W
from .errors import NotInvariant
from .subgroups import (
    CosetTableHandle,
    SubgroupHandle,
    coset_table_from_permutations,
    handle_from_json,
    same_subgroup,
)


@dataclass(frozen=True)
class FiniteAction:
    perms: tuple
    weights: tuple | None = None
    names: tuple | None = None

    def __post_init__(self):
        m = self.m
        for p in self.perms:
            if sorted(p) != list(range(m)):
                raise ValueError(f"{list(p)} is not a permutation of 0..{m - 1}")
        if self.weights is not None:
            if len(self.weights) != m or any(w < 0 for w in self.weights):
                raise ValueError("weights must be nonnegative, one per point")
            if sum(self.weights) != 1:
                raise ValueError("weights must sum to 1")

    @property
    def m(self) -> int:
        return len(self.perms[0])

    @property
    def rank(self) -> int:
        return len(self.perms)

    def weight(self, x: int) -> Fraction:
        return Fraction(1, self.m) if self.weights is None else Fraction(self.weights[x])

    def apply_letter(self, s: int, x: int) -> int:
        p = self.perms[abs(s) - 1]
        return p[x] if s > 0 else p.index(x)

    def apply_word(self, w: Sequence[int], x: int) -> int:
        for s in reversed(w):
            x = self.apply_letter(s, x)
        return x

    def orbits(self) -> list[list[int]]:
        parent = list(range(self.m))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for p in self.perms:
            for x, y in enumerate(p):
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[max(rx, ry)] = min(rx, ry)
        groups: dict[int, list[int]] = {}
        for x in range(self.m):
            groups.setdefault(find(x), []).append(x)
        return sorted(groups.values())

    def generator_names(self) -> list[str]:
        if self.names:
            return list(self.names)
        return [W.format_word((i,)) for i in range(1, self.rank + 1)]

    def to_json(self) -> dict:
        doc: dict = {
            "m": self.m,
            "generators": {n: list(p) for n, p in zip(self.generator_names(), self.perms)},
        }
        if self.weights is not None:
            doc["weights"] = [str(Fraction(w)) for w in self.weights]
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "FiniteAction":
        gens = doc["generators"]
        names = sorted(gens, key=lambda n: W.shortlex_key(W.parse_word(n)))
        perms = tuple(tuple(gens[n]) for n in names)
        if len(perms[0]) != doc["m"]:
            raise ValueError("permutation length does not match m")
        weights = doc.get("weights")
        if weights is not None:
            weights = tuple(Fraction(w) for w in weights)
        return cls(perms, weights, tuple(names))


def action_from_cycles(m: int, *cycles_per_gen) -> FiniteAction:
    """Build an action from 1-based cycle lists, e.g. ``[(1, 2, 3)]``."""
    perms = []
    for cycles in cycles_per_gen:
        p = list(range(m))
        for cyc in cycles:
            for i, x in enumerate(cyc):
                p[x - 1] = cyc[(i + 1) % len(cyc)] - 1
        perms.append(tuple(p))
    return FiniteAction(tuple(perms))


def random_transitive_action(rng: random.Random, m: int, rank: int = 2) -> FiniteAction:
    while True:
        perms = []
        for _ in range(rank):
            p = list(range(m))
            rng.shuffle(p)
            perms.append(tuple(p))
        act = FiniteAction(tuple(perms))
        if len(act.orbits()) == 1:
            return act


def stabilizer(action: FiniteAction, x: int, gens=None) -> CosetTableHandle:
    """Coset table of ``Stab(x)`` on the orbit of ``x``, with ``x`` as coset 0."""
    if not 0 <= x < action.m:
        raise ValueError("point out of range")
    return coset_table_from_permutations(action.perms, x)


@dataclass
class IRSMeasure:
    atoms: list
    provenance: str = ""
    unseparated: list = field(default_factory=list)

    def total(self) -> Fraction:
        return sum((w for _, w in self.atoms), Fraction(0))

    def to_json(self) -> dict:
        return {
            "provenance": self.provenance,
            "atoms": [
                {"id": i, "handle": h.to_json(), "weight": _pq(w)}
                for i, (h, w) in enumerate(self.atoms)
            ],
        }

    @classmethod
    def from_json(cls, doc: dict, model=None) -> "IRSMeasure":
        atoms = [
            (handle_from_json(a["handle"], model), Fraction(a["weight"])) for a in doc["atoms"]
        ]
        return cls(atoms, doc.get("provenance", ""))


def _pq(w: Fraction) -> str:
    return f"{w.numerator}/{w.denominator}"


def merge_atoms(atoms: Sequence[tuple], probes: Sequence | None = None) -> tuple[list, list]:
    """Merge equal handles, adding weights; also report distinct handles the probes miss."""
    merged: list = []
    for h, w in atoms:
        for i, (k, v) in enumerate(merged):
            if same_subgroup(h, k, probes):
                merged[i] = (k, v + w)
                break
        else:
            merged.append((h, w))
    unseparated = []
    if probes is not None:
        for i in range(len(merged)):
            for j in range(i + 1, len(merged)):
                a, b = merged[i][0], merged[j][0]
                if all(a.contains(f) == b.contains(f) for f in probes):
                    unseparated.append((i, j))
    return merged, unseparated


def stabilizer_irs(action: FiniteAction, gens=None, probe_radius: int = 3) -> IRSMeasure:
    """Pushforward of the point weights under ``x -> Stab(x)``.

    Stabilizers are merged when their canonical coset tables agree, which is
    exact; pairs of distinct stabilizers that the radius-``probe_radius``
    ball fails to separate are listed in ``unseparated``.
    """
    atoms = [(stabilizer(action, x), action.weight(x)) for x in range(action.m)]
    probes = W.ball(action.rank, probe_radius)
    merged, unseparated = merge_atoms(atoms, probes)
    return IRSMeasure(merged, "stabilizers of a finite action", unseparated)


@dataclass
class InvarianceVerdict:
    invariant: bool
    classes: int
    checked: list


def _class_weights(atoms, F) -> dict:
    out: dict = {}
    for h, w in atoms:
        key = tuple(h.contains(f) for f in F)
        out[key] = out.get(key, Fraction(0)) + w
    return out


def verify_invariance(mu: IRSMeasure, gens: Sequence, F: Sequence) -> InvarianceVerdict:
    """Exact equality of ``mu`` and its pushforward under ``H -> g H g^-1`` on trace classes over ``F``."""
    F = list(F)
    if mu.total() != 1:
        raise ValueError("measure weights do not sum to 1")
    base = _class_weights(mu.atoms, F)
    for g in gens:
        pushed = [(h.conjugate(g), w) for h, w in mu.atoms]
        assert sum(w for _, w in pushed) == 1
        moved = _class_weights(pushed, F)
        if moved != base:
            bad = next(k for k in set(base) | set(moved) if base.get(k) != moved.get(k))
            trace = [f for f, bit in zip(F, bad) if bit]
            raise NotInvariant(g, trace)
    return InvarianceVerdict(True, len(base), list(gens))


@dataclass
class ErgodicityVerdict:
    ergodic: bool
    orbits: list

    def __str__(self):
        return "Ergodic" if self.ergodic else f"NotErgodic({len(self.orbits)} orbits)"


def verify_ergodicity(action: FiniteAction) -> ErgodicityVerdict:
    """For uniform finite actions ergodicity is transitivity."""
    if action.weights is not None and any(w != Fraction(1, action.m) for w in action.weights):
        raise ValueError("ergodicity is checked for uniform weights only")
    orbits = action.orbits()
    return ErgodicityVerdict(len(orbits) == 1, orbits)


def disjoint_union(a: FiniteAction, b: FiniteAction) -> FiniteAction:
    perms = tuple(
        tuple(list(p) + [y + a.m for y in q]) for p, q in zip(a.perms, b.perms)
    )
    return FiniteAction(perms)


def dirac(handle: SubgroupHandle, note: str = "") -> IRSMeasure:
    return IRSMeasure([(handle, Fraction(1))], note or "point mass")


def load_action(path: str) -> FiniteAction:
    with open(path, encoding="utf-8") as fh:
        return FiniteAction.from_json(json.load(fh))


__all__ = [
    "FiniteAction",
    "IRSMeasure",
    "action_from_cycles",
    "dirac",
    "disjoint_union",
    "random_transitive_action",
    "stabilizer",
    "stabilizer_irs",
    "verify_ergodicity",
    "verify_invariance",
]

