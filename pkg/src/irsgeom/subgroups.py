"""Subgroup handles with decidable membership, traces and recurrence checks.

Handle kinds:

* ``StallingsHandle``: finitely generated subgroups of a free group, via the
  folded core graph.
* ``CosetTableHandle``: finite-index subgroups, via a right action of the
  generators on cosets; coset 0 is the subgroup itself.
* ``CyclicHandle``: ``<w>`` for a single element (free group or SL(2, Z)).
* ``FiniteSetHandle``: an explicit finite subgroup.
* ``LampWindowHandle``: the lamp subgroup ``<a_lo, ..., a_hi>`` of the
  lamplighter group, too large to list for wide windows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import words as W
from .errors import Undecidable, UnsupportedKind
from .models.free import FreeGroupModel
from .models.halfplane import SL2, HalfPlaneModel
from .models.lamplighter import LampElement, LamplighterModel

INFINITE = math.inf


class SubgroupHandle:
    kind = "abstract"
    model: Any

    def contains(self, g) -> bool:
        raise NotImplementedError

    def generators(self) -> list:
        raise NotImplementedError

    def conjugate(self, g) -> "SubgroupHandle":
        raise UnsupportedKind(f"cannot conjugate a {self.kind} handle")

    def index(self):
        raise UnsupportedKind(f"index is not available for a {self.kind} handle")

    def canonical(self) -> Any:
        """A hashable value equal for handles with the same element set, or None."""
        return None

    def to_json(self) -> dict:
        raise NotImplementedError


# -- Stallings graphs ----------------------------------------------------


class _UnionFind:
    def __init__(self):
        self.parent: list[int] = []

    def add(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x


def _fold(n_vertices: int, edges: list[tuple[int, int, int]], base: int):
    """Fold a labeled graph; edges are ``(source, letter > 0, target)``.

    Returns the adjacency ``trans[v][x]`` (both signs of every letter) of
    the folded graph with vertices renamed ``0..m-1`` and the new base.
    """
    uf = _UnionFind()
    for _ in range(n_vertices):
        uf.add()
    adj: dict[int, dict[int, int]] = {v: {} for v in range(n_vertices)}
    pending = []
    for s, x, t in edges:
        pending.append((s, x, t))
        pending.append((t, -x, s))
    while pending:
        s, x, t = pending.pop()
        s, t = uf.find(s), uf.find(t)
        cur = adj[s].get(x)
        if cur is None:
            adj[s][x] = t
            continue
        cur = uf.find(cur)
        if cur == t:
            adj[s][x] = t
            continue
        # merge t into cur and re-queue t's edges at the survivor
        keep, gone = (cur, t) if cur < t else (t, cur)
        uf.parent[gone] = keep
        adj[s][x] = keep
        moved = adj.pop(gone)
        for y, w in moved.items():
            pending.append((keep, y, w))
    out: dict[int, dict[int, int]] = {}
    for v, row in adj.items():
        if uf.find(v) != v:
            continue
        out[v] = {x: uf.find(w) for x, w in row.items()}
    return out, uf.find(base)


def _prune(adj: dict[int, dict[int, int]], base: int):
    """Remove hanging trees (degree-1 vertices other than the base)."""
    changed = True
    while changed:
        changed = False
        for v in list(adj):
            if v != base and len(adj[v]) <= 1:
                for x, w in adj[v].items():
                    adj[w].pop(-x, None)
                del adj[v]
                changed = True
    return adj


def _canonical_relabel(adj: dict[int, dict[int, int]], base: int, letters: list[int]):
    """Relabel vertices in breadth-first order from the base, letters in shortlex order."""
    order = {base: 0}
    queue = [base]
    for v in queue:
        for x in letters:
            w = adj[v].get(x)
            if w is not None and w not in order:
                order[w] = len(order)
                queue.append(w)
    trans = [dict() for _ in range(len(order))]
    for v, i in order.items():
        for x in letters:
            w = adj[v].get(x)
            if w is not None:
                trans[i][x] = order[w]
    return trans


def _freeze(trans: list[dict]) -> tuple:
    return tuple(tuple(sorted(row.items())) for row in trans)


@dataclass(frozen=True)
class StallingsHandle(SubgroupHandle):
    """Folded core graph; vertex 0 is the base, ``trans[v][x]`` the edge labeled ``x``."""

    rank: int
    gens: tuple
    trans: tuple = field(repr=False)

    kind = "stallings"

    @property
    def model(self):
        return FreeGroupModel(self.rank)

    def automaton(self):
        return [dict(row) for row in self.trans], 0

    def contains(self, g) -> bool:
        g = W.reduce_word(g)
        v = 0
        for x in g:
            nxt = dict(self.trans[v]).get(x)
            if nxt is None:
                return False
            v = nxt
        return v == 0

    def generators(self) -> list:
        return list(self.gens)

    def schreier_generators(self) -> list:
        return _schreier([dict(r) for r in self.trans], 0, W.letters(self.rank))

    def conjugate(self, g) -> "StallingsHandle":
        return stallings_from_generators([W.conjugate(w, g) for w in self.gens], self.rank)

    def index(self):
        if all(len(row) == 2 * self.rank for row in self.trans):
            return len(self.trans)
        return INFINITE

    def canonical(self):
        return ("graph", self.rank, self.trans)

    def edges(self) -> list[tuple[int, int, int]]:
        return [(v, x, w) for v, row in enumerate(self.trans) for x, w in row if x > 0]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "rank": self.rank,
            "basepoint": 0,
            "generators": [W.format_word(w) for w in self.gens],
            "adjacency": [
                {W.format_word((x,)): w for x, w in row if x > 0} for row in self.trans
            ],
        }


def stallings_graph(words: Sequence, rank: int, edge_order=None):
    """Folded, pruned graph of ``<words>`` as ``(trans, base)`` with canonical labels.

    ``edge_order`` optionally permutes the initial edge list (folding is
    confluent, so the result does not depend on it).
    """
    edges = []
    n = 1
    for w in words:
        w = W.reduce_word(w)
        if not w:
            continue
        prev = 0
        for i, x in enumerate(w):
            if i == len(w) - 1:
                nxt = 0
            else:
                nxt = n
                n += 1
            if x > 0:
                edges.append((prev, x, nxt))
            else:
                edges.append((nxt, -x, prev))
            prev = nxt
    if edge_order is not None:
        edges = [edges[i] for i in edge_order]
    adj, base = _fold(n, edges, 0)
    adj = _prune(adj, base)
    return _canonical_relabel(adj, base, W.letters(rank)), 0


def stallings_from_generators(words: Sequence, rank: int = 2) -> StallingsHandle:
    trans, _ = stallings_graph(words, rank)
    gens = tuple(W.reduce_word(w) for w in words if W.reduce_word(w))
    return StallingsHandle(rank, gens, _freeze(trans))


def _schreier(trans: list[dict], base: int, letters: list[int]) -> list:
    """Free generators read off a spanning tree of the graph (one per non-tree edge pair)."""
    path = {base: ()}
    queue = [base]
    tree = set()
    for v in queue:
        for x in letters:
            w = trans[v].get(x)
            if w is not None and w not in path:
                path[w] = path[v] + (x,)
                tree.add((v, x))
                tree.add((w, -x))
                queue.append(w)
    out = []
    seen = set()
    for v in range(len(trans)):
        for x in letters:
            w = trans[v].get(x)
            if w is None or (v, x) in tree:
                continue
            key = (v, x) if x > 0 else (w, -x)
            if key in seen:
                continue
            seen.add(key)
            g = W.multiply(path[key[0]], (key[1],), W.inverse(path[trans[key[0]][key[1]]]))
            out.append(g)
    return sorted(set(out), key=W.shortlex_key)


# -- coset tables --------------------------------------------------------


@dataclass(frozen=True)
class CosetTableHandle(SubgroupHandle):
    """Finite-index subgroup given by a right action of the generators on cosets.

    ``table[i][c]`` is ``c . g_{i+1}``; the subgroup is the stabilizer of coset 0.
    The model is a free group of rank ``len(table)`` unless ``model`` is given
    with matching ``generators`` (e.g. SL(2, Z) elements).
    """

    table: tuple
    model: Any = None
    ambient_gens: tuple | None = None

    kind = "coset_table"

    def __post_init__(self):
        m = len(self.table[0]) if self.table else 1
        for row in self.table:
            if sorted(row) != list(range(m)):
                raise ValueError("coset table rows must be permutations")
        if self.model is None:
            object.__setattr__(self, "model", FreeGroupModel(max(len(self.table), 2)))

    @property
    def size(self) -> int:
        return len(self.table[0]) if self.table else 1

    @property
    def rank(self) -> int:
        return len(self.table)

    def _inverse_rows(self):
        inv = []
        for row in self.table:
            r = [0] * len(row)
            for c, d in enumerate(row):
                r[d] = c
            inv.append(r)
        return inv

    def act(self, c: int, word) -> int:
        inv = self._inverse_rows()
        for x in word:
            c = self.table[x - 1][c] if x > 0 else inv[-x - 1][c]
        return c

    def automaton(self):
        inv = self._inverse_rows()
        trans = []
        for c in range(self.size):
            row = {}
            for i in range(self.rank):
                row[i + 1] = self.table[i][c]
                row[-(i + 1)] = inv[i][c]
            trans.append(row)
        return trans, 0

    def _word_of(self, g):
        if isinstance(self.model, FreeGroupModel):
            return g
        raise Undecidable("membership needs a word in the table's generators")

    def contains(self, g) -> bool:
        if isinstance(g, tuple) and all(isinstance(x, int) for x in g):
            return self.act(0, g) == 0
        return self.act(0, self._word_of(g)) == 0

    def generators(self) -> list:
        trans, _ = self.automaton()
        return _schreier(trans, 0, W.letters(self.rank))

    schreier_generators = generators

    def rebase(self, c: int) -> "CosetTableHandle":
        """The stabilizer of coset ``c``, relabeled so that ``c`` becomes 0."""
        trans, _ = self.automaton()
        new = _canonical_relabel({i: row for i, row in enumerate(trans)}, c, W.letters(self.rank))
        table = tuple(tuple(new[v][i + 1] for v in range(len(new))) for i in range(self.rank))
        return CosetTableHandle(table, self.model, self.ambient_gens)

    def conjugate(self, g) -> "CosetTableHandle":
        # w in g H g^-1  iff  (0 . g^-1) . w = 0 . g^-1
        return self.rebase(self.act(0, W.inverse(self._word_of(g))))

    def index(self) -> int:
        return self.size

    def canonical(self):
        return ("table", self.rebase(0).table)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "size": self.size,
            "generator_images": [list(r) for r in self.table],
        }


def coset_table_from_permutations(perms: Sequence[Sequence[int]], point: int = 0) -> CosetTableHandle:
    """Stabilizer of ``point`` for the left action ``g.x = perm_g[x]``.

    Reading words left to right needs a right action, ``c . s = perm_s^-1(c)``;
    then ``c . w = perm_w^-1(c)``, which fixes ``point`` iff ``w`` does.
    """
    table = []
    for p in perms:
        inv = [0] * len(p)
        for x, y in enumerate(p):
            inv[y] = x
        table.append(tuple(inv))
    raw = CosetTableHandle(tuple(table))
    return raw.rebase(point)


# -- special handles -----------------------------------------------------


@dataclass(frozen=True)
class CyclicHandle(SubgroupHandle):
    generator: Any
    model: Any

    kind = "cyclic"

    def contains(self, g) -> bool:
        m = self.model
        if isinstance(m, FreeGroupModel):
            return _free_power_test(self.generator, W.reduce_word(g))
        if isinstance(m, HalfPlaneModel):
            return _matrix_power_test(self.generator, g)
        if isinstance(m, LamplighterModel):
            return _lamp_power_test(m, self.generator, g)
        raise Undecidable(f"no membership test for cyclic subgroups of {m!r}")

    def generators(self) -> list:
        return [self.generator]

    def conjugate(self, g) -> "CyclicHandle":
        m = self.model
        return CyclicHandle(m.product(g, self.generator, m.inverse(g)), m)

    def index(self):
        if isinstance(self.model, FreeGroupModel):
            return INFINITE
        raise UnsupportedKind("index of a cyclic handle outside the free group")

    def canonical(self):
        m = self.model
        inv = m.inverse(self.generator)
        gens = sorted([self.generator, inv], key=lambda x: str(m.format_element(x)))
        return ("cyclic", m.kind, m.format_element(gens[0]))

    def to_json(self) -> dict:
        return {"kind": self.kind, "generator": self.model.format_element(self.generator)}


def _free_power_test(w, g) -> bool:
    if not g:
        return True
    if not w:
        return False
    u, c = W.cyclic_decomposition(w)
    if len(g) < 2 * len(u) or (len(g) - 2 * len(u)) % len(c):
        return False
    n = (len(g) - 2 * len(u)) // len(c)
    return g in (W.power(w, n), W.power(w, -n))


def _matrix_power_test(gen: SL2, g: SL2) -> bool:
    def same(p):
        return p == g or (p.a == -g.a and p.b == -g.b and p.c == -g.c and p.d == -g.d)

    if same(SL2(1, 0, 0, 1)):
        return True
    bound = g.max_entry()
    for h in (gen, gen.inv()):
        p = h
        for n in range(1, 10_000):
            if same(p):
                return True
            if abs(p.trace) < 2 and n > 12:
                break  # finite order, cycle exhausted
            if p.max_entry() > bound and n > 12:
                break
            p = p @ h
    return False


def _lamp_power_test(m: LamplighterModel, gen: LampElement, g: LampElement) -> bool:
    if gen.shift == 0:
        return g == m.identity or g == gen
    if g.shift % gen.shift:
        return False
    return m.power(gen, g.shift // gen.shift) == g


@dataclass(frozen=True)
class FiniteSetHandle(SubgroupHandle):
    elements: tuple
    model: Any

    kind = "finite_set"

    def __post_init__(self):
        keys = {self.model.key(x) for x in self.elements}
        object.__setattr__(self, "_keys", frozenset(keys))

    def contains(self, g) -> bool:
        return self.model.key(g) in self._keys

    def generators(self) -> list:
        return [g for g in self.elements if not self.model.is_identity(g)]

    def conjugate(self, g) -> "FiniteSetHandle":
        m = self.model
        return FiniteSetHandle(tuple(m.product(g, x, m.inverse(g)) for x in self.elements), m)

    def canonical(self):
        return ("finite", self.model.kind, tuple(sorted(str(self.model.format_element(x)) for x in self.elements)))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "elements": sorted(str(self.model.format_element(x)) for x in self.elements),
        }


def trivial_handle(model) -> FiniteSetHandle:
    return FiniteSetHandle((model.identity,), model)


@dataclass(frozen=True)
class LampWindowHandle(SubgroupHandle):
    """``<a_lo, ..., a_hi>``: shift-free lamplighter elements lit only in ``[lo, hi]``."""

    lo: int
    hi: int
    model: Any = field(default_factory=LamplighterModel)

    kind = "lamp_window"

    def contains(self, g: LampElement) -> bool:
        return g.shift == 0 and all(self.lo <= x <= self.hi for x in g.support)

    def generators(self) -> list:
        return [self.model.lamp(i) for i in range(self.lo, self.hi + 1)]

    def conjugate(self, g: LampElement) -> "LampWindowHandle":
        # lamps commute with lamps; conjugating by a shift moves the window
        return LampWindowHandle(self.lo + g.shift, self.hi + g.shift, self.model)

    def order(self) -> int:
        return 2 ** (self.hi - self.lo + 1)

    def canonical(self):
        return ("lamps", self.lo, self.hi)

    def to_json(self) -> dict:
        return {"kind": self.kind, "lo": self.lo, "hi": self.hi}


# -- module-level operations ---------------------------------------------


def contains(H: SubgroupHandle, g) -> bool:
    return H.contains(g)


def conjugate_handle(H: SubgroupHandle, g) -> SubgroupHandle:
    """A handle for ``g H g^-1``."""
    return H.conjugate(g)


def index(H: SubgroupHandle):
    if not isinstance(H, (StallingsHandle, CosetTableHandle)):
        raise UnsupportedKind(f"index needs a graph or coset table, not {H.kind}")
    return H.index()


@dataclass
class NeighborhoodTrace:
    F: list
    trace: list

    def key(self) -> frozenset:
        return frozenset(self.trace)


def trace(H: SubgroupHandle, F: Sequence) -> NeighborhoodTrace:
    F = list(F)
    return NeighborhoodTrace(F, [f for f in F if H.contains(f)])


def _trace_bits(H, F) -> tuple:
    return tuple(H.contains(f) for f in F)


@dataclass
class RecurrenceVerdict:
    status: str
    n: int | None
    g: Any
    F: list
    search_bound: int

    def __str__(self):
        return f"{self.status}({self.n if self.status == 'Verified' else self.search_bound})"


def recurrence_check(H: SubgroupHandle, g, F: Sequence, N: int) -> RecurrenceVerdict:
    """Least ``1 <= n <= N`` with ``g^n H g^-n`` and ``H`` agreeing on ``F``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    F = list(F)
    target = _trace_bits(H, F)
    K = H
    for n in range(1, N + 1):
        K = K.conjugate(g)
        if _trace_bits(K, F) == target:
            return RecurrenceVerdict("Verified", n, g, F, N)
    return RecurrenceVerdict("RefutedUpTo", None, g, F, N)


def conjugate_return_check(H: SubgroupHandle, h, g, N: int) -> list[int]:
    """All ``n <= N`` with ``h^(g^n) = g^-n h g^n`` in ``H``."""
    if not H.contains(h):
        raise ValueError("h must lie in H")
    m = H.model
    out = []
    gn = m.identity
    for n in range(1, N + 1):
        gn = m.multiply(gn, g)
        if H.contains(m.conjugate(h, gn)):
            out.append(n)
    return out


def same_subgroup(H: SubgroupHandle, K: SubgroupHandle, probes: Sequence | None = None) -> bool:
    """Exact equality when both handles have canonical forms, else agreement on ``probes``."""
    a, b = H.canonical(), K.canonical()
    if a is not None and b is not None and a[0] == b[0]:
        return a == b
    if probes is None:
        raise Undecidable("handles of different kinds need a probe set")
    return _trace_bits(H, probes) == _trace_bits(K, probes)


def handle_from_json(doc: dict, model=None) -> SubgroupHandle:
    kind = doc["kind"]
    if kind == "stallings":
        return stallings_from_generators([W.parse_word(s) for s in doc["generators"]], doc["rank"])
    if kind == "coset_table":
        perms = doc["generator_images"]
        return CosetTableHandle(tuple(tuple(r) for r in perms), model)
    if kind == "cyclic":
        return CyclicHandle(model.parse_element(doc["generator"]), model)
    if kind == "finite_set":
        return FiniteSetHandle(tuple(model.parse_element(s) for s in doc["elements"]), model)
    if kind == "lamp_window":
        return LampWindowHandle(doc["lo"], doc["hi"])
    raise UnsupportedKind(kind)
