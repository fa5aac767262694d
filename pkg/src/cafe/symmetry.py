"""Partition-respecting automorphisms of constraint graphs and their action on arrays.

An element is a column permutation together with one symbol bijection per
column; it sends vertex ``(i, a)`` to ``(perm[i], maps[i][a])``.  Composition is
right to left: ``compose(a, b)`` applies ``b`` first.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph import BudgetExceeded, ConstraintGraph, Pair, Vertex
from .verify import CoverArray

DEFAULT_GROUP_BUDGET = 10**8
DEFAULT_CLOSURE_BUDGET = 10**6


@dataclass(frozen=True, order=True)
class GroupElement:
    perm: tuple[int, ...]
    maps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        k = len(self.perm)
        if sorted(self.perm) != list(range(k)):
            raise ValueError(f"column permutation {self.perm} is not a bijection")
        if len(self.maps) != k:
            raise ValueError("need one symbol map per column")
        v = len(self.maps[0]) if k else 0
        for m in self.maps:
            if sorted(m) != list(range(v)):
                raise ValueError(f"symbol map {m} is not a bijection on 0..{v - 1}")

    @classmethod
    def identity(cls, k: int, v: int) -> "GroupElement":
        return cls(tuple(range(k)), tuple(tuple(range(v)) for _ in range(k)))

    @property
    def k(self) -> int:
        return len(self.perm)

    @property
    def v(self) -> int:
        return len(self.maps[0])

    def is_identity(self) -> bool:
        return self == GroupElement.identity(self.k, self.v)

    def __call__(self, x: Vertex) -> Vertex:
        i, a = x
        return Vertex(self.perm[i], self.maps[i][a])

    def apply_pair(self, p: Pair) -> Pair:
        return Pair.of(self(p.a), self(p.b))

    def apply_arc(self, arc: tuple[Vertex, Vertex]) -> tuple[Vertex, Vertex]:
        return self(arc[0]), self(arc[1])

    def apply_row(self, row: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.k
        for i, s in enumerate(row):
            out[self.perm[i]] = self.maps[i][s]
        return tuple(out)

    def apply_array(self, a: CoverArray) -> CoverArray:
        """Image of every row, in the original row order."""
        return CoverArray(tuple(self.apply_row(r) for r in a.rows), a.v)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return compose(self, other)

    def __pow__(self, n: int) -> "GroupElement":
        out = GroupElement.identity(self.k, self.v)
        base = self if n >= 0 else inverse(self)
        for _ in range(abs(n)):
            out = compose(base, out)
        return out

    def order(self) -> int:
        e, n = self, 1
        while not e.is_identity():
            e, n = compose(self, e), n + 1
        return n

    def machine(self) -> str:
        maps = " ".join(",".join(map(str, m)) for m in self.maps)
        return f"perm {' '.join(map(str, self.perm))} | maps {maps}"

    def cycles(self) -> str:
        """Cycle notation on vertex labels; ``()`` for the identity."""
        seen: set[Vertex] = set()
        parts = []
        for x in (Vertex(i, a) for i in range(self.k) for a in range(self.v)):
            if x in seen:
                continue
            cyc = [x]
            seen.add(x)
            y = self(x)
            while y != x:
                cyc.append(y)
                seen.add(y)
                y = self(y)
            if len(cyc) > 1:
                parts.append("(" + " ".join(z.label() for z in cyc) + ")")
        return "".join(parts) or "()"


def _unchecked(perm: tuple[int, ...], maps: tuple[tuple[int, ...], ...]) -> GroupElement:
    e = object.__new__(GroupElement)
    object.__setattr__(e, "perm", perm)
    object.__setattr__(e, "maps", maps)
    return e


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    """The element that applies ``b`` first, then ``a``."""
    if len(a.perm) != len(b.perm) or len(a.maps[0]) != len(b.maps[0]):
        raise ValueError(f"cannot compose elements over (k,v)=({a.k},{a.v}) and ({b.k},{b.v})")
    ap, am = a.perm, a.maps
    perm = tuple(ap[j] for j in b.perm)
    maps = tuple(tuple(am[j][x] for x in m) for j, m in zip(b.perm, b.maps))
    return _unchecked(perm, maps)


def inverse(e: GroupElement) -> GroupElement:
    perm = [0] * e.k
    maps: list[tuple[int, ...]] = [()] * e.k
    for i in range(e.k):
        j = e.perm[i]
        perm[j] = i
        m = [0] * e.v
        for s, t in enumerate(e.maps[i]):
            m[t] = s
        maps[j] = tuple(m)
    return _unchecked(tuple(perm), tuple(maps))


_VERTEX = re.compile(r"v_?\(?\{?\s*(\d+)\s*,\s*(\d+)\s*\}?\)?")


def parse_cycles(text: str, k: int, v: int) -> GroupElement:
    """Parse cycle notation such as ``(v(0,0) v(1,0))(v(0,1) v(1,2))``.

    Vertex labels may also be written ``v_{0,0}``; separators between vertices
    inside a cycle may be spaces or commas.  The result must respect the
    column partition.
    """
    mapping: dict[Vertex, Vertex] = {}
    for body in re.findall(r"\(((?:[^()]|\([^()]*\))*)\)", text):
        verts = [Vertex(int(i), int(a)) for i, a in _VERTEX.findall(body)]
        for x, y in zip(verts, verts[1:] + verts[:1]):
            if x in mapping:
                raise ValueError(f"vertex {x.label()} appears in two cycles")
            mapping[x] = y
    perm: list[int | None] = [None] * k
    maps = [[s for s in range(v)] for _ in range(k)]
    for i in range(k):
        for a in range(v):
            j, b = mapping.get(Vertex(i, a), Vertex(i, a))
            if not (0 <= j < k and 0 <= b < v):
                raise ValueError(f"vertex v({j},{b}) out of range")
            if perm[i] is None:
                perm[i] = j
            elif perm[i] != j:
                raise ValueError(f"column {i} is split across columns; not partition-respecting")
            maps[i][a] = b
    return GroupElement(tuple(perm), tuple(tuple(m) for m in maps))  # type: ignore[arg-type]


def parse_machine(text: str) -> GroupElement:
    head, _, tail = text.partition("|")
    perm_tok = head.split()
    map_tok = tail.split()
    if not perm_tok or perm_tok[0] != "perm" or not map_tok or map_tok[0] != "maps":
        raise ValueError(f"malformed group element {text!r}")
    perm = tuple(int(x) for x in perm_tok[1:])
    maps = tuple(tuple(int(x) for x in block.split(",")) for block in map_tok[1:])
    return GroupElement(perm, maps)


def is_automorphism(g: ConstraintGraph, e: GroupElement) -> bool:
    if (e.k, e.v) != (g.k, g.v):
        return False
    return all(e.apply_pair(x) in g.edges for x in g.edges)


@dataclass(frozen=True)
class Group:
    elements: tuple[GroupElement, ...]
    k: int
    v: int
    given_generators: tuple[GroupElement, ...] | None = None

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, e: object) -> bool:
        return e in self.element_set

    @property
    def order(self) -> int:
        return len(self.elements)

    def _cached(self, name, build):
        val = self.__dict__.get(name)
        if val is None:
            val = build()
            object.__setattr__(self, name, val)
        return val

    @property
    def generators(self) -> tuple[GroupElement, ...]:
        """Given generators, or a greedy generating set taken in element order."""
        if self.given_generators is not None:
            return self.given_generators
        return self._cached("_gens", lambda: _greedy_generators(self.elements, self.k, self.v))

    @property
    def element_set(self) -> frozenset[GroupElement]:
        return self._cached("_set", lambda: frozenset(self.elements))

    @classmethod
    def trivial(cls, k: int, v: int) -> "Group":
        return cls((GroupElement.identity(k, v),), k, v, ())

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """``(inverse perms (G, k), maps (G, k, v))`` for vectorised action."""

        def build():
            perms = np.array([e.perm for e in self.elements], dtype=np.int64)
            maps = np.array([e.maps for e in self.elements], dtype=np.int64)
            return np.argsort(perms, axis=1), maps

        return self._cached("_arrays", build)


def candidate_count(k: int, v: int) -> int:
    return math.factorial(k) * math.factorial(v) ** k


def automorphism_group(g: ConstraintGraph, budget: int = DEFAULT_GROUP_BUDGET) -> Group:
    """All partition-respecting automorphisms, by filtering every candidate.

    Candidates are visited lexicographically (column permutation, then symbol
    maps); the result keeps that order.  Generators are chosen greedily in the
    same order.
    """
    total = candidate_count(g.k, g.v)
    if total > budget:
        raise BudgetExceeded(f"{total} candidate elements exceeds budget {budget}")
    sym_perms = list(itertools.permutations(range(g.v)))
    found = []
    for perm in itertools.permutations(range(g.k)):
        for maps in itertools.product(sym_perms, repeat=g.k):
            e = _unchecked(perm, maps)
            if is_automorphism(g, e):
                found.append(e)
    return Group(tuple(found), g.k, g.v)


def _greedy_generators(elements: Sequence[GroupElement], k: int, v: int) -> tuple[GroupElement, ...]:
    gens: list[GroupElement] = []
    span = {GroupElement.identity(k, v)}
    for e in elements:
        if e not in span:
            gens.append(e)
            span = set(_bfs_closure(gens, k, v, budget=None))
    return tuple(gens)


def _bfs_closure(gens: Sequence[GroupElement], k: int, v: int, budget: int | None) -> list[GroupElement]:
    ident = GroupElement.identity(k, v)
    seen = {ident}
    order = [ident]
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for s in gens:
            y = compose(x, s)
            if y not in seen:
                seen.add(y)
                order.append(y)
                if budget is not None and len(seen) > budget:
                    raise BudgetExceeded(f"closure exceeds {budget} elements")
                queue.append(y)
    return order


def closure(generators: Sequence[GroupElement], k: int | None = None, v: int | None = None,
            budget: int = DEFAULT_CLOSURE_BUDGET) -> Group:
    """Smallest group containing ``generators``; elements sorted lexicographically."""
    gens = tuple(generators)
    if gens:
        k, v = gens[0].k, gens[0].v
        if any((s.k, s.v) != (k, v) for s in gens):
            raise ValueError("generators are over different (k, v)")
    elif k is None or v is None:
        raise ValueError("closure of no generators needs explicit k and v")
    elements = sorted(_bfs_closure(gens, k, v, budget))
    return Group(tuple(elements), k, v, gens)


def _act(e: GroupElement, x):
    if isinstance(x, Pair):
        return e.apply_pair(x)
    if isinstance(x, Vertex):
        return e(x)
    if isinstance(x, tuple) and len(x) == 2 and all(isinstance(y, tuple) for y in x):
        return e.apply_arc((Vertex(*x[0]), Vertex(*x[1])))
    raise TypeError(f"cannot act on {x!r}")


def orbit(grp: Group, x) -> frozenset:
    """Orbit of a vertex, an arc (ordered vertex pair) or a Pair."""
    if isinstance(x, tuple) and not isinstance(x, (Pair, Vertex)):
        x = (Vertex(*x[0]), Vertex(*x[1]))
    return frozenset(_act(e, x) for e in grp)


def orbits(grp: Group, universe: Iterable) -> list[frozenset]:
    """Partition ``universe`` into orbits, in order of first appearance."""
    out: list[frozenset] = []
    covered: set = set()
    for x in universe:
        if x not in covered:
            o = orbit(grp, x)
            out.append(o)
            covered |= o
    return out


def arcs(g: ConstraintGraph) -> list[tuple[Vertex, Vertex]]:
    return sorted([(e.a, e.b) for e in g.edges] + [(e.b, e.a) for e in g.edges])


def is_arc_transitive(g: ConstraintGraph, grp: Group) -> bool:
    all_arcs = arcs(g)
    if not all_arcs:
        return True
    return orbit(grp, all_arcs[0]) == frozenset(all_arcs)


def is_vertex_transitive(g: ConstraintGraph, grp: Group) -> bool:
    return orbit(grp, Vertex(0, 0)) == frozenset(g.vertices())


def _images(a: CoverArray, grp: Group) -> np.ndarray:
    """Row codes of every group image of ``a``, rows sorted: shape (|grp|, N)."""
    if (a.k, a.v) != (grp.k, grp.v):
        raise ValueError(f"array is k={a.k}, v={a.v} but group is over k={grp.k}, v={grp.v}")
    inv, maps = grp.as_arrays()
    arr = np.asarray(a.rows, dtype=np.int64)
    g_idx = np.arange(len(grp))[:, None, None]
    # image[g, n, j] = maps[g, inv[g, j], arr[n, inv[g, j]]]
    src = inv[:, None, :]
    sym = arr[:, inv].transpose(1, 0, 2)
    img = maps[g_idx, src, sym]
    weights = a.v ** np.arange(a.k - 1, -1, -1, dtype=np.int64)
    codes = img @ weights
    codes.sort(axis=1)
    return codes


def _lex_min_index(codes: np.ndarray) -> int:
    # np.lexsort is stable, so ties resolve to the earliest group element
    return int(np.lexsort(codes.T[::-1])[0])


def _decode(codes: Sequence[int], k: int, v: int) -> tuple[tuple[int, ...], ...]:
    rows = []
    for c in codes:
        c = int(c)
        r = [0] * k
        for j in range(k - 1, -1, -1):
            c, r[j] = divmod(c, v)
        rows.append(tuple(r))
    return tuple(rows)


def canonical_form(a: CoverArray, grp: Group) -> CoverArray:
    """Lexicographically least row-sorted image of ``a`` over ``grp``."""
    codes = _images(a, grp)
    best = codes[_lex_min_index(codes)]
    return CoverArray(_decode(best, a.k, a.v), a.v)


def canonical_with_element(a: CoverArray, grp: Group) -> tuple[CoverArray, GroupElement]:
    codes = _images(a, grp)
    i = _lex_min_index(codes)
    return CoverArray(_decode(codes[i], a.k, a.v), a.v), grp.elements[i]


@dataclass(frozen=True)
class IsoWitness:
    element: GroupElement
    row_perm: tuple[int, ...]  # image of a.rows[n] is b.rows[row_perm[n]]


def arrays_isomorphic(a: CoverArray, b: CoverArray, grp: Group) -> tuple[bool, IsoWitness | None]:
    if (a.N, a.k, a.v) != (b.N, b.k, b.v):
        return False, None
    ca, ea = canonical_with_element(a, grp)
    cb, eb = canonical_with_element(b, grp)
    if ca != cb:
        return False, None
    e = compose(inverse(eb), ea)
    image = [e.apply_row(r) for r in a.rows]
    free: dict[tuple[int, ...], list[int]] = {}
    for n, r in enumerate(b.rows):
        free.setdefault(r, []).append(n)
    row_perm = tuple(free[r].pop(0) for r in image)
    return True, IsoWitness(e, row_perm)
