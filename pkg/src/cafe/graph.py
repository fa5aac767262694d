"""Constraint graphs: k-partite graphs of forbidden cross-column symbol pairs.

A vertex ``Vertex(i, a)`` stands for "symbol ``a`` in column ``i``".  An edge
between two vertices in different columns forbids that combination from
appearing together in any row of an array.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

DEFAULT_ROW_BUDGET = 10**7

Row = tuple[int, ...]


class GraphError(ValueError):
    """Raised for malformed or inconsistent graph input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class BudgetExceeded(RuntimeError):
    """Raised when an enumeration would exceed its configured budget."""


class Vertex(NamedTuple):
    column: int
    symbol: int

    def label(self) -> str:
        return f"v({self.column},{self.symbol})"


class Pair(NamedTuple):
    """Unordered cross-column vertex pair, stored smaller column first.

    Used both for forbidden edges and for coverage targets.
    """

    a: Vertex
    b: Vertex

    @classmethod
    def of(cls, u: Sequence[int], w: Sequence[int]) -> "Pair":
        u, w = Vertex(*u), Vertex(*w)
        if u.column == w.column:
            raise GraphError(f"endpoints share column {u.column}")
        return cls(u, w) if u < w else cls(w, u)

    def realized_by(self, row: Sequence[int]) -> bool:
        return row[self.a.column] == self.a.symbol and row[self.b.column] == self.b.symbol

    def vertices(self) -> frozenset[Vertex]:
        return frozenset((self.a, self.b))

    def columns(self) -> tuple[int, int]:
        return self.a.column, self.b.column

    def __str__(self) -> str:
        return f"{{{self.a.label()}, {self.b.label()}}}"


ForbiddenEdge = Pair
PairTarget = Pair


@dataclass(frozen=True)
class ConstraintGraph:
    k: int
    v: int
    edges: frozenset[Pair] = frozenset()
    t: int = 2

    def __post_init__(self):
        if self.t != 2:
            raise GraphError(f"only strength t=2 is supported, got t={self.t}")
        if self.v < 2:
            raise GraphError(f"alphabet size v must be >= 2, got {self.v}")
        if self.k < self.t:
            raise GraphError(f"need k >= t, got k={self.k}, t={self.t}")
        edges = frozenset(self.edges)
        for e in edges:
            self._check_pair(e)
        object.__setattr__(self, "edges", edges)

    def _check_pair(self, p: Pair) -> None:
        for x in p:
            if not (0 <= x.column < self.k and 0 <= x.symbol < self.v):
                raise GraphError(f"vertex {x.label()} out of range for k={self.k}, v={self.v}")
        if p.a.column == p.b.column:
            raise GraphError(f"endpoints share column {p.a.column}")

    @classmethod
    def from_edges(cls, k: int, v: int, edges: Iterable[tuple[int, int, int, int]]) -> "ConstraintGraph":
        """Build from ``(col1, sym1, col2, sym2)`` tuples, rejecting duplicates."""
        seen: set[Pair] = set()
        for c1, s1, c2, s2 in edges:
            e = Pair.of((c1, s1), (c2, s2))
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
        return cls(k, v, frozenset(seen))

    @cached_property
    def sorted_edges(self) -> list[Pair]:
        return sorted(self.edges)

    def vertices(self) -> list[Vertex]:
        return [Vertex(i, a) for i in range(self.k) for a in range(self.v)]

    def edges_between(self, i: int, j: int) -> list[Pair]:
        i, j = min(i, j), max(i, j)
        return [e for e in self.sorted_edges if e.columns() == (i, j)]

    def check_row(self, row: Sequence[int]) -> Row:
        row = tuple(row)
        if len(row) != self.k:
            raise GraphError(f"row has length {len(row)}, expected k={self.k}")
        if any(not 0 <= s < self.v for s in row):
            raise GraphError(f"row {row} has a symbol outside [0, {self.v - 1}]")
        return row


def parse_graph(text: str) -> ConstraintGraph:
    """Parse the ``cafe-graph 1`` line format."""
    lines = [
        (n, line.strip())
        for n, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.strip().startswith("#")
    ]
    if not lines:
        raise GraphError("empty graph file")
    n, header = lines[0]
    if header.split() != ["cafe-graph", "1"]:
        raise GraphError(f"expected header 'cafe-graph 1', got {header!r}", n)
    if len(lines) < 2:
        raise GraphError("missing parameter line", n)
    n, params_line = lines[1]
    params = _parse_params(params_line, ("k", "v", "t"), n)
    k, v, t = params["k"], params["v"], params["t"]
    try:
        graph = ConstraintGraph(k, v, frozenset(), t)
    except GraphError as exc:
        raise GraphError(str(exc), n) from None

    edges: set[Pair] = set()
    for n, line in lines[2:]:
        fields = line.split()
        if fields[0] != "edge" or len(fields) != 5:
            raise GraphError(f"expected 'edge <col1> <sym1> <col2> <sym2>', got {line!r}", n)
        try:
            c1, s1, c2, s2 = (int(x) for x in fields[1:])
        except ValueError:
            raise GraphError(f"non-integer field in {line!r}", n) from None
        try:
            e = Pair.of((c1, s1), (c2, s2))
            graph._check_pair(e)
        except GraphError as exc:
            raise GraphError(str(exc), n) from None
        if e in edges:
            raise GraphError(f"duplicate edge {e}", n)
        edges.add(e)
    return ConstraintGraph(k, v, frozenset(edges), t)


def _parse_params(line: str, keys: tuple[str, ...], lineno: int) -> dict[str, int]:
    out: dict[str, int] = {}
    for tok in line.split():
        key, sep, val = tok.partition("=")
        if not sep or key not in keys or key in out:
            raise GraphError(f"bad parameter token {tok!r}", lineno)
        try:
            out[key] = int(val)
        except ValueError:
            raise GraphError(f"non-integer value in {tok!r}", lineno) from None
    missing = [key for key in keys if key not in out]
    if missing:
        raise GraphError(f"missing parameter(s) {', '.join(missing)}", lineno)
    return out


def serialize_graph(g: ConstraintGraph) -> str:
    out = ["cafe-graph 1", f"k={g.k} v={g.v} t={g.t}"]
    for e in g.sorted_edges:
        out.append(f"edge {e.a.column} {e.a.symbol} {e.b.column} {e.b.symbol}")
    return "\n".join(out) + "\n"


def load_graph(path: str | Path) -> ConstraintGraph:
    return parse_graph(Path(path).read_text(encoding="utf-8"))


def row_pairs(row: Sequence[int]) -> list[Pair]:
    """The C(k,2) cross-column pairs a row realizes."""
    return [
        Pair(Vertex(i, row[i]), Vertex(j, row[j]))
        for i, j in itertools.combinations(range(len(row)), 2)
    ]


def row_avoids(g: ConstraintGraph, row: Sequence[int]) -> bool:
    row = g.check_row(row)
    return not any(e.realized_by(row) for e in g.edges)


def violated_edges(g: ConstraintGraph, row: Sequence[int]) -> list[Pair]:
    row = g.check_row(row)
    return [e for e in g.sorted_edges if e.realized_by(row)]


def enumerate_avoiding_rows(g: ConstraintGraph, budget: int = DEFAULT_ROW_BUDGET) -> list[Row]:
    """All rows avoiding ``g``, in lexicographic order."""
    total = g.v**g.k
    if total > budget:
        raise BudgetExceeded(f"{g.v}^{g.k} = {total} rows exceeds budget {budget}")
    return [r for r in itertools.product(range(g.v), repeat=g.k) if row_avoids(g, r)]


def all_cross_pairs(k: int, v: int) -> list[Pair]:
    """Every cross-column pair, sorted as ``(col1, sym1, col2, sym2)``."""
    return sorted(
        Pair(Vertex(i, a), Vertex(j, b))
        for i, j in itertools.combinations(range(k), 2)
        for a in range(v)
        for b in range(v)
    )


def required_pairs(g: ConstraintGraph) -> list[Pair]:
    """Every cross-column pair that is not forbidden; these must all be covered."""
    return [p for p in all_cross_pairs(g.k, g.v) if p not in g.edges]


def solitary_pairs(g: ConstraintGraph) -> list[Pair]:
    """Distinct-symbol pairs between edge-carrying parts, disjoint from those edges."""
    out = []
    for p in required_pairs(g):
        if p.a.symbol == p.b.symbol:
            continue
        between = g.edges_between(*p.columns())
        if between and all(not (p.vertices() & e.vertices()) for e in between):
            out.append(p)
    return out

