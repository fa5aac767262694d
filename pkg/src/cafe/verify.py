"""Arrays and the checks that make one a CAFE: coverage, avoidance, uniformity."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .graph import ConstraintGraph, GraphError, Pair, Row, _parse_params, required_pairs, row_pairs


class ArrayError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class CoverArray:
    """An N x k array over the symbols ``0..v-1``."""

    rows: tuple[Row, ...]
    v: int

    def __post_init__(self):
        rows = tuple(tuple(int(s) for s in r) for r in self.rows)
        if not rows:
            raise ArrayError("array must have at least one row")
        k = len(rows[0])
        if k < 1:
            raise ArrayError("rows must be non-empty")
        for r in rows:
            if len(r) != k:
                raise ArrayError(f"ragged row {r}, expected length {k}")
            if any(not 0 <= s < self.v for s in r):
                raise ArrayError(f"row {r} has a symbol outside [0, {self.v - 1}]")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, rows: Iterable[Sequence[int]], v: int) -> "CoverArray":
        return cls(tuple(tuple(r) for r in rows), v)

    @property
    def N(self) -> int:
        return len(self.rows)

    @property
    def k(self) -> int:
        return len(self.rows[0])

    def sorted(self) -> "CoverArray":
        return CoverArray(tuple(sorted(self.rows)), self.v)

    def column(self, i: int) -> list[int]:
        return [r[i] for r in self.rows]

    def flat(self) -> tuple[int, ...]:
        return tuple(s for r in self.rows for s in r)


def parse_array(text: str) -> CoverArray:
    lines = [
        (n, line.strip())
        for n, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.strip().startswith("#")
    ]
    if not lines:
        raise ArrayError("empty array file")
    n, header = lines[0]
    if header.split() != ["cafe-array", "1"]:
        raise ArrayError(f"expected header 'cafe-array 1', got {header!r}", n)
    if len(lines) < 2:
        raise ArrayError("missing parameter line", n)
    n, params_line = lines[1]
    try:
        params = _parse_params(params_line, ("N", "k", "v"), n)
    except GraphError as exc:
        raise ArrayError(str(exc)) from None
    N, k, v = params["N"], params["k"], params["v"]
    body = lines[2:]
    if len(body) != N:
        raise ArrayError(f"declared N={N} but found {len(body)} rows", n)
    rows = []
    for n, line in body:
        try:
            r = tuple(int(x) for x in line.split())
        except ValueError:
            raise ArrayError(f"non-integer symbol in {line!r}", n) from None
        if len(r) != k:
            raise ArrayError(f"expected {k} symbols, got {len(r)}", n)
        if any(not 0 <= s < v for s in r):
            raise ArrayError(f"symbol outside [0, {v - 1}] in {line!r}", n)
        rows.append(r)
    return CoverArray(tuple(rows), v)


def serialize_array(a: CoverArray) -> str:
    out = ["cafe-array 1", f"N={a.N} k={a.k} v={a.v}"]
    out += [" ".join(map(str, r)) for r in a.rows]
    return "\n".join(out) + "\n"


def load_array(path: str | Path) -> CoverArray:
    return parse_array(Path(path).read_text(encoding="utf-8"))


def _check_dims(a: CoverArray, g: ConstraintGraph) -> None:
    if a.k != g.k or a.v != g.v:
        raise ArrayError(f"array is k={a.k}, v={a.v} but graph is k={g.k}, v={g.v}")


def covered_pairs(a: CoverArray) -> set[Pair]:
    return {p for r in a.rows for p in row_pairs(r)}


def coverage_gaps(a: CoverArray, g: ConstraintGraph) -> list[Pair]:
    """Required pairs that no row of ``a`` realizes, in lexicographic order."""
    _check_dims(a, g)
    seen = covered_pairs(a)
    return [p for p in required_pairs(g) if p not in seen]


def avoidance_violations(a: CoverArray, g: ConstraintGraph) -> list[tuple[int, Pair]]:
    _check_dims(a, g)
    return [(n, e) for n, r in enumerate(a.rows) for e in g.sorted_edges if e.realized_by(r)]


@dataclass(frozen=True)
class CafeReport:
    gaps: list[Pair] = field(default_factory=list)
    violations: list[tuple[int, Pair]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.gaps and not self.violations


def is_cafe(a: CoverArray, g: ConstraintGraph) -> tuple[bool, CafeReport]:
    report = CafeReport(coverage_gaps(a, g), avoidance_violations(a, g))
    return report.ok, report


@dataclass(frozen=True)
class ColumnCounts:
    counts: tuple[int, ...]

    @property
    def uniform(self) -> bool:
        return max(self.counts) - min(self.counts) <= 1


@dataclass(frozen=True)
class UniformityReport:
    N: int
    v: int
    columns: tuple[ColumnCounts, ...]

    @property
    def array_uniform(self) -> bool:
        return all(c.uniform for c in self.columns)

    @property
    def uniform_columns(self) -> list[int]:
        return [i for i, c in enumerate(self.columns) if c.uniform]

    def format(self) -> str:
        lines = [f"uniform columns: {len(self.uniform_columns)} of {len(self.columns)}"]
        for i, c in enumerate(self.columns):
            flag = "uniform" if c.uniform else "non-uniform"
            lines.append(f"column {i}: counts {' '.join(map(str, c.counts))} {flag}")
        lines.append(f"array uniform: {'yes' if self.array_uniform else 'no'}")
        return "\n".join(lines)


def uniformity(a: CoverArray) -> UniformityReport:
    cols = []
    for i in range(a.k):
        tally = Counter(a.column(i))
        cols.append(ColumnCounts(tuple(tally[s] for s in range(a.v))))
    return UniformityReport(a.N, a.v, tuple(cols))
