"""Lower bounds on N from coverage targets that can never share a row.

Two targets are compatible when some avoiding row realizes both.  A set of
pairwise-incompatible targets needs one row each, so the size of a maximum
clique in the incompatibility relation bounds the size of any CAFE.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .graph import ConstraintGraph, Pair, Row, enumerate_avoiding_rows, required_pairs, solitary_pairs
from .verify import CoverArray

INFEASIBLE = None


def row_cover_masks(rows: Sequence[Row], targets: Sequence[Pair]) -> list[int]:
    """For each target, the bitmask of row indices realizing it."""
    masks = []
    for p in targets:
        (i, a), (j, b) = p
        m = 0
        for n, r in enumerate(rows):
            if r[i] == a and r[j] == b:
                m |= 1 << n
        masks.append(m)
    return masks


def pair_compatible(g: ConstraintGraph, p: Pair, q: Pair, rows: Sequence[Row] | None = None) -> bool:
    if rows is None:
        rows = enumerate_avoiding_rows(g)
    return any(p.realized_by(r) and q.realized_by(r) for r in rows)


@dataclass(frozen=True)
class CompatibilityGraph:
    targets: tuple[Pair, ...]
    cover: tuple[int, ...]  # bitmask of avoiding rows realizing each target

    @classmethod
    def build(cls, g: ConstraintGraph, targets: Sequence[Pair], rows: Sequence[Row] | None = None):
        if rows is None:
            rows = enumerate_avoiding_rows(g)
        return cls(tuple(targets), tuple(row_cover_masks(rows, targets)))

    def compatible(self, x: int, y: int) -> bool:
        return bool(self.cover[x] & self.cover[y])

    def realizable(self, x: int) -> bool:
        return self.cover[x] != 0

    def incompatibility_masks(self) -> list[int]:
        n = len(self.targets)
        out = []
        for x in range(n):
            m = 0
            for y in range(n):
                if y != x and not self.compatible(x, y):
                    m |= 1 << y
            out.append(m)
        return out


def max_clique(adj: Sequence[int]) -> list[int]:
    """Exact maximum clique of a graph given as neighbour bitmasks.

    Branch and bound with greedy colouring bounds.  Among maximum cliques
    the lexicographically smallest sorted index list is returned.
    """
    n = len(adj)
    best: list[int] = []

    def colour_order(cand: int) -> list[tuple[int, int]]:
        # Greedy colouring in index order; returns (vertex, colour) sorted by colour.
        out: list[tuple[int, int]] = []
        uncoloured = cand
        colour = 0
        while uncoloured:
            colour += 1
            avail = uncoloured
            while avail:
                x = (avail & -avail).bit_length() - 1
                avail &= ~(1 << x) & ~adj[x]
                uncoloured &= ~(1 << x)
                out.append((x, colour))
        return out

    def expand(clique: list[int], cand: int) -> None:
        order = colour_order(cand)
        # Walk from highest colour down; prune once the colour bound cannot beat best.
        for idx in range(len(order) - 1, -1, -1):
            x, colour = order[idx]
            # ties are still explored so the lexicographically least clique wins
            if len(clique) + colour < len(best):
                return
            new_clique = clique + [x]
            sub = cand & adj[x]
            if sub:
                expand(new_clique, sub)
            else:
                _offer(new_clique)
            cand &= ~(1 << x)

    def _offer(c: list[int]) -> None:
        nonlocal best
        s = sorted(c)
        if len(s) > len(best) or (len(s) == len(best) and s < best):
            best = s

    if n:
        expand([], (1 << n) - 1)
    return best


@dataclass
class Certificate:
    lower_bound: int | None  # None marks an infeasible instance
    witness: list[Pair] = field(default_factory=list)
    realizing_array: CoverArray | None = None
    iso_class_count: int | None = None
    array_file: str | None = None
    complete: bool = True
    unrealizable: list[Pair] = field(default_factory=list)

    @property
    def infeasible(self) -> bool:
        return self.lower_bound is None

    def serialize(self) -> str:
        lines = [f"lower-bound {'infeasible' if self.infeasible else self.lower_bound}"]
        for p in self.witness:
            lines.append(f"witness {p.a.column} {p.a.symbol} {p.b.column} {p.b.symbol}")
        if self.array_file is not None:
            lines.append(f"array-file {self.array_file}")
        if self.iso_class_count is not None:
            lines.append(f"iso-classes {self.iso_class_count}")
        if not self.complete:
            lines.append("incomplete")
        return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Certificate:
    cert = Certificate(lower_bound=0)
    for line in text.splitlines():
        f = line.split()
        if not f:
            continue
        if f[0] == "lower-bound":
            cert.lower_bound = None if f[1] == "infeasible" else int(f[1])
        elif f[0] == "witness":
            c1, s1, c2, s2 = map(int, f[1:5])
            cert.witness.append(Pair.of((c1, s1), (c2, s2)))
        elif f[0] == "array-file":
            cert.array_file = line.split(None, 1)[1]
        elif f[0] == "iso-classes":
            cert.iso_class_count = int(f[1])
        elif f[0] == "incomplete":
            cert.complete = False
        else:
            raise ValueError(f"unknown certificate line {line!r}")
    return cert


def incompatibility_lower_bound(g: ConstraintGraph, targets: Sequence[Pair],
                                rows: Sequence[Row] | None = None) -> Certificate:
    cg = CompatibilityGraph.build(g, targets, rows)
    dead = [p for x, p in enumerate(cg.targets) if not cg.realizable(x)]
    if dead:
        return Certificate(INFEASIBLE, unrealizable=dead)
    clique = max_clique(cg.incompatibility_masks())
    return Certificate(len(clique), [cg.targets[x] for x in clique])


def lower_bound(g: ConstraintGraph, rows: Sequence[Row] | None = None) -> Certificate:
    """Best incompatibility bound from the solitary pairs or from all required pairs.

    The solitary-pair witness is kept on ties.
    """
    if rows is None:
        rows = enumerate_avoiding_rows(g)
    full = incompatibility_lower_bound(g, required_pairs(g), rows)
    if full.infeasible:
        return full
    solitary = solitary_pairs(g)
    if solitary:
        sol = incompatibility_lower_bound(g, solitary, rows)
        if sol.lower_bound >= full.lower_bound:
            return sol
    return full
