"""Exhaustive enumeration of CAFEs with a given number of rows.

Arrays are built as non-decreasing sequences of avoiding-row indices, so every
row multiset is visited exactly once.  Isomorph rejection happens at the leaves
by canonical form under the automorphism group.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from typing import Sequence

from .bounds import Certificate, lower_bound, row_cover_masks
from .graph import ConstraintGraph, Pair, Row, enumerate_avoiding_rows, required_pairs, row_pairs
from .symmetry import DEFAULT_GROUP_BUDGET, Group, automorphism_group, canonical_form
from .verify import CoverArray

DEFAULT_MAX_NODES = 10**7
ALL_CUTS = frozenset({"capacity", "clique", "reach"})


def default_max_nodes() -> int:
    env = os.environ.get("CAFE_MAX_NODES")
    return int(env) if env else DEFAULT_MAX_NODES


@dataclass(frozen=True)
class SearchConfig:
    max_nodes: int = field(default_factory=default_max_nodes)
    reduce_by_group: bool = True
    count_labeled: bool = True
    keep_labeled: bool = False
    # capacity: uncovered targets must fit in the remaining rows' pair slots
    # clique:   known pairwise-incompatible uncovered targets need a row each
    # reach:    every uncovered target needs a candidate row at or after the current one
    cuts: frozenset[str] = ALL_CUTS
    group_budget: int = DEFAULT_GROUP_BUDGET

    def __post_init__(self):
        if self.max_nodes <= 0:
            raise ValueError("max_nodes must be positive")
        unknown = set(self.cuts) - ALL_CUTS
        if unknown:
            raise ValueError(f"unknown cuts {sorted(unknown)}")


@dataclass
class SearchResult:
    N: int
    canonical_solutions: list[CoverArray]
    labeled_count: int | None
    nodes_expanded: int
    exhausted: bool
    infeasible: bool = False
    labeled_solutions: list[CoverArray] | None = None

    def summary(self) -> str:
        labeled = "-" if self.labeled_count is None else self.labeled_count
        return (
            f"solutions {len(self.canonical_solutions)} labeled {labeled} "
            f"nodes {self.nodes_expanded} exhausted {str(self.exhausted).lower()}"
        )


class _Stop(Exception):
    pass


class _Problem:
    """Precomputed bitmask view of an instance."""

    def __init__(self, g: ConstraintGraph, rows: Sequence[Row] | None = None):
        self.g = g
        self.rows = list(rows) if rows is not None else enumerate_avoiding_rows(g)
        self.targets = required_pairs(g)
        index = {p: n for n, p in enumerate(self.targets)}
        self.cover = row_cover_masks(self.rows, self.targets)
        self.row_masks = []
        for r in self.rows:
            m = 0
            for p in row_pairs(r):
                m |= 1 << index[p]
            self.row_masks.append(m)
        self.unrealizable = [p for p, c in zip(self.targets, self.cover) if not c]
        self.max_row = [c.bit_length() - 1 for c in self.cover]
        self.per_row = math.comb(g.k, 2)
        self.cliques = self._clique_families(index)

    def _clique_families(self, index: dict[Pair, int]) -> list[int]:
        if self.unrealizable:
            return []
        fams: dict[tuple[int, int], int] = {}
        for n, p in enumerate(self.targets):
            fams[p.columns()] = fams.get(p.columns(), 0) | (1 << n)
        out = list(fams.values())
        for cert in (lower_bound(self.g, self.rows),):
            m = 0
            for p in cert.witness:
                m |= 1 << index[p]
            out.append(m)
        return out

    def array(self, chosen: Sequence[int]) -> CoverArray:
        return CoverArray(tuple(self.rows[j] for j in chosen), self.g.v)


def _search(problem: _Problem, N: int, cfg: SearchConfig, first_only: bool):
    """Yield every solution as a list of row indices; raises _Stop on budget."""
    full = (1 << len(problem.targets)) - 1
    R = len(problem.rows)
    row_masks, max_row, cliques = problem.row_masks, problem.max_row, problem.cliques
    use_capacity = "capacity" in cfg.cuts
    use_clique = "clique" in cfg.cuts
    use_reach = "reach" in cfg.cuts
    nodes = 0
    chosen: list[int] = []
    found: list[list[int]] = []

    def rec(start: int, uncovered: int) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > cfg.max_nodes:
            raise _Stop
        remaining = N - len(chosen)
        if remaining == 0:
            if not uncovered:
                found.append(list(chosen))
                if first_only:
                    raise _Stop
            return
        hi = R - 1
        if uncovered:
            if use_capacity and uncovered.bit_count() > remaining * problem.per_row:
                return
            if use_clique and any((uncovered & c).bit_count() > remaining for c in cliques):
                return
            if use_reach:
                m = uncovered
                while m:
                    low = m & -m
                    hi = min(hi, max_row[low.bit_length() - 1])
                    m ^= low
        for j in range(start, hi + 1):
            chosen.append(j)
            rec(j, uncovered & ~row_masks[j])
            chosen.pop()

    stopped = False
    try:
        rec(0, full)
    except _Stop:
        stopped = True
    budget_hit = stopped and not (first_only and found)
    return found, nodes, not budget_hit


def enumerate_cafes(g: ConstraintGraph, N: int, cfg: SearchConfig | None = None,
                    group: Group | None = None, first_only: bool = False) -> SearchResult:
    """All CAFE(N; g), one per isomorphism class when ``cfg.reduce_by_group``.

    ``exhausted`` is False when the node budget ran out; the solutions found up
    to that point are still returned.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    cfg = cfg or SearchConfig()
    problem = _Problem(g)
    if problem.unrealizable:
        return SearchResult(N, [], 0 if cfg.count_labeled else None, 0, True, infeasible=True,
                            labeled_solutions=[] if cfg.keep_labeled else None)
    found, nodes, exhausted = _search(problem, N, cfg, first_only)
    labeled = [problem.array(s) for s in found]

    if cfg.reduce_by_group:
        if group is None:
            group = automorphism_group(g, budget=cfg.group_budget)
        classes = {canonical_form(a, group) for a in labeled}
    else:
        classes = {a.sorted() for a in labeled}
    canon = sorted(classes, key=lambda a: a.flat())
    return SearchResult(
        N,
        canon,
        len(labeled) if cfg.count_labeled else None,
        nodes,
        exhausted,
        labeled_solutions=labeled if cfg.keep_labeled else None,
    )


def exists_cafe(g: ConstraintGraph, N: int, cfg: SearchConfig | None = None) -> tuple[CoverArray | None, SearchResult]:
    cfg = replace(cfg or SearchConfig(), reduce_by_group=False)
    res = enumerate_cafes(g, N, cfg, first_only=True)
    return (res.canonical_solutions[0] if res.canonical_solutions else None), res


def minimal_N(g: ConstraintGraph, cfg: SearchConfig | None = None, group: Group | None = None) -> Certificate:
    """Smallest N admitting a CAFE, certified by an incompatibility witness.

    Ascends linearly from the lower bound.  Any feasible instance has a CAFE with
    one row per required pair, which caps the ascent.
    """
    cfg = cfg or SearchConfig()
    cert = lower_bound(g)
    if cert.infeasible:
        return cert
    if cfg.reduce_by_group and group is None:
        group = automorphism_group(g, budget=cfg.group_budget)
    for N in range(max(cert.lower_bound, 1), len(required_pairs(g)) + 1):
        res = enumerate_cafes(g, N, cfg, group=group)
        if res.canonical_solutions:
            cert.realizing_array = res.canonical_solutions[0]
            cert.iso_class_count = len(res.canonical_solutions) if res.exhausted else None
            cert.complete = res.exhausted
            return cert
        if not res.exhausted:
            cert.complete = False
            return cert
    raise AssertionError("unreachable: a feasible instance has a CAFE with one row per required pair")

