"""The four-part, three-symbol instance with one forbidden edge between every two parts.

Everything here is embedded so the reproduction checklist needs no files.
Blank cells in partial arrays are ``None``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .bounds import CompatibilityGraph, incompatibility_lower_bound
from .graph import ConstraintGraph, Pair, enumerate_avoiding_rows, parse_graph, solitary_pairs
from .search import SearchConfig, enumerate_cafes
from .symmetry import (
    Group,
    GroupElement,
    automorphism_group,
    canonical_form,
    closure,
    is_arc_transitive,
    is_automorphism,
    is_vertex_transitive,
    orbit,
    parse_cycles,
)
from .verify import CoverArray, is_cafe, uniformity

GRAPH_TEXT = """\
cafe-graph 1
k=4 v=3 t=2
edge 0 0 1 0
edge 0 1 2 1
edge 0 2 3 2
edge 1 1 3 1
edge 1 2 2 2
edge 2 0 3 0
"""

G1_CYCLES = "(v_{0,0} v_{1,0})(v_{0,1}, v_{1,2})(v_{0,2}, v_{1,1})(v_{2,1},v_{2,2})(v_{3,1},v_{3,2})"
G2_CYCLES = "(v_{0,0},v_{1,2},v_{2,0},v_{3,2})(v_{1,0},v_{2,2},v_{3,0},v_{0,2})(v_{0,1},v_{1,1},v_{2,1},v_{3,1})"

SOLITARY = [
    ((0, 1), (1, 2)), ((0, 2), (1, 1)), ((2, 1), (3, 2)),
    ((2, 2), (3, 1)), ((0, 0), (2, 2)), ((0, 2), (2, 0)),
    ((1, 0), (3, 2)), ((1, 2), (3, 0)), ((0, 0), (3, 1)),
    ((0, 1), (3, 0)), ((1, 0), (2, 1)), ((1, 1), (2, 0)),
]

_ = None

FORCED = [
    (1, 2, 0, _), (2, 1, _, 0), (0, _, 1, 2), (_, 0, 2, 1),
    (0, 1, 2, _), (1, 0, _, 2), (2, _, 0, 1), (_, 2, 1, 0),
    (2, 0, 1, _), (0, 2, _, 1), (1, _, 2, 0), (_, 1, 0, 2),
]

UNIFORM_PARTIAL_A = [
    (1, 2, 0, _), (2, 1, _, 0), (0, _, 1, 2), (1, 0, 2, 1),
    (0, 1, 2, _), (1, 0, _, 2), (2, _, 0, 1), (2, 2, 1, 0),
    (2, 0, 1, _), (0, 2, _, 1), (1, _, 2, 0), (0, 1, 0, 2),
]

UNIFORM_PARTIAL_B = [
    (1, 2, 0, _), (2, 1, _, 0), (0, _, 1, 2), (2, 0, 2, 1),
    (0, 1, 2, _), (1, 0, _, 2), (2, _, 0, 1), (0, 2, 1, 0),
    (2, 0, 1, _), (0, 2, _, 1), (1, _, 2, 0), (1, 1, 0, 2),
]

REFERENCE_ROWS = [
    (1, 2, 0, 2), (2, 1, 2, 0), (0, 1, 1, 2), (1, 0, 2, 1),
    (0, 1, 2, 0), (2, 0, 0, 1), (1, 0, 2, 2), (2, 2, 1, 0),
    (0, 2, 1, 1), (1, 1, 2, 0), (2, 0, 1, 0), (0, 1, 0, 2),
]


def graph() -> ConstraintGraph:
    return parse_graph(GRAPH_TEXT)


def generators() -> tuple[GroupElement, GroupElement]:
    return parse_cycles(G1_CYCLES, 4, 3), parse_cycles(G2_CYCLES, 4, 3)


def witness_element(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """g2 g1 g2 g1 g2^2, composed right to left."""
    return g2 * g1 * g2 * g1 * g2 * g2


def reference_array() -> CoverArray:
    return CoverArray.of(REFERENCE_ROWS, 3)


def solitary_set() -> set[Pair]:
    return {Pair.of(a, b) for a, b in SOLITARY}


def completes(partial: Sequence[Sequence[Optional[int]]], a: CoverArray) -> bool:
    """True if the rows of ``a`` can be matched one-to-one onto the partial rows."""
    if len(partial) != a.N:
        return False
    fits = [
        [n for n, r in enumerate(a.rows) if all(x is None or x == s for x, s in zip(p, r))]
        for p in partial
    ]
    used: set[int] = set()

    def match(i: int) -> bool:
        if i == len(fits):
            return True
        for n in fits[i]:
            if n not in used:
                used.add(n)
                if match(i + 1):
                    return True
                used.remove(n)
        return False

    return match(0)


@dataclass
class CheckItem:
    number: int
    title: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"[{status}] ({self.number}) {self.title}{extra}"


def reproduce(reference_rows: Sequence[Sequence[int]] | None = None,
              g1: GroupElement | None = None, g2: GroupElement | None = None) -> list[CheckItem]:
    """Run the full ten-item checklist; the keyword arguments swap in alternative data."""
    g = graph()
    p1, p2 = generators()
    g1 = g1 or p1
    g2 = g2 or p2
    ref = CoverArray.of(reference_rows if reference_rows is not None else REFERENCE_ROWS, 3)
    items: list[CheckItem] = []

    def add(title: str, passed: bool, detail: str = "") -> None:
        items.append(CheckItem(len(items) + 1, title, bool(passed), detail))

    add("g1 and g2 are automorphisms", is_automorphism(g, g1) and is_automorphism(g, g2))

    aut = automorphism_group(g)
    gen = closure([g1, g2])
    add("closure of {g1, g2} has order 24 and equals Aut(G)",
        gen.order == 24 and gen.element_set == aut.element_set,
        f"|closure| = {gen.order}, |Aut(G)| = {aut.order}")

    add("G is arc-transitive and vertex-transitive under Aut(G)",
        is_arc_transitive(g, aut) and is_vertex_transitive(g, aut))

    sol = solitary_pairs(g)
    one_orbit = bool(sol) and orbit(aut, sol[0]) == frozenset(sol)
    add("exactly 12 solitary pairs forming a single orbit",
        len(sol) == 12 and set(sol) == solitary_set() and one_orbit, f"{len(sol)} solitary pairs")

    rows = enumerate_avoiding_rows(g)
    cg = CompatibilityGraph.build(g, sol, rows)
    bad = [(x, y) for x, y in itertools.combinations(range(len(sol)), 2) if cg.compatible(x, y)]
    cert = incompatibility_lower_bound(g, sol, rows)
    add("all 66 solitary-pair pairs incompatible, lower bound 12",
        len(sol) == 12 and not bad and cert.lower_bound == 12, f"lower bound {cert.lower_bound}")

    ok, report = is_cafe(ref, g)
    add("reference array is a CAFE(12;G)", ok and ref.N == 12,
        f"{len(report.gaps)} gaps, {len(report.violations)} violations")

    res12 = enumerate_cafes(g, 12, SearchConfig(keep_labeled=True), group=aut)
    same_class = (len(res12.canonical_solutions) == 1
                  and res12.canonical_solutions[0] == canonical_form(ref, aut))
    add("N=12: 8 labeled solutions, 1 class, equal to the reference array's class",
        res12.exhausted and res12.labeled_count == 8 and same_class,
        f"labeled {res12.labeled_count}, classes {len(res12.canonical_solutions)}")

    labeled = res12.labeled_solutions or []
    one_uniform = [len(uniformity(a).uniform_columns) == 1 for a in labeled]
    add("every labeled solution has exactly one uniform column",
        bool(labeled) and all(one_uniform), f"{sum(one_uniform)} of {len(labeled)}")

    res11 = enumerate_cafes(g, 11, SearchConfig(), group=aut)
    add("N=11: enumeration exhausted with no solutions",
        res11.exhausted and not res11.canonical_solutions, res11.summary())

    add("g2 g1 g2 g1 g2^2 maps the second uniform completion into the first's class",
        *_witness_check(g, aut, labeled, witness_element(g1, g2)))
    return items


def _witness_check(g: ConstraintGraph, aut: Group, labeled: list[CoverArray],
                   w: GroupElement) -> tuple[bool, str]:
    first = [a for a in labeled if completes(UNIFORM_PARTIAL_A, a)]
    second = [a for a in labeled if completes(UNIFORM_PARTIAL_B, a)]
    if len(first) != 1 or len(second) != 1:
        return False, f"completions found: {len(first)} and {len(second)}"
    a, b = first[0], second[0]
    image = w.apply_array(b)
    ok = is_automorphism(g, w) and canonical_form(image, aut) == canonical_form(a, aut)
    exact = image.sorted() == a.sorted()
    return ok, f"exact row-set match: {'yes' if exact else 'no'}"
