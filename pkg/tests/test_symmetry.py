from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cafe import reference
from cafe.graph import BudgetExceeded, ConstraintGraph, Pair, Vertex, solitary_pairs
from cafe.symmetry import (
    Group,
    GroupElement,
    arcs,
    arrays_isomorphic,
    automorphism_group,
    canonical_form,
    closure,
    compose,
    inverse,
    is_arc_transitive,
    is_automorphism,
    is_vertex_transitive,
    orbit,
    orbits,
    parse_cycles,
    parse_machine,
)
from cafe.verify import CoverArray

from . import oracles


def random_array(rng, N, k, v):
    return CoverArray.of([[rng.randrange(v) for _ in range(k)] for _ in range(N)], v)


class TestElements:
    def test_generator_parsing(self, gens):
        g1, g2 = gens
        assert g1.perm == (1, 0, 2, 3)
        assert g1.maps == ((0, 2, 1), (0, 2, 1), (0, 2, 1), (0, 2, 1))
        assert g2.perm == (1, 2, 3, 0)
        assert g2.maps == ((2, 1, 0),) * 4

    def test_cycle_round_trip(self, gens):
        for e in gens:
            assert parse_cycles(e.cycles(), 4, 3) == e

    def test_machine_round_trip(self, gens):
        for e in gens:
            assert parse_machine(e.machine()) == e

    def test_identity_cycles(self):
        assert GroupElement.identity(3, 2).cycles() == "()"

    def test_not_partition_respecting(self):
        with pytest.raises(ValueError, match="partition"):
            parse_cycles("(v(0,0) v(1,0))", 2, 2)

    def test_compose_identity(self, gens):
        g1, _ = gens
        assert compose(GroupElement.identity(4, 3), g1) == g1
        assert compose(g1, GroupElement.identity(4, 3)) == g1

    def test_compose_inverse(self, gens):
        for g in gens:
            assert compose(g, inverse(g)).is_identity()
            assert compose(inverse(g), g).is_identity()

    def test_right_to_left(self, gens):
        g1, g2 = gens
        x = Vertex(0, 0)
        assert compose(g1, g2)(x) == g1(g2(x))

    def test_witness_word_on_vertex(self, gens):
        # by hand from the cycle notation: v00 -g2-> v12 -g2-> v20 -g1-> v20 -g2-> v32 -g1-> v31 -g2-> v01
        w = reference.witness_element(*gens)
        assert w(Vertex(0, 0)) == Vertex(0, 1)

    def test_compose_mismatch(self):
        with pytest.raises(ValueError):
            compose(GroupElement.identity(3, 2), GroupElement.identity(3, 3))

    def test_order(self, gens):
        g1, g2 = gens
        assert g1.order() == 2
        assert g2.order() == 4

    def test_apply_row_matches_vertex_action(self, gens):
        g1, g2 = gens
        e = g2 * g1
        row = (1, 2, 0, 2)
        img = e.apply_row(row)
        assert {e(Vertex(i, s)) for i, s in enumerate(row)} == {Vertex(i, s) for i, s in enumerate(img)}


class TestAutomorphisms:
    def test_generators_are_automorphisms(self, G, gens):
        assert all(is_automorphism(G, g) for g in gens)

    def test_single_column_swap_is_not(self, G):
        e = GroupElement((0, 1, 2, 3), ((1, 0, 2), (0, 1, 2), (0, 1, 2), (0, 1, 2)))
        assert not is_automorphism(G, e)

    def test_reference_group(self, G, aut):
        assert aut.order == 24
        brute = oracles.automorphisms(4, 3, [((e.a.column, e.a.symbol), (e.b.column, e.b.symbol)) for e in G.edges])
        as_elements = {
            GroupElement(tuple(m[(i, 0)][0] for i in range(4)), tuple(tuple(m[(i, a)][1] for a in range(3)) for i in range(4)))
            for m in brute
        }
        assert aut.element_set == as_elements

    def test_empty_graph(self):
        g = ConstraintGraph(3, 2)
        assert automorphism_group(g).order == math.factorial(3) * 2**3

    def test_single_edge(self):
        g = ConstraintGraph.from_edges(2, 2, [(0, 0, 1, 0)])
        grp = automorphism_group(g)
        # brute force over 2! * (2!)^2 = 8 candidates
        assert grp.order == len(oracles.automorphisms(2, 2, [((0, 0), (1, 0))])) == 2

    def test_budget(self, G):
        with pytest.raises(BudgetExceeded):
            automorphism_group(G, budget=1000)

    def test_greedy_generators_generate(self, aut):
        assert closure(aut.generators).element_set == aut.element_set


class TestClosure:
    def test_reference_generators(self, aut, gens):
        grp = closure(list(gens))
        assert grp.order == 24
        assert grp.element_set == aut.element_set

    def test_empty(self):
        grp = closure([], 4, 3)
        assert grp.order == 1 and grp.elements[0].is_identity()

    def test_cyclic(self, gens):
        _, g2 = gens
        grp = closure([g2])
        # g2 has three 4-cycles on vertices, so order 4
        assert grp.order == 4 == g2.order()

    def test_budget(self, gens):
        with pytest.raises(BudgetExceeded):
            closure(list(gens), budget=10)

    def test_group_axioms(self, aut):
        s = aut.element_set
        assert GroupElement.identity(4, 3) in s
        for a in aut:
            assert inverse(a) in s
            for b in aut:
                assert compose(a, b) in s


class TestOrbits:
    def test_solitary_orbit(self, G, aut):
        sol = solitary_pairs(G)
        assert orbit(aut, Pair.of((0, 1), (1, 2))) == frozenset(sol)
        assert len(sol) == 12

    def test_trivial_group(self):
        grp = Group.trivial(4, 3)
        x = Vertex(2, 1)
        assert orbit(grp, x) == {x}

    def test_vertex_transitive(self, G, aut):
        assert orbit(aut, Vertex(0, 0)) == frozenset(G.vertices())
        assert is_vertex_transitive(G, aut)

    def test_arc_transitive(self, G, aut):
        assert len(arcs(G)) == 12
        for arc in arcs(G):
            assert orbit(aut, arc) == frozenset(arcs(G))
        assert is_arc_transitive(G, aut)

    def test_arc_transitive_empty(self):
        g = ConstraintGraph(2, 2)
        assert is_arc_transitive(g, automorphism_group(g))

    def test_not_arc_transitive(self):
        g = ConstraintGraph.from_edges(2, 3, [(0, 0, 1, 0), (0, 0, 1, 1)])
        grp = automorphism_group(g)
        assert not is_arc_transitive(g, grp)
        # brute-force check: arc (v00 -> v10) never maps to (v10 -> v00) since degrees differ
        assert ((Vertex(1, 0), Vertex(0, 0))) not in orbit(grp, ((0, 0), (1, 0)))

    def test_orbit_stabilizer(self, G, aut):
        universes = [G.vertices(), arcs(G), solitary_pairs(G)]
        for universe in universes:
            parts = orbits(aut, universe)
            assert frozenset().union(*parts) == frozenset(universe)
            assert sum(len(p) for p in parts) == len(universe)
            for o in parts:
                assert aut.order % len(o) == 0

    def test_orbits_partition_pairs(self, G, aut):
        from cafe.graph import required_pairs

        parts = orbits(aut, required_pairs(G))
        seen = set()
        for o in parts:
            assert not (o & seen)
            seen |= o
        assert seen == set(required_pairs(G))


class TestCanonical:
    def test_trivial_group_sorts(self):
        a = CoverArray.of([(1, 0), (0, 1), (0, 0)], 2)
        assert canonical_form(a, Group.trivial(2, 2)) == a.sorted()

    def test_witness_image(self, aut, gens, ref_array):
        w = reference.witness_element(*gens)
        assert canonical_form(w.apply_array(ref_array), aut) == canonical_form(ref_array, aut)

    def test_idempotent_random(self, aut):
        rng = random.Random(7)
        for _ in range(100):
            a = random_array(rng, rng.randint(1, 12), 4, 3)
            c = canonical_form(a, aut)
            assert canonical_form(c, aut) == c

    def test_invariant_under_group(self, aut):
        rng = random.Random(11)
        for _ in range(20):
            a = random_array(rng, 6, 4, 3)
            c = canonical_form(a, aut)
            for e in aut:
                assert canonical_form(e.apply_array(a), aut) == c

    def test_matches_naive(self, G, aut):
        rng = random.Random(3)
        brute = oracles.automorphisms(4, 3, [((e.a.column, e.a.symbol), (e.b.column, e.b.symbol)) for e in G.edges])
        for _ in range(30):
            a = random_array(rng, 5, 4, 3)
            assert canonical_form(a, aut).rows == oracles.canon(a.rows, brute, 4)

    @settings(max_examples=30, deadline=None)
    @given(st.data())
    def test_large_group_matches_naive(self, data):
        k = data.draw(st.integers(2, 3))
        v = data.draw(st.integers(2, 3))
        g = ConstraintGraph(k, v)
        rows = data.draw(st.lists(st.tuples(*[st.integers(0, v - 1)] * k), min_size=1, max_size=5))
        a = CoverArray.of(rows, v)
        assert canonical_form(a, automorphism_group(g)).rows == oracles.canon(a.rows, oracles.automorphisms(k, v, []), k)


class TestIsomorphic:
    def test_two_uniform_completions(self, aut, result12):
        first = [a for a in result12.labeled_solutions if reference.completes(reference.UNIFORM_PARTIAL_A, a)]
        second = [a for a in result12.labeled_solutions if reference.completes(reference.UNIFORM_PARTIAL_B, a)]
        assert len(first) == len(second) == 1
        a, b = first[0], second[0]
        iso, wit = arrays_isomorphic(b, a, aut)
        assert iso
        image = [wit.element.apply_row(r) for r in b.rows]
        assert all(image[n] == a.rows[wit.row_perm[n]] for n in range(b.N))
        assert sorted(wit.row_perm) == list(range(b.N))

    def test_self(self, aut, ref_array):
        iso, wit = arrays_isomorphic(ref_array, ref_array, aut)
        assert iso
        # any element in the stabilizer is a valid witness; check it actually works
        assert sorted(wit.element.apply_row(r) for r in ref_array.rows) == sorted(ref_array.rows)

    def test_self_trivial_group_gives_identity(self, ref_array):
        iso, wit = arrays_isomorphic(ref_array, ref_array, Group.trivial(4, 3))
        assert iso and wit.element.is_identity()
        assert wit.row_perm == tuple(range(12))

    def test_broken_copy(self, G, aut, ref_array):
        rows = [list(r) for r in ref_array.rows]
        rows[0][3] = 1
        broken = CoverArray.of(rows, 3)
        iso, wit = arrays_isomorphic(ref_array, broken, aut)
        assert not iso and wit is None
        brute = oracles.automorphisms(4, 3, [((e.a.column, e.a.symbol), (e.b.column, e.b.symbol)) for e in G.edges])
        assert oracles.canon(ref_array.rows, brute, 4) != oracles.canon(broken.rows, brute, 4)

    def test_different_sizes(self, aut, ref_array):
        assert arrays_isomorphic(ref_array, CoverArray.of(ref_array.rows[:11], 3), aut) == (False, None)


class TestWitnessWord:
    """The displayed word is an automorphism of order 3 that fixes the reference array."""

    def test_is_automorphism_in_group(self, G, aut, gens):
        w = reference.witness_element(*gens)
        assert is_automorphism(G, w) and w in aut
        assert w.order() == 3

    def test_fixes_reference_array(self, gens, ref_array):
        w = reference.witness_element(*gens)
        assert w.apply_array(ref_array).sorted() == ref_array.sorted()

    def test_exact_maps_between_partials_are_involutions(self, aut):
        # brute force over all 24 elements acting on the partial arrays, blanks kept blank
        def act(e, r):
            out = [None] * 4
            for i, s in enumerate(r):
                out[e.perm[i]] = None if s is None else e.maps[i][s]
            return tuple(out)

        key = lambda r: tuple(-1 if x is None else x for x in r)
        target = sorted(reference.UNIFORM_PARTIAL_A, key=key)
        maps = [e for e in aut if sorted((act(e, r) for r in reference.UNIFORM_PARTIAL_B), key=key) == target]
        assert len(maps) == 3
        assert all(e.order() == 2 for e in maps)
