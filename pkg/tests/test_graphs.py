import math

import pytest
from hypothesis import given, settings, strategies as st

from fodef.graphs import (
    ColoredGraph,
    GraphError,
    are_isomorphic,
    check_partial_isomorphism,
    distance,
    find_isomorphism,
    flap_decompose,
    similar_flap_census,
)

from helpers import brute_isomorphic, brute_similar


def path(n):
    return ColoredGraph.build(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n):
    return ColoredGraph.build(n, [(i, (i + 1) % n) for i in range(n)])


def star(n):
    return ColoredGraph.build(n, [(0, i) for i in range(1, n)])


def complete(n):
    return ColoredGraph.build(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


@st.composite
def small_graphs(draw, max_n=6, colored=True):
    n = draw(st.integers(min_value=1, max_value=max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = [e for e in pairs if draw(st.booleans())]
    colors = None
    if colored and draw(st.booleans()):
        colors = [draw(st.sets(st.integers(0, 2), max_size=2)) for _ in range(n)]
    return ColoredGraph.build(n, edges, colors)


class TestConstruction:
    def test_rejects_self_loop(self):
        with pytest.raises(GraphError):
            ColoredGraph.build(2, [(0, 0)])

    def test_rejects_duplicate_edge(self):
        with pytest.raises(GraphError):
            ColoredGraph.build(3, [(0, 1), (1, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(GraphError):
            ColoredGraph.build(2, [(0, 5)])

    def test_json_roundtrip(self):
        g = ColoredGraph.build(3, [(0, 1), (1, 2)], [[1], [], [0, 2]])
        h = ColoredGraph.from_json(g.to_json())
        assert g == h

    def test_edge_list_parse(self):
        g = ColoredGraph.from_edge_list("3 2\n0 1\n1 2\n")
        assert g == path(3)


class TestFlapDecompose:
    def test_c4_antipodal(self):
        dec = flap_decompose(cycle(4), [0, 2])
        assert dec.flaps == ((1,), (3,))
        for rec in dec.recolored:
            # single vertex adjacent to both separator vertices
            assert rec.colors[0] == frozenset(dec.fresh_colors)

    def test_p5_center(self):
        dec = flap_decompose(path(5), [2])
        assert dec.flaps == ((0, 1), (3, 4))
        a1 = dec.fresh_colors[0]
        left, right = dec.recolored
        assert left.colors[1] == frozenset({a1})  # vertex 1 touches the separator
        assert left.colors[0] == frozenset()
        assert right.colors[0] == frozenset({a1})  # vertex 3

    def test_empty_separator(self):
        dec = flap_decompose(complete(4), [])
        assert dec.flaps == ((0, 1, 2, 3),)
        assert are_isomorphic(dec.recolored[0], complete(4))

    def test_out_of_range(self):
        with pytest.raises(GraphError):
            flap_decompose(path(3), [7])

    def test_fresh_colors_distinct_from_base(self):
        g = ColoredGraph.build(4, [(0, 1), (1, 2), (2, 3)], [[5], [], [3], []])
        dec = flap_decompose(g, [1])
        assert min(dec.fresh_colors) > 5

    @given(small_graphs())
    @settings(max_examples=60, deadline=None)
    def test_flaps_partition_and_are_connected(self, g):
        x = [v for v in range(g.n) if v % 3 == 0][:2]
        dec = flap_decompose(g, x)
        covered = [v for f in dec.flaps for v in f]
        assert sorted(covered) == sorted(set(range(g.n)) - set(x))
        for f in dec.flaps:
            sub, _ = g.induced(f)
            assert sub.is_connected()
        # no edge joins two distinct flaps
        for i, f in enumerate(dec.flaps):
            for j, f2 in enumerate(dec.flaps):
                if i < j:
                    assert not any(g.has_edge(u, v) for u in f for v in f2)


class TestIsomorphism:
    def test_c4_relabeled(self):
        h = ColoredGraph.build(4, [(2, 0), (0, 3), (3, 1), (1, 2)])
        m = find_isomorphism(cycle(4), h)
        assert m is not None
        assert check_partial_isomorphism(cycle(4), h, list(m.items()))

    def test_p4_vs_star(self):
        assert not are_isomorphic(path(4), star(4))

    def test_colored_endpoint_vs_midpoint(self):
        a = ColoredGraph.build(3, [(0, 1), (1, 2)], [[1], [], []])
        b = ColoredGraph.build(3, [(0, 1), (1, 2)], [[], [1], []])
        assert not are_isomorphic(a, b)

    @given(small_graphs(max_n=5), small_graphs(max_n=5))
    @settings(max_examples=60, deadline=None)
    def test_matches_brute_force(self, g, h):
        assert are_isomorphic(g, h) == brute_isomorphic(g, h)

    @given(small_graphs(max_n=5))
    @settings(max_examples=30, deadline=None)
    def test_equivalence_relation_on_samples(self, g):
        assert are_isomorphic(g, g)
        h = ColoredGraph.build(
            g.n, [(g.n - 1 - u, g.n - 1 - v) for u, v in g.edges()],
            [g.colors[g.n - 1 - i] for i in range(g.n)])
        assert are_isomorphic(g, h) and are_isomorphic(h, g)

    @given(small_graphs(max_n=6))
    @settings(max_examples=40, deadline=None)
    def test_witness_is_full_partial_isomorphism(self, g):
        perm = [(v * 7 + 3) % g.n for v in range(g.n)]
        if len(set(perm)) != g.n:
            perm = list(reversed(range(g.n)))
        h = ColoredGraph.build(
            g.n, [(perm[u], perm[v]) for u, v in g.edges()],
            [g.colors[perm.index(i)] for i in range(g.n)])
        m = find_isomorphism(g, h)
        assert m is not None
        assert check_partial_isomorphism(g, h, list(m.items()))

    def test_big_tree_fast_path(self):
        # two paths on 400 vertices with different colorings
        a = ColoredGraph.build(400, [(i, i + 1) for i in range(399)])
        b = ColoredGraph.build(400, [(i, i + 1) for i in range(399)],
                               [[1] if i == 0 else [] for i in range(400)])
        assert are_isomorphic(a, a)
        assert not are_isomorphic(a, b)


class TestPartialIsomorphism:
    def test_rotation_restriction(self):
        assert check_partial_isomorphism(cycle(4), cycle(4), [(0, 1), (1, 2)])

    def test_adjacent_to_non_adjacent(self):
        assert not check_partial_isomorphism(cycle(3), cycle(4), [(0, 0), (1, 2)])

    def test_equality_condition(self):
        assert not check_partial_isomorphism(cycle(4), cycle(4), [(0, 0), (0, 1)])
        # mirrored duplicates are fine
        assert check_partial_isomorphism(cycle(4), cycle(4), [(0, 0), (0, 0)])


class TestDistance:
    def test_path_end_to_end(self):
        assert distance(path(5), 0, 4) == 4

    def test_distance_to_set(self):
        assert distance(path(5), 0, {2, 4}) == 2

    def test_disconnected_is_infinite(self):
        g = ColoredGraph.build(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        assert distance(g, 0, 3) == math.inf

    @given(small_graphs(max_n=6, colored=False))
    @settings(max_examples=40, deadline=None)
    def test_metric_properties(self, g):
        for u in range(g.n):
            assert distance(g, u, u) == 0
            for v in range(g.n):
                for w in range(g.n):
                    duv = distance(g, u, v)
                    assert duv == distance(g, v, u)
                    assert duv <= distance(g, u, w) + distance(g, w, v)


class TestSimilarFlaps:
    def test_star_center(self):
        census = similar_flap_census(star(5), [0])
        assert census.max_class_size == 4
        assert len(census.groups) == 1

    def test_p5_mirror(self):
        census = similar_flap_census(path(5), [2])
        assert census.max_class_size == 2

    @given(small_graphs(max_n=6, colored=False))
    @settings(max_examples=40, deadline=None)
    def test_census_matches_identity_extension_oracle(self, g):
        x = [v for v in range(g.n) if v % 2 == 0][:2]
        census = similar_flap_census(g, x)
        dec = census.decomposition
        groups = {i: gi for gi, grp in enumerate(census.groups) for i in grp}
        for i in range(len(dec.flaps)):
            for j in range(i + 1, len(dec.flaps)):
                same = brute_similar(g, x, dec.flaps[i], dec.flaps[j])
                assert same == (groups[i] == groups[j])

    @given(small_graphs(max_n=7, colored=False), st.integers(0, 3))
    @settings(max_examples=60, deadline=None)
    def test_connected_census_bounded_by_max_degree(self, g, k):
        if not g.is_connected() or g.n < 2:
            return
        x = sorted({(v * 5 + 1) % g.n for v in range(k)})
        census = similar_flap_census(g, x)
        assert census.max_class_size <= max(1, g.max_degree())
