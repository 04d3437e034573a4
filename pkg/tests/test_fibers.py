import json

import networkx as nx
import pytest

from fibertypes.fibers import (
    FiberError,
    build_fiber_even,
    build_fiber_level0,
    build_fiber_odd,
    build_fiber_over_edge,
    build_fiber_over_vertex,
    build_truncated_tower,
    check_component_intersections,
    path_union,
    quotient_iso_check,
    standard_component_coordinates,
)
from fibertypes.ring import ring_make
from fibertypes.tree import pi_element, stabilizer_images, t_varpi, tree_ball


def nx_graph(fb):
    G = nx.MultiGraph()
    G.add_nodes_from(range(fb.V))
    G.add_edges_from(zip(fb.tails, fb.heads))
    return G


def test_even_m1_q3(ball3):
    fb = build_fiber_even(ball3, 1)
    assert fb.counts() == {"vertices": 12, "edges": 18, "components": 2}
    assert all(fb.is_complete_bipartite(i) for i in range(2))


def test_even_m2_q3():
    T = tree_ball(ring_make(3, 1, 8), 3)
    fb = build_fiber_even(T, 2)
    assert len(fb.components) == 18


def test_odd_m1_q3(ball3):
    fb = build_fiber_odd(ball3, 1)
    assert fb.counts() == {"vertices": 72, "edges": 108, "components": 12}


@pytest.mark.parametrize("q,V,E", [(3, 8, 12), (5, 12, 30)])
def test_omega(q, V, E):
    fb = build_fiber_odd(tree_ball(ring_make(q, 1, 4), 1), 0)
    assert (fb.V, fb.E, len(fb.components)) == (V, E, 1)


def test_level0(ball3):
    fb = build_fiber_level0(ball3)
    assert fb.counts() == {"vertices": 2, "edges": 2, "components": 1}
    assert fb.V - fb.E == 0


@pytest.mark.parametrize("q", [3, 5])
@pytest.mark.parametrize("m", [1, 2])
def test_component_counts_match_networkx(q, m):
    T = tree_ball(ring_make(q, 1, 8), m + 1)
    for fb, expected in ((build_fiber_even(T, m), 2 * q ** (2 * m - 2)), (build_fiber_odd(T, m), (q + 1) * q ** (2 * m - 1))):
        G = nx_graph(fb)
        comps = list(nx.connected_components(G))
        assert len(comps) == len(fb.components) == expected
        for c in comps:
            sub = nx.Graph(G.subgraph(c))
            assert nx.is_bipartite(sub)
            assert sub.number_of_edges() == q * q and sub.number_of_nodes() == 2 * q


def test_radius_too_small():
    T = tree_ball(ring_make(3, 1, 4), 1)
    with pytest.raises(FiberError, match="radius too small"):
        build_fiber_even(T, 1)
    with pytest.raises(FiberError, match="radius too small"):
        build_truncated_tower(T, 2)


def test_tower_counts(ball3):
    T = tree_ball(ring_make(3, 1, 6), 2)
    X1 = build_truncated_tower(T, 1)
    assert X1.V == 2 * len(T.edges) == 32
    # vertices of X_{n+1} are the edges of X_n
    assert build_truncated_tower(ball3, 2).E == build_truncated_tower(ball3, 3).V


def test_path_union():
    assert path_union((1, 2), (2, 3)) == (1, 2, 3)
    assert path_union((2, 3), (1, 2)) == (1, 2, 3)
    assert path_union((1, 2), (3, 4)) is None
    assert path_union((1, 2), (2, 1)) is None


def test_lemmas_even(ball3):
    T = ball3
    r = check_component_intersections(build_fiber_even(T, 1), build_fiber_over_edge(T, 1, (T.s(1), T.s(2))))
    assert r.ok and r.same_base_overlaps == 0
    assert r.intersecting_pairs == 2


def test_lemmas_odd(ball3):
    T = ball3
    r = check_component_intersections(build_fiber_odd(T, 1), build_fiber_over_vertex(T, 1, T.s(1)))
    assert r.ok
    assert r.intersecting_pairs > 0


@pytest.mark.parametrize("n", [2, 3])
def test_quotient_iso(ball3, n):
    T = ball3
    gens = stabilizer_images(T.ring, "K") + [t_varpi(T.ring), pi_element(T.ring)]
    r = quotient_iso_check(build_truncated_tower(T, n), build_truncated_tower(T, n - 1), gens)
    assert r.ok, r.failures[:3]
    assert r.complete_components == r.lower_vertices > 0
    assert r.quotient_edges == r.lower_edges > 0
    assert r.equivariance_checks > 0


def test_quotient_iso_detects_mismatch(ball3):
    T = ball3
    r = quotient_iso_check(build_truncated_tower(T, 3), build_truncated_tower(T, 2))
    assert r.ok
    with pytest.raises(FiberError):
        quotient_iso_check(build_truncated_tower(T, 3), build_truncated_tower(T, 1))


def test_label_of_standard_component(ball3):
    fb = build_fiber_even(ball3, 1)
    labels = {c.label for c in fb.components}
    assert labels == {(ball3.s(0), ball3.s(1)), (ball3.s(1), ball3.s(0))}


def test_coordinates_are_bijective(ball3):
    for fb in (build_fiber_even(ball3, 1), build_fiber_odd(ball3, 1)):
        ci, coords = standard_component_coordinates(fb)
        assert len(set(coords.values())) == 9


def test_edge_list_export(ball3):
    fb = build_fiber_even(ball3, 1)
    lines = fb.export_edge_list().splitlines()
    header = json.loads(lines[0])
    assert header == {"components": 2, "edges": 18, "n": 2, "q": 3, "vertices": 12}
    assert len(lines) == 19
    h, t, c = map(int, lines[1].split())
    assert fb.vertex_component[h] == fb.vertex_component[t] == c


def test_directed_structure_is_equivariant(ball3):
    fb = build_fiber_odd(ball3, 1)
    for g in stabilizer_images(ball3.ring, "K"):
        perm = ball3.permutation(g)
        vp, ep = fb.permute_cells(perm)
        for e in range(fb.E):
            assert fb.heads[ep[e]] == vp[fb.heads[e]]
