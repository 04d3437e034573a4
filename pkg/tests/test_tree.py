import networkx as nx
import pytest

from fibertypes.ring import ring_make
from fibertypes.tree import (
    Anchor,
    PrecisionError,
    TreeError,
    act,
    ball_size,
    enumerate_oriented_paths,
    hermite_class,
    pi_element,
    stabilizer_images,
    standard_vertex,
    t_varpi,
    tree_ball,
    vertex_neighbors,
)


def as_graph(T):
    G = nx.Graph()
    G.add_nodes_from(range(len(T.vertices)))
    G.add_edges_from(T.edges)
    return G


def brute_paths(T, L):
    # every injective walk of L steps; in a tree these are the oriented L-paths
    G = as_graph(T)
    out = set()

    def walk(path):
        if len(path) == L + 1:
            out.add(tuple(path))
            return
        for w in G[path[-1]]:
            if w not in path:
                walk(path + [w])

    for v in G:
        walk([v])
    return out


@pytest.mark.parametrize("q,R,expected", [(3, 1, 5), (3, 2, 17), (3, 3, 53), (5, 2, 37)])
def test_ball_sizes(q, R, expected):
    T = tree_ball(ring_make(q, 1, 2), R)
    assert len(T.vertices) == expected == ball_size(q, R)


def test_ball_is_a_tree_with_regular_interior(ball3):
    G = as_graph(ball3)
    assert nx.is_tree(G)
    for v, d in enumerate(ball3.dist):
        assert G.degree[v] == (4 if d < 3 else 1)


def test_q9_ball():
    T = tree_ball(ring_make(3, 2, 2), 2)
    assert len(T.vertices) == 1 + 10 + 90
    assert nx.is_tree(as_graph(T))


def test_edge_ball():
    T = tree_ball(ring_make(3, 1, 2), 2, center="edge")
    assert len(T.vertices) == 26
    assert len(T.edges) == 25


def test_neighbours_are_distinct_and_adjacent():
    R = ring_make(3, 1, 8)
    s0 = standard_vertex(R, 0)
    ns = vertex_neighbors(R, s0)
    assert len(set(ns)) == 4
    assert standard_vertex(R, 1) in ns and standard_vertex(R, -1) in ns
    for w in ns:
        assert s0 in vertex_neighbors(R, w)


def test_generators_act_as_expected(ball3):
    T = ball3
    assert T.act_vertex(t_varpi(T.ring), T.s(0)) == T.s(1)
    assert T.act_vertex(t_varpi(T.ring), T.s(-1)) == T.s(0)
    pi = pi_element(T.ring)
    assert T.act_vertex(pi, T.s(0)) == T.s(1)
    assert T.act_vertex(pi, T.s(1)) == T.s(0)


def test_k_fixes_s0_and_preserves_adjacency(ball3):
    T = ball3
    G = as_graph(T)
    for g in stabilizer_images(T.ring, "K"):
        perm = T.permutation(g)
        assert perm[T.s(0)] == T.s(0)
        assert sorted(perm) == list(range(len(perm)))
        for u, w in T.edges:
            assert G.has_edge(perm[u], perm[w])


def test_iwahori_fixes_standard_edge(ball3):
    T = ball3
    for g in stabilizer_images(T.ring, "I"):
        assert T.act_vertex(g, T.s(0)) == T.s(0)
        assert T.act_vertex(g, T.s(1)) == T.s(1)


def test_hermite_class_is_scale_invariant():
    R = ring_make(3, 1, 8)
    m = ((R.from_int(2), R.from_int(5)), (R.from_int(3), R.from_int(7)))
    m9 = tuple(tuple(R.mul_t(x, R.from_int(9)) for x in row) for row in m)
    assert hermite_class(R, m) == hermite_class(R, m9)


def test_precision_error():
    R = ring_make(3, 1, 2)
    with pytest.raises(PrecisionError):
        hermite_class(R, ((R.from_int(1), R.zero_t()), (R.zero_t(), R.from_int(9))))


def test_vertex_outside_ball():
    T = tree_ball(ring_make(3, 1, 2), 1)
    with pytest.raises(TreeError):
        T.s(2)


@pytest.mark.parametrize("L", [1, 2, 3])
def test_path_enumeration_matches_brute_force(ball3, L):
    assert set(enumerate_oriented_paths(ball3, L)) == brute_paths(ball3, L)


def test_anchored_paths(ball3):
    T = ball3
    centred = enumerate_oriented_paths(T, 2, Anchor("vertex", T.s(0), 1))
    assert len(centred) == 4 * 3
    e0 = (T.s(0), T.s(1))
    anchored = enumerate_oriented_paths(T, 3, Anchor("edge", e0, 1))
    assert len(anchored) == 2 * 9
    assert all({p[1], p[2]} == set(e0) for p in anchored)


def test_act_matches_lattice_product():
    R = ring_make(5, 1, 8)
    g = stabilizer_images(R, "K")[0]
    h = stabilizer_images(R, "K")[2]
    gh = g.mul(h, R.modulus_poly)
    v = standard_vertex(R, 2)
    assert act(R, gh, v) == act(R, g, act(R, h, v))
