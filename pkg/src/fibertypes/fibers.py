"""Fiber graphs Sigma_n and truncated towers over a ball of the tree.

Cells are oriented paths stored as tuples of ball-vertex indices.  An edge
(n+1)-path ``a`` has tail a[:-1] and head a[1:].  Components of a fiber are
labelled by their core path a[1:-1], which every edge of the component shares.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .tree import Anchor, TreeError, TruncatedTree, enumerate_oriented_paths, hermite_class


class FiberError(ValueError):
    pass


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass
class Component:
    label: tuple  # core path c (vertex-index tuple)
    vertices: list  # vertex ids in the parent graph
    edges: list  # edge ids in the parent graph


@dataclass
class FiberGraph:
    n: int
    tree: TruncatedTree
    vertices: list  # n-paths
    edges: list  # (n+1)-paths
    base: object = None  # ("edge", (u, w)), ("vertex", u) or None for a tower
    vindex: dict = field(default_factory=dict, repr=False)
    eindex: dict = field(default_factory=dict, repr=False)
    tails: list = field(default_factory=list, repr=False)
    heads: list = field(default_factory=list, repr=False)
    components: list = field(default_factory=list, repr=False)
    vertex_component: list = field(default_factory=list, repr=False)
    edge_component: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        self.eindex = {e: i for i, e in enumerate(self.edges)}
        try:
            self.tails = [self.vindex[e[:-1]] for e in self.edges]
            self.heads = [self.vindex[e[1:]] for e in self.edges]
        except KeyError as exc:
            raise FiberError(f"edge endpoint {exc} is not a vertex") from None
        self._find_components()

    @property
    def q(self):
        return self.tree.q

    @property
    def V(self):
        return len(self.vertices)

    @property
    def E(self):
        return len(self.edges)

    def _find_components(self):
        uf = UnionFind(self.V)
        for t, h in zip(self.tails, self.heads):
            uf.union(t, h)
        roots = {}
        comps = []
        vc = [0] * self.V
        for v in range(self.V):
            r = uf.find(v)
            if r not in roots:
                roots[r] = len(comps)
                comps.append(Component(None, [], []))
            vc[v] = roots[r]
            comps[roots[r]].vertices.append(v)
        ec = []
        for e, t in enumerate(self.tails):
            ec.append(vc[t])
            comps[vc[t]].edges.append(e)
        for comp in comps:
            cores = {self.edges[e][1:-1] for e in comp.edges}
            comp.label = min(cores) if len(cores) == 1 else None
            comp.cores = cores
        self.components = comps
        self.vertex_component = vc
        self.edge_component = ec

    def component_by_label(self, label):
        for i, c in enumerate(self.components):
            if c.label == label:
                return i
        raise FiberError(f"no component labelled {label}")

    def counts(self):
        return {"vertices": self.V, "edges": self.E, "components": len(self.components)}

    def is_complete_bipartite(self, ci):
        """True if component ci is K_{q,q} with tails and heads as the two sides."""
        comp = self.components[ci]
        q = self.q
        tails = {self.tails[e] for e in comp.edges}
        heads = {self.heads[e] for e in comp.edges}
        return (
            len(tails) == q
            and len(heads) == q
            and not tails & heads
            and len(comp.edges) == q * q
            and len({(self.tails[e], self.heads[e]) for e in comp.edges}) == q * q
        )

    def permute_cells(self, perm):
        """Vertex and edge permutations induced by a ball permutation; None if not stable."""
        try:
            vp = [self.vindex[tuple(perm[x] for x in v)] for v in self.vertices]
            ep = [self.eindex[tuple(perm[x] for x in e)] for e in self.edges]
        except KeyError:
            return None
        return vp, ep

    def export_edge_list(self):
        """Header line of JSON, then one ``head_id tail_id component_id`` line per edge."""
        header = {"n": self.n, "q": self.q, **self.counts()}
        lines = [json.dumps(header, sort_keys=True)]
        for e in range(self.E):
            lines.append(f"{self.heads[e]} {self.tails[e]} {self.edge_component[e]}")
        return "\n".join(lines) + "\n"


def _from_edges(tree, n, edges, base):
    verts = sorted({e[:-1] for e in edges} | {e[1:] for e in edges})
    return FiberGraph(n, tree, verts, sorted(edges), base)


def _require(tree, needed):
    if tree.radius < needed:
        raise FiberError(f"radius too small: need {needed}, have {tree.radius}")


def _reach(tree, extra):
    # edge balls reach one step further from s_1
    return extra - (1 if tree.center == "edge" else 0)


def build_fiber_over_edge(tree, m, edge):
    """Sigma_{2m} over an edge (u, w) of the ball, m >= 1."""
    if m < 1:
        raise FiberError("use build_fiber_level0 for m = 0")
    edges = enumerate_oriented_paths(tree, 2 * m + 1, Anchor("edge", edge, m))
    g = _from_edges(tree, 2 * m, edges, ("edge", tuple(edge)))
    return g


def build_fiber_even(tree, m):
    """Sigma_{2m}: the fiber over the standard edge e_0 = [s_0, s_1]."""
    _require(tree, _reach(tree, m + 1))
    return build_fiber_over_edge(tree, m, (tree.s(0), tree.s(1)))


def build_fiber_over_vertex(tree, m, vertex):
    """X_{2m+1}[s]: edges are (2m+2)-paths centred at s."""
    edges = enumerate_oriented_paths(tree, 2 * m + 2, Anchor("vertex", vertex, m + 1))
    return _from_edges(tree, 2 * m + 1, edges, ("vertex", vertex))


def build_fiber_odd(tree, m):
    """Sigma_{2m+1}: the fiber over the half-ball around s_0."""
    if m < 0:
        raise FiberError("m must be >= 0")
    _require(tree, m + 1)
    return build_fiber_over_vertex(tree, m, tree.s(0))


def build_fiber_level0(tree):
    """Sigma_0: vertices s_0, s_1 and the two directed edges between them."""
    _require(tree, 1)
    s0, s1 = tree.s(0), tree.s(1)
    return _from_edges(tree, 0, [(s0, s1), (s1, s0)], ("edge", (s0, s1)))


def build_fiber(tree, n):
    if n == 0:
        return build_fiber_level0(tree)
    if n % 2 == 0:
        return build_fiber_even(tree, n // 2)
    return build_fiber_odd(tree, (n - 1) // 2)


def build_truncated_tower(tree, n):
    """All oriented n-paths (vertices) and (n+1)-paths (edges) inside the ball."""
    if n < 0:
        raise FiberError("n must be >= 0")
    _require(tree, (n + 1) // 2 + 1)
    verts = enumerate_oriented_paths(tree, n)
    edges = enumerate_oriented_paths(tree, n + 1)
    return FiberGraph(n, tree, verts, edges, None)


# -- component intersections----------------------------------------------------------


def path_union(c, d):
    """The path containing c as prefix and d as suffix (or vice versa), if it exists."""
    if len(c) == len(d) and c[1:] == d[:-1] and c[0] != d[-1]:
        return c + d[-1:]
    if len(c) == len(d) and d[1:] == c[:-1] and d[0] != c[-1]:
        return d + c[-1:]
    return None


@dataclass
class IntersectionReport:
    same_base_pairs: int = 0
    same_base_overlaps: int = 0
    cross_pairs: int = 0
    intersecting_pairs: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures and self.same_base_overlaps == 0


def _component_cells(fiber, ci):
    comp = fiber.components[ci]
    return {fiber.vertices[v] for v in comp.vertices}


def check_component_intersections(fiber, fiber_neighbor):
    """Disjointness of components over one base cell; at most one shared vertex
    across adjacent base cells, present exactly when the union of the cores is a path."""
    rep = IntersectionReport()
    for fb in (fiber, fiber_neighbor):
        cells = [_component_cells(fb, i) for i in range(len(fb.components))]
        for i in range(len(cells)):
            for j in range(i + 1, len(cells)):
                rep.same_base_pairs += 1
                if cells[i] & cells[j]:
                    rep.same_base_overlaps += 1
                    rep.failures.append(("same-base overlap", fb.components[i].label, fb.components[j].label))
        for comp in fb.components:
            if comp.label is None:
                rep.failures.append(("component with several cores", sorted(comp.cores)[:2]))
    a_cells = [_component_cells(fiber, i) for i in range(len(fiber.components))]
    b_cells = [_component_cells(fiber_neighbor, i) for i in range(len(fiber_neighbor.components))]
    for i, ca in enumerate(a_cells):
        la = fiber.components[i].label
        for j, cb in enumerate(b_cells):
            lb = fiber_neighbor.components[j].label
            rep.cross_pairs += 1
            shared = ca & cb
            union = path_union(la, lb)
            if shared:
                rep.intersecting_pairs += 1
            if len(shared) > 1:
                rep.failures.append(("more than one shared cell", la, lb))
            elif shared and shared != {union}:
                rep.failures.append(("shared cell is not the union path", la, lb))
            elif not shared and union is not None and union in fiber.vindex and union in fiber_neighbor.vindex:
                rep.failures.append(("union path present but no intersection", la, lb))
            elif not shared and union is not None:
                # union path leaves one of the (truncated) fibers: only possible at the boundary
                if _complete(fiber, i) and _complete(fiber_neighbor, j):
                    rep.failures.append(("complete components miss their union", la, lb))
    return rep


def _complete(fiber, ci):
    tree = fiber.tree
    label = fiber.components[ci].label
    return label is not None and all(tree.dist[v] <= tree.radius - 1 for v in label)


# -- quotient graphs ---------------------------------------------------------------


def _base_of(n, path):
    m, r = divmod(n, 2)
    if r == 0:
        return ("edge", frozenset((path[m], path[m + 1])))
    return ("vertex", path[(n + 1) // 2])


@dataclass
class QuotientReport:
    n: int
    complete_components: int = 0
    quotient_edges: int = 0
    lower_vertices: int = 0
    lower_edges: int = 0
    equivariance_checks: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


def fibration_components(tower):
    """Components of the fibers of X_n over the cells of the tree, keyed by core path."""
    n = tower.n
    by_base = {}
    for e, path in enumerate(tower.edges):
        by_base.setdefault(_base_of(n, path), []).append(e)
    comps = {}
    problems = []
    for base, eids in sorted(by_base.items(), key=lambda kv: min(kv[1])):
        uf = UnionFind(tower.V)
        for e in eids:
            uf.union(tower.tails[e], tower.heads[e])
        groups = {}
        for e in eids:
            groups.setdefault(uf.find(tower.tails[e]), []).append(e)
        for es in groups.values():
            cores = {tower.edges[e][1:-1] for e in es}
            if len(cores) != 1:
                problems.append(("component with several cores", base))
                continue
            (c,) = cores
            cells = {tower.tails[e] for e in es} | {tower.heads[e] for e in es}
            comps[c] = (base, es, cells)
    return comps, problems


def quotient_iso_check(tower_n, tower_lower, generators=()):
    """Compare the component-intersection graph of X_n with X_{n-1} on the interior.

    ``generators`` are GroupElementG; each is tested for compatibility of the
    label map with the action wherever the images stay inside the ball.
    """
    n = tower_n.n
    if tower_lower.n != n - 1:
        raise FiberError("towers must be at consecutive levels")
    tree = tower_n.tree
    R = tree.radius
    rep = QuotientReport(n)
    comps, problems = fibration_components(tower_n)
    rep.failures.extend(problems)
    inner = lambda path: all(tree.dist[v] <= R - 1 for v in path)  # noqa: E731
    complete = {c: v for c, v in comps.items() if inner(c)}
    rep.complete_components = len(complete)
    # quotient edges: pairs of complete components sharing cells
    owner = {}
    for c, (_, _, cells) in complete.items():
        for cell in cells:
            owner.setdefault(cell, []).append(c)
    q_edges = {}
    for cell, cs in owner.items():
        if len(cs) > 2:
            rep.failures.append(("cell in more than two components", tower_n.vertices[cell]))
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                key = frozenset((cs[i], cs[j]))
                q_edges.setdefault(key, []).append(tower_n.vertices[cell])
    for key, witnesses in q_edges.items():
        if len(witnesses) != 1:
            rep.failures.append(("intersection is not a single vertex", sorted(key)))
    rep.quotient_edges = len(q_edges)
    lower_v = {v for v in tower_lower.vertices if inner(v)}
    lower_e = {e for e in tower_lower.edges if inner(e)}
    rep.lower_vertices = len(lower_v)
    rep.lower_edges = len(lower_e)
    if set(complete) != lower_v:
        diff = sorted(set(complete) ^ lower_v)
        rep.failures.append(("vertex sets differ", diff[0] if diff else None))
    mapped = {}
    for key, witnesses in q_edges.items():
        w = witnesses[0]
        c1, c2 = sorted(key)
        if {w[:-1], w[1:]} != {c1, c2}:
            rep.failures.append(("witness does not join the two labels", w))
        mapped[w] = key
    if set(mapped) != lower_e:
        diff = sorted(set(mapped) ^ lower_e)
        rep.failures.append(("edge sets differ", diff[0] if diff else None))
    for g in generators:
        img = {}

        def gv(v):
            if v not in img:
                try:
                    img[v] = tree.act_vertex(g, v)
                except TreeError:
                    img[v] = None
            return img[v]

        for c, (_, es, _) in complete.items():
            gc = tuple(gv(v) for v in c)
            if None in gc or gc not in complete:
                continue
            rep.equivariance_checks += 1
            target = set(complete[gc][1])
            for e in es:
                ge = tuple(gv(v) for v in tower_n.edges[e])
                if None in ge:
                    continue
                if tower_n.eindex.get(ge) not in target:
                    rep.failures.append(("label map not equivariant", g.name, c))
                    break
                # directed structure: g(a+) == (g a)+
                if tuple(gv(v) for v in tower_n.edges[e][1:]) != ge[1:]:
                    rep.failures.append(("head not equivariant", g.name, c))
    return rep


# -- coordinates on the standard component ------------------------------------------------


def standard_core(tree, n):
    """Core path of the standard component: s_{-m+1..m} (n = 2m) or s_{-m..m} (n = 2m+1)."""
    if n % 2 == 0:
        m = n // 2
        ks = range(-m + 1, m + 1)
    else:
        m = (n - 1) // 2
        ks = range(-m, m + 1)
    return tuple(tree.s(k) for k in ks)


def standard_component_coordinates(fiber):
    """Identify the edges of the standard component with F_q x F_q.

    Left extensions a_x of s_{-j} are the classes of <(x p^j, 1), (p^(j+1), 0)>,
    right extensions b_y of s_r are <(1, y p^r), (0, p^(r+1))>, so that the
    level group acts by translations and the diagonal torus by scaling.
    Returns (component index, {edge id: (x, y)}).
    """
    tree = fiber.tree
    R = tree.ring
    n = fiber.n
    if n < 2:
        raise FiberError("coordinates defined for n >= 2")
    core = standard_core(tree, n)
    ci = fiber.component_by_label(core)
    j = -((n // 2) - 1) if n % 2 == 0 else -((n - 1) // 2)
    j = -j  # left end is s_{-j}
    r = n // 2 if n % 2 == 0 else (n - 1) // 2
    p = R.p
    one, zero = R.one_t(), R.zero_t()
    left, right = {}, {}
    for x in R.residue_field.residues:
        x = tuple(x) + (0,) * (R.f - len(x))
        a = hermite_class(R, ((R.scale_t(x, p**j), R.from_int(p ** (j + 1))), (one, zero)))
        b = hermite_class(R, ((one, zero), (R.scale_t(x, p**r), R.from_int(p ** (r + 1)))))
        left[tree.vid(a)] = x
        right[tree.vid(b)] = x
    coords = {}
    for e in fiber.components[ci].edges:
        path = fiber.edges[e]
        coords[e] = (left[path[0]], right[path[-1]])
    if len(set(coords.values())) != fiber.q**2:
        raise FiberError("coordinate map is not a bijection onto F_q x F_q")
    return ci, coords
