"""Truncated Bruhat-Tits tree of PGL(2) over the unramified model.

A vertex is the homothety class of an o-lattice in F^2, stored in Hermite
form: the lattice spanned by the columns of (p^a, b; 0, p^c), scaled to be
primitive (contained in o^2 but not in p o^2), with b reduced mod p^a.
The triple (a, c, b) is the canonical key.  The distance to s_0 = [o + o]
is a + c.

Group elements are integral 2x2 matrices, exact over Z[x]/(h); scalars act
trivially, so every element of PGL(2, F) has such a representative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .ring import GaloisRing, RingError, ring_make


class PrecisionError(RingError):
    pass


class TreeError(ValueError):
    pass


# -- exact integral matrices ---------------------------------------------------


def _poly_mul_exact(a, b, mod):
    f = len(mod) - 1
    if f == 1:
        return (a[0] * b[0],)
    out = [0] * (2 * f - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    for i in range(2 * f - 2, f - 1, -1):
        c = out[i]
        if c:
            for j in range(f):
                out[i - f + j] -= c * mod[j]
            out[i] = 0
    return tuple(out[:f])


@dataclass(frozen=True)
class GroupElementG:
    """An element of PGL(2, F), given by an integral representative.

    ``entries`` is ((a, b), (c, d)) with each entry a tuple of f integers
    (coefficients in the power basis, unreduced).
    """

    entries: tuple
    name: str = ""

    @classmethod
    def from_ints(cls, f, a, b, c, d, name=""):
        z = (0,) * (f - 1)

        def e(x):
            return tuple(x) if isinstance(x, tuple) else (x,) + z

        return cls(((e(a), e(b)), (e(c), e(d))), name)

    def mul(self, other, mod):
        (a, b), (c, d) = self.entries
        (e, f_), (g, h) = other.entries

        def add(x, y):
            return tuple(u + v for u, v in zip(x, y))

        m = lambda x, y: _poly_mul_exact(x, y, mod)  # noqa: E731
        return GroupElementG(
            ((add(m(a, e), m(b, g)), add(m(a, f_), m(b, h))), (add(m(c, e), m(d, g)), add(m(c, f_), m(d, h)))),
            f"{self.name}*{other.name}" if self.name and other.name else "",
        )

    def reduced(self, ring):
        """Entries reduced into ``ring``."""
        return tuple(tuple(ring.reduce_t(tuple(c % ring.pk for c in x), ring.k) for x in row) for row in self.entries)


def identity_element(f):
    return GroupElementG.from_ints(f, 1, 0, 0, 1, "1")


def t_varpi(ring):
    return GroupElementG.from_ints(ring.f, 1, 0, 0, ring.p, "t")


def pi_element(ring):
    """Pi = (0, 1; p, 0), normalizing the Iwahori subgroup."""
    return GroupElementG.from_ints(ring.f, 0, 1, ring.p, 0, "Pi")


# -- lattice classes -----------------------------------------------------------


@dataclass(frozen=True, order=True)
class TreeVertex:
    a: int
    c: int
    b: tuple

    @property
    def depth(self):
        """Distance to s_0."""
        return self.a + self.c


def standard_vertex(ring, k):
    """s_k = [o + p^k o] on the standard apartment."""
    z = (0,) * ring.f
    if k >= 0:
        return TreeVertex(0, k, z)
    return TreeVertex(-k, 0, z)


def vertex_matrix(ring, v):
    p = ring.p
    return ((ring.from_int(p**v.a), v.b), (ring.zero_t(), ring.from_int(p**v.c)))


def _matmul(ring, m, n):
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    add, mul = ring.add_t, ring.mul_t
    return (
        (add(mul(a, e), mul(b, g)), add(mul(a, f), mul(b, h))),
        (add(mul(c, e), mul(d, g)), add(mul(c, f), mul(d, h))),
    )


def hermite_class(ring, m):
    """Canonical TreeVertex of the lattice spanned by the columns of ``m``.

    Entries must be exact modulo p^W (W = ring.k).  Raises PrecisionError if
    the determinant valuation reaches W, where the class is not determined.
    """
    W = ring.k
    (x00, x01), (x10, x11) = m
    v0 = ring.valuation_t(x10)
    v1 = ring.valuation_t(x11)
    if v0 < v1:
        x00, x01 = x01, x00
        x10, x11 = x11, x10
        v0, v1 = v1, v0
    if v1 >= W:
        raise PrecisionError("precision window exceeded (singular bottom row)")
    u1 = ring.div_p_power_t(x11, v1)
    u1_inv = ring.inv_t(u1)
    if v0 < W:
        t = ring.mul_t(ring.div_p_power_t(x10, v1), u1_inv)
        x00 = ring.sub_t(x00, ring.mul_t(t, x01))
    a = ring.valuation_t(x00)
    if a + v1 >= W:
        raise PrecisionError("precision window exceeded")
    c = v1
    b = ring.reduce_t(ring.mul_t(x01, u1_inv), a)
    vb = min(ring.valuation_t(b) if any(b) else a, a)
    j = min(a, c, vb)
    if j:
        a -= j
        c -= j
        b = ring.reduce_t(ring.div_p_power_t(b, j), a)
    return TreeVertex(a, c, b)


def act(ring, g, v):
    """g . v for a GroupElementG g, computed in the window ring."""
    gm = g.reduced(ring)
    return hermite_class(ring, _matmul(ring, gm, vertex_matrix(ring, v)))


def vertex_neighbors(ring, v):
    """The q+1 neighbours, indexed by P^1(F_q): (x:1) for residues x, then (1:0)."""
    m = vertex_matrix(ring, v)
    p = ring.from_int(ring.p)
    one, zero = ring.one_t(), ring.zero_t()
    out = []
    for x in ring.residue_field.residues:
        x = tuple(x) + (0,) * (ring.f - len(x))
        out.append(hermite_class(ring, _matmul(ring, m, ((x, p), (one, zero)))))
    out.append(hermite_class(ring, _matmul(ring, m, ((one, zero), (zero, p)))))
    return out


def neighbor_by_label(ring, v, x):
    """Neighbour of v labelled (x:1), x a residue tuple, or (1:0) when x is None."""
    m = vertex_matrix(ring, v)
    p = ring.from_int(ring.p)
    one, zero = ring.one_t(), ring.zero_t()
    if x is None:
        return hermite_class(ring, _matmul(ring, m, ((one, zero), (zero, p))))
    return hermite_class(ring, _matmul(ring, m, ((tuple(x), p), (one, zero))))


# -- truncated ball ------------------------------------------------------------


@dataclass
class TruncatedTree:
    ring: GaloisRing  # window ring, precision W
    radius: int
    center: str  # "vertex" (ball about s_0) or "edge" (about e_0 = [s_0, s_1])
    vertices: list
    index: dict
    adjacency: list
    dist: list = field(repr=False)

    @property
    def q(self):
        return self.ring.q

    @property
    def window(self):
        return self.ring.k

    def vid(self, v):
        try:
            return self.index[v]
        except KeyError:
            raise TreeError(f"vertex {v} outside the ball") from None

    def s(self, k):
        return self.vid(standard_vertex(self.ring, k))

    @cached_property
    def edges(self):
        return sorted((u, w) for u in range(len(self.vertices)) for w in self.adjacency[u] if u < w)

    def act_vertex(self, g, i):
        return self.vid(act(self.ring, g, self.vertices[i]))

    def permutation(self, g):
        """Action of g on the ball as an index tuple; g must preserve the ball."""
        return tuple(self.act_vertex(g, i) for i in range(len(self.vertices)))

    def distance(self, i, j):
        return self._dist_from(i)[j]

    def _dist_from(self, i):
        cache = self.__dict__.setdefault("_dcache", {})
        if i not in cache:
            d = {i: 0}
            frontier = [i]
            while frontier:
                nxt = []
                for u in frontier:
                    for w in self.adjacency[u]:
                        if w not in d:
                            d[w] = d[u] + 1
                            nxt.append(w)
                frontier = nxt
            cache[i] = d
        return cache[i]


def tree_ball(ring, R, center="vertex", window=None):
    """All vertices within distance R of s_0 (or of s_0 or s_1 for an edge ball).

    ``ring`` supplies p and f; the window precision defaults to R + 4.
    """
    if R < 1:
        raise TreeError("radius must be >= 1")
    W = window if window is not None else R + 4
    if W < R + 2:
        raise PrecisionError(f"insufficient precision window W={W} for radius {R}")
    wring = ring if ring.k == W else ring_make(ring.p, ring.f, W)
    centers = [standard_vertex(wring, 0)]
    if center == "edge":
        centers.append(standard_vertex(wring, 1))
    elif center != "vertex":
        raise TreeError(f"unknown ball center {center!r}")
    dist = {v: 0 for v in centers}
    nbrs = {}
    frontier = list(centers)
    while frontier:
        nxt = []
        for v in frontier:
            ns = vertex_neighbors(wring, v)
            nbrs[v] = ns
            if dist[v] == R:
                continue
            for w in ns:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    verts = sorted(dist, key=lambda v: (v.depth, v.a, v.c, v.b))
    index = {v: i for i, v in enumerate(verts)}
    adjacency = [sorted(index[w] for w in nbrs[v] if w in index) for v in verts]
    return TruncatedTree(wring, R, center, verts, index, adjacency, [dist[v] for v in verts])


def ball_size(q, R):
    return 1 + sum((q + 1) * q ** (k - 1) for k in range(1, R + 1))


# -- oriented paths ------------------------------------------------------------


@dataclass(frozen=True)
class Anchor:
    """Where a path is pinned.

    kind "ball": no constraint; "vertex": path[position] == cell;
    "edge": {path[position], path[position+1]} == cell (either orientation).
    """

    kind: str = "ball"
    cell: object = None
    position: int = None


def _extend(tree, path, left, right):
    out = [path]
    for _ in range(left):
        out = [(w,) + pth for pth in out for w in tree.adjacency[pth[0]] if len(pth) < 2 or w != pth[1]]
    for _ in range(right):
        out = [pth + (w,) for pth in out for w in tree.adjacency[pth[-1]] if len(pth) < 2 or w != pth[-2]]
    return out


def enumerate_oriented_paths(tree, L, anchor=Anchor()):
    """All oriented L-paths (L+1 vertices) in the ball satisfying ``anchor``, sorted."""
    if L < 0:
        raise TreeError("L must be >= 0")
    n = len(tree.vertices)
    if anchor.kind == "ball":
        seeds = [((i,), 0) for i in range(n)]
    elif anchor.kind == "vertex":
        i = anchor.cell
        if not 0 <= i < n:
            raise TreeError("anchor outside ball")
        pos = L // 2 if anchor.position is None else anchor.position
        seeds = [((i,), pos)]
    elif anchor.kind == "edge":
        u, w = anchor.cell
        if not (0 <= u < n and 0 <= w < n) or w not in tree.adjacency[u]:
            raise TreeError("anchor outside ball")
        if L < 1:
            raise TreeError("edge anchor needs L >= 1")
        pos = (L - 1) // 2 if anchor.position is None else anchor.position
        seeds = [((u, w), pos), ((w, u), pos)]
    else:
        raise TreeError(f"unknown anchor {anchor.kind!r}")
    out = []
    for core, pos in seeds:
        right = L - pos - (len(core) - 1)
        if anchor.kind == "ball":
            # unanchored: grow rightwards from every start vertex
            out.extend(_extend(tree, core, 0, L))
        else:
            if pos < 0 or right < 0:
                raise TreeError("anchor position out of range")
            out.extend(_extend(tree, core, pos, right))
    return sorted(out)


def head(path):
    return path[1:]


def tail(path):
    return path[:-1]


# -- subgroup generators --------------------------------------------------------


def _basis(f):
    return [tuple(1 if j == i else 0 for j in range(f)) for i in range(f)]


def _unit_generators(ring):
    """Lifts generating (o/p^N)^x for every N."""
    g = tuple(ring.generator_t) + (0,) * (ring.f - len(ring.generator_t))
    gens = [g]
    for t in _basis(ring.f):
        gens.append(tuple((1 if i == 0 else 0) + ring.p * c for i, c in enumerate(t)))
    return gens


def _scaled(t, n):
    return tuple(c * n for c in t)


def _unipotent_and_diag(ring, upper_val, lower_val, diag_val):
    """Generators of (1+p^d o, p^u o; p^l o, 1+p^d o), or of units on the diagonal when d = 0."""
    f, p = ring.f, ring.p
    one = (1,) + (0,) * (f - 1)
    zero = (0,) * f
    gens = []
    for t in _basis(f):
        gens.append(GroupElementG(((one, _scaled(t, p**upper_val)), (zero, one)), "u"))
        gens.append(GroupElementG(((one, zero), (_scaled(t, p**lower_val), one)), "l"))
    if diag_val == 0:
        units = _unit_generators(ring)
    else:
        units = [tuple((1 if i == 0 else 0) + p**diag_val * c for i, c in enumerate(t)) for t in _basis(f)]
    for u in units:
        gens.append(GroupElementG(((u, zero), (zero, one)), "d1"))
        gens.append(GroupElementG(((one, zero), (zero, u)), "d2"))
    return gens


SUBGROUP_NAMES = ("K", "I", "Itilde", "Gamma0", "T0", "K_n", "I_n", "H1", "H2", "J")


def stabilizer_images(ring, subgroup, *args):
    """Finite generating set (exact integral representatives) for a named subgroup.

    K, I, Itilde, T0; Gamma0(k, l) with k, l >= 0; K_n(n); I_n(n);
    H1(n, j) = (1+p^n, p^j; p^(n+1), 1+p^n); H2(n, j) = (1+p^(n+1), p^j; p^(n+1), 1+p^(n+1));
    J(n) = Gamma0(n, 0), the group carrying rho_chi for conductor n.
    """
    f, p = ring.f, ring.p
    if subgroup == "K":
        return _unipotent_and_diag(ring, 0, 0, 0)
    if subgroup == "I":
        return _unipotent_and_diag(ring, 0, 1, 0)
    if subgroup == "Itilde":
        return _unipotent_and_diag(ring, 0, 1, 0) + [pi_element(ring)]
    if subgroup == "Gamma0":
        k, l = args
        if k < 0 or l < 0:
            raise TreeError("Gamma0(k, l) implemented for k, l >= 0")
        return _unipotent_and_diag(ring, l, k, 0)
    if subgroup == "T0":
        return [g for g in _unipotent_and_diag(ring, 0, 0, 0) if g.name.startswith("d")]
    if subgroup == "K_n":
        (n,) = args
        return _unipotent_and_diag(ring, n, n, n)
    if subgroup == "I_n":
        (n,) = args
        k, r = divmod(n - 1, 2)
        if r == 0:  # I_{2k+1}
            return _unipotent_and_diag(ring, k, k + 1, k + 1)
        return _unipotent_and_diag(ring, k + 1, k + 2, k + 1)
    if subgroup == "H1":
        n, j = args
        return _unipotent_and_diag(ring, j, n + 1, n)
    if subgroup == "H2":
        n, j = args
        return _unipotent_and_diag(ring, j, n + 1, n + 1)
    if subgroup == "J":
        (n,) = args
        return _unipotent_and_diag(ring, 0, n, 0)
    raise TreeError(f"unknown subgroup {subgroup!r}")
