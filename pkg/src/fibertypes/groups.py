"""Finite quotients of compact subgroups of PGL(2, F), realized as permutation groups.

Each group element is a permutation of a finite set of tree vertices (the
action is faithful on the chosen ball), paired with its matrix in an exact
quotient algebra so that characters defined by matrix entries can be
evaluated.

* ``KQuotient(L)``: GL(2, o/p^L) modulo scalars, i.e. K / K_L.
* ``IwahoriQuotient(L)``: the normalizer of the Iwahori subgroup modulo
  I_{2L} and scalars.  Elements are pairs (eps, x) meaning Pi^eps x, with x
  a unit of the Iwahori order modulo p^L times that order (entries a, b, d
  mod p^L and c in p o mod p^(L+1)).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .ring import ring_make
from .tree import stabilizer_images, tree_ball


class GroupError(ValueError):
    pass


def _content_valuation(g, p):
    v = None
    for row in g.entries:
        for x in row:
            for c in x:
                if c:
                    w = 0
                    while c % p == 0:
                        c //= p
                        w += 1
                    v = w if v is None else min(v, w)
    return v or 0


def _divide_content(g, p):
    v = _content_valuation(g, p)
    d = p**v
    return tuple(tuple(tuple(c // d for c in x) for x in row) for row in g.entries)


class KQuotient:
    """GL(2, o/p^L) / scalars; normal form has its first unit entry equal to 1."""

    kind = "K"

    def __init__(self, ring, level):
        self.level = level
        self.ring = ring_make(ring.p, ring.f, level)

    def normalize(self, m):
        R = self.ring
        flat = [m[0][0], m[0][1], m[1][0], m[1][1]]
        for x in flat:
            if R.is_unit_t(x):
                s = R.inv_t(x)
                flat = [R.mul_t(s, y) for y in flat]
                return ((flat[0], flat[1]), (flat[2], flat[3]))
        raise GroupError("matrix is not invertible mod p")

    def from_element(self, g):
        R = self.ring
        m = tuple(tuple(R.reduce_t(tuple(c % R.pk for c in x), R.k) for x in row) for row in _divide_content(g, R.p))
        det = R.sub_t(R.mul_t(m[0][0], m[1][1]), R.mul_t(m[0][1], m[1][0]))
        if not R.is_unit_t(det):
            raise GroupError("element does not lie in K")
        return self.normalize(m)

    def mul(self, x, y):
        R = self.ring
        (a, b), (c, d) = x
        (e, f), (g, h) = y
        add, mul = R.add_t, R.mul_t
        return self.normalize(
            (
                (add(mul(a, e), mul(b, g)), add(mul(a, f), mul(b, h))),
                (add(mul(c, e), mul(d, g)), add(mul(c, f), mul(d, h))),
            )
        )

    def identity(self):
        R = self.ring
        return ((R.one_t(), R.zero_t()), (R.zero_t(), R.one_t()))

    def order(self):
        R = self.ring
        q, L = R.q, self.level
        return q ** (4 * (L - 1)) * (q * q - 1) * (q * q - q) // (q ** (L - 1) * (q - 1))


class IwahoriQuotient:
    """Itilde / (I_{2L} . scalars), elements (eps, (a, b, c, d)) with a == 1."""

    kind = "Itilde"

    def __init__(self, ring, level):
        self.level = level
        self.ring = ring_make(ring.p, ring.f, level + 1)
        self._mod_l = ring.p**level

    def _trim(self, a, b, c, d):
        m = self._mod_l
        t = lambda x: tuple(v % m for v in x)  # noqa: E731
        return (t(a), t(b), c, t(d))

    def normalize(self, x):
        R = self.ring
        a, b, c, d = x
        if not R.is_unit_t(a):
            raise GroupError("diagonal entry is not a unit")
        s = R.inv_t(a)
        return self._trim(R.one_t(), R.mul_t(s, b), R.mul_t(s, c), R.mul_t(s, d))

    def from_element(self, g):
        R = self.ring
        p = R.p
        (g00, g01), (g10, g11) = _divide_content(g, p)
        # valuation of det decides whether g lies in I or in Pi.I
        mod = R.modulus_poly
        from .tree import _poly_mul_exact

        det = tuple(u - v for u, v in zip(_poly_mul_exact(g00, g11, mod), _poly_mul_exact(g01, g10, mod)))
        vdet = min((_vp(c, p) for c in det if c), default=None)
        if vdet == 0:
            eps, (a, b, c, d) = 0, (g00, g01, g10, g11)
        elif vdet == 1:
            if any(c % p for c in g10 + g11):
                raise GroupError("element does not normalize the Iwahori subgroup")
            eps = 1
            a, b = tuple(c // p for c in g10), tuple(c // p for c in g11)
            c, d = g00, g01
        else:
            raise GroupError("element does not lie in the Iwahori normalizer")
        if any(v % p for v in c):
            raise GroupError("element does not lie in the Iwahori subgroup")
        red = lambda x: tuple(v % R.pk for v in x)  # noqa: E731
        return (eps, self.normalize((red(a), red(b), red(c), red(d))))

    def _sigma(self, x):
        # Pi^-1 x Pi = (d, c/p; p b, a)
        R = self.ring
        a, b, c, d = x
        return (d, tuple(v // R.p for v in c), R.scale_t(b, R.p), a)

    def mul(self, x, y):
        R = self.ring
        e1, x1 = x
        e2, x2 = y
        if e2:
            x1 = self._sigma(x1)
        a1, b1, c1, d1 = x1
        a2, b2, c2, d2 = x2
        add, mul = R.add_t, R.mul_t
        prod = (
            add(mul(a1, a2), mul(b1, c2)),
            add(mul(a1, b2), mul(b1, d2)),
            add(mul(c1, a2), mul(d1, c2)),
            add(mul(c1, b2), mul(d1, d2)),
        )
        return (e1 ^ e2, self.normalize(prod))

    def identity(self):
        R = self.ring
        one, zero = R.one_t(), R.zero_t()
        return (0, (one, zero, zero, one))

    def order(self):
        q, L = self.ring.q, self.level
        return 2 * (q - 1) * q ** (3 * L - 1)


def _vp(n, p):
    w = 0
    while n % p == 0:
        n //= p
        w += 1
    return w


def compose(g, h):
    """(g o h)(x) = g(h(x))."""
    return tuple(g[i] for i in h)


def invert(g):
    out = [0] * len(g)
    for i, j in enumerate(g):
        out[j] = i
    return tuple(out)


@dataclass
class FiniteGroup:
    """A permutation group with optional matrix labels, elements in BFS order."""

    elements: list
    index: dict
    generators: list
    matrices: list = None
    algebra: object = None
    name: str = ""
    _classes: list = field(default=None, repr=False)
    _class_of: list = field(default=None, repr=False)
    _inverses: list = field(default=None, repr=False)

    @property
    def order(self):
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def mul(self, i, j):
        return self.index[compose(self.elements[i], self.elements[j])]

    def inv(self, i):
        if self._inverses is None:
            self._inverses = [self.index[invert(g)] for g in self.elements]
        return self._inverses[i]

    def matrix(self, i):
        return self.matrices[i]

    def _compute_classes(self):
        n = len(self.elements)
        gens = [self.elements[s] for s in self.generators]
        gens_inv = [invert(g) for g in gens]
        class_of = [-1] * n
        classes = []
        for i in range(n):
            if class_of[i] >= 0:
                continue
            cid = len(classes)
            members = [i]
            class_of[i] = cid
            queue = deque([i])
            while queue:
                x = self.elements[queue.popleft()]
                for g, gi in zip(gens, gens_inv):
                    y = self.index[compose(compose(g, x), gi)]
                    if class_of[y] < 0:
                        class_of[y] = cid
                        members.append(y)
                        queue.append(y)
            classes.append(sorted(members))
        self._classes = classes
        self._class_of = class_of

    @property
    def classes(self):
        if self._classes is None:
            self._compute_classes()
        return self._classes

    @property
    def class_of(self):
        if self._class_of is None:
            self._compute_classes()
        return self._class_of

    @property
    def class_sizes(self):
        return [len(c) for c in self.classes]

    def class_reps(self):
        return [c[0] for c in self.classes]

    def act_on_cells(self, i, cells, cell_index):
        """Permutation of a list of paths (vertex-index tuples) induced by element i."""
        g = self.elements[i]
        return [cell_index[tuple(g[v] for v in c)] for c in cells]

    def subgroup(self, predicate, name=""):
        """Indices of elements whose matrix satisfies ``predicate``."""
        return [i for i, m in enumerate(self.matrices) if predicate(m)]


def group_closure(generators, matrices=None, algebra=None, budget=50000, name=""):
    """Breadth-first closure of permutations; tracks matrices when an algebra is given.

    The permutation -> matrix assignment is checked for consistency, which
    certifies that the action is faithful on the quotient algebra.
    """
    if not generators:
        raise GroupError("no generators")
    n = len(generators[0])
    ident = tuple(range(n))
    elements = [ident]
    index = {ident: 0}
    mats = [algebra.identity()] if algebra is not None else None
    gens = list(generators)
    queue = deque([0])
    while queue:
        i = queue.popleft()
        x = elements[i]
        for s, g in enumerate(gens):
            y = compose(g, x)
            m = algebra.mul(matrices[s], mats[i]) if algebra is not None else None
            j = index.get(y)
            if j is None:
                if len(elements) >= budget:
                    raise GroupError(f"group order exceeds budget {budget}")
                index[y] = len(elements)
                elements.append(y)
                if mats is not None:
                    mats.append(m)
                queue.append(index[y])
            elif mats is not None and mats[j] != m:
                raise GroupError("action is not faithful on the matrix quotient")
    gen_idx = sorted({index[g] for g in gens})
    return FiniteGroup(elements, index, gen_idx, mats, algebra, name)


def k_quotient_group(ring, level, subgroup="K", args=(), tree=None, budget=50000):
    """Image of a subgroup of K in K/K_level, acting on the ball of radius ``level``."""
    tree = tree or tree_ball(ring, level)
    alg = KQuotient(ring, level)
    gens = stabilizer_images(tree.ring, subgroup, *args)
    perms = [tree.permutation(g) for g in gens]
    mats = [alg.from_element(g) for g in gens]
    G = group_closure(perms, mats, alg, budget=budget, name=f"{subgroup}{tuple(args) or ''} mod p^{level}")
    G.tree = tree
    return G


def itilde_quotient_group(ring, level, subgroup="Itilde", args=(), tree=None, budget=50000):
    """Image of a subgroup of the Iwahori normalizer modulo I_{2 level}, on the edge ball."""
    tree = tree or tree_ball(ring, level, center="edge")
    alg = IwahoriQuotient(ring, level)
    gens = stabilizer_images(tree.ring, subgroup, *args)
    perms = [tree.permutation(g) for g in gens]
    mats = [alg.from_element(g) for g in gens]
    G = group_closure(perms, mats, alg, budget=budget, name=f"{subgroup} mod I_{2 * level}")
    G.tree = tree
    return G


def matrix_quotient_closure(ring, subgroup, level, args=()):
    """Closure of subgroup generators directly in the matrix quotient (no action)."""
    if subgroup == "Itilde":
        alg = IwahoriQuotient(ring, level)
    else:
        alg = KQuotient(ring, level)
    R = ring_make(ring.p, ring.f, level + 2)
    gens = [alg.from_element(g) for g in stabilizer_images(R, subgroup, *args)]
    seen = {alg.identity()}
    queue = deque(seen)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = alg.mul(g, x)
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def subgroup_from_indices(G, idxs, name=""):
    """The subgroup of G on the given element indices (which must be closed)."""
    idxs = sorted(set(idxs))
    elements = [G.elements[i] for i in idxs]
    index = {g: k for k, g in enumerate(elements)}
    for i in idxs:
        for j in idxs:
            if compose(G.elements[i], G.elements[j]) not in index:
                raise GroupError("index set is not closed under multiplication")
    mats = [G.matrices[i] for i in idxs] if G.matrices is not None else None
    H = FiniteGroup(elements, index, list(range(len(elements))), mats, G.algebra, name or f"sub({G.name})")
    H.tree = getattr(G, "tree", None)
    return H
