"""Class functions on finite groups: inner products, induction, character tables."""

from __future__ import annotations

import numpy as np

from .groups import FiniteGroup, GroupError, compose

TOL = 1e-6


class CharacterError(ArithmeticError):
    pass


def round_int(z, tol=TOL, what="value"):
    """Round a numerically computed quantity that must be a rational integer."""
    r = round(z.real)
    if abs(z - r) > tol:
        raise CharacterError(f"{what} {z} is not an integer within {tol}")
    return int(r)


class ClassFunction:
    def __init__(self, group, values, label=""):
        self.group = group
        self.values = np.asarray(values, dtype=complex)
        self.label = label
        if len(self.values) != len(group.classes):
            raise CharacterError("one value per conjugacy class required")

    @classmethod
    def from_element_function(cls, group, fn, label=""):
        return cls(group, [fn(i) for i in group.class_reps()], label)

    @classmethod
    def from_element_values(cls, group, vals, label=""):
        """Build from a per-element array, checking constancy on classes."""
        vals = np.asarray(vals, dtype=complex)
        out = []
        for c in group.classes:
            v = vals[c]
            if np.max(np.abs(v - v[0])) > TOL:
                raise CharacterError("values are not constant on a conjugacy class")
            out.append(v[0])
        return cls(group, out, label)

    def __call__(self, i):
        return self.values[self.group.class_of[i]]

    def element_values(self):
        return self.values[np.asarray(self.group.class_of)]

    @property
    def degree(self):
        return self.values[self.group.class_of[0]].real

    def __add__(self, other):
        return ClassFunction(self.group, self.values + _vals(other))

    def __sub__(self, other):
        return ClassFunction(self.group, self.values - _vals(other))

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            return ClassFunction(self.group, self.values * other.values)
        return ClassFunction(self.group, self.values * other)

    __rmul__ = __mul__

    def __neg__(self):
        return ClassFunction(self.group, -self.values)

    def conj(self):
        return ClassFunction(self.group, np.conj(self.values), self.label)

    def allclose(self, other, tol=TOL):
        return bool(np.max(np.abs(self.values - _vals(other)), initial=0.0) < tol)

    def __repr__(self):
        return f"ClassFunction({self.label or '?'}, deg={self.degree:.3g})"


def _vals(x):
    return x.values if isinstance(x, ClassFunction) else x


def inner_product_raw(a, b):
    G = a.group
    sizes = np.asarray(G.class_sizes, dtype=float)
    return complex(np.sum(sizes * a.values * np.conj(b.values)) / G.order)


def character_inner_product(a, b, integral=True):
    """<a, b>_G; for (virtual) characters the result is validated as an integer."""
    if a.group is not b.group:
        raise CharacterError("class functions live on different groups")
    z = inner_product_raw(a, b)
    return round_int(z, what="inner product") if integral else z


def trivial_character(G):
    return ClassFunction(G, np.ones(len(G.classes)), "1")


def permutation_character(G, perms, label="perm"):
    """Fixed-point counts; ``perms(i)`` returns the permutation of element i."""
    return ClassFunction.from_element_function(G, lambda i: sum(1 for x, y in enumerate(perms(i)) if x == y), label)


def subgroup_embedding(H, G):
    """Indices in G of the elements of H (both permutation groups on one domain)."""
    try:
        return [G.index[h] for h in H.elements]
    except KeyError:
        raise GroupError("not a subgroup") from None


def restrict(chi, H, embedding=None):
    emb = embedding if embedding is not None else subgroup_embedding(H, chi.group)
    vals = chi.element_values()[emb]
    return ClassFunction.from_element_values(H, vals, f"Res {chi.label}")


def induce_character(H, chi, G, embedding=None):
    """Ind_H^G chi(g) = (1/|H|) sum_{x in G, x g x^-1 in H} chi(x g x^-1)."""
    emb = embedding if embedding is not None else subgroup_embedding(H, G)
    on_h = {g_idx: chi(h_idx) for h_idx, g_idx in enumerate(emb)}
    return induce_from_values(G, on_h, len(emb), f"Ind {chi.label}")


def induce_from_values(G, values_on_subgroup, subgroup_order, label="Ind"):
    """Induction from a subgroup given as {element index of G: value}."""
    out = []
    elems = G.elements
    inverses = [G.inv(i) for i in range(G.order)]
    for rep in G.class_reps():
        g = elems[rep]
        total = 0j
        for x in range(G.order):
            y = G.index[compose(compose(elems[x], g), elems[inverses[x]])]
            v = values_on_subgroup.get(y)
            if v is not None:
                total += v
        out.append(total / subgroup_order)
    return ClassFunction(G, out, label)


def decompose(chi, table):
    """Multiplicities of irreducibles in chi, validated as integers."""
    return [character_inner_product(chi, psi) for psi in table]


# -- Burnside-Dixon character table ---------------------------------------------


def class_constants(G):
    """c[i][j][k] = #{(x, y) in C_i x C_j : x y = z_k}, z_k a fixed rep of C_k."""
    r = len(G.classes)
    c = np.zeros((r, r, r))
    reps = [G.elements[z] for z in G.class_reps()]
    class_of = G.class_of
    elems = G.elements
    for j, cls in enumerate(G.classes):
        for y in cls:
            yinv = elems[G.inv(y)]
            for k, z in enumerate(reps):
                x = G.index[compose(z, yinv)]
                c[class_of[x], j, k] += 1
    return c


def character_table(G, seed=0, max_tries=20):
    """Irreducible characters via common eigenvectors of the class-sum algebra.

    Returns ClassFunctions sorted by (degree, rounded values); validated by
    row orthogonality and the degree-sum identity.
    """
    r = len(G.classes)
    sizes = np.asarray(G.class_sizes, dtype=float)
    if r == 1:
        return [trivial_character(G)]
    c = class_constants(G)
    ident = G.class_of[0]
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        coeffs = rng.integers(1, 1000, size=r).astype(float)
        A = np.einsum("ijk,j->ik", c, coeffs)
        w, V = np.linalg.eig(A)
        gaps = np.abs(w[:, None] - w[None, :]) + np.eye(r) * 1e9
        if gaps.min() > 1e-6 * max(1.0, np.abs(w).max()):
            break
    else:  # pragma: no cover
        raise CharacterError("could not separate eigenvalues")
    chars = []
    for col in range(r):
        omega = V[:, col] / V[ident, col]
        deg2 = G.order / np.sum(np.abs(omega) ** 2 / sizes)
        deg = round_int(complex(np.sqrt(deg2)), tol=1e-4, what="degree")
        vals = omega * deg / sizes
        chars.append(ClassFunction(G, vals))
    chars.sort(key=_sort_key)
    for i, chi in enumerate(chars):
        chi.label = f"X{i}"
    _validate_table(G, chars)
    return chars


def _sort_key(chi):
    def clean(x):
        x = round(float(x), 5)
        return 0.0 if x == 0 else x

    return (round(chi.degree), tuple((clean(v.real), clean(v.imag)) for v in chi.values))


def _validate_table(G, chars):
    r = len(G.classes)
    if len(chars) != r:
        raise CharacterError("table is not square")
    gram = np.array([[inner_product_raw(a, b) for b in chars] for a in chars])
    if np.max(np.abs(gram - np.eye(r))) > TOL:
        raise CharacterError("row orthogonality failed")
    if sum(round(c.degree) ** 2 for c in chars) != G.order:
        raise CharacterError("sum of squared degrees differs from |G|")
    M = np.array([c.values for c in chars])
    col = M.conj().T @ M
    expected = np.diag(G.order / np.asarray(G.class_sizes, dtype=float))
    if np.max(np.abs(col - expected)) > 1e-6 * G.order:
        raise CharacterError("column orthogonality failed")
