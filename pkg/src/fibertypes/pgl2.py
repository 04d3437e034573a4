"""The classical character table of PGL(2, F_q) and the Gelfand-Graev check on Omega."""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .characters import (
    TOL,
    CharacterError,
    ClassFunction,
    character_inner_product,
    character_table,
    induce_from_values,
    trivial_character,
)
from .groups import k_quotient_group
from .ring import additive_characters, ring_make


def split_prime_power(q):
    for p in range(3, q + 1, 2):
        if q % p == 0:
            f, r = 0, q
            while r % p == 0:
                r //= p
                f += 1
            if r != 1:
                break
            return p, f
    raise CharacterError(f"q={q} is not an odd prime power")


class QuadraticExtension:
    """F_q(sqrt D) for a non-square D; elements are pairs (a, b) = a + b sqrt D."""

    def __init__(self, F):
        self.F = F
        squares = {F.mul_t(x, x) for x in F.residues}
        self.D = next(x for x in F.residues if any(x) and x not in squares)
        self.sqrt = {}
        for x in F.residues:
            self.sqrt.setdefault(F.mul_t(x, x), x)
        self.order = F.q**2 - 1
        self.gen = self._generator()
        self.log = {}
        z = (F.one_t(), F.zero_t())
        for i in range(self.order):
            self.log[z] = i
            z = self.mul(z, self.gen)

    def mul(self, x, y):
        F = self.F
        a, b = x
        c, d = y
        return (F.add_t(F.mul_t(a, c), F.mul_t(self.D, F.mul_t(b, d))), F.add_t(F.mul_t(a, d), F.mul_t(b, c)))

    def _generator(self):
        F = self.F
        for a in F.residues:
            for b in F.residues:
                if not any(b):
                    continue
                z = (a, b)
                w, n = z, 1
                while w != (F.one_t(), F.zero_t()):
                    w = self.mul(w, z)
                    n += 1
                if n == self.order:
                    return z
        raise CharacterError("no generator of the quadratic extension")  # pragma: no cover

    def eigenvalue(self, tr, det):
        """A root of x^2 - tr x + det when the discriminant is a non-square."""
        F = self.F
        disc = F.sub_t(F.mul_t(tr, tr), F.mul_t(F.from_int(4), det))
        s = self.sqrt.get(F.mul_t(disc, F.inv_t(self.D)))
        if s is None:
            raise CharacterError("discriminant is a square")
        half = F.inv_t(F.from_int(2))
        return (F.mul_t(tr, half), F.mul_t(s, half))


@dataclass
class MatrixType:
    kind: str  # central | parabolic | split | elliptic
    det: tuple
    eig: tuple = ()  # (a, b) for split, (a,) for central/parabolic, (z,) for elliptic


@dataclass
class PGL2Table:
    q: int
    F: object
    ext: QuadraticExtension
    labels: list = field(default_factory=list)

    def classify(self, m):
        F = self.F
        (a, b), (c, d) = m
        tr = F.add_t(a, d)
        det = F.sub_t(F.mul_t(a, d), F.mul_t(b, c))
        if not any(b) and not any(c) and a == d:
            return MatrixType("central", det, (a,))
        disc = F.sub_t(F.mul_t(tr, tr), F.mul_t(F.from_int(4), det))
        half = F.inv_t(F.from_int(2))
        if not any(disc):
            return MatrixType("parabolic", det, (F.mul_t(tr, half),))
        root = self.ext.sqrt.get(disc)
        if root is not None:
            e1 = F.mul_t(F.add_t(tr, root), half)
            e2 = F.mul_t(F.sub_t(tr, root), half)
            return MatrixType("split", det, (e1, e2))
        return MatrixType("elliptic", det, (self.ext.eigenvalue(tr, det),))

    def _mu(self, j, x):
        return cmath.exp(2j * cmath.pi * self.F.dlog[x] * j / (self.q - 1))

    def _theta(self, l, z):
        return cmath.exp(2j * cmath.pi * self.ext.log[z] * l / (self.q + 1))

    def value(self, label, m):
        """Value of the named irreducible character at a matrix over F_q."""
        q = self.q
        t = self.classify(m)
        kind, arg = label
        chi0 = lambda x: self._mu((q - 1) // 2, x)  # noqa: E731
        if kind == "1":
            return 1.0
        if kind == "sgn":
            return chi0(t.det)
        if kind in ("St", "St.sgn"):
            tw = chi0(t.det) if kind == "St.sgn" else 1.0
            return tw * {"central": q, "parabolic": 0, "split": 1, "elliptic": -1}[t.kind]
        if kind == "PS":
            if t.kind == "central":
                return q + 1
            if t.kind == "parabolic":
                return 1.0
            if t.kind == "split":
                a, b = t.eig
                F = self.F
                r = F.mul_t(a, F.inv_t(b))
                return self._mu(arg, r) + self._mu(-arg, r)
            return 0.0
        if kind == "cusp":
            if t.kind == "central":
                return q - 1
            if t.kind == "parabolic":
                return -1.0
            if t.kind == "split":
                return 0.0
            (z,) = t.eig
            zq = self._frobenius(z)
            return -(self._theta(arg, z) + self._theta(arg, zq))
        raise CharacterError(f"unknown label {label}")

    def _frobenius(self, z):
        w = (self.F.one_t(), self.F.zero_t())
        for _ in range(self.q):
            w = self.ext.mul(w, z)
        return w


def label_name(label):
    kind, arg = label
    return kind if arg is None else f"{kind}({arg})"


def classical_labels(q):
    labels = [("1", None), ("sgn", None), ("St", None), ("St.sgn", None)]
    labels += [("PS", j) for j in range(1, (q - 3) // 2 + 1)]
    labels += [("cusp", l) for l in range(1, (q - 1) // 2 + 1)]
    return labels


def pgl2_group(q):
    p, f = split_prime_power(q)
    R = ring_make(p, f, 3)
    return k_quotient_group(R, 1)


def pgl2q_character_table(q, group=None, cross_check=True):
    """Irreducible characters of PGL(2, F_q) from the classical formulas.

    Returns (group, table, [ClassFunction]); labels are 1, sgn (chi_0 o det),
    St, St.sgn, PS(j) and cusp(l).  Orthogonality is verified and the table
    is compared with the eigenvector construction.
    """
    G = group or pgl2_group(q)
    p, f = split_prime_power(q)
    F = ring_make(p, f, 1)
    tab = PGL2Table(q, F, QuadraticExtension(F), classical_labels(q))
    reps = G.class_reps()
    chars = []
    for lab in tab.labels:
        vals = [tab.value(lab, G.matrices[r]) for r in reps]
        chars.append(ClassFunction(G, vals, label_name(lab)))
    n = len(chars)
    if n != len(G.classes):
        raise CharacterError("classical table has the wrong number of rows")
    gram = np.array([[character_inner_product(a, b, integral=False) for b in chars] for a in chars])
    if np.max(np.abs(gram - np.eye(n))) > TOL:
        raise CharacterError("classical table fails row orthogonality")
    M = np.array([c.values for c in chars])
    col = M.conj().T @ M
    if np.max(np.abs(col - np.diag(G.order / np.asarray(G.class_sizes, float)))) > 1e-6 * G.order:
        raise CharacterError("classical table fails column orthogonality")
    if cross_check:
        other = character_table(G)
        for c in chars:
            if not any(c.allclose(o) for o in other):
                raise CharacterError(f"{c.label} not found in the computed table")
    return G, tab, chars


# -- Gelfand-Graev ---------------------------------------------------------------


@dataclass
class GelfandGraevReport:
    q: int
    identities: dict
    inventory: dict  # label -> multiplicity in H^1(Omega)
    dims: dict
    h1_dim: int
    failures: list

    @property
    def ok(self):
        return not self.failures


def _is_upper_unipotent(F):
    one, zero = F.one_t(), F.zero_t()
    return lambda m: m[0][0] == one and m[1][0] == zero and m[1][1] == one


def _is_upper(F):
    zero = F.zero_t()
    return lambda m: m[1][0] == zero


def gelfand_graev_identity_check(q):
    """Compare the cochain characters of Omega with Ind_U psi, 1 and St."""
    from .cohomology import h1_virtual_character_inputs
    from .fibers import build_fiber_odd

    G, tab, chars = pgl2q_character_table(q)
    F = tab.F
    by_label = {c.label: c for c in chars}
    one = trivial_character(G)
    St = by_label["St"]
    psi = next(c for c in additive_characters(F) if not c.is_trivial)
    U = G.subgroup(_is_upper_unipotent(F))
    ind_psi = induce_from_values(G, {i: psi(G.matrices[i][0][1]) for i in U}, len(U), "Ind psi")
    B = G.subgroup(_is_upper(F))
    ind_b = induce_from_values(G, {i: 1.0 for i in B}, len(B), "Ind 1_B")
    omega = build_fiber_odd(G.tree, 0)
    cc = h1_virtual_character_inputs(omega, G)
    h1 = cc.h1
    failures = []
    identities = {
        "C1-C0+1 = Ind psi - St": (cc.c1 - cc.c0 + one).allclose(ind_psi - St),
        "C1 = Ind psi + 1 + St": cc.c1.allclose(ind_psi + one + St),
        "C0 = 2(1 + St)": cc.c0.allclose(2 * (one + St)),
        "Ind_B 1 = 1 + St": ind_b.allclose(one + St),
    }
    for name, ok in identities.items():
        if not ok:
            failures.append(("identity", name))
    inventory = {c.label: character_inner_product(h1, c) for c in chars}
    inventory = {k: v for k, v in inventory.items() if v}
    dims = {c.label: round(c.degree) for c in chars}
    expected = {"St.sgn": 1}
    expected.update({f"PS({j})": 1 for j in range(1, (q - 3) // 2 + 1)})
    expected.update({f"cusp({l})": 1 for l in range(1, (q - 1) // 2 + 1)})
    if inventory != expected:
        failures.append(("inventory", inventory))
    h1_dim = round(h1.degree)
    if h1_dim != q * q - q - 1 or sum(m * dims[k] for k, m in inventory.items()) != h1_dim:
        failures.append(("dimension", h1_dim))
    gg_norm = character_inner_product(ind_psi, ind_psi)
    gg_constituents = sum(1 for c in chars if character_inner_product(ind_psi, c))
    if gg_norm != gg_constituents:
        failures.append(("Gelfand-Graev not multiplicity free", gg_norm))
    return GelfandGraevReport(q, identities, inventory, dims, h1_dim, failures)
