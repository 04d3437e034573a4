"""Principal-series types (J, rho_theta) for f = 1 and their Mackey norms.

J = Gamma_0(p^n) and rho_theta(g) = theta(a / d) for a character theta of
(Z/p^n)^x; here theta (x) theta^-1 plays the role of the torus character.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .characters import CharacterError, character_inner_product, induce_from_values, round_int
from .groups import KQuotient, k_quotient_group
from .ring import ring_make


def unit_group(p, n):
    """(generator, {unit: discrete log}) for (Z/p^n)^x."""
    mod = p**n
    order = (p - 1) * p ** (n - 1)
    for g in range(2, mod):
        if g % p == 0:
            continue
        log, x = {}, 1
        for i in range(order):
            log[x] = i
            x = x * g % mod
        if len(log) == order:
            return g, log
    raise CharacterError("no generator")  # pragma: no cover


@dataclass(frozen=True)
class UnitCharacter:
    """theta_j: g^i -> exp(2 pi i ij / phi(p^n)) on (Z/p^n)^x."""

    p: int
    n: int
    j: int

    @property
    def order_of_group(self):
        return (self.p - 1) * self.p ** (self.n - 1)

    def __call__(self, x):
        _, log = _unit_group_cached(self.p, self.n)
        x %= self.p**self.n
        return cmath.exp(2j * cmath.pi * log[x] * self.j / self.order_of_group)

    def conductor(self):
        """Least c with theta trivial on 1 + p^c (0 when theta is trivial)."""
        for c in range(0, self.n + 1):
            if c == 0:
                if self.j % self.order_of_group == 0:
                    return 0
                continue
            if all(abs(self(1 + self.p**c * t) - 1) < 1e-9 for t in range(self.p ** (self.n - c))):
                return c
        return self.n

    @property
    def squares_to_trivial(self):
        return (2 * self.j) % self.order_of_group == 0


@lru_cache(maxsize=None)
def _unit_group_cached(p, n):
    return unit_group(p, n)


def characters_of_conductor(p, n):
    order = (p - 1) * p ** (n - 1)
    return [t for t in (UnitCharacter(p, n, j) for j in range(order)) if t.conductor() == n]


# -- the subgroup J and its character --------------------------------------------


def _int_matrix(alg, m):
    return ((m[0][0][0], m[0][1][0]), (m[1][0][0], m[1][1][0]))


def _alg_matrix(alg, a, b, c, d):
    R = alg.ring
    t = R.from_int
    return alg.normalize(((t(a), t(b)), (t(c), t(d))))


@lru_cache(maxsize=None)
def j_elements(p, n):
    """Gamma_0(p^n) modulo K_n and scalars, normalized with a = 1."""
    mod = p**n
    alg = KQuotient(ring_make(p, 1, n), n)
    out = []
    for b in range(mod):
        for d in range(1, mod):
            if d % p:
                out.append(_alg_matrix(alg, 1, b, 0, d))
    return alg, tuple(out)


def rho_value(theta, alg, m):
    (a, b), (c, d) = _int_matrix(alg, m)
    mod = theta.p**theta.n
    if c % mod:
        raise CharacterError("element is not in J")
    return theta(a * pow(d, -1, mod))


@dataclass
class PSReport:
    p: int
    n: int
    theta: int
    status: str  # ok | hypothesis violated | failed
    dim: int = 0
    mackey_norm: int = None
    brute_norm: int = None
    well_defined: bool = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.status in ("ok", "hypothesis violated")


@lru_cache(maxsize=None)
def _j_product_table(p, n):
    alg, J = j_elements(p, n)
    pos = {m: i for i, m in enumerate(J)}
    return np.array([[pos[alg.mul(x, y)] for y in J] for x in J])


def check_rho_multiplicative(theta):
    """rho(xy) = rho(x) rho(y) for all x, y in J."""
    alg, J = j_elements(theta.p, theta.n)
    vals = np.array([rho_value(theta, alg, m) for m in J])
    table = _j_product_table(theta.p, theta.n)
    return bool(np.max(np.abs(vals[table] - np.outer(vals, vals))) < 1e-9)


def projective_line(p, n):
    """Representatives g with g . [1:0] running over P^1(Z/p^n)."""
    mod = p**n
    reps = [(x, 1, 1, 0) for x in range(mod)]  # (x : 1)
    reps += [(1, 0, p * y, 1) for y in range(p ** (n - 1))]  # (1 : p y)
    return reps


def _point_of(alg, m):
    # image of the line spanned by e_1 under m, as a normalized point
    (a, b), (c, d) = _int_matrix(alg, m)
    p, mod = alg.ring.p, alg.ring.pk
    if c % p:
        return (a * pow(c, -1, mod) % mod, 1)
    return (1, c * pow(a, -1, mod) % mod)


def mackey_norm(theta):
    """<Ind_J^K rho, Ind_J^K rho> as a sum over J-double cosets of <rho, rho^g>."""
    p, n = theta.p, theta.n
    alg, J = j_elements(p, n)
    total = 0
    seen = set()
    for a, b, c, d in projective_line(p, n):
        g = _alg_matrix(alg, a, b, c, d)
        pt = _point_of(alg, g)
        if pt in seen:
            continue
        orbit = {_point_of(alg, alg.mul(h, g)) for h in J}
        seen |= orbit
        ginv = _inverse(alg, g)
        stab = [h for h in J if _point_of(alg, alg.mul(h, g)) == pt]
        acc = 0j
        for h in stab:
            conj = alg.mul(ginv, alg.mul(h, g))  # g^-1 h g lies in J
            acc += rho_value(theta, alg, h) * np.conj(rho_value(theta, alg, conj))
        total += round_int(acc / len(stab), what="intertwining number")
    if len(seen) != p**n + p ** (n - 1):
        raise CharacterError("double cosets do not cover P^1")
    return total


def _inverse(alg, g):
    (a, b), (c, d) = _int_matrix(alg, g)
    return _alg_matrix(alg, d, -b, -c, a)


def brute_force_norm(theta, G=None):
    """Norm of Ind_J rho computed by induction inside PGL(2, Z/p^n)."""
    p, n = theta.p, theta.n
    if G is None:
        G = k_quotient_group(ring_make(p, 1, n + 4), n)
    alg = G.algebra
    mod = p**n
    vals = {}
    for i, m in enumerate(G.matrices):
        (a, b), (c, d) = _int_matrix(alg, m)
        if c % mod == 0:
            vals[i] = rho_value(theta, alg, m)
    ind = induce_from_values(G, vals, len(vals), f"Ind rho({theta.j})")
    return character_inner_product(ind, ind), ind


def principal_series_type_check(theta, brute_force_limit=3000, G=None):
    """Well-definedness of rho, the excluded case theta^2 = 1 and the Mackey norm."""
    p, n = theta.p, theta.n
    rep = PSReport(p, n, theta.j, "ok", dim=p**n + p ** (n - 1))
    if theta.conductor() != n:
        raise CharacterError("theta does not have conductor n")
    if theta.squares_to_trivial:
        rep.status = "hypothesis violated"
        return rep
    alg, J = j_elements(p, n)
    rep.well_defined = check_rho_multiplicative(theta)
    rep.mackey_norm = mackey_norm(theta)
    order = KQuotient(ring_make(p, 1, n), n).order()
    if G is not None or order <= brute_force_limit:
        rep.brute_norm, _ = brute_force_norm(theta, G)
    rep.details["J order"] = len(J)
    rep.details["K order"] = order
    if not rep.well_defined or rep.mackey_norm != 1 or rep.brute_norm not in (None, 1):
        rep.status = "failed"
    return rep


# -- psi_alpha on the subgroups h_1 -------------------------------------------------


def h_subgroup(G, n, j, which=1):
    """Indices of G = K/K_L lying in (1+p^n, p^j; p^(n+1), 1+p^n) (which=1) or its
    variant with 1+p^(n+1) on the diagonal (which=2)."""
    alg = G.algebra
    R = alg.ring
    p = R.p
    dv = n if which == 1 else n + 1
    out = []
    for i, m in enumerate(G.matrices):
        (a, b), (c, d) = m
        if a != R.one_t():
            continue
        if R.valuation_t(b) >= j and R.valuation_t(c) >= n + 1 and R.valuation_t(R.sub_t(d, R.one_t())) >= dv:
            out.append(i)
    return out


def psi_alpha_values(G, idxs, n, alpha):
    """psi(alpha (a - d)) on the normalized representatives, a - d read off from 1 - d."""
    R = G.algebra.ring
    F = R.residue_field
    from .ring import additive_characters

    psi = next(c for c in additive_characters(F) if c.parameter == F.one_t())
    out = {}
    for i in idxs:
        (a, b), (c, d) = G.matrices[i]
        diff = R.div_p_power_t(R.sub_t(R.one_t(), d), n)
        out[i] = psi(F.mul_t(R.residue_t(diff), alpha))
    return out


@dataclass
class PsiAlphaReport:
    alpha: tuple
    contains_small: int
    contains_large: int

    @property
    def applicable(self):
        return self.contains_small > 0

    @property
    def ok(self):
        return not self.applicable or self.contains_large > 0


def psi_alpha_propagation_check(rep, G, n, alpha):
    """If rep contains psi_alpha on (n)h_1 then it contains psi_alpha on (0)h_1."""
    vals = rep.element_values()
    out = []
    for j in (n, 0):
        idxs = h_subgroup(G, n, j, 1)
        psi = psi_alpha_values(G, idxs, n, alpha)
        ip = sum(vals[i] * np.conj(psi[i]) for i in idxs) / len(idxs)
        out.append(round_int(complex(ip), what="restriction multiplicity"))
    return PsiAlphaReport(alpha, out[0], out[1])
