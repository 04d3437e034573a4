"""Fundamental strata on the level subgroups and the alpha-characters of harmonic cochains.

Two settings are used:

* ``"maximal"``: K_m / K_{m+1} inside a K-quotient.  An element 1 + p^m X
  (normalized so that its (1,1) entry is 1) has coordinates x_b, x_c, x_d and
  the character attached to beta = (e, u; v, -e) is psi(u x_c + v x_b - e x_d).
* ``"iwahori"``: I_{2m-1} / I_{2m} inside an Itilde-quotient.  An element
  (1, p^(m-1) b; p^m c, d) has coordinates (b, c) and the character attached
  to (v, u) is psi(v b + u c).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .characters import CharacterError, ClassFunction, character_inner_product, round_int
from .ring import NonInvertibleError, RingElement, additive_characters, ring_make

SETTINGS = ("iwahori", "maximal")


@dataclass(frozen=True)
class Stratum:
    order: str  # iwahori | maximal
    level: int
    beta: tuple
    classification: str  # ramified-simple | simple-non-scalar | split-fundamental | nilpotent | trivial


def splits_over_residue_field(F, c):
    """Brute force: does x^2 - c have a root in F_q?"""
    return any(F.mul_t(x, x) == c for x in F.residues)


def _field_and_tuple(x):
    if isinstance(x, RingElement):
        ring = x.ring
        return ring.residue_field, ring.residue_t(x.coeffs)
    raise TypeError("expected a RingElement")


def classify_beta(F, e, u, v):
    """Type of the traceless residue matrix (e, u; v, -e)."""
    disc = F.add_t(F.mul_t(e, e), F.mul_t(u, v))
    if not any(disc):
        return "trivial" if not (any(e) or any(u) or any(v)) else "nilpotent"
    return "split-fundamental" if splits_over_residue_field(F, disc) else "simple-non-scalar"


def classify_stratum(setting, u, v, level=1):
    """Antidiagonal stratum with unit entries u, v."""
    if setting not in SETTINGS:
        raise ValueError(f"unknown setting {setting!r}")
    F, ut = _field_and_tuple(u)
    _, vt = _field_and_tuple(v)
    if not any(ut) or not any(vt):
        raise NonInvertibleError("stratum entries must be units")
    if setting == "iwahori":
        cls = "ramified-simple"
    else:
        uv = F.mul_t(ut, vt)
        cls = "split-fundamental" if _is_square(F, uv) else "simple-non-scalar"
    return Stratum(setting, level, (ut, vt), cls)


def _is_square(F, x):
    return F.pow_t(x, (F.q - 1) // 2) == F.one_t()


# -- level coordinates -----------------------------------------------------------------


def _div_res(x, e, p):
    d = p**e
    if any(c % d for c in x):
        return None
    return tuple((c // d) % p for c in x)


def level_coordinates(G, setting, m, i):
    """Residue coordinates of element i in the level-m abelian quotient, or None."""
    R = G.algebra.ring
    p = R.p
    one = R.one_t()
    if setting == "maximal":
        (a, b), (c, d) = G.matrices[i]
        if a != one:
            return None
        dm1 = R.sub_t(d, one)
        xb, xc, xd = _div_res(b, m, p), _div_res(c, m, p), _div_res(dm1, m, p)
        if None in (xb, xc, xd):
            return None
        return xb, xc, xd
    eps, (a, b, c, d) = G.matrices[i]
    if eps or a != one:
        return None
    L = G.algebra.level
    dm1 = tuple(x % p**L for x in R.sub_t(d, one))
    if _div_res(dm1, m, p) is None:
        return None
    xb, xc = _div_res(b, m - 1, p), _div_res(c, m, p)
    if None in (xb, xc):
        return None
    return xb, xc


def level_subgroup(G, setting, m):
    """{element index: coordinates} for the level subgroup K_m or I_{2m-1}."""
    out = {}
    for i in range(G.order):
        co = level_coordinates(G, setting, m, i)
        if co is not None:
            out[i] = co
    return out


def _betas(F, setting):
    res = F.residues
    if setting == "iwahori":
        return list(itertools.product(res, res))
    return list(itertools.product(res, res, res))


def beta_value(F, psi, setting, beta, co):
    if setting == "iwahori":
        v, u = beta
        xb, xc = co
        return psi(F.add_t(F.mul_t(v, xb), F.mul_t(u, xc)))
    e, u, v = beta
    xb, xc, xd = co
    return psi(F.sub_t(F.add_t(F.mul_t(u, xc), F.mul_t(v, xb)), F.mul_t(e, xd)))


def beta_type(F, setting, beta):
    if setting == "iwahori":
        v, u = beta
        if any(u) and any(v):
            return "ramified-simple"
        return "trivial" if not (any(u) or any(v)) else "non-fundamental"
    return classify_beta(F, *beta)


def stratum_content(values, G, setting, m, sub=None):
    """Multiplicity of each stratum character in the restriction of a class function.

    ``values`` is a per-element array on G.  Returns {beta: multiplicity}
    with zero entries dropped.
    """
    R = G.algebra.ring
    F = R.residue_field
    psi = _fixed_psi(F)
    sub = sub if sub is not None else level_subgroup(G, setting, m)
    idx = list(sub)
    vals = np.asarray(values)[idx]
    out = {}
    for beta in _betas(F, setting):
        ch = np.array([beta_value(F, psi, setting, beta, sub[i]) for i in idx])
        mult = round_int(complex(np.sum(vals * np.conj(ch)) / len(idx)), what="stratum multiplicity")
        if mult:
            out[beta] = mult
    return out


def _fixed_psi(F):
    one = F.one_t()
    return next(c for c in additive_characters(F) if c.parameter == one)


# -- alpha characters -----------------------------------------------------------------


def alpha_character(chi1, chi2, setting, A, m):
    """alpha(chi1, chi2)(g) = chi1(x_b) chi2(x_c) on the abelian level group A."""
    if chi1.is_trivial or chi2.is_trivial:
        raise CharacterError("alpha requires nontrivial characters")
    vals = []
    for i in range(A.order):
        co = level_coordinates(A, setting, m, i)
        if co is None:
            raise CharacterError("element outside the level subgroup")
        vals.append(chi1(co[0]) * chi2(co[1]))
    return ClassFunction.from_element_values(A, vals, f"alpha({chi1.parameter},{chi2.parameter})")


def abelian_level_group(q, setting, m):
    """The level group together with the fiber it acts on (standard component inside)."""
    from .groups import itilde_quotient_group, k_quotient_group
    from .pgl2 import split_prime_power

    p, f = split_prime_power(q)
    if setting == "iwahori":
        R = ring_make(p, f, 2 * m + 6)
        A = itilde_quotient_group(R, m, subgroup="I_n", args=(2 * m - 1,))
    else:
        R = ring_make(p, f, 2 * m + 6)
        A = k_quotient_group(R, m + 1, subgroup="K_n", args=(m,))
    return A


def standard_component_graph(fiber):
    """The standard component of a fiber as a FiberGraph of its own."""
    from .fibers import FiberGraph, standard_core

    core = standard_core(fiber.tree, fiber.n)
    ci = fiber.component_by_label(core)
    comp = fiber.components[ci]
    verts = [fiber.vertices[v] for v in comp.vertices]
    edges = [fiber.edges[e] for e in comp.edges]
    return FiberGraph(fiber.n, fiber.tree, sorted(verts), sorted(edges), fiber.base)


@dataclass
class AlphaReport:
    q: int
    setting: str
    m: int
    group_order: int
    multiplicities: dict  # (chi1 param, chi2 param) -> multiplicity
    exact_sum: bool
    torus_orbits: list
    failures: list

    @property
    def ok(self):
        return not self.failures


def alpha_decomposition(q, setting, m=1):
    """Restrict H^1 of the standard component to the abelian level group and decompose."""
    from .cohomology import h1_character
    from .fibers import build_fiber_even, build_fiber_odd

    A = abelian_level_group(q, setting, m)
    tree = A.tree
    fiber = build_fiber_even(tree, m) if setting == "iwahori" else build_fiber_odd(tree, m)
    gamma = standard_component_graph(fiber)
    h1 = h1_character(gamma, A)
    F = A.algebra.ring.residue_field
    chars = additive_characters(F)
    coords = [level_coordinates(A, setting, m, i) for i in range(A.order)]
    if None in coords:
        raise CharacterError("level group has elements outside the level subgroup")
    mults = {}
    total = ClassFunction(A, np.zeros(len(A.classes)))
    failures = []
    for c1 in chars:
        for c2 in chars:
            # with e = 0 these are exactly the stratum characters psi(v x_b + u x_c)
            chi = ClassFunction.from_element_values(A, [c1(co[0]) * c2(co[1]) for co in coords])
            mult = character_inner_product(h1, chi)
            if mult:
                mults[(c1.parameter, c2.parameter)] = mult
            if not (c1.is_trivial or c2.is_trivial):
                total = total + alpha_character(c1, c2, setting, A, m)
    expected = {(c1.parameter, c2.parameter): 1 for c1 in chars for c2 in chars if not (c1.is_trivial or c2.is_trivial)}
    if mults != expected:
        failures.append(("multiplicities", mults))
    exact = h1.allclose(total)
    if not exact:
        failures.append(("class function differs from the sum of alphas", None))
    orbits = torus_orbits(F, [k for k in expected])
    if any((q - 1) % len(o) for o in orbits):
        failures.append(("orbit size does not divide q - 1", orbits))
    return AlphaReport(q, setting, m, A.order, mults, exact, orbits, failures)


def torus_orbits(F, pairs):
    """Orbits of (v, u) -> (t v, t^-1 u) for t in F_q^x."""
    seen, orbits = set(), []
    units = [x for x in F.residues if any(x)]
    for pr in sorted(pairs):
        if pr in seen:
            continue
        v, u = pr
        orb = sorted({(F.mul_t(t, v), F.mul_t(F.inv_t(t), u)) for t in units})
        seen.update(orb)
        orbits.append(orb)
    return orbits
