"""Galois rings GR(p^k, f) = o / p^k o for the unramified extension of Q_p.

Elements are stored as tuples of ``f`` integer coefficients in the power
basis 1, x, ..., x^(f-1), each reduced to [0, p^k).  The modulus polynomial
is fixed deterministically so every run produces identical output.
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass
from functools import cached_property


class RingError(ValueError):
    pass


class NonInvertibleError(RingError):
    pass


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _poly_mulmod_p(a, b, mod, p):
    # a, b: coefficient lists (low degree first); mod: monic, low degree first
    f = len(mod) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    for i in range(len(out) - 1, f - 1, -1):
        c = out[i]
        if c:
            for j in range(f + 1):
                out[i - f + j] = (out[i - f + j] - c * mod[j]) % p
    out = out[:f] + [0] * max(0, f - len(out))
    return out


def _is_irreducible_mod_p(mod, p):
    """Brute force: no monic factor of degree <= f/2 divides ``mod``."""
    f = len(mod) - 1
    if f == 1:
        return True
    for d in range(1, f // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = list(tail) + [1]
            if _poly_divides(div, mod, p):
                return False
    return True


def _poly_divides(div, poly, p):
    r = list(poly)
    dd = len(div) - 1
    for i in range(len(r) - 1, dd - 1, -1):
        c = r[i] % p
        if c:
            for j in range(dd + 1):
                r[i - dd + j] = (r[i - dd + j] - c * div[j]) % p
    return all(c % p == 0 for c in r[:dd])


def _x_is_primitive(mod, p):
    f = len(mod) - 1
    q = p**f
    one = [1] + [0] * (f - 1)
    x = [0, 1] + [0] * (f - 2)
    order = q - 1
    for r in _prime_factors(order):
        if _poly_pow_p(x, order // r, mod, p) == one:
            return False
    return True


def _poly_pow_p(a, e, mod, p):
    f = len(mod) - 1
    result = [1] + [0] * (f - 1)
    base = list(a)
    while e:
        if e & 1:
            result = _poly_mulmod_p(result, base, mod, p)
        base = _poly_mulmod_p(base, base, mod, p)
        e >>= 1
    return result


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def default_modulus(p, f):
    """Least monic irreducible degree-f polynomial over F_p whose root generates F_q^x.

    Candidates are ordered lexicographically on (c_{f-1}, ..., c_0).  For
    f = 1 the modulus is x itself, i.e. the ring is Z/p^k.
    """
    if f == 1:
        return (0, 1)
    for high_first in itertools.product(range(p), repeat=f):
        mod = list(reversed(high_first)) + [1]
        if mod[0] == 0:
            continue
        if _is_irreducible_mod_p(mod, p) and _x_is_primitive(mod, p):
            return tuple(mod)
    raise RingError("no primitive modulus found")  # pragma: no cover


@dataclass(frozen=True)
class GaloisRing:
    """The ring o/p^k o with residue field F_q, q = p^f."""

    p: int
    f: int
    k: int
    modulus_poly: tuple

    @property
    def q(self):
        return self.p**self.f

    @property
    def pk(self):
        return self.p**self.k

    @property
    def order(self):
        return self.p ** (self.f * self.k)

    @property
    def unit_count(self):
        return self.order - self.p ** (self.f * (self.k - 1))

    def __repr__(self):
        return f"GaloisRing(p={self.p}, f={self.f}, k={self.k})"

    # -- raw tuple arithmetic -------------------------------------------------

    def zero_t(self):
        return (0,) * self.f

    def one_t(self):
        return (1,) + (0,) * (self.f - 1)

    def from_int(self, n):
        return (n % self.pk,) + (0,) * (self.f - 1)

    def add_t(self, a, b):
        m = self.pk
        return tuple((x + y) % m for x, y in zip(a, b))

    def sub_t(self, a, b):
        m = self.pk
        return tuple((x - y) % m for x, y in zip(a, b))

    def neg_t(self, a):
        m = self.pk
        return tuple((-x) % m for x in a)

    def mul_t(self, a, b):
        m = self.pk
        if self.f == 1:
            return ((a[0] * b[0]) % m,)
        f = self.f
        out = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        mod = self.modulus_poly
        for i in range(2 * f - 2, f - 1, -1):
            c = out[i] % m
            if c:
                for j in range(f):
                    out[i - f + j] -= c * mod[j]
        return tuple(c % m for c in out[:f])

    def scale_t(self, a, n):
        m = self.pk
        return tuple((x * n) % m for x in a)

    def pow_t(self, a, e):
        result = self.one_t()
        base = a
        while e:
            if e & 1:
                result = self.mul_t(result, base)
            base = self.mul_t(base, base)
            e >>= 1
        return result

    def valuation_t(self, a):
        """p-adic valuation, capped at k (the valuation of zero)."""
        v = self.k
        p = self.p
        for c in a:
            if c:
                w = 0
                while c % p == 0:
                    c //= p
                    w += 1
                v = min(v, w)
        return v

    def is_unit_t(self, a):
        return any(c % self.p for c in a)

    def inv_t(self, a):
        if not self.is_unit_t(a):
            raise NonInvertibleError("non-invertible element")
        # unit group order is q^(k-1) (q-1)
        return self.pow_t(a, self.unit_count - 1)

    def div_p_power_t(self, a, v):
        """Exact division by p^v; the result is only meaningful mod p^(k-v)."""
        d = self.p**v
        return tuple(c // d for c in a)

    def reduce_t(self, a, level):
        m = self.p**level
        return tuple(c % m for c in a)

    # -- residue field helpers ------------------------------------------------

    @cached_property
    def residue_field(self):
        return ring_make(self.p, self.f, 1) if self.k != 1 else self

    @cached_property
    def residues(self):
        """All residue classes, as tuples with coefficients in [0, p)."""
        return [tuple(reversed(t)) for t in itertools.product(range(self.p), repeat=self.f)]

    def residue_t(self, a):
        return tuple(c % self.p for c in a)

    def element(self, coeffs):
        if isinstance(coeffs, int):
            coeffs = self.from_int(coeffs)
        coeffs = tuple(coeffs) + (0,) * (self.f - len(coeffs))
        return RingElement(self, tuple(c % self.pk for c in coeffs))

    def elements(self):
        m = self.pk
        for t in itertools.product(range(m), repeat=self.f):
            yield RingElement(self, tuple(reversed(t)))

    def units(self):
        return [x for x in self.elements() if x.is_unit()]

    @cached_property
    def _trace_of_basis(self):
        field = self.residue_field
        out = []
        for i in range(self.f):
            basis = tuple(1 if j == i else 0 for j in range(self.f))
            tr = field.zero_t()
            y = basis
            for _ in range(self.f):
                tr = field.add_t(tr, y)
                y = field.pow_t(y, self.p)
            out.append(tr[0] % self.p)
        return tuple(out)

    def trace_t(self, a):
        """Absolute trace F_q -> F_p of the residue of a."""
        return sum(c * t for c, t in zip(self.residue_t(a), self._trace_of_basis)) % self.p

    @cached_property
    def generator_t(self):
        """A fixed generator of F_q^x (as a residue tuple)."""
        field = self.residue_field
        order = self.q - 1
        factors = _prime_factors(order)
        for r in field.residues:
            if not any(r):
                continue
            if all(field.pow_t(r, order // l) != field.one_t() for l in factors):
                return r
        raise RingError("no generator")  # pragma: no cover

    @cached_property
    def dlog(self):
        """Discrete log table of F_q^x against ``generator_t``."""
        field = self.residue_field
        table = {}
        x = field.one_t()
        for i in range(self.q - 1):
            table[x] = i
            x = field.mul_t(x, self.generator_t)
        return table


@dataclass(frozen=True)
class RingElement:
    ring: GaloisRing
    coeffs: tuple

    def _wrap(self, t):
        return RingElement(self.ring, t)

    def _coerce(self, other):
        if isinstance(other, RingElement):
            return other.coeffs
        return self.ring.from_int(other)

    def __add__(self, other):
        return self._wrap(self.ring.add_t(self.coeffs, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.ring.sub_t(self.coeffs, self._coerce(other)))

    def __rsub__(self, other):
        return self._wrap(self.ring.sub_t(self._coerce(other), self.coeffs))

    def __neg__(self):
        return self._wrap(self.ring.neg_t(self.coeffs))

    def __mul__(self, other):
        return self._wrap(self.ring.mul_t(self.coeffs, self._coerce(other)))

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return self._wrap(self.ring.pow_t(self.coeffs, e))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.coeffs == self.ring.from_int(other)
        return isinstance(other, RingElement) and self.ring == other.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __repr__(self):
        if self.ring.f == 1:
            return f"{self.coeffs[0]} mod {self.ring.pk}"
        return f"{list(self.coeffs)} in {self.ring!r}"

    def is_unit(self):
        return self.ring.is_unit_t(self.coeffs)

    def inverse(self):
        return ring_inv(self)

    def valuation(self):
        return self.ring.valuation_t(self.coeffs)


def ring_make(p, f=1, k=1):
    if not isinstance(p, int) or not is_prime(p):
        raise RingError(f"p={p} is not prime")
    if p == 2:
        raise RingError("odd residue characteristic required")
    if f < 1 or k < 1:
        raise RingError("f and k must be >= 1")
    return GaloisRing(p, f, k, default_modulus(p, f))


def ring_inv(x):
    return RingElement(x.ring, x.ring.inv_t(x.coeffs))


def reduce_to_level(x, level):
    """Reduction R_k -> R_level."""
    ring = x.ring
    if not 1 <= level <= ring.k:
        raise RingError(f"level {level} out of range 1..{ring.k}")
    target = ring_make(ring.p, ring.f, level)
    return RingElement(target, ring.reduce_t(x.coeffs, level))


def teichmuller(x, ring):
    """Multiplicative lift of a residue-field element into ``ring``."""
    if x.ring.k != 1:
        x = reduce_to_level(x, 1)
    if x.ring.p != ring.p or x.ring.f != ring.f:
        raise RingError("residue field mismatch")
    if not any(x.coeffs):
        return RingElement(ring, ring.zero_t())
    t = ring.pow_t(x.coeffs, ring.q ** (ring.k - 1))
    return RingElement(ring, t)


def residue_and_lift(x, target_level=None, ring=None):
    """Reduce ``x`` to ``target_level``, or Teichmüller-lift a residue into ``ring``."""
    if ring is not None:
        return teichmuller(x, ring)
    return reduce_to_level(x, target_level)


def is_square_in_residue(x):
    if not x.is_unit():
        raise NonInvertibleError("non-invertible element")
    ring = x.ring
    field = ring.residue_field
    r = ring.residue_t(x.coeffs)
    return field.pow_t(r, (ring.q - 1) // 2) == field.one_t()


# -- characters of the residue field -------------------------------------------


@dataclass(frozen=True)
class ResidueCharacter:
    """Additive character psi_a, or multiplicative character chi_j (g^i -> e^(2 pi i ij/(q-1)))."""

    ring: GaloisRing
    kind: str
    parameter: object  # residue tuple (additive) or int exponent (multiplicative)

    def __call__(self, x):
        ring = self.ring
        t = x.coeffs if isinstance(x, RingElement) else x
        if isinstance(t, int):
            t = ring.from_int(t)
        if self.kind == "additive":
            field = ring.residue_field
            ax = field.mul_t(ring.residue_t(t), self.parameter)
            return cmath.exp(2j * cmath.pi * field.trace_t(ax) / ring.p)
        r = ring.residue_t(t)
        if not any(r):
            raise NonInvertibleError("multiplicative character evaluated at 0")
        i = ring.dlog[r]
        return cmath.exp(2j * cmath.pi * i * self.parameter / (ring.q - 1))

    @property
    def is_trivial(self):
        if self.kind == "additive":
            return not any(self.parameter)
        return self.parameter % (self.ring.q - 1) == 0

    def order(self):
        if self.kind == "additive":
            return 1 if self.is_trivial else self.ring.p
        n = self.ring.q - 1
        j = self.parameter % n
        from math import gcd

        return n // gcd(n, j)


def additive_characters(ring):
    return [ResidueCharacter(ring, "additive", a) for a in ring.residue_field.residues]


def multiplicative_characters(ring):
    return [ResidueCharacter(ring, "multiplicative", j) for j in range(ring.q - 1)]


def quadratic_character(ring):
    """chi_0: the unique multiplicative character of order 2."""
    return ResidueCharacter(ring, "multiplicative", (ring.q - 1) // 2)


def characters_of_residue_field(ring):
    return additive_characters(ring) + multiplicative_characters(ring)
