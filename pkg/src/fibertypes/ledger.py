"""Decomposition of H^1 of every fiber Sigma_k, k <= n_max, and classification of constituents."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .characters import character_inner_product, character_table
from .cohomology import h1_character, h_dims
from .fibers import build_fiber
from .groups import itilde_quotient_group, k_quotient_group
from .pgl2 import PGL2Table, QuadraticExtension, classical_labels, label_name
from .pstypes import UnitCharacter, brute_force_norm, characters_of_conductor
from .ring import ring_make
from .strata import beta_type, stratum_content

KINDS = (
    "cuspidal-type",
    "level0-cuspidal",
    "principal-series-type",
    "ramified-type",
    "trivial-iwahori",
    "twisted-steinberg",
)
# kinds whose total multiplicity must be 1
CUSPIDAL_KINDS = ("cuspidal-type", "level0-cuspidal", "ramified-type")


class LedgerError(RuntimeError):
    pass


@dataclass
class LedgerEntry:
    label: str
    kind: str
    dim: int
    per_level: dict = field(default_factory=dict)

    @property
    def total(self):
        return sum(self.per_level.values())

    def to_dict(self):
        return {
            "label": self.label,
            "kind": self.kind,
            "dim": self.dim,
            "per_level": {str(k): v for k, v in sorted(self.per_level.items())},
            "total": self.total,
        }


@dataclass
class LevelRecord:
    level: int
    group: str
    h1_dim: int
    constituents: list  # (label, kind, dim, multiplicity)
    unclassified: list


@dataclass
class Ledger:
    p: int
    f: int
    n_max: int
    entries: list
    levels: list
    failures: list

    @property
    def q(self):
        return self.p**self.f

    @property
    def ok(self):
        return not self.failures

    def cuspidal_multiplicity_defects(self):
        """{label: total} for cuspidal kinds whose total multiplicity is not 1."""
        return {e.label: e.total for e in self.entries if e.kind in CUSPIDAL_KINDS and e.total != 1}

    def to_dict(self):
        return {
            "p": self.p,
            "f": self.f,
            "q": self.q,
            "n_max": self.n_max,
            "entries": [e.to_dict() for e in self.entries],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["level", "label", "kind", "dim", "multiplicity"])
        for rec in self.levels:
            for label, kind, dim, mult in rec.constituents:
                w.writerow([rec.level, label, kind, dim, mult])
        return buf.getvalue()


def _fmt(t):
    return ",".join(str(c[0]) if len(c) == 1 else "".join(map(str, c)) for c in t)


class _LevelGroups:
    """One Itilde-quotient for the even levels and one K-quotient for the odd ones."""

    def __init__(self, p, f, n_max):
        self.p, self.f = p, f
        even_m = [k // 2 for k in range(2, n_max + 1, 2)]
        odd_m = [(k - 1) // 2 for k in range(1, n_max + 1, 2)]
        self.L_even = max(even_m, default=1)
        self.L_odd = max(odd_m, default=0) + 1
        R = ring_make(p, f, 2 * max(self.L_even, self.L_odd) + 6)
        self.ring = R
        self._even = self._odd = None
        self._tables = {}

    @property
    def even(self):
        if self._even is None:
            self._even = itilde_quotient_group(self.ring, self.L_even)
        return self._even

    @property
    def odd(self):
        if self._odd is None:
            self._odd = k_quotient_group(self.ring, self.L_odd)
        return self._odd

    def table(self, G):
        if id(G) not in self._tables:
            self._tables[id(G)] = character_table(G)
        return self._tables[id(G)]


def _classify_level0(chi):
    if np.allclose(chi.values, 1.0):
        return "1[Itilde]", "trivial-iwahori"
    return None, None


def _classify_level1(chi, G, F):
    tab = PGL2Table(F.q, F, QuadraticExtension(F), classical_labels(F.q))
    p = F.p
    reps = G.class_reps()
    for lab in tab.labels:
        vals = []
        for r in reps:
            m = G.matrices[r]
            vals.append(tab.value(lab, tuple(tuple(tuple(c % p for c in x) for x in row) for row in m)))
        if np.allclose(chi.values, vals, atol=1e-6):
            kind = {"cusp": "level0-cuspidal", "St.sgn": "twisted-steinberg", "PS": "principal-series-type"}.get(lab[0])
            return label_name(lab), kind
    return None, None


def _classify_even(chi, G, m, F):
    content = stratum_content(chi.element_values(), G, "iwahori", m)
    types = {beta_type(F, "iwahori", b) for b in content}
    if types == {"ramified-simple"}:
        beta = min(content)
        return f"ramified[{2 * m}]:{chi.label}(v,u)=({_fmt(beta)})", "ramified-type"
    return None, None


def _classify_odd(chi, G, m, F, ps_cache):
    content = stratum_content(chi.element_values(), G, "maximal", m)
    types = {beta_type(F, "maximal", b) for b in content}
    if types == {"simple-non-scalar"}:
        beta = min(content)
        return f"cuspidal[{2 * m + 1}]:{chi.label}(e,u,v)=({_fmt(beta)})", "cuspidal-type"
    if types == {"split-fundamental"} and F.f == 1:
        for theta, ind in ps_cache(m + 1):
            if chi.allclose(ind):
                return f"ps[{2 * m + 1}](theta^{theta.j} mod {F.p}^{m + 1})", "principal-series-type"
    return None, None


def types_ledger(n_max, p=3, f=1, strict=True):
    """Decompose H^1(Sigma_k) for k = 0..n_max and classify every constituent."""
    if n_max < 0:
        raise LedgerError("n_max must be >= 0")
    groups = _LevelGroups(p, f, n_max)
    F = groups.ring.residue_field
    entries = {}
    levels = []
    failures = []
    ps_store = {}

    def ps_cache(n):
        # Ind_J rho_theta for conductor n, one per pair {theta, theta^-1}
        if n not in ps_store:
            seen, out = set(), []
            for th in characters_of_conductor(p, n):
                if th.squares_to_trivial or th.j in seen:
                    continue
                seen.update({th.j, (-th.j) % th.order_of_group})
                _, ind = brute_force_norm(UnitCharacter(p, n, th.j), groups.odd)
                out.append((th, ind))
            ps_store[n] = out
        return ps_store[n]

    for k in range(n_max + 1):
        G = groups.even if k % 2 == 0 else groups.odd
        fiber = build_fiber(G.tree, k)
        h1 = h1_character(fiber, G)
        dims = h_dims(fiber)
        table = groups.table(G)
        cons, unclassified = [], []
        total_dim = 0
        for chi in table:
            mult = character_inner_product(h1, chi)
            if mult < 0:
                failures.append(("negative multiplicity", k, chi.label))
            if not mult:
                continue
            dim = round(chi.degree)
            total_dim += mult * dim
            if k == 0:
                label, kind = _classify_level0(chi)
            elif k == 1:
                label, kind = _classify_level1(chi, G, F)
            elif k % 2 == 0:
                label, kind = _classify_even(chi, G, k // 2, F)
            else:
                label, kind = _classify_odd(chi, G, (k - 1) // 2, F, ps_cache)
            if kind is None:
                unclassified.append((chi.label, dim, mult))
                failures.append(("unclassifiable constituent", k, chi.label))
                continue
            cons.append((label, kind, dim, mult))
            entry = entries.setdefault(label, LedgerEntry(label, kind, dim))
            entry.per_level[k] = entry.per_level.get(k, 0) + mult
        if total_dim != dims.h1:
            failures.append(("dimension not conserved", k, total_dim, dims.h1))
        cons.sort()
        levels.append(LevelRecord(k, G.name, dims.h1, cons, unclassified))
    ordered = sorted(entries.values(), key=lambda e: (e.kind, e.dim, e.label))
    ledger = Ledger(p, f, n_max, ordered, levels, failures)
    for label, total in ledger.cuspidal_multiplicity_defects().items():
        failures.append(("cuspidal multiplicity differs from 1", label, total))
    if strict and any(f[0] == "unclassifiable constituent" for f in failures):
        raise LedgerError(f"unclassifiable constituents: {[f for f in failures if f[0].startswith('uncl')]}")
    return ledger
