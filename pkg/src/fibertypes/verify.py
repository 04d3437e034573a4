"""Verification suites: each check records what was observed against what is expected."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .ring import RingError, is_prime, ring_make

log = logging.getLogger(__name__)

SUITES = ("combinatorics", "cohomology", "characters", "ledger")
MAX_CHARACTER_Q = 9


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    p: int = 3
    f: int = 1
    n_max: int = 3
    radius: int = None
    suites: tuple = SUITES
    fmt: str = "json"
    out: str = None
    warnings: list = field(default_factory=list)

    @property
    def q(self):
        return self.p**self.f

    def validate(self):
        if not is_prime(self.p):
            raise ConfigError(f"p={self.p} is not prime")
        if self.p == 2:
            raise ConfigError("odd residue characteristic required")
        if self.f < 1 or self.n_max < 0:
            raise ConfigError("f >= 1 and n_max >= 0 required")
        unknown = set(self.suites) - set(SUITES)
        if unknown:
            raise ConfigError(f"unknown suites {sorted(unknown)}")
        if self.fmt not in ("json", "csv"):
            raise ConfigError(f"unknown format {self.fmt}")
        if self.q > MAX_CHARACTER_Q and ({"characters", "ledger"} & set(self.suites)):
            raise ConfigError(f"q={self.q} exceeds {MAX_CHARACTER_Q} for character suites")
        need = (self.n_max + 1) // 2 + 2
        if self.radius is None:
            self.radius = need
        elif self.radius < need:
            self.warnings.append(f"radius raised from {self.radius} to {need}")
            self.radius = need
        return self


@dataclass
class Check:
    id: str
    anchor: str
    status: str  # pass | fail | skip
    observed: object
    expected: object

    def to_dict(self):
        return {
            "id": self.id,
            "anchor": self.anchor,
            "status": self.status,
            "observed": self.observed,
            "expected": self.expected,
        }


@dataclass
class Report:
    config: RunConfig
    checks: list = field(default_factory=list)
    ledger: dict = None

    def add(self, id, anchor, observed, expected, ok=None):
        ok = (observed == expected) if ok is None else ok
        self.checks.append(Check(id, anchor, "pass" if ok else "fail", observed, expected))

    def skip(self, id, anchor, reason):
        self.checks.append(Check(id, anchor, "skip", reason, None))

    @property
    def failed(self):
        return [c for c in self.checks if c.status == "fail"]

    def summary(self):
        out = {"pass": 0, "fail": 0, "skip": 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def to_dict(self):
        cfg = self.config
        d = {
            "config": {
                "p": cfg.p,
                "f": cfg.f,
                "q": cfg.q,
                "n_max": cfg.n_max,
                "radius": cfg.radius,
                "suites": list(cfg.suites),
            },
            "checks": [c.to_dict() for c in self.checks],
            "summary": self.summary(),
        }
        if self.ledger is not None:
            d["ledger"] = self.ledger
        return d


# -- closed forms ----------------------------------------------------------------------


def expected_counts(q, n):
    """(vertices, edges, components, h1) of Sigma_n."""
    if n == 0:
        return 2, 2, 1, 1
    if n == 1:
        return 2 * (q + 1), q * (q + 1), 1, q * q - q - 1
    if n % 2 == 0:
        c = 2 * q ** (n - 2)
    else:
        c = (q + 1) * q ** (n - 2)
    return 2 * q * c, q * q * c, c, c * (q - 1) ** 2


# -- suites ------------------------------------------------------------------------------


def suite_combinatorics(rep):
    from .fibers import (
        build_fiber,
        build_fiber_over_edge,
        build_fiber_over_vertex,
        build_truncated_tower,
        check_component_intersections,
        quotient_iso_check,
    )
    from .ring import teichmuller
    from .tree import ball_size, pi_element, stabilizer_images, t_varpi, tree_ball

    cfg = rep.config
    q = cfg.q
    R = ring_make(cfg.p, cfg.f, 3)
    F = R.residue_field
    units = R.units()
    rep.add("ring.inverses", "units of o/p^k are invertible", all((u * u.inverse()).coeffs == R.one_t() for u in units), True)
    lifts = [teichmuller(F.element(x), R) for x in F.residues if any(x)]
    mult = all((a * b) == teichmuller(F.element(F.mul_t(a.coeffs, b.coeffs)), R) for a in lifts[:6] for b in lifts[:6])
    rep.add("ring.teichmuller", "Teichmuller lift is multiplicative", mult, True)
    T = tree_ball(R, cfg.radius)
    rep.add("tree.ball_size", "the tree is (q+1)-regular", len(T.vertices), ball_size(q, cfg.radius))
    tw = t_varpi(T.ring)
    rep.add("tree.t_shift", "t_varpi translates the standard apartment", T.act_vertex(tw, T.s(0)), T.s(1))
    pi = pi_element(T.ring)
    rep.add("tree.pi_swap", "Pi swaps the ends of e_0", (T.act_vertex(pi, T.s(0)), T.act_vertex(pi, T.s(1))), (T.s(1), T.s(0)))
    for n in range(cfg.n_max + 1):
        fb = build_fiber(T, n)
        v, e, c, _ = expected_counts(q, n)
        rep.add(f"fiber.{n}.counts", "component counts of the fibers", list(fb.counts().values()), [v, e, c])
        if n >= 2:
            kqq = all(fb.is_complete_bipartite(i) for i in range(len(fb.components)))
            rep.add(f"fiber.{n}.kqq", "components are complete bipartite K_{q,q}", kqq, True)
    m_top = max(1, cfg.n_max // 2)
    for m in range(1, m_top + 1):
        if T.radius < m + 2:
            rep.skip(f"intersections.even.{m}", "fibers over adjacent edges meet in one vertex", "radius")
            continue
        a = build_fiber(T, 2 * m)
        b = build_fiber_over_edge(T, m, (T.s(1), T.s(2)))
        r = check_component_intersections(a, b)
        rep.add(f"intersections.even.{m}", "fibers over adjacent edges meet in one vertex", r.failures[:1], [], r.ok)
        a = build_fiber(T, 2 * m + 1)
        b = build_fiber_over_vertex(T, m, T.s(1))
        r = check_component_intersections(a, b)
        rep.add(f"intersections.odd.{m}", "fibers over adjacent vertices meet in the union path", r.failures[:1], [], r.ok)
    gens = stabilizer_images(T.ring, "K") + [tw, pi]
    for n in (2, 3):
        if n > cfg.n_max + 1 or T.radius < (n + 1) // 2 + 1:
            continue
        r = quotient_iso_check(build_truncated_tower(T, n), build_truncated_tower(T, n - 1), gens)
        rep.add(
            f"quotient.{n}",
            "component quotient of the tower is the tower one level down",
            {"failures": [str(x) for x in r.failures[:1]], "vertices": r.complete_components, "edges": r.quotient_edges},
            {"failures": [], "vertices": r.lower_vertices, "edges": r.lower_edges},
        )


def suite_cohomology(rep):
    from .cohomology import h_dims, harmonic_basis, harmonic_kernel_dim
    from .fibers import build_fiber
    from .tree import tree_ball

    cfg = rep.config
    q = cfg.q
    R = ring_make(cfg.p, cfg.f, 3)
    T = tree_ball(R, cfg.radius)
    for n in range(cfg.n_max + 1):
        fb = build_fiber(T, n)
        d = h_dims(fb)
        _, _, c, h1 = expected_counts(q, n)
        rep.add(f"h1.{n}", "dimension of H^1 of the fiber", [d.h0, d.h1], [c, h1])
        if n >= 2:
            harm = sum(harmonic_kernel_dim(fb, i) for i in range(len(fb.components)))
            rep.add(f"harmonic.{n}.sum", "H^1 is the sum of harmonic spaces of the components", harm, d.h1)
    for n in (2, 3):
        if n <= max(cfg.n_max, 1) + 1 and T.radius >= n // 2 + 1:
            H = harmonic_basis(build_fiber(T, n), R.residue_field)
            rep.add(f"harmonic.{n}.basis", "harmonic cochains are products of nontrivial characters", H.dim, (q - 1) ** 2)


def suite_characters(rep):
    from .cohomology import h1_character
    from .fibers import build_fiber_level0
    from .groups import itilde_quotient_group
    from .pgl2 import gelfand_graev_identity_check
    from .pstypes import characters_of_conductor, principal_series_type_check
    from .strata import alpha_decomposition, classify_stratum, splits_over_residue_field

    cfg = rep.config
    q = cfg.q
    gg = gelfand_graev_identity_check(q)
    rep.add("gelfand_graev.identities", "H^1(Omega) = Ind_U psi - St", gg.identities, {k: True for k in gg.identities})
    rep.add("gelfand_graev.inventory", "constituents of H^1(Omega)", gg.inventory, gg.inventory if gg.ok else None, gg.ok)
    for setting in ("iwahori", "maximal"):
        a = alpha_decomposition(q, setting, 1)
        rep.add(f"alpha.{setting}", "H^1 of a component restricts to the sum of alpha characters", a.exact_sum and a.ok, True)
    R = ring_make(cfg.p, cfg.f, 2)
    F = R.residue_field
    agree = True
    for u in F.residues:
        for v in F.residues:
            if not (any(u) and any(v)):
                continue
            st = classify_stratum("maximal", R.element(u), R.element(v))
            oracle = splits_over_residue_field(F, F.mul_t(u, v))
            agree &= (st.classification == "split-fundamental") == oracle
            agree &= classify_stratum("iwahori", R.element(u), R.element(v)).classification == "ramified-simple"
    rep.add("strata.classification", "split iff uv is a square", agree, True)
    if cfg.f == 1:
        for n in (1, 2):
            norms = []
            for th in characters_of_conductor(cfg.p, n):
                r = principal_series_type_check(th, brute_force_limit=3000)
                if r.status != "hypothesis violated":
                    norms.append(r.mackey_norm)
                if not r.ok:
                    norms.append(f"failed:{th.j}")
            rep.add(f"mackey.{n}", "Mackey criterion: Ind rho is irreducible", norms, [1] * len(norms))
    else:
        rep.skip("mackey", "Mackey criterion: Ind rho is irreducible", "f > 1")
    G = itilde_quotient_group(ring_make(cfg.p, cfg.f, 6), 1)
    h = h1_character(build_fiber_level0(G.tree), G)
    rep.add("sigma0", "H^1(Sigma_0) is the trivial character", [round(x.real, 9) for x in h.values], [1.0] * len(h.values))


def suite_ledger(rep):
    from .ledger import LedgerError, types_ledger

    cfg = rep.config
    try:
        L = types_ledger(cfg.n_max, cfg.p, cfg.f, strict=False)
    except LedgerError as exc:
        rep.add("ledger.build", "every constituent is a type", str(exc), None, False)
        return
    rep.ledger = L.to_dict()
    uncl = [f"{k}:{lab}" for rec in L.levels for lab, *_ in rec.unclassified for k in [rec.level]]
    rep.add("ledger.classified", "every constituent falls in the trichotomy", uncl, [])
    rep.add("ledger.cuspidal_multiplicity", "cuspidal types occur with multiplicity one", L.cuspidal_multiplicity_defects(), {})
    for rec in L.levels:
        total = sum(d * m for _, _, d, m in rec.constituents)
        rep.add(f"ledger.dim.{rec.level}", "constituent dimensions add up to dim H^1", total, rec.h1_dim)


RUNNERS = {
    "combinatorics": suite_combinatorics,
    "cohomology": suite_cohomology,
    "characters": suite_characters,
    "ledger": suite_ledger,
}


def run(config):
    config.validate()
    rep = Report(config)
    for name in SUITES:
        if name in config.suites:
            log.info("running suite %s", name)
            try:
                RUNNERS[name](rep)
            except (RingError, ArithmeticError, ValueError) as exc:
                rep.add(f"{name}.error", "suite completed", f"{type(exc).__name__}: {exc}", None, False)
    return rep
