"""Acceptance criteria 1-9, each at its stated tolerance and time budget.

Run with ``pytest tests/test_acceptance.py -v`` (the summary lists one
PASS/FAIL line per criterion) or directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import time

import pytest

from fibertypes.cohomology import h_dims, h1_character, harmonic_basis, harmonic_kernel_dim
from fibertypes.fibers import (
    build_fiber,
    build_fiber_even,
    build_fiber_level0,
    build_fiber_odd,
    build_fiber_over_edge,
    build_fiber_over_vertex,
    build_truncated_tower,
    check_component_intersections,
    quotient_iso_check,
)
from fibertypes.groups import itilde_quotient_group
from fibertypes.ledger import CUSPIDAL_KINDS, types_ledger
from fibertypes.pgl2 import gelfand_graev_identity_check
from fibertypes.pstypes import characters_of_conductor, principal_series_type_check
from fibertypes.ring import ring_make
from fibertypes.strata import alpha_decomposition, classify_stratum, splits_over_residue_field
from fibertypes.tree import pi_element, stabilizer_images, t_varpi, tree_ball

RESULTS = {}


def record(n, ok, detail):
    RESULTS[n] = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    print(RESULTS[n])
    assert ok, RESULTS[n]


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def criterion_1():
    # harmonic dimension by Euler characteristic, exact rank and explicit basis
    ok, worst, notes = True, 0.0, []
    for q in (3, 5, 7):
        with Timer() as t:
            T = tree_ball(ring_make(q, 1, 6), 2)
            F = ring_make(q, 1, 1)
            for n in (2, 3):
                fb = build_fiber(T, n)
                for ci, comp in enumerate(fb.components):
                    euler = len(comp.edges) - len(comp.vertices) + 1
                    rank = harmonic_kernel_dim(fb, ci)
                    ok &= fb.is_complete_bipartite(ci) and euler == rank == (q - 1) ** 2
                ok &= harmonic_basis(fb, F).dim == (q - 1) ** 2
        worst = max(worst, t.elapsed)
        notes.append(f"q={q} {t.elapsed:.2f}s")
    ok &= worst < 1.0
    return ok, f"dim harmonic = (q-1)^2 on every component ({', '.join(notes)})"


def criterion_2():
    ok, bad = True, []
    with Timer() as t:
        for q in (3, 5):
            T = tree_ball(ring_make(q, 1, 10), 4)
            for m in (1, 2):
                even, odd = build_fiber_even(T, m), build_fiber_odd(T, m)
                counts = (len(even.components), len(odd.components))
                expect = (2 * q ** (2 * m - 2), (q + 1) * q ** (2 * m - 1))
                r1 = check_component_intersections(even, build_fiber_over_edge(T, m, (T.s(1), T.s(2))))
                r2 = check_component_intersections(odd, build_fiber_over_vertex(T, m, T.s(1)))
                if counts != expect or not (r1.ok and r2.ok):
                    ok = False
                    bad.append((q, m, counts, expect, r1.failures[:1], r2.failures[:1]))
    ok &= t.elapsed < 30
    return ok, f"component counts and intersections, q in {{3,5}}, m in {{1,2}} ({t.elapsed:.2f}s)" + (f" {bad}" if bad else "")


def criterion_3():
    with Timer() as t:
        T = tree_ball(ring_make(3, 1, 8), 3)
        gens = stabilizer_images(T.ring, "K") + [t_varpi(T.ring), pi_element(T.ring)]
        reps = [quotient_iso_check(build_truncated_tower(T, n), build_truncated_tower(T, n - 1), gens) for n in (2, 3)]
    ok = all(r.ok and r.equivariance_checks > 0 for r in reps) and t.elapsed < 60
    detail = ", ".join(f"{r.complete_components} vertices/{r.quotient_edges} edges" for r in reps)
    return ok, f"interior quotients X2->X1 and X3->X2 at q=3, radius 3: {detail} ({t.elapsed:.2f}s)"


def criterion_4():
    ok, notes = True, []
    for q in (3, 5, 7):
        with Timer() as t:
            r = gelfand_graev_identity_check(q)
        cusp = {k: v for k, v in r.inventory.items() if k.startswith("cusp")}
        ps = {k: v for k, v in r.inventory.items() if k.startswith("PS")}
        shape = (
            len(cusp) == (q - 1) // 2
            and all(r.dims[k] == q - 1 for k in cusp)
            and len(ps) == (q - 3) // 2
            and all(r.dims[k] == q + 1 for k in ps)
            and r.inventory.get("St.sgn") == 1
            and r.dims["St.sgn"] == q
            and set(r.inventory.values()) == {1}
        )
        good = r.ok and all(r.identities.values()) and shape and r.h1_dim == q * q - q - 1 and t.elapsed < 10
        ok &= good
        notes.append(f"q={q} {'ok' if good else r.failures} {t.elapsed:.2f}s")
    return ok, f"C1 - C0 + 1 = Ind psi - St and inventory ({', '.join(notes)})"


def criterion_5():
    reps = [alpha_decomposition(q, s, 1) for q in (3, 5) for s in ("iwahori", "maximal")]
    ok = all(r.ok and r.exact_sum and set(r.multiplicities.values()) == {1} for r in reps)
    ok &= all(len(r.multiplicities) == (r.q - 1) ** 2 for r in reps)
    return ok, "H^1 of a component restricts to the sum of alpha characters, q in {3,5}, both parities"


def criterion_6():
    pairs = 0
    ok = True
    for p, f in ((3, 1), (5, 1), (7, 1), (3, 2)):
        R = ring_make(p, f, 2)
        F = R.residue_field
        units = [x for x in F.residues if any(x)]
        for u, v in itertools.product(units, units):
            st = classify_stratum("maximal", R.element(u), R.element(v))
            ok &= (st.classification == "split-fundamental") == splits_over_residue_field(F, F.mul_t(u, v))
            ok &= classify_stratum("iwahori", R.element(u), R.element(v)).classification == "ramified-simple"
            pairs += 1
    return ok, f"stratum classification agrees with the splitting oracle on {pairs} unit pairs, q in {{3,5,7,9}}"


def criterion_7():
    ok, count = True, 0
    largest = 0
    with Timer() as t:
        for p in (3, 5):
            for n in (1, 2):
                for th in characters_of_conductor(p, n):
                    if th.squares_to_trivial:
                        continue
                    r = principal_series_type_check(th, brute_force_limit=3000)
                    largest = max(largest, r.details["J order"])
                    if r.brute_norm is not None:
                        largest = max(largest, r.details["K order"])
                    ok &= r.status == "ok" and r.mackey_norm == 1 and r.brute_norm in (None, 1)
                    count += 1
    ok &= t.elapsed < 120 and largest <= 3000
    return ok, f"<Ind rho, Ind rho> = 1 for {count} admissible characters, largest group {largest} ({t.elapsed:.2f}s)"


def criterion_8():
    with Timer() as t:
        L = types_ledger(3, p=3, strict=False)
    unclassified = sum(len(rec.unclassified) for rec in L.levels)
    cusp = [e for e in L.entries if e.kind in CUSPIDAL_KINDS]
    ok = L.ok and unclassified == 0 and all(e.total == 1 for e in cusp) and t.elapsed < 300
    return ok, f"ledger q=3, n_max=3: {len(L.entries)} entries, {len(cusp)} cuspidal, {unclassified} unclassified ({t.elapsed:.2f}s)"


def criterion_9():
    G = itilde_quotient_group(ring_make(3, 1, 6), 1)
    fb = build_fiber_level0(G.tree)
    h = h1_character(fb, G)
    ok = h_dims(fb).h1 == 1 and all(abs(x - 1) < 1e-9 for x in h.values)
    return ok, f"H^1(Sigma_0) is the trivial character of a group of order {G.order}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("n", range(1, 10))
def test_criterion(n):
    ok, detail = CRITERIA[n - 1]()
    record(n, ok, detail)


if __name__ == "__main__":
    failed = 0
    for n, crit in enumerate(CRITERIA, 1):
        ok, detail = crit()
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    raise SystemExit(1 if failed else 0)
