"""Cohomology of fiber graphs: exact ranks, harmonic cochains, equivariant characters."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .characters import ClassFunction
from .fibers import FiberError, standard_component_coordinates


class CohomologyError(ArithmeticError):
    pass


def exact_rank(rows):
    """Rank over Q of a sparse matrix given as a list of {col: int} rows."""
    pivots = {}  # pivot column -> reduced row
    rank = 0
    for row in rows:
        r = {c: Fraction(v) for c, v in row.items() if v}
        while r:
            col = min(r)
            piv = pivots.get(col)
            if piv is None:
                pivots[col] = r
                rank += 1
                break
            f = r[col] / piv[col]
            for c, v in piv.items():
                nv = r.get(c, 0) - f * v
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
    return rank


def coboundary_rows(graph, edge_ids=None):
    """(df)(a) = f(head a) - f(tail a), one sparse row per edge."""
    ids = range(graph.E) if edge_ids is None else edge_ids
    return [{graph.heads[e]: 1, graph.tails[e]: -1} for e in ids]


def incidence_columns(graph, edge_ids):
    """Rows of d^T restricted to a component: one per vertex, indexed by local edge."""
    local = {e: i for i, e in enumerate(edge_ids)}
    rows = {}
    for e in edge_ids:
        rows.setdefault(graph.heads[e], {})[local[e]] = 1
        rows.setdefault(graph.tails[e], {})[local[e]] = -1
    return list(rows.values())


@dataclass
class HDims:
    h0: int
    h1: int
    euler: int
    rank: int


def h_dims(graph):
    """h0, h1 from exact elimination, computed block by block over components."""
    rank = 0
    for comp in graph.components:
        rank += exact_rank(coboundary_rows(graph, comp.edges))
    h0 = graph.V - rank
    h1 = graph.E - rank
    if h0 != len(graph.components):
        raise CohomologyError("kernel of d disagrees with the component count")
    if h1 != graph.E - graph.V + h0:
        raise CohomologyError("Euler characteristic mismatch")
    return HDims(h0=h0, h1=h1, euler=graph.V - graph.E, rank=rank)


def harmonic_kernel_dim(graph, ci):
    """Dimension of the harmonic cochains on component ci: nullity of d^T."""
    edges = graph.components[ci].edges
    return len(edges) - exact_rank(incidence_columns(graph, edges))


# -- harmonic basis on the standard component ----------------------------------------------


@dataclass
class HarmonicSpace:
    component: int
    edges: list
    coords: dict
    basis: np.ndarray  # one row per (chi1, chi2), chi1, chi2 nontrivial
    labels: list

    @property
    def dim(self):
        return self.basis.shape[0]


def _is_harmonic(graph, edges, vec, tol=1e-9):
    sums = {}
    for e, v in zip(edges, vec):
        sums[graph.heads[e]] = sums.get(graph.heads[e], 0) + v
        sums[graph.tails[e]] = sums.get(graph.tails[e], 0) + v
    return all(abs(s) < tol for s in sums.values())


def product_cochain(graph, edges, coords, chi1, chi2):
    return np.array([chi1(coords[e][0]) * chi2(coords[e][1]) for e in edges], dtype=complex)


def harmonic_basis(graph, ring):
    """Basis chi1(x) chi2(y) of harmonic cochains on the standard component.

    Each basis vector is checked to be harmonic; products with a trivial
    factor are checked to fail harmonicity.
    """
    from .ring import additive_characters

    ci, coords = standard_component_coordinates(graph)
    if not graph.is_complete_bipartite(ci):
        raise FiberError("standard component is not complete bipartite")
    edges = list(graph.components[ci].edges)
    chars = additive_characters(ring)
    trivial = [c for c in chars if c.is_trivial]
    nontrivial = [c for c in chars if not c.is_trivial]
    rows, labels = [], []
    for c1 in nontrivial:
        for c2 in nontrivial:
            v = product_cochain(graph, edges, coords, c1, c2)
            if not _is_harmonic(graph, edges, v):
                raise CohomologyError(f"product {c1.parameter}, {c2.parameter} is not harmonic")
            rows.append(v)
            labels.append((c1.parameter, c2.parameter))
    for t in trivial:
        for c in nontrivial:
            if _is_harmonic(graph, edges, product_cochain(graph, edges, coords, t, c)):
                raise CohomologyError("product with a trivial factor is harmonic")
    basis = np.array(rows)
    q = graph.q
    if np.linalg.matrix_rank(basis) != (q - 1) ** 2:
        raise CohomologyError("harmonic products are not independent")
    if harmonic_kernel_dim(graph, ci) != (q - 1) ** 2:
        raise CohomologyError("harmonic space has unexpected dimension")
    return HarmonicSpace(ci, edges, coords, basis, labels)


# -- equivariant characters ------------------------------------------------------------------


@dataclass
class CochainCharacters:
    c0: ClassFunction
    c1: ClassFunction
    h0: ClassFunction

    @property
    def h1(self):
        out = self.c1 - self.c0 + self.h0
        out.label = "H1"
        return out


def h1_virtual_character_inputs(graph, group):
    """Permutation characters on vertices, edges and components for a group acting on the ball."""
    v0, v1, vh = [], [], []
    for rep in group.class_reps():
        perm = group.elements[rep]
        cells = graph.permute_cells(perm)
        if cells is None:
            raise FiberError("action does not preserve the cell structure")
        vp, ep = cells
        for e in range(graph.E):
            if graph.heads[ep[e]] != vp[graph.heads[e]] or graph.tails[ep[e]] != vp[graph.tails[e]]:
                raise FiberError("action does not preserve orientation")
        v0.append(sum(1 for i, j in enumerate(vp) if i == j))
        v1.append(sum(1 for i, j in enumerate(ep) if i == j))
        fixed = 0
        for comp in graph.components:
            v = comp.vertices[0]
            if graph.vertex_component[vp[v]] == graph.vertex_component[v]:
                fixed += 1
        vh.append(fixed)
    return CochainCharacters(
        ClassFunction(group, v0, "C0"), ClassFunction(group, v1, "C1"), ClassFunction(group, vh, "H0")
    )


def h1_character(graph, group):
    return h1_virtual_character_inputs(graph, group).h1

