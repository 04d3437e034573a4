import numpy as np
import pytest

from fibertypes.characters import (
    CharacterError,
    ClassFunction,
    character_inner_product,
    character_table,
    decompose,
    induce_character,
    induce_from_values,
    permutation_character,
    restrict,
    trivial_character,
)
from fibertypes.groups import (
    GroupError,
    IwahoriQuotient,
    KQuotient,
    group_closure,
    itilde_quotient_group,
    k_quotient_group,
    matrix_quotient_closure,
    subgroup_from_indices,
)
from fibertypes.ring import ring_make


def k_order(q, L):
    return q ** (4 * (L - 1)) * (q * q - 1) * (q * q - q) // (q ** (L - 1) * (q - 1))


@pytest.mark.parametrize("p,f,L", [(3, 1, 1), (3, 1, 2), (5, 1, 1), (3, 2, 1)])
def test_k_quotient_orders(p, f, L):
    G = k_quotient_group(ring_make(p, f, 8), L)
    q = p**f
    assert G.order == k_order(q, L) == KQuotient(ring_make(p, f, L), L).order()


@pytest.mark.parametrize("p,L", [(3, 1), (3, 2), (5, 1)])
def test_itilde_quotient_orders(p, L):
    G = itilde_quotient_group(ring_make(p, 1, 8), L)
    assert G.order == 2 * (p - 1) * p ** (3 * L - 1) == IwahoriQuotient(ring_make(p, 1, L), L).order()


def test_matrix_closure_agrees_with_action():
    R = ring_make(3, 1, 6)
    assert len(matrix_quotient_closure(R, "K", 1)) == 24
    assert len(matrix_quotient_closure(R, "I", 1)) == 6
    assert len(matrix_quotient_closure(R, "Itilde", 1)) == 36


def test_class_sizes_partition_group():
    G = k_quotient_group(ring_make(3, 1, 8), 2)
    assert sum(G.class_sizes) == G.order
    assert all(G.order % s == 0 for s in G.class_sizes)


def test_budget():
    with pytest.raises(GroupError):
        k_quotient_group(ring_make(3, 1, 8), 2, budget=100)


def test_closure_of_cycle():
    G = group_closure([(1, 2, 0)])
    assert G.order == 3


@pytest.mark.parametrize(
    "p,degrees",
    [(3, [1, 1, 2, 3, 3]), (5, [1, 1, 4, 4, 5, 5, 6]), (7, [1, 1, 6, 6, 6, 7, 7, 8, 8])],
)
def test_pgl2_tables(p, degrees):
    G = k_quotient_group(ring_make(p, 1, 6), 1)
    tab = character_table(G)
    assert sorted(round(c.degree) for c in tab) == degrees
    for a in tab:
        assert character_inner_product(a, a) == 1


def test_table_deterministic():
    G = k_quotient_group(ring_make(3, 1, 6), 1)
    a = character_table(G)
    b = character_table(G)
    assert all(x.allclose(y) for x, y in zip(a, b))


def test_table_of_level_two_quotient():
    G = k_quotient_group(ring_make(3, 1, 8), 2)
    tab = character_table(G)
    assert len(tab) == len(G.classes) == 14
    assert sum(round(c.degree) ** 2 for c in tab) == 648


def test_frobenius_reciprocity():
    G = k_quotient_group(ring_make(3, 1, 8), 2)
    H = subgroup_from_indices(G, G.subgroup(lambda m: not any(m[1][0])))
    tabG = character_table(G)
    tabH = character_table(H)
    for chi in tabH:
        ind = induce_character(H, chi, G)
        assert round(ind.degree) == round(chi.degree) * G.order // H.order
        for theta in tabG:
            assert character_inner_product(ind, theta) == character_inner_product(chi, restrict(theta, H))


def test_permutation_character_counts_fixed_points():
    G = k_quotient_group(ring_make(3, 1, 6), 1)
    pc = permutation_character(G, lambda i: G.elements[i])
    assert pc.degree == len(G.elements[0])
    assert np.all(pc.values.real >= 0)
    # transitive on the q + 1 neighbours of s_0, fixing s_0
    assert character_inner_product(pc, trivial_character(G)) == 2


def test_borel_induction_is_one_plus_steinberg():
    G = k_quotient_group(ring_make(3, 1, 6), 1)
    B = G.subgroup(lambda m: not any(m[1][0]))
    ind = induce_from_values(G, {i: 1.0 for i in B}, len(B))
    mults = decompose(ind, character_table(G))
    assert sorted(m for m in mults if m) == [1, 1]
    assert round(ind.degree) == 4


def test_non_integral_inner_product_rejected():
    G = k_quotient_group(ring_make(3, 1, 6), 1)
    half = ClassFunction(G, np.full(len(G.classes), 0.5))
    with pytest.raises(CharacterError):
        character_inner_product(half, trivial_character(G))
