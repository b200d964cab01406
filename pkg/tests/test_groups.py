import cmath
import itertools

import numpy as np
import pytest
from hypothesis import given

from conftest import SMALL_GROUPS, group_and_elements, groups
from sumdiff.corpus import all_subgroups
from sumdiff.groups import (
    Group,
    Homomorphism,
    InvalidElementError,
    Subgroup,
    annihilator,
    coset_labels,
    cosets,
    is_corwin,
    pairing,
    power_subgroup,
    quotient,
    smith_normal_form,
    subgroup_from_generators,
    torsion_subgroup,
)


def members(sub):
    return [tuple(e) for e in sub.elements()]


def test_pairing_examples():
    assert pairing(Group((4,)), (1,), (1,)) == pytest.approx(1j)
    g = Group((2, 3))
    assert pairing(g, (0, 0), (1, 2)) == 1
    assert pairing(g, (1, 1), (1, 2)) == pytest.approx(cmath.exp(7j * cmath.pi / 3))


def test_pairing_rejects_bad_coordinates():
    g = Group((4,))
    with pytest.raises(InvalidElementError):
        pairing(g, (4,), (1,))
    with pytest.raises(InvalidElementError):
        g.index((1, 1))


def test_index_is_row_major():
    g = Group((2, 3, 4))
    assert [g.index(e) for e in itertools.product(range(2), range(3), range(4))] == list(range(24))
    assert g.element(23) == (1, 2, 3)


def test_torsion_examples():
    assert members(torsion_subgroup(Group((4,)), 2)) == [(0,), (2,)]
    assert members(torsion_subgroup(Group((3,)), 2)) == [(0,)]
    assert members(torsion_subgroup(Group((4, 3)), 2)) == [(0, 0), (2, 0)]


def test_power_examples():
    assert members(power_subgroup(Group((4,)), 2)) == [(0,), (2,)]
    assert len(power_subgroup(Group((3,)), 2)) == 3
    assert members(power_subgroup(Group((2, 4)), 4)) == [(0, 0)]


def test_annihilator_examples():
    g = Group((4,))
    half = subgroup_from_generators(g, [(2,)])
    assert members(annihilator(g, half)) == [(0,), (2,)]
    for g in (Group((4,)), Group((2, 3)), Group((4, 2))):
        assert len(annihilator(g, Subgroup.trivial(g))) == len(g)
        assert members(annihilator(g, Subgroup.whole(g))) == [g.zero]


def test_annihilator_matches_brute_force_pairing():
    g = Group((4, 6))
    for s in all_subgroups(g):
        brute = [y for y in g.elements() if all(abs(pairing(g, x, y) - 1) < 1e-12 for x in s.elements())]
        assert members(annihilator(g, s)) == brute


def test_corwin_examples():
    assert is_corwin(Group((3,)))
    assert not is_corwin(Group((4,)))
    assert is_corwin(Group((3, 5)))


def test_coset_examples():
    assert cosets(Group((4,)), subgroup_from_generators(Group((4,)), [(2,)])) == [(0,), (1,)]
    g = Group((4, 4))
    assert cosets(g, power_subgroup(g, 2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert cosets(g, Subgroup.whole(g)) == [(0, 0)]


def test_coset_representatives_are_lexmin():
    g = Group((4, 6))
    for s in all_subgroups(g):
        labels, reps = coset_labels(g, s)
        assert len(reps) == len(g) // len(s)
        assert reps[0] == g.zero
        for c, rep in enumerate(reps):
            assert g.element(int(np.flatnonzero(labels == c)[0])) == rep


def test_quotient_examples():
    g = Group((4,))
    q, p = quotient(g, subgroup_from_generators(g, [(2,)]))
    assert q.orders == (2,)
    assert p((1,)) == (1,)
    q, p = quotient(g, Subgroup.trivial(g))
    assert q == g and all(p(x) == x for x in g.elements())
    v4 = Group((2, 2))
    q, p = quotient(v4, subgroup_from_generators(v4, [(1, 1)]))
    assert len(q) == 2


def test_subgroup_from_generators_examples():
    z4 = Group((4,))
    assert members(subgroup_from_generators(z4, [(2,)])) == [(0,), (2,)]
    assert len(subgroup_from_generators(z4, [(1,)])) == 4
    assert len(subgroup_from_generators(Group((6,)), [(2,), (3,)])) == 6


def test_subgroup_enumeration_counts():
    # known subgroup counts
    expected = {(2, 2): 5, (2, 2, 2): 16, (4, 4): 15, (2, 4): 8, (3, 3): 6, (2, 2, 2, 2): 67}
    for orders, count in expected.items():
        assert len(all_subgroups(Group(orders))) == count


def test_pairing_biadditive_exhaustive():
    for g in [Group(o) for o in [(2,), (4,), (2, 4), (3, 4), (8,), (4, 4), (2, 2, 2), (2, 3, 5), (8, 8)]]:
        P = g.pairing_table
        add = g.add_table
        assert np.allclose(P[add], P[:, None, :] * P[None, :, :], atol=1e-12)
        assert np.allclose(np.abs(P), 1)
        assert np.allclose(P, P.T)


def test_annihilator_duality_and_order_law():
    for g in SMALL_GROUPS:
        for s in all_subgroups(g):
            a = annihilator(g, s)
            assert len(s) * len(a) == len(g)
            assert annihilator(g, a) == s


def test_quotient_exactness():
    for g in SMALL_GROUPS:
        for s in all_subgroups(g):
            q, p = quotient(g, s)
            assert len(q) * len(s) == len(g)
            assert p.kernel() == s
            assert p.is_surjective()
            assert np.array_equal(p.table[g.add_table], q.add_table[p.table[:, None], p.table[None, :]])


def test_corwin_equivalences():
    for g in SMALL_GROUPS:
        odd = all(m % 2 for m in g.orders)
        bijective = len(set(g.mul_index(2).tolist())) == len(g)
        assert is_corwin(g) == odd == bijective


def test_annihilator_of_coset_unions_sits_in_two_torsion():
    for g in SMALL_GROUPS:
        Y2 = power_subgroup(g, 2)
        X2 = torsion_subgroup(g, 2)
        for h in all_subgroups(g):
            if Y2.issubset(h):
                assert annihilator(g, h).issubset(X2)


def test_dual_homomorphism_is_adjoint():
    g = Group((4, 6))
    for s in all_subgroups(g):
        q, p = quotient(g, s)
        d = p.dual()
        Pg, Pq = g.pairing_table, q.pairing_table
        # (p(x), yq) == (x, p^(yq))
        assert np.allclose(Pq[p.table][:, np.arange(len(q))], Pg[:, d.table], atol=1e-12)
        assert np.array_equal(np.sort(d.table), annihilator(g, s).indices)


def test_homomorphism_rejects_non_additive_table():
    g = Group((4,))
    with pytest.raises(ValueError):
        Homomorphism(g, g, np.array([0, 1, 3, 2]))


def test_smith_normal_form_known_case():
    a = [[12, 6, 4], [3, 9, 6], [2, 16, 14]]
    U, D, V = smith_normal_form(a)
    assert (np.array(U) @ np.array(a) @ np.array(V)).tolist() == D
    diag = [D[i][i] for i in range(3)]
    assert diag == [1, 10, 30]
    assert all(diag[i + 1] % diag[i] == 0 for i in range(2))


@given(group_and_elements(k=3))
def test_group_law(ge):
    g, (x, y, z) = ge
    assert g.add(g.add(x, y), z) == g.add(x, g.add(y, z))
    assert g.add(x, y) == g.add(y, x)
    assert g.add(x, g.neg(x)) == g.zero
    assert g.element(g.index(x)) == x
    assert g.mul(g.element_order(x), x) == g.zero


@given(group_and_elements(k=3))
def test_pairing_biadditive_random(ge):
    g, (x, x2, y) = ge
    assert pairing(g, g.add(x, x2), y) == pytest.approx(pairing(g, x, y) * pairing(g, x2, y))


@given(groups(max_order=48))
def test_torsion_and_power_are_annihilator_partners(g):
    for n in (2, 3, 4):
        assert annihilator(g, power_subgroup(g, n)) == torsion_subgroup(g, n)
