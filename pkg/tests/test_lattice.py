import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilmonoid import (GroupPresentation, HirschLengthError, SubgroupLattice,
                       abelianization, commutator_lattice, coset_index, int_matrix,
                       smith_normal_form, torsion_free_subgroup, verify_torsion_free)

from .conftest import random_element

matrices = st.integers(1, 4).flatmap(
    lambda cols: st.lists(st.lists(st.integers(-12, 12), min_size=cols, max_size=cols),
                          min_size=1, max_size=4))


def test_snf_example():
    snf = smith_normal_form([[2, 4], [6, 8]])
    assert snf.diagonal == (2, 4)
    assert snf.rank == 2


def test_snf_degenerate_shapes():
    assert smith_normal_form([[0, 0], [0, 0]]).diagonal == (0, 0)
    empty = smith_normal_form(int_matrix([], shape=(0, 3)))
    assert empty.diagonal == () and empty.V.shape == (3, 3)
    assert smith_normal_form([[-3]]).diagonal == (3,)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_properties(rows):
    M = int_matrix(rows)
    snf = smith_normal_form(M)
    assert (snf.U @ M @ snf.V == snf.D).all()
    m, n = M.shape
    assert (snf.U @ snf.U_inv == np.identity(m, dtype=int)).all()
    assert (snf.V_inv @ snf.V == np.identity(n, dtype=int)).all()
    d = snf.diagonal
    assert all(x >= 0 for x in d)
    assert all(y % x == 0 for x, y in zip(d, d[1:]) if x)
    assert snf.rank == np.linalg.matrix_rank(np.array(rows, dtype=float))


def test_snf_big_entries():
    big = 2**80
    snf = smith_normal_form([[big, 0], [0, 6]])
    assert snf.diagonal == (2, 3 * big)


def test_subgroup_lattice():
    lattice = SubgroupLattice([(1, 0), (0, 1)], [None, 2])
    assert (lattice.free_rank, lattice.torsion.orders) == (1, (2,))
    diagonal = SubgroupLattice([(1, 1)], [None, 2])
    assert diagonal.free_rank == 1 and diagonal.torsion.is_trivial
    assert diagonal.contains((2, 0)) and not diagonal.contains((1, 0))
    cyclic = SubgroupLattice([(1,)], [None])
    assert cyclic.index_of([(4,)]) == 4
    assert cyclic.index_of([(2,), (3,)]) == 1
    assert cyclic.index_of([]) is None
    with pytest.raises(ValueError):
        SubgroupLattice([(2,)], [None]).index_of([(1,)])


def test_commutator_lattice(h3, h3_mod_2, torsion_e2, h3xh3):
    lattice = commutator_lattice(h3)
    assert lattice.free_rank == 1
    assert lattice.projection((5,)) == 5
    assert commutator_lattice(h3_mod_2).free_rank == 0
    assert commutator_lattice(h3_mod_2).torsion.orders == (2,)
    assert commutator_lattice(torsion_e2).torsion.orders == (2,)
    assert commutator_lattice(h3xh3).free_rank == 2
    with pytest.raises(HirschLengthError):
        commutator_lattice(h3xh3).projection((1, 0))


def test_lattice_coordinates_are_additive(torsion_e2):
    lattice = commutator_lattice(torsion_e2)
    u, v = (3, 1), (-1, 1)
    w = (2, 0)
    fu, tu = lattice.coordinates(u)
    fv, tv = lattice.coordinates(v)
    fw, tw = lattice.coordinates(w)
    assert fw[0] == fu[0] + fv[0]
    assert tw[0] == (tu[0] + tv[0]) % 2


def test_abelianization(h3, z_z2, cyclic_main):
    ab = abelianization(h3)
    assert ab.free_rank == 2 and ab.torsion.is_trivial
    assert abelianization(z_z2).torsion.orders == (2,)
    ab = abelianization(cyclic_main)
    assert ab.free_rank == 1 and ab.torsion.orders == (3,)
    x, y, z = h3.generators()
    assert abelianization(h3).project(z) == ((0, 0), ())


def test_torsion_free_subgroup_of_h3_mod_2(h3_mod_2):
    H = torsion_free_subgroup(h3_mod_2)
    assert H.exp_e == 2
    assert H.index == 8
    assert verify_torsion_free(H.derived)
    assert coset_index(h3_mod_2, H.contains) == 8


def test_torsion_free_subgroup_of_z_z2(z_z2):
    H = torsion_free_subgroup(z_z2)
    assert H.exp_e == 1 and len(H.generators) == 1
    assert H.index == 2
    assert coset_index(z_z2, H.contains) == 2


def test_verify_torsion_free(h3, h3_mod_2, z_z2, h3xh3):
    assert verify_torsion_free(h3)
    assert verify_torsion_free(h3xh3)
    assert not verify_torsion_free(h3_mod_2)
    assert not verify_torsion_free(z_z2)


CORPUS = {
    'h3': GroupPresentation([None, None], [None], {(0, 1): (1,)}),
    'h3_mod_2': GroupPresentation([None, None], [2], {(0, 1): (1,)}),
    'h3_mod_3': GroupPresentation([None, None], [3], {(0, 1): (1,)}),
    'h3_square': GroupPresentation([None, None], [None], {(0, 1): (2,)}),
    'h3_extra_central': GroupPresentation([None, None], [None, 2], {(0, 1): (1, 1)}),
    'torsion_e2': GroupPresentation([None] * 3, [None, 2], {(0, 1): (1, 0), (0, 2): (0, 1)}),
    'h3xh3': GroupPresentation([None] * 4, [None, None], {(0, 1): (1, 0), (2, 3): (0, 1)}),
    'z_z2': GroupPresentation([None, 2], [], {}),
    'klein': GroupPresentation([2, 2], [], {}),
    'cyclic_main': GroupPresentation([3, None], [3], {(0, 1): (1,)}, [(1,), (0,)]),
    'h5': GroupPresentation([None] * 4, [None], {(0, 1): (1,), (2, 3): (1,)}),
}
EXPECTED_INDEX = {
    'h3': 1, 'h3_mod_2': 8, 'h3_mod_3': 27, 'h3_square': 2, 'h3_extra_central': 2,
    'torsion_e2': 64, 'h3xh3': 1, 'z_z2': 2, 'klein': 4, 'cyclic_main': 27, 'h5': 1,
}


@pytest.mark.parametrize('name', sorted(CORPUS))
def test_torsion_free_subgroup_corpus(name, rng):
    P = CORPUS[name]
    H = torsion_free_subgroup(P)
    assert verify_torsion_free(H.derived)
    assert H.index == EXPECTED_INDEX[name]
    if H.index <= 30:
        assert coset_index(P, H.contains) == H.index
    for g in H.generators:
        assert H.contains(g)
    for _ in range(20):
        h = random_element(H.derived, rng)
        k = random_element(H.derived, rng)
        assert H.contains(H.embed(h))
        assert H.embed(H.derived.multiply(h, k)) == P.multiply(H.embed(h), H.embed(k))
