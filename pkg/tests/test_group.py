import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilmonoid import (GroupElement, GroupPresentation, PresentationError,
                       get_presentation)
from nilmonoid.oracle import coords_to_heis, heis_to_coords

from .conftest import random_element


def el(e, f):
    return GroupElement(tuple(e), tuple(f))


coords = st.integers(-10, 10)
h3_elements = st.builds(lambda a, c, f: el((a, c), (f,)), coords, coords, coords)


def test_h3_products(h3):
    x, y, z = h3.generators()
    assert h3.multiply(x, y) == el((1, 1), (0,))
    assert h3.multiply(y, x) == el((1, 1), (-1,))
    assert h3.commutator(x, y) == z
    assert h3.inverse(el((1, 1), (0,))) == el((-1, -1), (-1,))
    assert h3.power(el((1, 1), (0,)), 2) == el((2, 2), (-1,))
    assert h3.eval_word([x, y, x, y, x]) == el((3, 2), (-3,))


def test_identity_cases(h3):
    g = el((2, -1), (5,))
    assert h3.power(g, 0) == h3.identity()
    assert h3.eval_word([]) == h3.identity()
    assert h3.eval_word([g]) == g
    assert h3.commutator(g, h3.identity()) == h3.identity()
    assert h3.identity().is_identity


def test_prefix_values(h3):
    x, y, _ = h3.generators()
    prefixes = h3.prefix_values([x, y, x])
    assert prefixes == [h3.identity(), x, el((1, 1), (0,)), el((2, 1), (-1,))]


def test_generator_names(h3, torsion_e2):
    assert h3.generator('x') == h3.main_generator(0)
    assert h3.generator('y') == h3.generator('a2')
    assert h3.generator('z') == h3.central_generator(0)
    assert torsion_e2.generator('z2') == el((0, 0, 0), (0, 1))
    with pytest.raises(ValueError):
        torsion_e2.generator('x')
    with pytest.raises(ValueError):
        h3.generator('a3')


def test_normalize_torsion(h3_mod_2, cyclic_main):
    assert h3_mod_2.normalize((0, 0), (3,)) == el((0, 0), (1,))
    assert h3_mod_2.normalize((1, -1), (-1,)) == el((1, -1), (1,))
    assert cyclic_main.normalize((3, 0), (0,)) == el((0, 0), (1,))
    assert cyclic_main.normalize((-1, 0), (0,)) == el((2, 0), (2,))
    a1 = cyclic_main.main_generator(0)
    assert cyclic_main.power(a1, 3) == cyclic_main.central_generator(0)
    assert cyclic_main.power(a1, 9) == cyclic_main.identity()


def test_q_form(h3, cyclic_main):
    Q = h3.q_form()
    assert Q((0, 1), (1, 0)) == (-1,)
    assert Q((1, 0), (0, 1)) == (0,)
    assert Q((3, -2), (0, 0)) == (0,)
    with pytest.raises(ValueError):
        cyclic_main.q_form()


@given(h3_elements, h3_elements)
def test_q_form_is_the_product_correction(g, h):
    P = GroupPresentation([None, None], [None], {(0, 1): (1,)})
    Q = P.q_form()
    product = P.multiply(el(g.e, (0,)), el(h.e, (0,)))
    assert product.f == Q(g.e, h.e)


@settings(max_examples=200)
@given(h3_elements, h3_elements, h3_elements)
def test_h3_group_laws(g, h, k):
    P = GroupPresentation([None, None], [None], {(0, 1): (1,)})
    assert P.multiply(P.multiply(g, h), k) == P.multiply(g, P.multiply(h, k))
    assert P.multiply(g, P.inverse(g)) == P.identity()
    assert P.multiply(P.identity(), g) == g
    c = P.commutator(g, h)
    assert c.is_central
    assert P.multiply(c, k) == P.multiply(k, c)
    assert P.normalize(g.e, g.f) == g


@settings(max_examples=200)
@given(h3_elements, h3_elements, st.integers(-6, 6))
def test_h3_matches_matrix_model(g, h, k):
    P = GroupPresentation([None, None], [None], {(0, 1): (1,)})
    G, H = coords_to_heis(g), coords_to_heis(h)
    assert heis_to_coords(G @ H) == P.multiply(g, h)
    assert heis_to_coords(coords_to_heis(P.inverse(g)) @ G) == P.identity()
    power = coords_to_heis(P.identity())
    for _ in range(abs(k)):
        power = power @ (G if k > 0 else coords_to_heis(P.inverse(g)))
    assert heis_to_coords(power) == P.power(g, k)


@pytest.mark.parametrize('name', ['h3_mod_2', 'torsion_e2', 'h3xh3', 'z_z2', 'cyclic_main'])
def test_associativity_on_random_triples(name, request, rng):
    P = request.getfixturevalue(name)
    for _ in range(100):
        g, h, k = (random_element(P, rng, 3) for _ in range(3))
        assert P.multiply(P.multiply(g, h), k) == P.multiply(g, P.multiply(h, k))
        assert P.multiply(g, P.inverse(g)) == P.identity()
        assert P.commutator(g, h).is_central
        assert P.multiply(P.power(g, 3), P.power(g, -2)) == g


def test_eval_is_a_homomorphism(torsion_e2, rng):
    P = torsion_e2
    for _ in range(30):
        w1 = [random_element(P, rng) for _ in range(int(rng.integers(0, 6)))]
        w2 = [random_element(P, rng) for _ in range(int(rng.integers(0, 6)))]
        assert P.eval_word(w1 + w2) == P.multiply(P.eval_word(w1), P.eval_word(w2))


@pytest.mark.parametrize('name', ['h3', 'h3_mod_2', 'torsion_e2', 'h3xh3', 'z_z2', 'cyclic_main'])
def test_consistent_presentations(name, request):
    P = request.getfixturevalue(name)
    report = P.check_consistency()
    assert report.ok and report
    assert P.require_consistent() is P


def test_inconsistent_presentation(inconsistent):
    report = inconsistent.check_consistency()
    assert not report
    assert any('not central' in v for v in report.violations)
    with pytest.raises(PresentationError) as info:
        inconsistent.require_consistent()
    assert info.value.violations == report.violations


def test_malformed_presentations():
    with pytest.raises(PresentationError):
        GroupPresentation([None, None], [None], {(1, 0): (1,)})
    with pytest.raises(PresentationError):
        GroupPresentation([None, None], [None], {(0, 1): (1, 1)})
    with pytest.raises(PresentationError):
        GroupPresentation([0], [])
    with pytest.raises(PresentationError):
        GroupPresentation([None, None], [None], {}, [(1,), (0,)])


def test_commutator_table_forms_agree():
    P1 = GroupPresentation([None, None], [None], {(0, 1): (1,)})
    P2 = GroupPresentation([None, None], [None], [((0, 1), [1])])
    assert P1 == P2
    assert P1.comm_vector(1, 0) == (-1,)


def test_active_presentation(h3, h3_mod_2):
    with pytest.raises(RuntimeError):
        get_presentation()
    with h3:
        assert get_presentation() is h3
        with pytest.raises(RuntimeError):
            with h3_mod_2:
                pass
    with pytest.raises(RuntimeError):
        get_presentation()
