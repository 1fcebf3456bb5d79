import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilmonoid import (BudgetExceededError, GroupElement, HeisMatrix, bfs_monoid_ball,
                       coords_to_heis, heis_eval, heis_to_coords, knapsack_products,
                       sumset, sumset_nA)

letters = st.one_of(st.sampled_from(['x', 'y', 'z']),
                    st.tuples(st.sampled_from(['x', 'y', 'z']), st.integers(-3, 3)))
words = st.lists(letters, max_size=8)


def el(e, f):
    return GroupElement(tuple(e), tuple(f))


def test_heis_eval_examples():
    assert heis_eval(['x', 'y']) == HeisMatrix(alpha=1, gamma=1, beta=1)
    assert heis_eval(['y', 'x']) == HeisMatrix(alpha=1, gamma=1, beta=0)
    assert heis_eval([]) == HeisMatrix()
    assert heis_to_coords(heis_eval(['x', 'y', 'x', 'y', 'x'])) == el((3, 2), (-3,))
    with pytest.raises(ValueError):
        heis_eval(['w'])


@given(words, words)
def test_heis_eval_is_a_homomorphism(u, v):
    assert heis_eval(u + v) == heis_eval(u) @ heis_eval(v)


@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))
def test_heis_coordinates_round_trip(a, c, f):
    g = el((a, c), (f,))
    assert heis_to_coords(coords_to_heis(g)) == g
    assert HeisMatrix.from_matrix(coords_to_heis(g).to_matrix()) == coords_to_heis(g)


def test_bfs_ball_examples(h3):
    x, y, _ = h3.generators()
    ball = bfs_monoid_ball(h3, [x], 3)
    assert set(ball) == {el((k, 0), (0,)) for k in range(4)}
    ball = bfs_monoid_ball(h3, [x, y], 2)
    assert set(ball) == {h3.identity(), x, y, el((2, 0), (0,)), el((1, 1), (0,)),
                         el((1, 1), (-1,)), el((0, 2), (0,))}
    assert ball.distance(el((1, 1), (-1,))) == 2
    assert set(bfs_monoid_ball(h3, [], 5)) == {h3.identity()}


def test_bfs_ball_is_monotone_and_closed(h3):
    x, y, _ = h3.generators()
    S = [x, h3.inverse(y)]
    small, large = bfs_monoid_ball(h3, S, 3), bfs_monoid_ball(h3, S, 4)
    assert set(small) <= set(large)
    for g in small:
        for s in S:
            assert h3.multiply(g, s) in large


def test_bfs_budget(h3):
    with pytest.raises(BudgetExceededError):
        bfs_monoid_ball(h3, h3.generators(), 6, budget=50)


def test_sumsets():
    assert sumset_nA({0, 1}, 3) == {0, 1, 2, 3}
    assert sumset_nA({2, 3, 5}, 2) == {4, 5, 6, 7, 8, 10}
    assert sumset_nA({7}, 4) == {28}
    assert sumset({1, 2}, {10}) == {11, 12}
    with pytest.raises(ValueError):
        sumset_nA({1}, 0)


@settings(max_examples=50)
@given(st.sets(st.integers(-5, 5), min_size=1, max_size=4), st.integers(1, 3), st.integers(1, 3))
def test_sumset_splits(A, m, n):
    assert sumset_nA(A, m + n) == sumset(sumset_nA(A, m), sumset_nA(A, n))


def test_knapsack_products(h3):
    x, y, z = h3.generators()
    table = knapsack_products(h3, [x, y, h3.inverse(x), h3.inverse(y)], 1)
    assert table[z] == (1, 1, 1, 1)
    assert table[h3.identity()] == (0, 0, 0, 0)
