from collections import Counter

import pytest

from nilmonoid import (Block, BlockWord, HirschLengthError, InvariantError, bounded_sequence,
                       commutator_bound, commutator_structure, prefix_commutator_set,
                       reorder_full, reorder_single)

from .conftest import random_element


def test_commutator_structure(h3, torsion_e2, h3xh3, h3_mod_2):
    cs = commutator_structure(h3)
    assert (cs.h, cs.size_e) == (1, 1)
    assert abs(cs.proj(h3.generator('z'))) == 1
    assert commutator_structure(torsion_e2).size_e == 2
    assert commutator_structure(h3xh3).h == 2
    assert commutator_structure(h3_mod_2).h == 0
    with pytest.raises(ValueError):
        cs.split(h3.generator('x'))


def test_commutator_bound(h3):
    cs = commutator_structure(h3)
    x, y, z = h3.generators()
    assert commutator_bound([x, y], cs) == 1
    assert commutator_bound([h3.power(x, 2), y], cs) == 2
    assert commutator_bound([x, z], cs) == 1


def test_prefix_commutator_set(h3):
    x, y, _ = h3.generators()
    A = prefix_commutator_set(h3, [y, y, x], x)
    assert len(A) == 3
    assert {abs(v) for v, _ in A} == {0, 1, 2}
    assert A.b == 1
    assert len(prefix_commutator_set(h3, [], x)) == 1


def test_reorder_single_example(h3):
    x, y, _ = h3.generators()
    word = reorder_single(h3, [x, y, x, y, x], x)
    assert word.letters() == [y, x, x, x, y]
    assert word.block_count(x) == 1
    assert word.evaluate(h3) == h3.eval_word([x, y, x, y, x])


def test_reorder_single_without_occurrences(h3):
    x, y, _ = h3.generators()
    assert reorder_single(h3, [y, y], x).letters() == [y, y]


def _random_words(P, rng, count:int, max_length:int=12):
    for _ in range(count):
        xs = [random_element(P, rng) for _ in range(int(rng.integers(1, 4)))]
        w = [xs[i] for i in rng.integers(0, len(xs), size=int(rng.integers(0, max_length + 1)))]
        yield xs, w


@pytest.mark.parametrize('group', ['h3', 'torsion_e2'])
def test_reorder_full_random_words(group, request, rng):
    P = request.getfixturevalue(group)
    cs = commutator_structure(P)
    for xs, w in _random_words(P, rng, 500):
        per_step = 4 * cs.size_e * (commutator_bound(xs, cs) ** 2 + 1)
        word = reorder_full(P, w, cs, xs)
        assert word.evaluate(P) == P.eval_word(w), (xs, w)
        assert sorted(word.labels()) == sorted(xs.index(g) for g in w)
        for m in range(1, len(xs) + 1):
            assert sum(word.block_count(i) for i in range(m)) <= m * per_step


@pytest.mark.parametrize('group', ['h3', 'torsion_e2'])
def test_reorder_single_random_words(group, request, rng):
    P = request.getfixturevalue(group)
    cs = commutator_structure(P)
    e = cs.size_e
    for xs, w in _random_words(P, rng, 500):
        b = commutator_bound(xs, cs)
        word = reorder_single(P, w, xs[0], cs)
        assert word.evaluate(P) == P.eval_word(w), (xs, w)
        assert Counter(word.letters()) == Counter(w)
        assert word.block_count(xs[0]) <= 2 * e + 2 * b * b * e


def test_reorder_full_rejects_foreign_letters(h3):
    x, y, _ = h3.generators()
    with pytest.raises(ValueError):
        reorder_full(h3, [x, y], xs=[x])


def test_reorder_needs_hirsch_length_one(h3xh3):
    a1, a2 = h3xh3.main_generator(0), h3xh3.main_generator(1)
    with pytest.raises(HirschLengthError):
        reorder_single(h3xh3, [a1, a2, a1], a1)
    with pytest.raises(HirschLengthError):
        bounded_sequence([a1, a2], commutator_structure(h3xh3))


def test_bounded_sequence(h3, torsion_e2):
    x, y, z = h3.generators()
    seq = bounded_sequence([x, y], commutator_structure(h3))
    assert (seq.b, seq.e, seq.K, len(seq)) == (1, 1, 16, 32)
    assert seq.sequence[:4] == [x, y, x, y]

    commuting = bounded_sequence([x, h3.power(x, 2), z], commutator_structure(h3))
    assert commuting.K == 24

    a1, a2 = torsion_e2.main_generator(0), torsion_e2.main_generator(1)
    assert bounded_sequence([a1, a2], commutator_structure(torsion_e2)).K == 32

    with pytest.raises(ValueError):
        bounded_sequence([], commutator_structure(h3))


def test_bounded_sequence_word_and_embed(h3, rng):
    x, y, _ = h3.generators()
    xs = [x, y]
    cs = commutator_structure(h3)
    seq = bounded_sequence(xs, cs)
    alpha = [0] * len(seq)
    alpha[1], alpha[2] = 2, 1
    assert seq.word(alpha) == [y, y, x]
    with pytest.raises(ValueError):
        seq.word([1])

    for _ in range(20):
        w = [xs[i] for i in rng.integers(0, 2, size=int(rng.integers(0, 30)))]
        alpha = seq.embed(reorder_full(h3, w, cs, xs))
        assert h3.eval_word(seq.word(alpha)) == h3.eval_word(w)
        assert sum(alpha) == len(w)


def test_block_word():
    word = BlockWord([Block('g', 1, 0), Block('g', 2, 0), Block('h', 1, 1), Block('g', 1, 0)])
    assert [(b.element, b.exponent) for b in word] == [('g', 3), ('h', 1), ('g', 1)]
    assert word.block_count(0) == 2
    assert word.letters() == ['g'] * 3 + ['h', 'g']
    assert word == BlockWord.from_letters(['g', 'g', 'g', 'h', 'g'], [0, 0, 0, 1, 0])
    with pytest.raises(ValueError):
        BlockWord([Block('g', 0)])


def test_invariant_error_is_a_runtime_error():
    assert issubclass(InvariantError, RuntimeError)
