import pytest

import nilmonoid as nm
from nilmonoid import GroupElement


def test_free_functions_use_the_active_presentation(h3):
    x, y, z = h3.generators()
    with h3:
        assert nm.multiply(y, x) == GroupElement((1, 1), (-1,))
        assert nm.commutator(x, y) == z
        assert nm.inverse(nm.multiply(x, y)) == GroupElement((-1, -1), (-1,))
        assert nm.power(nm.multiply(x, y), 2) == GroupElement((2, 2), (-1,))
        assert nm.eval_word([x, y, x, y, x]) == GroupElement((3, 2), (-3,))
        assert len(nm.prefix_values([x, y])) == 3
        assert nm.q_form()((0, 1), (1, 0)) == (-1,)
        assert nm.check_consistency()


def test_explicit_presentation_wins(h3, h3_mod_2):
    x, y, _ = h3.generators()
    with h3:
        assert nm.multiply(y, x, presentation=h3_mod_2) == GroupElement((1, 1), (1,))
        assert nm.normalize((0, 0), (3,), presentation=h3_mod_2) == GroupElement((0, 0), (1,))


def test_no_active_presentation(h3):
    x = h3.main_generator(0)
    with pytest.raises(RuntimeError):
        nm.multiply(x, x)
