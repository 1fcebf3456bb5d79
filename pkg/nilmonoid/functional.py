from typing import List, Optional

from .group import (ConsistencyReport, GroupElement, GroupPresentation, QForm,
                    Word, get_presentation)

__all__ = [
    'normalize',
    'multiply',
    'inverse',
    'power',
    'commutator',
    'eval_word',
    'prefix_values',
    'q_form',
    'check_consistency'
]


def _resolve(presentation:Optional[GroupPresentation]) -> GroupPresentation:
    return get_presentation() if presentation is None else presentation


def normalize(raw_e, raw_f, presentation:Optional[GroupPresentation]=None) -> GroupElement:
    """
    Reduce raw coordinates to normal form.

    Args:
        raw_e (Sequence[int]): Exponents of the main generators.
        raw_f (Sequence[int]): Exponents of the central generators.
        presentation (Optional[GroupPresentation]): Presentation to work in. Defaults to the active one.

    Example:
    ```python
    with h3_mod_2:
        normalize((0, 0), (3,))   # (0,0|1)
    ```
    """
    return _resolve(presentation).normalize(raw_e, raw_f)


def multiply(g:GroupElement, h:GroupElement, presentation:Optional[GroupPresentation]=None) -> GroupElement:
    return _resolve(presentation).multiply(g, h)


def inverse(g:GroupElement, presentation:Optional[GroupPresentation]=None) -> GroupElement:
    return _resolve(presentation).inverse(g)


def power(g:GroupElement, k:int, presentation:Optional[GroupPresentation]=None) -> GroupElement:
    return _resolve(presentation).power(g, k)


def commutator(g:GroupElement, h:GroupElement, presentation:Optional[GroupPresentation]=None) -> GroupElement:
    """`[g, h] = g^-1 h^-1 g h` in the given (or active) presentation."""
    return _resolve(presentation).commutator(g, h)


def eval_word(w:Word, presentation:Optional[GroupPresentation]=None) -> GroupElement:
    """
    Evaluate a word left to right.

    Example:
    ```python
    with h3:
        x, y = h3.main_generator(0), h3.main_generator(1)
        eval_word([x, y, x, y, x])   # (3,2|-3)
    ```
    """
    return _resolve(presentation).eval_word(w)


def prefix_values(w:Word, presentation:Optional[GroupPresentation]=None) -> List[GroupElement]:
    return _resolve(presentation).prefix_values(w)


def q_form(presentation:Optional[GroupPresentation]=None) -> QForm:
    return _resolve(presentation).q_form()


def check_consistency(presentation:Optional[GroupPresentation]=None) -> ConsistencyReport:
    return _resolve(presentation).check_consistency()
