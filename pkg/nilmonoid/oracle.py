from __future__ import annotations

import logging
import operator
from collections import deque
from dataclasses import dataclass
from typing import (Callable, Dict, FrozenSet, Iterable, List, Sequence,
                    Tuple, Union)

import numpy as np

from .config import BFS_BUDGET, COSET_BUDGET
from .errors import BudgetExceededError
from .group import GroupElement, GroupPresentation

__all__ = [
    'BfsBall',
    'bfs_monoid_ball',
    'sumset',
    'sumset_nA',
    'knapsack_products',
    'HeisMatrix',
    'heis_eval',
    'heis_to_coords',
    'coords_to_heis',
    'coset_index'
]

logger = logging.getLogger(__name__)


class BfsBall(object):
    """
    All values of words of length at most `depth` over a generating set.

    Attributes:
        layers (List[FrozenSet[GroupElement]]): `layers[d]` holds the elements at word distance exactly d.
        depth (int): The radius of the ball.
    """
    def __init__(self, layers:List[FrozenSet[GroupElement]], depth:int):
        self.layers = layers
        self.depth = depth
        self.elements: FrozenSet[GroupElement] = frozenset().union(*layers)

    def __contains__(self, g) -> bool:
        return g in self.elements

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def distance(self, g:GroupElement) -> int:
        for d, layer in enumerate(self.layers):
            if g in layer:
                return d
        raise KeyError(f"{g} is not in the ball of radius {self.depth}")


def bfs_monoid_ball(P:GroupPresentation, S:Sequence[GroupElement], depth:int,
                    budget:int=BFS_BUDGET) -> BfsBall:
    """
    Breadth first enumeration of the monoid ball of radius `depth`.

    Args:
        P (GroupPresentation): The group.
        S (Sequence[GroupElement]): The monoid generators.
        depth (int): Maximal word length.
        budget (int): Maximal number of stored elements.

    Raises:
        BudgetExceededError: If the ball holds more than `budget` elements.

    Example:
    ```python
    ball = bfs_monoid_ball(h3, [x, y], 2)
    len(ball)   # 7
    ```
    """
    if depth < 0:
        raise ValueError(f"depth must be nonnegative, got {depth}")
    seen = {P.identity()}
    frontier = [P.identity()]
    layers = [frozenset(frontier)]
    for d in range(1, depth + 1):
        layer = []
        for g in frontier:
            for s in S:
                h = P.multiply(g, s)
                if h not in seen:
                    seen.add(h)
                    layer.append(h)
        if len(seen) > budget:
            raise BudgetExceededError(f"monoid ball exceeds the budget of {budget} elements at depth {d}")
        logger.debug("ball layer %d: %d new elements", d, len(layer))
        layers.append(frozenset(layer))
        frontier = layer
        if not layer:
            layers.extend(frozenset() for _ in range(d + 1, depth + 1))
            break
    return BfsBall(layers, depth)


def sumset(X:Iterable, Y:Iterable, add:Callable=operator.add) -> FrozenSet:
    """The sumset `X + Y = {x + y}` for any addition."""
    Y = list(Y)
    return frozenset(add(x, y) for x in X for y in Y)


def sumset_nA(A:Iterable, n:int, add:Callable=operator.add) -> FrozenSet:
    """
    The iterated sumset `nA = A + ... + A` with n summands.

    Example:
    ```python
    sumset_nA({2, 3, 5}, 2)   # frozenset({4, 5, 6, 7, 8, 10})
    ```
    """
    if n < 1:
        raise ValueError(f"need at least one summand, got {n}")
    A = frozenset(A)
    out = A
    for _ in range(n - 1):
        out = sumset(out, A, add)
    return out


def knapsack_products(P:GroupPresentation, factors:Sequence[GroupElement],
                      bound:int) -> Dict[GroupElement, Tuple[int, ...]]:
    """
    All products `x_1^{a_1} ... x_n^{a_n}` with `0 <= a_i <= bound`.

    Returns:
        Dict[GroupElement, Tuple[int, ...]]: Every reachable value with its
            lexicographically smallest exponent vector.
    """
    found: Dict[GroupElement, Tuple[int, ...]] = {}

    def walk(i:int, value:GroupElement, alpha:Tuple[int, ...]):
        if i == len(factors):
            found.setdefault(value, alpha)
            return
        step = factors[i]
        for a in range(bound + 1):
            walk(i + 1, value, alpha + (a,))
            value = P.multiply(value, step)

    walk(0, P.identity(), ())
    return found


@dataclass(frozen=True)
class HeisMatrix(object):
    """
    The unitriangular matrix `[[1, alpha, beta], [0, 1, gamma], [0, 0, 1]]`.
    """
    alpha: int = 0
    gamma: int = 0
    beta: int = 0

    def __matmul__(self, other:HeisMatrix) -> HeisMatrix:
        return HeisMatrix(self.alpha + other.alpha,
                          self.gamma + other.gamma,
                          self.beta + other.beta + self.alpha * other.gamma)

    def to_matrix(self) -> np.ndarray:
        out = np.zeros((3, 3), dtype=object)
        for i in range(3):
            out[i, i] = 1
        out[0, 1], out[1, 2], out[0, 2] = self.alpha, self.gamma, self.beta
        return out

    @classmethod
    def from_matrix(cls, m:np.ndarray) -> HeisMatrix:
        if any(m[i, j] != (1 if i == j else 0) for i in range(3) for j in range(3) if j <= i):
            raise ValueError("not an upper unitriangular matrix")
        return cls(int(m[0, 1]), int(m[1, 2]), int(m[0, 2]))


_LETTERS = {
    'x': lambda k: HeisMatrix(alpha=k),
    'y': lambda k: HeisMatrix(gamma=k),
    'z': lambda k: HeisMatrix(beta=k),
}


def heis_eval(word:Iterable[Union[Tuple[str, int], str, HeisMatrix]]) -> HeisMatrix:
    """
    Multiply out a word over `x, y, z` as 3x3 integer matrices.

    Args:
        word (Iterable): Letters `"x"`, pairs `("y", -2)` or HeisMatrix instances.

    Example:
    ```python
    heis_eval(["x", "y"])   # HeisMatrix(alpha=1, gamma=1, beta=1)
    ```
    """
    product = HeisMatrix().to_matrix()
    for letter in word:
        if isinstance(letter, HeisMatrix):
            factor = letter
        else:
            name, k = (letter, 1) if isinstance(letter, str) else letter
            if name not in _LETTERS:
                raise ValueError(f"unknown letter {name!r}, expected one of x, y, z")
            factor = _LETTERS[name](int(k))
        product = product @ factor.to_matrix()
    return HeisMatrix.from_matrix(product)


def heis_to_coords(m:HeisMatrix) -> GroupElement:
    """Normal form coordinates `x^alpha y^gamma z^f` with `f = beta - alpha gamma`."""
    return GroupElement((m.alpha, m.gamma), (m.beta - m.alpha * m.gamma,))


def coords_to_heis(g:GroupElement) -> HeisMatrix:
    (a, c), (f,) = g.e, g.f
    return HeisMatrix(a, c, f + a * c)


def coset_index(P:GroupPresentation, contains:Callable[[GroupElement], bool],
                budget:int=COSET_BUDGET) -> int:
    """
    Count the left cosets of a subgroup by breadth first search.

    Cosets `gH` are explored by left multiplication with all generators and their
    inverses. Two elements share a coset iff `g^-1 g'` satisfies `contains`.

    Args:
        P (GroupPresentation): The ambient group.
        contains (Callable[[GroupElement], bool]): Membership test of the subgroup.
        budget (int): Maximal number of cosets.

    Raises:
        BudgetExceededError: If more than `budget` cosets are found.
    """
    moves = []
    for g in P.generators():
        moves.extend([g, P.inverse(g)])
    representatives = [P.identity()]
    inverses = [P.identity()]
    queue = deque([P.identity()])
    while queue:
        g = queue.popleft()
        for s in moves:
            h = P.multiply(s, g)
            if any(contains(P.multiply(inv, h)) for inv in inverses):
                continue
            representatives.append(h)
            inverses.append(P.inverse(h))
            queue.append(h)
            if len(representatives) > budget:
                raise BudgetExceededError(f"more than {budget} cosets")
    logger.debug("coset enumeration found %d cosets", len(representatives))
    return len(representatives)
