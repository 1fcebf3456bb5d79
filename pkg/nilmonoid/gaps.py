from __future__ import annotations

import bisect
import itertools
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import (Callable, Dict, FrozenSet, Iterable, Iterator, List,
                    Optional, Sequence, Tuple, TypeAlias, Union)

from . import oracle
from .errors import InvariantError

__all__ = [
    'FiniteAbelian',
    'GapSet',
    'TorsionGapSet',
    'TorsionValue',
    'max_gap',
    'lower_half_step',
    'upper_half_step',
    'bump_iteration',
    'bump_iterations',
    'concentrate_extremes',
    'concentrate_consecutive',
    'concentrate_torsion',
    'sumset_identity_check'
]

logger = logging.getLogger(__name__)

Torsion: TypeAlias = Tuple[int, ...]
TorsionValue: TypeAlias = Tuple[int, Torsion]
"""An element of `Z x G_0`, stored as `(pi, torsion)`."""


@dataclass(frozen=True)
class FiniteAbelian(object):
    """
    The finite abelian group `Z/d_1 x ... x Z/d_t`.

    Args:
        orders (Tuple[int, ...]): Cyclic orders, each at least 1. The empty tuple is the trivial group.
    """
    orders: Tuple[int, ...] = ()

    def __post_init__(self):
        orders = tuple(int(d) for d in self.orders)
        if any(d < 1 for d in orders):
            raise ValueError(f"cyclic orders must be positive, got {orders}")
        object.__setattr__(self, 'orders', orders)

    @property
    def size(self) -> int:
        return math.prod(self.orders)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.orders) if self.orders else 1

    @property
    def zero(self) -> Torsion:
        return (0,) * len(self.orders)

    @property
    def is_trivial(self) -> bool:
        return self.size == 1

    def reduce(self, t:Sequence[int]) -> Torsion:
        if len(t) != len(self.orders):
            raise ValueError(f"torsion component {tuple(t)} does not match orders {self.orders}")
        return tuple(int(x) % d for x, d in zip(t, self.orders))

    def is_reduced(self, t:Sequence[int]) -> bool:
        return len(t) == len(self.orders) and all(0 <= x < d for x, d in zip(t, self.orders))

    def add(self, t1:Torsion, t2:Torsion) -> Torsion:
        return tuple((x + y) % d for x, y, d in zip(t1, t2, self.orders))

    def neg(self, t:Torsion) -> Torsion:
        return tuple(-x % d for x, d in zip(t, self.orders))

    def sub(self, t1:Torsion, t2:Torsion) -> Torsion:
        return tuple((x - y) % d for x, y, d in zip(t1, t2, self.orders))

    def scale(self, t:Torsion, k:int) -> Torsion:
        return tuple(k * x % d for x, d in zip(t, self.orders))

    def elements(self) -> List[Torsion]:
        return list(itertools.product(*(range(d) for d in self.orders)))


class GapSet(object):
    """
    A finite set of integers `a_1 < ... < a_l` with gaps bounded by `b`.

    Args:
        values (Iterable[int]): The elements, in any order. Must not be empty.
    """
    def __init__(self, values:Iterable[int]):
        self.values: Tuple[int, ...] = tuple(sorted({int(v) for v in values}))
        if not self.values:
            raise ValueError("a gap set needs at least one element")

    def __repr__(self) -> str:
        return f"GapSet({list(self.values)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GapSet) and self.values == other.values

    def __hash__(self) -> int:
        return hash(self.values)

    def __contains__(self, v) -> bool:
        i = bisect.bisect_left(self.values, v)
        return i < len(self.values) and self.values[i] == v

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def first(self) -> int:
        return self.values[0]

    @property
    def last(self) -> int:
        return self.values[-1]

    @cached_property
    def b(self) -> int:
        """The maximal gap, 1 for a singleton."""
        if len(self.values) == 1:
            return 1
        return max(y - x for x, y in zip(self.values, self.values[1:]))

    def index(self, v:int) -> int:
        i = bisect.bisect_left(self.values, v)
        if i == len(self.values) or self.values[i] != v:
            raise ValueError(f"{v} is not an element of {self!r}")
        return i

    def down_gap(self, v:int) -> int:
        """Smallest `d >= 1` with `v - d` in the set."""
        return v - self.values[self.index(v) - 1]

    def up_gap(self, v:int) -> int:
        """Smallest `d >= 1` with `v + d` in the set."""
        return self.values[self.index(v) + 1] - v


def _as_gap_set(A:Union[GapSet, Iterable[int]]) -> GapSet:
    return A if isinstance(A, GapSet) else GapSet(A)


def max_gap(A:Union[GapSet, Iterable[int]]) -> int:
    """
    Maximal difference of consecutive elements.

    Example:
    ```python
    max_gap([2, 3, 5, 8, 10])   # 3
    max_gap([7])                # 1
    ```
    """
    return _as_gap_set(A).b


def _checked(s:Sequence[int], A:GapSet) -> List[int]:
    s = [int(v) for v in s]
    for v in s:
        if v not in A:
            raise ValueError(f"entry {v} is not an element of {A!r}")
    if any(x > y for x, y in zip(s, s[1:])):
        raise ValueError("the sequence must be nondecreasing")
    return s


def _interior(s:Sequence[int], A:GapSet) -> List[int]:
    return [i for i, v in enumerate(s) if A.first < v < A.last]


def _classes(indices:Iterable[int], key:Callable[[int], int]) -> Dict[int, List[int]]:
    classes: Dict[int, List[int]] = {}
    for i in indices:
        classes.setdefault(key(i), []).append(i)
    return classes


def lower_half_step(s:Sequence[int], A:Union[GapSet, Iterable[int]], gap:int, count:int,
                    indices:Optional[Sequence[int]]=None) -> List[int]:
    """
    Lower the `count` smallest entries whose nearest lower neighbour in A is `gap` below them.

    Args:
        s (Sequence[int]): Nondecreasing sequence over A.
        A (GapSet): The ambient set.
        gap (int): The down gap selecting the entries.
        count (int): How many entries to lower.
        indices (Optional[Sequence[int]]): Candidate indices, defaults to all entries strictly inside A.

    Returns:
        List[int]: The new sequence, its sum is `count * gap` smaller.

    Example:
    ```python
    s = (2, 2, 3, 5, 5, 8, 8, 8, 10, 10, 10, 14)
    lower_half_step(s, [2, 3, 5, 8, 10, 14], gap=2, count=3)
    # [2, 2, 3, 3, 3, 8, 8, 8, 8, 10, 10, 14]
    ```
    """
    A = _as_gap_set(A)
    s = _checked(s, A)
    candidates = _interior(s, A) if indices is None else sorted(indices)
    chosen = [i for i in candidates if s[i] > A.first and A.down_gap(s[i]) == gap]
    if len(chosen) < count:
        raise ValueError(f"only {len(chosen)} entries have down gap {gap}, {count} requested")
    for i in chosen[:count]:
        s[i] -= gap
    return s


def upper_half_step(s:Sequence[int], A:Union[GapSet, Iterable[int]], gap:int, count:int,
                    indices:Optional[Sequence[int]]=None) -> List[int]:
    """Mirror image of [lower_half_step][nilmonoid.gaps.lower_half_step]: raise the `count` largest entries with up gap `gap`."""
    A = _as_gap_set(A)
    s = _checked(s, A)
    candidates = _interior(s, A) if indices is None else sorted(indices)
    chosen = [i for i in candidates if s[i] < A.last and A.up_gap(s[i]) == gap]
    if len(chosen) < count:
        raise ValueError(f"only {len(chosen)} entries have up gap {gap}, {count} requested")
    for i in chosen[len(chosen) - count:]:
        s[i] += gap
    return s


def bump_iteration(s:Sequence[int], A:Union[GapSet, Iterable[int]]) -> Optional[List[int]]:
    """
    One concentration step towards the extremes of A.

    If more than `2b^2` entries lie strictly between `a_1` and `a_l`, the first and
    last `b^2` of them are classified by their distance to the next lower (resp. upper)
    element of A. Picking the smallest classes `b_-`, `b_+` with at least `b` members,
    `b_+` entries are lowered by `b_-` and `b_-` entries are raised by `b_+`.

    Args:
        s (Sequence[int]): Nondecreasing sequence over A.
        A (GapSet): The ambient set.

    Returns:
        Optional[List[int]]: The rewritten sequence, or `None` if `s` is already concentrated.
    """
    A = _as_gap_set(A)
    s = _checked(s, A)
    middle = _interior(s, A)
    b = A.b
    width = b * b
    if len(middle) <= 2 * width:
        return None

    lower = _classes(middle[:width], lambda i: A.down_gap(s[i]))
    upper = _classes(middle[-width:], lambda i: A.up_gap(s[i]))
    b_minus = min(d for d, members in lower.items() if len(members) >= b)
    b_plus = min(d for d, members in upper.items() if len(members) >= b)

    out = list(s)
    for i in lower[b_minus][:b_plus]:
        out[i] -= b_minus
    for i in upper[b_plus][len(upper[b_plus]) - b_minus:]:
        out[i] += b_plus
    return out


def bump_iterations(s:Sequence[int], A:Union[GapSet, Iterable[int]]) -> Iterator[List[int]]:
    """
    Yield the sequence after every [bump_iteration][nilmonoid.gaps.bump_iteration] until it is concentrated.

    Every coordinate moves monotonically through A, so at most `n * l` iterations happen.

    Raises:
        InvariantError: If the iteration bound is exceeded.
    """
    A = _as_gap_set(A)
    current = _checked(s, A)
    limit = len(current) * len(A)
    for step in itertools.count(1):
        current = bump_iteration(current, A)
        if current is None:
            return
        if step > limit:
            raise InvariantError(f"concentration did not halt within {limit} iterations")
        yield current


def _check_result(before:Sequence, after:Sequence, members:Callable[[object], bool],
                  key:Callable, total:Callable[[Sequence], object]):
    if len(before) != len(after):
        raise InvariantError("rewriting changed the length of the sequence")
    if total(before) != total(after):
        raise InvariantError("rewriting changed the sum of the sequence")
    if not all(members(v) for v in after):
        raise InvariantError("rewriting left the ambient set")
    if any(key(x) > key(y) for x, y in zip(after, after[1:])):
        raise InvariantError("rewriting broke monotonicity")


def concentrate_extremes(s:Sequence[int], A:Union[GapSet, Iterable[int]]) -> List[int]:
    """
    Rewrite `s` into a sequence with the same sum where at most `2b^2` entries avoid `{a_1, a_l}`.

    Args:
        s (Sequence[int]): Nondecreasing sequence over A.
        A (GapSet): The ambient set.

    Returns:
        List[int]: The concentrated sequence. Inputs with `n <= 2b^2` come back unchanged.

    Example:
    ```python
    concentrate_extremes([1, 1, 1, 1, 1], [0, 1, 2])   # [0, 0, 1, 2, 2]
    ```
    """
    A = _as_gap_set(A)
    start = _checked(s, A)
    result = start
    steps = 0
    for steps, result in enumerate(bump_iterations(start, A), 1):
        logger.debug("extremes iteration %d: %s", steps, result)

    _check_result(start, result, A.__contains__, int, sum)
    if len(_interior(result, A)) > 2 * A.b ** 2:
        raise InvariantError("concentration bound violated")
    logger.info("concentrated %d entries at the extremes in %d iterations", len(result), steps)
    return result


def concentrate_consecutive(s:Sequence[int], A:Union[GapSet, Iterable[int]]) -> Tuple[int, List[int]]:
    """
    Rewrite `s` so that everything but the first and last `b^2` entries lies in `{a_k, a_{k+1}}`.

    While `s_{b^2}` and `s_{n-b^2}` are neither equal nor consecutive in A, let `a_k` be
    the successor of `s_{b^2}`. Entries below `a_k` are bumped up (largest indices of a
    class first) and entries above `a_k` are bumped down (smallest indices first), keeping
    the sum.

    Args:
        s (Sequence[int]): Nondecreasing sequence over A with `n > 2b^2`.
        A (GapSet): The ambient set.

    Returns:
        Tuple[int, List[int]]: The 0-based index `k` and the rewritten sequence. For a
            singleton A, `k = 0` and the pair degenerates to `{a_1}`.

    Example:
    ```python
    concentrate_consecutive([0, 0, 0, 2, 2, 2], [0, 1, 2])   # (0, [0, 1, 1, 1, 1, 2])
    ```
    """
    A = _as_gap_set(A)
    start = _checked(s, A)
    n, b = len(start), A.b
    width = b * b
    if n <= 2 * width:
        raise ValueError(f"need more than 2b^2 = {2 * width} entries, got {n}")
    if len(A) == 1:
        return 0, start

    s = list(start)
    total = sum(s)
    # sum of squares drops by at least 2 per step
    limit = (n * sum(v * v for v in s) - total * total) // (2 * n) + 1
    steps = 0
    while True:
        lo, hi = A.index(s[width - 1]), A.index(s[n - width - 1])
        if hi - lo <= 1:
            break
        steps += 1
        if steps > limit:
            raise InvariantError(f"consecutive concentration did not halt within {limit} iterations")

        pivot = A.values[lo + 1]
        below = [i for i, v in enumerate(s) if v < pivot][-width:]
        above = [i for i, v in enumerate(s) if v > pivot][:width]
        up = _classes(below, lambda i: A.up_gap(s[i]))
        down = _classes(above, lambda i: A.down_gap(s[i]))
        b_plus = min(d for d, members in up.items() if len(members) >= b)
        b_minus = min(d for d, members in down.items() if len(members) >= b)

        raised = up[b_plus][len(up[b_plus]) - b_minus:]
        lowered = down[b_minus][:b_plus]
        for i in raised:
            s[i] += b_plus
        for i in lowered:
            s[i] -= b_minus
        logger.debug("consecutive iteration %d around %d: %s", steps, pivot, s)

    k = min(lo, len(A) - 2)
    _check_result(start, s, A.__contains__, int, sum)
    pair = {A.values[k], A.values[k + 1]}
    if any(v not in pair for v in s[width:n - width]):
        raise InvariantError("consecutive concentration bound violated")
    logger.info("concentrated %d entries at {%d, %d} in %d iterations",
                n, A.values[k], A.values[k + 1], steps)
    return k, s


class TorsionGapSet(object):
    """
    A finite subset of `Z x G_0` whose projection to `Z` has bounded gaps.

    Args:
        elements (Iterable[Tuple[int, Sequence[int]]]): Pairs `(pi, torsion)`.
        group (FiniteAbelian): The finite group `G_0`.

    Example:
    ```python
    A = TorsionGapSet([(0, (0,)), (1, (1,)), (2, (0,))], FiniteAbelian((2,)))
    A.b, A.e   # (1, 2)
    ```
    """
    def __init__(self, elements:Iterable[Tuple[int, Sequence[int]]], group:FiniteAbelian):
        self.group = group
        normalized = set()
        for z, t in elements:
            if not group.is_reduced(t):
                raise ValueError(f"malformed torsion component {tuple(t)} for orders {group.orders}")
            normalized.add((int(z), tuple(int(x) for x in t)))
        if not normalized:
            raise ValueError("a torsion gap set needs at least one element")
        self.elements: Tuple[TorsionValue, ...] = tuple(sorted(normalized))
        self.projection = GapSet(z for z, _ in self.elements)
        self._levels: Dict[int, List[TorsionValue]] = {}
        for x in self.elements:
            self._levels.setdefault(x[0], []).append(x)

    def __repr__(self) -> str:
        return f"TorsionGapSet({list(self.elements)}, {self.group!r})"

    def __contains__(self, x) -> bool:
        return x in self._members

    def __iter__(self) -> Iterator[TorsionValue]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    @cached_property
    def _members(self) -> FrozenSet[TorsionValue]:
        return frozenset(self.elements)

    @property
    def b(self) -> int:
        return self.projection.b

    @property
    def e(self) -> int:
        return self.group.size

    @cached_property
    def extremes(self) -> FrozenSet[TorsionValue]:
        """The subset `A_0` of elements over `min pi(A)` and `max pi(A)`."""
        ends = {self.projection.first, self.projection.last}
        return frozenset(x for x in self.elements if x[0] in ends)

    def add(self, x:TorsionValue, y:TorsionValue) -> TorsionValue:
        return x[0] + y[0], self.group.add(x[1], y[1])

    def sub(self, x:TorsionValue, y:TorsionValue) -> TorsionValue:
        return x[0] - y[0], self.group.sub(x[1], y[1])

    def total(self, s:Iterable[TorsionValue]) -> TorsionValue:
        out = (0, self.group.zero)
        for x in s:
            out = self.add(out, x)
        return out

    def down_move(self, x:TorsionValue) -> TorsionValue:
        """The move `g_-` with minimal projection taking `x` into the next lower level of A."""
        level = self.projection.values[self.projection.index(x[0]) - 1]
        return self.sub(x, self._levels[level][0])

    def up_move(self, x:TorsionValue) -> TorsionValue:
        level = self.projection.values[self.projection.index(x[0]) + 1]
        return self.sub(self._levels[level][0], x)


def _as_torsion_value(x, group:FiniteAbelian) -> TorsionValue:
    z, t = x
    if not group.is_reduced(t):
        raise ValueError(f"malformed torsion component {tuple(t)} for orders {group.orders}")
    return int(z), tuple(int(v) for v in t)


Change: TypeAlias = Tuple[int, int, TorsionValue]


def _class_bump_step(lower:List[int], upper:List[int], down:Dict[int, TorsionValue],
                     up:Dict[int, TorsionValue], A:TorsionGapSet) -> Optional[List[Change]]:
    threshold = A.b * A.e
    lower_classes = _classes(lower, down.__getitem__)
    upper_classes = _classes(upper, up.__getitem__)
    minus = [c for c in sorted(lower_classes) if len(lower_classes[c]) >= threshold]
    plus = [c for c in sorted(upper_classes) if len(upper_classes[c]) >= threshold]
    if not minus or not plus:
        return None
    c_minus, c_plus = minus[0], plus[0]
    members_up = upper_classes[c_plus]
    changes = [(i, -1, c_minus) for i in lower_classes[c_minus][:c_plus[0] * A.e]]
    changes += [(i, 1, c_plus) for i in members_up[len(members_up) - c_minus[0] * A.e:]]
    return changes


def _exchange_step(lower:List[int], upper:List[int], down:Dict[int, TorsionValue],
                   up:Dict[int, TorsionValue], A:TorsionGapSet) -> List[Change]:
    """
    Balanced walk alternating raises and lowerings.

    The partial sum stays inside `[1-b, b] x G_0`, so a state repeats within `2be` moves
    and the moves in between sum to zero.
    """
    state = (0, A.group.zero)
    seen = {state: 0}
    moves: List[Change] = []
    lowering, raising = iter(lower), iter(reversed(upper))
    while True:
        try:
            if state[0] <= 0:
                i = next(raising)
                moves.append((i, 1, up[i]))
                state = A.add(state, up[i])
            else:
                i = next(lowering)
                moves.append((i, -1, down[i]))
                state = A.sub(state, down[i])
        except StopIteration:
            raise InvariantError("exchange walk ran out of entries") from None
        if state in seen:
            return moves[seen[state]:]
        seen[state] = len(moves)


def concentrate_torsion(s:Sequence[Tuple[int, Sequence[int]]], A:TorsionGapSet) -> List[TorsionValue]:
    """
    Rewrite `s` so that at most `2b^2e` entries lie outside `A_0`, keeping the sum in `Z x G_0`.

    The first and last `b^2e` entries off `A_0` are classified by their moves `g_-`/`g_+`.
    When classes with at least `be` members exist on both sides they are bumped by
    `b_+e` resp. `b_-e` entries; otherwise a balanced exchange between both sides with
    zero total is applied. The sequence is kept sorted by `(pi, torsion)`.

    Args:
        s (Sequence[Tuple[int, Sequence[int]]]): Entries of A with nondecreasing projection.
        A (TorsionGapSet): The ambient set.

    Returns:
        List[Tuple[int, Tuple[int, ...]]]: The concentrated sequence.
    """
    entries = [_as_torsion_value(x, A.group) for x in s]
    for x in entries:
        if x not in A:
            raise ValueError(f"entry {x} is not an element of {A!r}")
    if any(x[0] > y[0] for x, y in zip(entries, entries[1:])):
        raise ValueError("the projection of the sequence must be nondecreasing")

    start = sorted(entries)
    current = list(start)
    width = A.b * A.b * A.e
    bound = max(abs(A.projection.first), abs(A.projection.last))
    # the sum of squared projections grows strictly
    limit = len(current) * bound * bound - sum(x[0] * x[0] for x in current) + 1
    steps = 0
    while True:
        off = [i for i, x in enumerate(current) if x not in A.extremes]
        if len(off) <= 2 * width:
            break
        steps += 1
        if steps > limit:
            raise InvariantError(f"torsion concentration did not halt within {limit} iterations")

        lower, upper = off[:width], off[len(off) - width:]
        down = {i: A.down_move(current[i]) for i in lower}
        up = {i: A.up_move(current[i]) for i in upper}
        changes = _class_bump_step(lower, upper, down, up, A)
        if changes is None:
            changes = _exchange_step(lower, upper, down, up, A)
            logger.debug("torsion iteration %d: exchange of %d entries", steps, len(changes))
        else:
            logger.debug("torsion iteration %d: bump of %d entries", steps, len(changes))
        for i, sign, move in changes:
            current[i] = A.add(current[i], move) if sign > 0 else A.sub(current[i], move)
        current.sort()

    _check_result(start, current, A.__contains__, lambda x: x[0], A.total)
    logger.info("concentrated %d entries at A_0 in %d iterations", len(current), steps)
    return current


def sumset_identity_check(A:Union[GapSet, TorsionGapSet, Iterable[int]], n:int, kind:str='extremes') -> bool:
    """
    Compare both sides of a concentration identity by brute force.

    Args:
        A (Union[GapSet, TorsionGapSet]): The ambient set.
        n (int): Number of summands, must exceed `2b^2` (`2b^2e` for torsion sets).
        kind (str): `"extremes"`: `nA = (n-2b^2){a_1, a_l} + 2b^2 A`.
            `"consecutive"`: `nA` is the union over k of `(n-2b^2){a_k, a_k+1} + 2b^2 A`.
            `"torsion"`: `nA = (n-2b^2e) A_0 + 2b^2e A`.

    Returns:
        bool: True iff both sides agree as sets.
    """
    if kind == 'torsion':
        if not isinstance(A, TorsionGapSet):
            raise ValueError("the torsion identity needs a TorsionGapSet")
        width = 2 * A.b * A.b * A.e
        if n <= width:
            raise ValueError(f"need n > 2b^2e = {width}")
        lhs = oracle.sumset_nA(A.elements, n, add=A.add)
        rhs = oracle.sumset(oracle.sumset_nA(A.extremes, n - width, add=A.add),
                            oracle.sumset_nA(A.elements, width, add=A.add), add=A.add)
        return lhs == rhs

    A = _as_gap_set(A)
    width = 2 * A.b * A.b
    if n <= width:
        raise ValueError(f"need n > 2b^2 = {width}")
    lhs = oracle.sumset_nA(A.values, n)
    tail = oracle.sumset_nA(A.values, width)
    if kind == 'extremes':
        head = oracle.sumset_nA({A.first, A.last}, n - width)
    elif kind == 'consecutive':
        pairs = [{x, y} for x, y in zip(A.values, A.values[1:])] or [{A.first}]
        head = frozenset().union(*(oracle.sumset_nA(p, n - width) for p in pairs))
    else:
        raise ValueError(f"unknown identity kind {kind!r}")
    return lhs == oracle.sumset(head, tail)
