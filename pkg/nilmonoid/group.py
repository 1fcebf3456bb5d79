from __future__ import annotations

import contextvars
import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import (Dict, Iterable, Iterator, List, Mapping, Optional, Sequence,
                    Tuple, TypeAlias, Union)

from .errors import PresentationError

__all__ = [
    'Order',
    'Vector',
    'Word',
    'GroupElement',
    'QForm',
    'ConsistencyReport',
    'GroupPresentation',
    'get_presentation'
]

Order: TypeAlias = Optional[int]
"""A relative order. `None` stands for infinite order."""

Vector: TypeAlias = Tuple[int, ...]


def _vector(values:Iterable[int], length:int, what:str) -> Vector:
    vec = tuple(int(v) for v in values)
    if len(vec) != length:
        raise ValueError(f"{what} must have length {length}, got {len(vec)}")
    return vec


@dataclass(frozen=True)
class GroupElement(object):
    """
    An element in Malcev coordinates `a_1^{e_1}...a_r^{e_r} z_1^{f_1}...z_s^{f_s}`.

    Elements are plain values. They only become meaningful together with the
    [GroupPresentation][nilmonoid.group.GroupPresentation] that produced them,
    which also guarantees that the coordinates are reduced.

    Args:
        e (Tuple[int, ...]): Exponents of the main generators.
        f (Tuple[int, ...]): Exponents of the central generators.
    """
    e: Vector
    f: Vector

    def __post_init__(self):
        object.__setattr__(self, 'e', tuple(int(v) for v in self.e))
        object.__setattr__(self, 'f', tuple(int(v) for v in self.f))

    def __str__(self) -> str:
        return f"({','.join(map(str, self.e))}|{','.join(map(str, self.f))})"

    @property
    def is_identity(self) -> bool:
        return not any(self.e) and not any(self.f)

    @property
    def is_central(self) -> bool:
        return not any(self.e)


Word: TypeAlias = Sequence[GroupElement]
"""A word `w = (w_1, ..., w_l)` of group elements, evaluated left to right."""


@dataclass(frozen=True)
class QForm(object):
    """
    The bilinear correction term of the multiplication in a torsion-free presentation.

    `C(e_1, f_1) * C(e_2, f_2) = C(e_1 + e_2, f_1 + f_2 + Q(e_1, e_2))`

    Args:
        table (Tuple): `table[i][j]` is `Q(unit_i, unit_j)`, a vector of length s.
    """
    table: Tuple[Tuple[Vector, ...], ...]

    @property
    def r(self) -> int:
        return len(self.table)

    @property
    def s(self) -> int:
        return len(self.table[0][0]) if self.table else 0

    def __call__(self, e1:Sequence[int], e2:Sequence[int]) -> Vector:
        out = [0] * self.s
        for i, x in enumerate(e1):
            if not x:
                continue
            for j, y in enumerate(e2):
                if not y:
                    continue
                for k, q in enumerate(self.table[i][j]):
                    out[k] += q * x * y
        return tuple(out)


class ConsistencyReport(object):
    """
    Result of [check_consistency][nilmonoid.group.GroupPresentation.check_consistency].

    The report can be used as a boolean, it is truthy exactly if no violation was found.

    Args:
        violations (List[str]): Human readable descriptions of every violation.
    """
    def __init__(self, violations:List[str]):
        self.violations = list(violations)

    def __bool__(self) -> bool:
        return not self.violations

    def __repr__(self) -> str:
        return f"ConsistencyReport(violations={self.violations!r})"

    @property
    def ok(self) -> bool:
        return not self.violations


_active_presentation: contextvars.ContextVar[Optional['GroupPresentation']] = \
    contextvars.ContextVar('nilmonoid_active_presentation', default=None)


CommInput = Union[Mapping[Tuple[int, int], Sequence[int]],
                  Iterable[Tuple[Tuple[int, int], Sequence[int]]]]


@dataclass(frozen=True)
class GroupPresentation(object):
    """
    A polycyclic presentation of a nilpotent group of class at most 2.

    The group is generated by main generators `a_1..a_r` and central generators
    `z_1..z_s`. Central generators commute with everything, the commutators of main
    generators are central and given by `comm`. All indices used by the python API
    are 0-based; the JSON file format uses 1-based indices.

    Args:
        main_orders (Sequence[Optional[int]]): Relative order of every main generator,
            `None` for infinite order.
        central_orders (Sequence[Optional[int]]): Order of every central generator,
            `None` for infinite order.
        comm (Mapping[Tuple[int, int], Sequence[int]]): For `i < j` the central vector
            `c_ij` with `[a_i, a_j] = z^{c_ij}`. Missing pairs commute.
        main_powers (Optional[Sequence[Sequence[int]]]): For every main generator of
            finite order `m_i`, the central vector `p_i` with `a_i^{m_i} = z^{p_i}`.
            Entries for generators of infinite order must be zero.

    Example:
    ```python
    h3 = GroupPresentation(main_orders=[None, None],
                           central_orders=[None],
                           comm={(0, 1): (1,)})
    x, y = h3.generators()[:2]
    h3.multiply(y, x)   # (1,1|-1)
    ```
    """
    main_orders: Tuple[Order, ...]
    central_orders: Tuple[Order, ...]
    comm: Tuple[Tuple[Tuple[int, int], Vector], ...] = ()
    main_powers: Tuple[Vector, ...] = ()

    def __post_init__(self):
        main_orders = tuple(None if m is None else int(m) for m in self.main_orders)
        central_orders = tuple(None if o is None else int(o) for o in self.central_orders)
        r, s = len(main_orders), len(central_orders)

        for i, m in enumerate(main_orders):
            if m is not None and m < 1:
                raise PresentationError(f"order of a{i+1} must be positive, got {m}")
        for k, o in enumerate(central_orders):
            if o is not None and o < 1:
                raise PresentationError(f"order of z{k+1} must be positive, got {o}")

        items = self.comm.items() if isinstance(self.comm, Mapping) else self.comm
        comm: Dict[Tuple[int, int], Vector] = {}
        for (i, j), value in items:
            i, j = int(i), int(j)
            if not 0 <= i < j < r:
                raise PresentationError(
                    f"commutator entry ({i}, {j}) needs 0 <= i < j < {r}")
            if (i, j) in comm:
                raise PresentationError(f"duplicate commutator entry ({i}, {j})")
            try:
                comm[(i, j)] = _vector(value, s, f"commutator ({i}, {j})")
            except ValueError as err:
                raise PresentationError(str(err)) from None

        powers = list(self.main_powers) or [(0,) * s] * r
        if len(powers) != r:
            raise PresentationError(f"expected {r} power relations, got {len(powers)}")
        main_powers = []
        for i, (m, p) in enumerate(zip(main_orders, powers)):
            try:
                p = _vector(p, s, f"power relation of a{i+1}")
            except ValueError as err:
                raise PresentationError(str(err)) from None
            if m is None and any(p):
                raise PresentationError(
                    f"a{i+1} has infinite order but a non-trivial power relation")
            main_powers.append(p)

        object.__setattr__(self, 'main_orders', main_orders)
        object.__setattr__(self, 'central_orders', central_orders)
        object.__setattr__(self, 'comm', tuple(sorted(comm.items())))
        object.__setattr__(self, 'main_powers', tuple(main_powers))

    # Active presentation handling

    def __enter__(self) -> GroupPresentation:
        if _active_presentation.get() is not None:
            raise RuntimeError("Tried to activate a presentation but there is already an active one")
        _active_presentation.set(self)
        return self

    def __exit__(self, *args):
        if _active_presentation.get() is not self:
            raise RuntimeError("Active presentation corrupted")
        _active_presentation.set(None)

    # Structure

    @property
    def r(self) -> int:
        return len(self.main_orders)

    @property
    def s(self) -> int:
        return len(self.central_orders)

    @property
    def is_torsion_free_main(self) -> bool:
        return all(m is None for m in self.main_orders)

    @cached_property
    def _comm_entries(self) -> Tuple[Tuple[int, int, Vector], ...]:
        return tuple((i, j, c) for (i, j), c in self.comm if any(c))

    def comm_vector(self, i:int, j:int) -> Vector:
        """Central vector of `[a_i, a_j]` for arbitrary (0-based) `i, j`."""
        if i == j:
            return (0,) * self.s
        if i < j:
            return dict(self.comm).get((i, j), (0,) * self.s)
        return tuple(-c for c in self.comm_vector(j, i))

    def identity(self) -> GroupElement:
        return GroupElement((0,) * self.r, (0,) * self.s)

    def main_generator(self, i:int) -> GroupElement:
        e = [0] * self.r
        e[i] = 1
        return self.normalize(e, (0,) * self.s)

    def central_generator(self, k:int) -> GroupElement:
        f = [0] * self.s
        f[k] = 1
        return self.normalize((0,) * self.r, f)

    def generator(self, name:str) -> GroupElement:
        """
        Look a generator up by name.

        Main generators are `a1..ar`, central ones `z1..zs`. With two main and one
        central generator the names `x`, `y`, `z` work as well.

        Example:
        ```python
        h3.generator('y')    # (0,1|0)
        h3.generator('a1')   # (1,0|0)
        ```
        """
        if self.r == 2 and name in ('x', 'y'):
            return self.main_generator('xy'.index(name))
        if self.s == 1 and name == 'z':
            return self.central_generator(0)
        kind, digits = name[:1], name[1:]
        if kind in ('a', 'z') and digits.isdigit():
            index = int(digits) - 1
            count = self.r if kind == 'a' else self.s
            if 0 <= index < count:
                return self.main_generator(index) if kind == 'a' else self.central_generator(index)
        raise ValueError(f"unknown generator {name!r}")

    def generators(self) -> List[GroupElement]:
        """The main generators followed by the central generators."""
        return [self.main_generator(i) for i in range(self.r)] + \
               [self.central_generator(k) for k in range(self.s)]

    # Arithmetic

    def bilinear(self, e1:Sequence[int], e2:Sequence[int]) -> Vector:
        """
        Collection correction `Q(e1, e2)` for arbitrary integer exponent vectors.

        Moving `a_i^{y}` to the left over `a_j^{x}` (j > i) produces
        `[a_j, a_i]^{xy} = z^{-c_ij x y}`.
        """
        out = [0] * self.s
        for i, j, c in self._comm_entries:
            coeff = e1[j] * e2[i]
            if coeff:
                for k, ck in enumerate(c):
                    out[k] -= ck * coeff
        return tuple(out)

    def normalize(self, raw_e:Sequence[int], raw_f:Sequence[int]) -> GroupElement:
        """
        Reduce arbitrary coordinates to the unique normal form.

        Reducing `e_i` by a finite order `m_i` moves `q` copies of `a_i^{m_i} = z^{p_i}`
        into the (central) f-part, afterwards f is reduced by the central orders.

        Args:
            raw_e (Sequence[int]): Exponents of the main generators.
            raw_f (Sequence[int]): Exponents of the central generators.

        Returns:
            GroupElement: The normal form of `a^{raw_e} z^{raw_f}`.
        """
        e = list(_vector(raw_e, self.r, "e"))
        f = list(_vector(raw_f, self.s, "f"))
        for i, m in enumerate(self.main_orders):
            if m is None:
                continue
            q, e[i] = divmod(e[i], m)
            if q:
                for k, p in enumerate(self.main_powers[i]):
                    f[k] += q * p
        for k, o in enumerate(self.central_orders):
            if o is not None:
                f[k] %= o
        return GroupElement(tuple(e), tuple(f))

    def multiply(self, g:GroupElement, h:GroupElement) -> GroupElement:
        q = self.bilinear(g.e, h.e)
        return self.normalize(
            [x + y for x, y in zip(g.e, h.e)],
            [x + y + z for x, y, z in zip(g.f, h.f, q)]
        )

    def power(self, g:GroupElement, k:int) -> GroupElement:
        """`g^k` in closed form: `C(k e, k f + binom(k, 2) Q(e, e))`, valid for every integer k."""
        k = int(k)
        binom = k * (k - 1) // 2
        q = self.bilinear(g.e, g.e)
        return self.normalize(
            [k * x for x in g.e],
            [k * x + binom * y for x, y in zip(g.f, q)]
        )

    def inverse(self, g:GroupElement) -> GroupElement:
        return self.power(g, -1)

    def commutator(self, g:GroupElement, h:GroupElement) -> GroupElement:
        """`[g, h] = g^-1 h^-1 g h`. The result is always central."""
        left = self.multiply(self.inverse(g), self.inverse(h))
        return self.multiply(left, self.multiply(g, h))

    def eval_word(self, w:Word) -> GroupElement:
        value = self.identity()
        for letter in w:
            value = self.multiply(value, letter)
        return value

    def prefix_values(self, w:Word) -> List[GroupElement]:
        """The values `v_0 = 1, v_1, ..., v_l` of all prefixes of `w`."""
        values = [self.identity()]
        for letter in w:
            values.append(self.multiply(values[-1], letter))
        return values

    def q_form(self) -> QForm:
        """
        The bilinear form Q of a presentation whose main generators have infinite order.

        Raises:
            ValueError: If some main generator has finite order.
        """
        if not self.is_torsion_free_main:
            raise ValueError("q_form needs main generators of infinite order")
        zero = (0,) * self.s
        table = [[zero] * self.r for _ in range(self.r)]
        for i, j, c in self._comm_entries:
            table[j][i] = tuple(-ck for ck in c)
        return QForm(tuple(tuple(row) for row in table))

    # Consistency

    def _lattice_violations(self) -> Iterator[str]:
        for i, m in enumerate(self.main_orders):
            if m is None:
                continue
            for j in range(self.r):
                if j == i:
                    continue
                for k, c in enumerate(self.comm_vector(i, j)):
                    o = self.central_orders[k]
                    value = m * c
                    if (o is None and value != 0) or (o is not None and value % o != 0):
                        yield (f"a{i+1}^{m} is not central: {m} * [a{i+1}, a{j+1}] "
                               f"has z{k+1}-exponent {value} outside the central relations")

    def _test_elements(self) -> List[GroupElement]:
        elements = []
        for i, m in enumerate(self.main_orders):
            a = self.main_generator(i)
            elements.append(a)
            if m is not None and m > 2:
                elements.append(self.power(a, m - 1))
        elements.extend(self.central_generator(k) for k in range(self.s))
        return elements

    def check_consistency(self) -> ConsistencyReport:
        """
        Check the torsion lattice condition and associativity on generator triples.

        Violations are reported as data, this method never raises.

        Returns:
            ConsistencyReport: Truthy iff the presentation is consistent.
        """
        violations = list(self._lattice_violations())
        elements = self._test_elements()
        for g, h, k in itertools.product(elements, repeat=3):
            left = self.multiply(self.multiply(g, h), k)
            right = self.multiply(g, self.multiply(h, k))
            if left != right:
                violations.append(f"associativity fails for {g} * {h} * {k}: {left} != {right}")
        return ConsistencyReport(violations)

    def require_consistent(self) -> GroupPresentation:
        """Raise a PresentationError carrying all violations unless consistent."""
        report = self.check_consistency()
        if not report:
            raise PresentationError("inconsistent presentation", report.violations)
        return self


def get_presentation() -> GroupPresentation:
    """
    Get the currently active presentation.

    Returns:
        GroupPresentation: The presentation activated with `with presentation:`.
    """
    presentation = _active_presentation.get()
    if presentation is None:
        raise RuntimeError("No active presentation")
    return presentation
