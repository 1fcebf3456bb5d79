from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, TypeAlias

import numpy as np

from .errors import HirschLengthError, InvariantError
from .gaps import FiniteAbelian
from .group import GroupElement, GroupPresentation, Order, Vector

__all__ = [
    'IntMatrix',
    'int_matrix',
    'identity_matrix',
    'SNFResult',
    'smith_normal_form',
    'SubgroupLattice',
    'AbelianizationData',
    'abelianization',
    'commutator_lattice',
    'TorsionFreeSubgroup',
    'torsion_free_subgroup',
    'verify_torsion_free'
]

logger = logging.getLogger(__name__)

IntMatrix: TypeAlias = np.ndarray
"""A 2d numpy array with `dtype=object` holding python integers."""


def int_matrix(data, shape:Optional[Tuple[int, int]]=None) -> IntMatrix:
    """
    Build an exact integer matrix.

    Args:
        data (Sequence[Sequence[int]] | np.ndarray): The rows.
        shape (Optional[Tuple[int, int]]): Needed to give empty matrices their column count.
    """
    if isinstance(data, np.ndarray):
        shape = data.shape if shape is None else shape
        data = data.tolist()
    rows = [[int(x) for x in row] for row in data]
    if shape is None:
        shape = (len(rows), len(rows[0]) if rows else 0)
    if len(rows) != shape[0] or any(len(row) != shape[1] for row in rows):
        raise ValueError(f"rows do not form a {shape[0]}x{shape[1]} matrix")
    out = np.zeros(shape, dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            out[i, j] = x
    return out


def identity_matrix(n:int) -> IntMatrix:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


@dataclass(frozen=True, eq=False)
class SNFResult(object):
    """
    Smith normal form `U M V = D` with unimodular `U`, `V`.

    The inverses of `U` and `V` are tracked alongside, so no matrix ever has to be inverted.
    """
    D: IntMatrix
    U: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> Tuple[int, ...]:
        return tuple(self.D[k, k] for k in range(min(self.D.shape)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(M) -> SNFResult:
    """
    Diagonalize an integer matrix by elementary row and column operations.

    The pivot is always the entry of minimal absolute value. The result is verified by
    re-multiplication before it is returned.

    Args:
        M (IntMatrix): Any integer matrix.

    Returns:
        SNFResult: `D` has nonnegative diagonal entries `d_1 | d_2 | ...`.

    Example:
    ```python
    smith_normal_form([[2, 4], [6, 8]]).diagonal   # (2, 4)
    ```
    """
    original = int_matrix(M)
    D = original.copy()
    m, n = D.shape
    U, U_inv = identity_matrix(m), identity_matrix(m)
    V, V_inv = identity_matrix(n), identity_matrix(n)

    def swap_rows(a, b):
        if a != b:
            D[[a, b]] = D[[b, a]]
            U[[a, b]] = U[[b, a]]
            U_inv[:, [a, b]] = U_inv[:, [b, a]]

    def swap_cols(a, b):
        if a != b:
            D[:, [a, b]] = D[:, [b, a]]
            V[:, [a, b]] = V[:, [b, a]]
            V_inv[[a, b]] = V_inv[[b, a]]

    def add_row(target, source, q):
        D[target] += q * D[source]
        U[target] += q * U[source]
        U_inv[:, source] -= q * U_inv[:, target]

    def add_col(target, source, q):
        D[:, target] += q * D[:, source]
        V[:, target] += q * V[:, source]
        V_inv[source] -= q * V_inv[target]

    for t in range(min(m, n)):
        candidates = [(abs(D[i, j]), i, j) for i in range(t, m) for j in range(t, n) if D[i, j] != 0]
        if not candidates:
            break
        _, i, j = min(candidates)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            pivot = D[t, t]
            for i in range(t + 1, m):
                if D[i, t] != 0:
                    add_row(i, t, -(D[i, t] // pivot))
            for j in range(t + 1, n):
                if D[t, j] != 0:
                    add_col(j, t, -(D[t, j] // pivot))
            remainders = [(abs(D[i, t]), 0, i) for i in range(t + 1, m) if D[i, t] != 0]
            remainders += [(abs(D[t, j]), 1, j) for j in range(t + 1, n) if D[t, j] != 0]
            if remainders:
                _, axis, k = min(remainders)
                if axis == 0:
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            offender = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                             if D[i, j] % pivot != 0), None)
            if offender is None:
                break
            add_row(t, offender[0], 1)
        if D[t, t] < 0:
            D[t] = -D[t]
            U[t] = -U[t]
            U_inv[:, t] = -U_inv[:, t]

    result = SNFResult(D, U, V, U_inv, V_inv)
    _verify(original, result)
    return result


def _verify(M:IntMatrix, snf:SNFResult):
    m, n = M.shape
    if not (snf.U @ M @ snf.V == snf.D).all():
        raise InvariantError("Smith normal form does not satisfy U M V = D")
    if not (snf.U @ snf.U_inv == identity_matrix(m)).all() or \
       not (snf.V @ snf.V_inv == identity_matrix(n)).all():
        raise InvariantError("Smith normal form transforms are not unimodular")
    diagonal = snf.diagonal
    off_diagonal = [snf.D[i, j] for i in range(m) for j in range(n) if i != j]
    if any(off_diagonal) or any(d < 0 for d in diagonal):
        raise InvariantError("Smith normal form is not a nonnegative diagonal matrix")
    for d, d_next in zip(diagonal, diagonal[1:]):
        if (d == 0 and d_next != 0) or (d != 0 and d_next % d != 0):
            raise InvariantError(f"Smith normal form breaks the divisibility chain at {d}, {d_next}")


class SubgroupLattice(object):
    """
    The subgroup of `Z^s / (o_1 Z x ... x o_s Z)` generated by a family of vectors.

    Infinite orders contribute no relation. The subgroup is identified with
    `Z^h x G_0` through two Smith normal forms: one for a basis of the generated
    lattice, one for the relations inside that basis.

    Args:
        vectors (Sequence[Sequence[int]]): Generators, each of length s.
        orders (Sequence[Optional[int]]): The ambient cyclic orders, `None` for infinite.

    Example:
    ```python
    lattice = SubgroupLattice([(1, 0), (0, 1)], [None, 2])
    lattice.free_rank, lattice.torsion.orders   # (1, (2,))
    ```
    """
    def __init__(self, vectors:Sequence[Sequence[int]], orders:Sequence[Order]):
        s = len(orders)
        self.orders = tuple(orders)
        self.relations = [tuple(o if k == j else 0 for k in range(s))
                          for j, o in enumerate(orders) if o is not None]
        columns = [tuple(int(x) for x in v) for v in vectors] + self.relations
        if any(len(col) != s for col in columns):
            raise ValueError(f"lattice generators must have length {s}")

        self._outer = smith_normal_form(int_matrix([[col[k] for col in columns] for k in range(s)],
                                                   shape=(s, len(columns))))
        self.rank = self._outer.rank
        steps = self._outer.diagonal[:self.rank]
        self._steps = steps
        self.basis: List[Vector] = [
            tuple(steps[k] * self._outer.U_inv[i, k] for i in range(s)) for k in range(self.rank)
        ]

        relation_coords = [self._basis_coordinates(v) for v in self.relations]
        R = int_matrix([[y[k] for y in relation_coords] for k in range(self.rank)],
                       shape=(self.rank, len(relation_coords)))
        self._inner = smith_normal_form(R)
        inner_diagonal = self._inner.diagonal
        self.invariants: Tuple[int, ...] = tuple(
            inner_diagonal[k] if k < len(inner_diagonal) else 0 for k in range(self.rank))
        logger.debug("subgroup lattice of rank %d with invariants %s", self.rank, self.invariants)

    def _basis_coordinates(self, v:Sequence[int]) -> Optional[Vector]:
        y = self._outer.U @ int_matrix([[int(x)] for x in v], shape=(len(self.orders), 1))
        y = [y[k, 0] for k in range(len(self.orders))]
        if any(y[k] % self._steps[k] for k in range(self.rank)) or any(y[self.rank:]):
            return None
        return tuple(y[k] // self._steps[k] for k in range(self.rank))

    def _snf_coordinates(self, v:Sequence[int]) -> Vector:
        y = self._basis_coordinates(v)
        if y is None:
            raise ValueError(f"{tuple(v)} is not in the subgroup")
        z = self._inner.U @ int_matrix([[x] for x in y], shape=(self.rank, 1))
        return tuple(z[k, 0] for k in range(self.rank))

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariants if d == 0)

    @property
    def torsion(self) -> FiniteAbelian:
        return FiniteAbelian(tuple(d for d in self.invariants if d > 1))

    def contains(self, v:Sequence[int]) -> bool:
        return self._basis_coordinates(v) is not None

    def coordinates(self, v:Sequence[int]) -> Tuple[Vector, Vector]:
        """
        Image of `v` under the isomorphism onto `Z^h x G_0`.

        Returns:
            Tuple[Vector, Vector]: The free coordinates and the reduced torsion coordinates.
        """
        z = self._snf_coordinates(v)
        free = tuple(x for x, d in zip(z, self.invariants) if d == 0)
        torsion = tuple(x % d for x, d in zip(z, self.invariants) if d > 1)
        return free, torsion

    def projection(self, v:Sequence[int]) -> int:
        """The functional onto `Z`, only defined for free rank 1."""
        if self.free_rank != 1:
            raise HirschLengthError(f"projection needs free rank 1, got {self.free_rank}")
        return self.coordinates(v)[0][0]

    def _generator(self, k:int) -> Vector:
        s = len(self.orders)
        return tuple(sum(self._inner.U_inv[j, k] * self.basis[j][i] for j in range(self.rank))
                     for i in range(s))

    def free_generators(self) -> List[Vector]:
        return [self._generator(k) for k, d in enumerate(self.invariants) if d == 0]

    def torsion_generators(self) -> List[Vector]:
        return [self._generator(k) for k, d in enumerate(self.invariants) if d > 1]

    def index_of(self, vectors:Sequence[Sequence[int]]) -> Optional[int]:
        """
        Index of the subgroup generated by `vectors` inside this one.

        Returns:
            Optional[int]: The index, `None` if it is infinite.
        """
        coords = [self._basis_coordinates(v) for v in vectors]
        if any(y is None for y in coords):
            raise ValueError("the vectors do not lie in the subgroup")
        relation_coords = [self._basis_coordinates(v) for v in self.relations]
        columns = coords + relation_coords
        snf = smith_normal_form(int_matrix([[y[k] for y in columns] for k in range(self.rank)],
                                           shape=(self.rank, len(columns))))
        if snf.rank < self.rank:
            return None
        return math.prod(snf.diagonal[:self.rank])


class AbelianizationData(object):
    """
    The abelianization `G/[G,G] = Z^r x A_0` together with lifts of its generators.

    Args:
        presentation (GroupPresentation): The group G.
        snf (SNFResult): Smith normal form of the relation matrix, rows are relations.
    """
    def __init__(self, presentation:GroupPresentation, snf:SNFResult):
        self.presentation = presentation
        self._snf = snf
        size = presentation.r + presentation.s
        diagonal = snf.diagonal
        self.invariants: Tuple[int, ...] = tuple(diagonal[k] if k < len(diagonal) else 0 for k in range(size))
        self.free_rank = sum(1 for d in self.invariants if d == 0)
        self.torsion = FiniteAbelian(tuple(d for d in self.invariants if d > 1))
        self.lifts = [self._lift(k) for k, d in enumerate(self.invariants) if d == 0]
        self.torsion_lifts = [self._lift(k) for k, d in enumerate(self.invariants) if d > 1]

    def __repr__(self) -> str:
        return f"AbelianizationData(free_rank={self.free_rank}, torsion={self.torsion.orders})"

    def _lift(self, k:int) -> GroupElement:
        row = [self._snf.V_inv[k, j] for j in range(self.presentation.r + self.presentation.s)]
        return self.presentation.normalize(row[:self.presentation.r], row[self.presentation.r:])

    def project(self, g:GroupElement) -> Tuple[Vector, Vector]:
        """Image of `g` in `Z^r x A_0` as (free coordinates, torsion coordinates)."""
        x = int_matrix([list(g.e) + list(g.f)], shape=(1, len(self.invariants)))
        y = x @ self._snf.V
        y = [y[0, k] for k in range(len(self.invariants))]
        free = tuple(v for v, d in zip(y, self.invariants) if d == 0)
        torsion = tuple(v % d for v, d in zip(y, self.invariants) if d > 1)
        return free, torsion


def abelianization(P:GroupPresentation) -> AbelianizationData:
    """
    Compute `G/[G,G]` from the relations of the presentation.

    The relations are the commutator vectors, the power relations `a_i^{m_i} z^{-p_i}`
    and the central orders, all as rows over the generators `a_1..a_r, z_1..z_s`.

    Example:
    ```python
    abelianization(h3).free_rank   # 2
    ```
    """
    r, s = P.r, P.s
    rows = []
    for (_, _), c in P.comm:
        if any(c):
            rows.append([0] * r + list(c))
    for i, (m, p) in enumerate(zip(P.main_orders, P.main_powers)):
        if m is not None:
            rows.append([m if j == i else 0 for j in range(r)] + [-x for x in p])
    for k, o in enumerate(P.central_orders):
        if o is not None:
            rows.append([0] * r + [o if j == k else 0 for j in range(s)])
    snf = smith_normal_form(int_matrix(rows, shape=(len(rows), r + s)))
    data = AbelianizationData(P, snf)
    logger.debug("abelianization: %r", data)
    return data


def commutator_lattice(P:GroupPresentation) -> SubgroupLattice:
    """
    Structure of `[G,G]` as the subgroup of the central group generated by all `c_ij`.

    Example:
    ```python
    lattice = commutator_lattice(h3)
    lattice.free_rank, lattice.projection((5,))   # (1, 5)
    ```
    """
    return SubgroupLattice([c for _, c in P.comm], P.central_orders)


class TorsionFreeSubgroup(object):
    """
    A torsion-free subgroup `H = <x_1^e, ..., x_r^e>` of finite index.

    The `x_k` lift a basis of the free part of the abelianization and `e` is the
    exponent of the torsion part of `[G,G]`.

    Attributes:
        presentation (GroupPresentation): The ambient group G.
        exp_e (int): The exponent `e`.
        generators (List[GroupElement]): The elements `x_k^e` in G.
        derived (GroupPresentation): A presentation of H with infinite main generators
            `b_k = x_k^e` and infinite central generators forming a basis of `[H,H]`.
        central_basis (List[Vector]): The central generators of `derived` as vectors of G.
        abelian_index (int): `[pi(G) : pi(H)] = e^r |A_0|`.
        commutator_index (int): `[[G,G] : [H,H]]`.
    """
    def __init__(self, presentation:GroupPresentation, abelian:AbelianizationData,
                 lattice:SubgroupLattice):
        self.presentation = presentation
        self.abelian = abelian
        self.exp_e = lattice.torsion.exponent
        self.lifts = list(abelian.lifts)
        self.generators = [presentation.power(x, self.exp_e) for x in self.lifts]

        commutators = {}
        for i in range(len(self.generators)):
            for j in range(i + 1, len(self.generators)):
                c = presentation.commutator(self.generators[i], self.generators[j])
                commutators[(i, j)] = c.f
        self.inner_lattice = SubgroupLattice(list(commutators.values()), presentation.central_orders)
        if not self.inner_lattice.torsion.is_trivial:
            raise InvariantError(f"[H,H] has torsion {self.inner_lattice.torsion.orders}")
        self.central_basis = self.inner_lattice.free_generators()

        comm = {}
        for key, f in commutators.items():
            coords = self.inner_lattice.coordinates(f)[0]
            if any(coords):
                comm[key] = coords
        self.derived = GroupPresentation(main_orders=[None] * len(self.generators),
                                         central_orders=[None] * len(self.central_basis),
                                         comm=comm)

        self.abelian_index = self.exp_e ** abelian.free_rank * abelian.torsion.size
        commutator_index = lattice.index_of([f for f in commutators.values()])
        if commutator_index is None:
            raise InvariantError("[H,H] has infinite index in [G,G]")
        self.commutator_index = commutator_index

    def __repr__(self) -> str:
        return (f"TorsionFreeSubgroup(exp_e={self.exp_e}, rank={len(self.generators)}, "
                f"index={self.index})")

    @property
    def index(self) -> int:
        """`[G:H]`, the product of the abelian and commutator indices."""
        return self.abelian_index * self.commutator_index

    def embed(self, h:GroupElement) -> GroupElement:
        """Map an element of the derived presentation to its value in G."""
        P = self.presentation
        value = P.identity()
        for b, n in zip(self.generators, h.e):
            value = P.multiply(value, P.power(b, n))
        f = [sum(y * w[k] for y, w in zip(h.f, self.central_basis)) for k in range(P.s)]
        return P.multiply(value, P.normalize((0,) * P.r, f))

    def contains(self, g:GroupElement) -> bool:
        """Subgroup membership in H for an element of G."""
        free, torsion = self.abelian.project(g)
        if any(torsion) or any(x % self.exp_e for x in free):
            return False
        P = self.presentation
        shift = P.identity()
        for b, x in zip(self.generators, free):
            shift = P.multiply(shift, P.power(b, x // self.exp_e))
        rest = P.multiply(P.inverse(shift), g)
        return rest.is_central and self.inner_lattice.contains(rest.f)


def torsion_free_subgroup(P:GroupPresentation) -> TorsionFreeSubgroup:
    """
    Find generators and a presentation of a torsion-free subgroup of finite index.

    Args:
        P (GroupPresentation): A consistent presentation.

    Returns:
        TorsionFreeSubgroup: Generators, derived presentation and index data.

    Example:
    ```python
    H = torsion_free_subgroup(h3_mod_2)
    H.exp_e, H.index   # (2, 8)
    ```
    """
    P.require_consistent()
    subgroup = TorsionFreeSubgroup(P, abelianization(P), commutator_lattice(P))
    logger.info("torsion-free subgroup: %r", subgroup)
    return subgroup


def verify_torsion_free(P:GroupPresentation) -> bool:
    """True iff both `G/[G,G]` and `[G,G]` are torsion-free."""
    P.require_consistent()
    return abelianization(P).torsion.is_trivial and commutator_lattice(P).torsion.is_trivial
