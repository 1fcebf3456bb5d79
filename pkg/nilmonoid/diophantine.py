from __future__ import annotations

import enum
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import (Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, TypeAlias,
                    Union)

from .blocks import CommutatorStructure, bounded_sequence, commutator_structure
from .config import DEFAULT_BOX, STATE_BUDGET
from .errors import BudgetExceededError, InvariantError
from .group import GroupElement, GroupPresentation

__all__ = [
    'Monomial',
    'Equation',
    'AuxVariable',
    'DiophantineSystem',
    'KnapsackInstance',
    'Feasibility',
    'Precheck',
    'SolveStatus',
    'SolveOutcome',
    'MembershipOutcome',
    'build_system',
    'linear_precheck',
    'verify_witness',
    'solve_box',
    'member_product_of_monoids'
]

logger = logging.getLogger(__name__)

Monomial: TypeAlias = Tuple[int, ...]
"""Sorted variable indices, `()` is the constant monomial and `(i, i)` a square."""


@dataclass(frozen=True)
class Equation(object):
    """
    A polynomial equation `sum(c * monomial) = rhs`, or a congruence if `modulus` is set.

    Example:
    ```python
    Equation.linear([2, 4], 3).holds([1, 0])   # False
    ```
    """
    terms: Tuple[Tuple[Monomial, int], ...]
    rhs: int
    modulus: Optional[int] = None

    @classmethod
    def from_terms(cls, terms:Mapping[Monomial, int], rhs:int, modulus:Optional[int]=None) -> Equation:
        cleaned = {}
        for monomial, c in terms.items():
            if c:
                key = tuple(sorted(monomial))
                cleaned[key] = cleaned.get(key, 0) + int(c)
        return cls(tuple(sorted((m, c) for m, c in cleaned.items() if c)), int(rhs), modulus)

    @classmethod
    def linear(cls, coeffs:Sequence[int], rhs:int, modulus:Optional[int]=None) -> Equation:
        return cls.from_terms({(i,): c for i, c in enumerate(coeffs)}, rhs, modulus)

    @property
    def degree(self) -> int:
        return max((len(m) for m, _ in self.terms), default=0)

    @property
    def variables(self) -> Tuple[int, ...]:
        return tuple(sorted({v for m, _ in self.terms for v in m}))

    def coefficient(self, monomial:Monomial) -> int:
        return dict(self.terms).get(tuple(sorted(monomial)), 0)

    def evaluate(self, values:Sequence[int]) -> int:
        return sum(c * math.prod(values[v] for v in m) for m, c in self.terms)

    def holds(self, values:Sequence[int]) -> bool:
        diff = self.evaluate(values) - self.rhs
        return diff == 0 if self.modulus is None else diff % self.modulus == 0


@dataclass(frozen=True)
class AuxVariable(object):
    """
    An integer quotient variable, solved from the linear equation that defines it.

    Attributes:
        name (str): Name used in exports.
        equation (int): Index of the defining equation.
        main_index (int): The main coordinate whose order it absorbs.
    """
    name: str
    equation: int
    main_index: int


@dataclass(frozen=True)
class DiophantineSystem(object):
    """
    Equations over nonnegative variables `alpha_1..alpha_n` and free auxiliary variables.

    Variable `i < n` is `alpha_{i+1}`, variable `n + j` is `aux[j]`.
    """
    n: int
    equations: Tuple[Equation, ...]
    aux: Tuple[AuxVariable, ...] = ()

    @property
    def names(self) -> List[str]:
        return [f"alpha_{i+1}" for i in range(self.n)] + [a.name for a in self.aux]

    def complete(self, alpha:Sequence[int]) -> Optional[List[int]]:
        """Extend `alpha` by the values of the auxiliary variables, None if they are not integral."""
        values: List[Optional[int]] = list(alpha) + [None] * len(self.aux)
        for j, a in enumerate(self.aux):
            eq = self.equations[a.equation]
            var = self.n + j
            c = eq.coefficient((var,))
            rest = sum(coeff * math.prod(values[v] for v in m) for m, coeff in eq.terms if var not in m)
            if (eq.rhs - rest) % c:
                return None
            values[var] = (eq.rhs - rest) // c
        return values

    def is_satisfied(self, alpha:Sequence[int]) -> bool:
        if len(alpha) != self.n or any(a < 0 for a in alpha):
            return False
        values = self.complete(alpha)
        return values is not None and all(eq.holds(values) for eq in self.equations)


@dataclass(frozen=True)
class KnapsackInstance(object):
    """
    The question `target in x_1^* x_2^* ... x_n^*`.

    Args:
        presentation (GroupPresentation): The group.
        target (GroupElement): The element g.
        factors (Tuple[GroupElement, ...]): The elements x_i, repetitions allowed.
    """
    presentation: GroupPresentation
    target: GroupElement
    factors: Tuple[GroupElement, ...]

    def __post_init__(self):
        object.__setattr__(self, 'factors', tuple(self.factors))
        P = self.presentation
        for g in {self.target, *self.factors}:
            if len(g.e) != P.r or len(g.f) != P.s or P.normalize(g.e, g.f) != g:
                raise ValueError(f"{g} is not a normal form of the presentation")


@lru_cache(maxsize=2)
def _system_template(P:GroupPresentation, xs:Tuple[GroupElement, ...], quadratic:bool) -> DiophantineSystem:
    """The equations of [build_system][nilmonoid.diophantine.build_system] with every right hand side zero."""
    n = len(xs)
    equations: List[Equation] = []
    aux: List[AuxVariable] = []

    for j in range(P.r):
        terms = {(i,): x.e[j] for i, x in enumerate(xs)}
        m = P.main_orders[j]
        if m is not None:
            terms[(n + len(aux),)] = -m
            aux.append(AuxVariable(f"q_{j+1}", len(equations), j))
        equations.append(Equation.from_terms(terms, 0))

    distinct = list(dict.fromkeys(xs))
    bilinear = {(x, y): P.bilinear(x.e, y.e) for x in distinct for y in distinct}
    curved = any(any(q) for q in bilinear.values())
    if curved and not quadratic:
        return DiophantineSystem(n, tuple(equations), tuple(aux))

    for k in range(P.s):
        terms: Dict[Monomial, int] = defaultdict(int)
        for i, x in enumerate(xs):
            d = bilinear[(x, x)][k]
            terms[(i,)] += 2 * x.f[k] - d
            if d:
                terms[(i, i)] += d
        if curved:
            for i in range(n):
                for j in range(i + 1, n):
                    q = bilinear[(xs[i], xs[j])][k]
                    if q:
                        terms[(i, j)] += 2 * q
        for t, a in enumerate(aux):
            terms[(n + t,)] += 2 * P.main_powers[a.main_index][k]
        o = P.central_orders[k]
        equations.append(Equation.from_terms(terms, 0, None if o is None else 2 * o))
    return DiophantineSystem(n, tuple(equations), tuple(aux))


def build_system(inst:KnapsackInstance, quadratic:bool=True) -> DiophantineSystem:
    """
    Equate the coordinates of `x_1^{alpha_1} ... x_n^{alpha_n}` with those of the target.

    The raw product has main exponents `sum alpha_i e_i` and central exponents
    `sum alpha_i f_i + sum binom(alpha_i, 2) Q(e_i, e_i) + sum_{i<j} alpha_i alpha_j Q(e_i, e_j)`.
    A main coordinate of finite order `m_j` gets a quotient variable `q_j` which
    contributes `q_j p_j` to the central part. Central equations are doubled to keep
    integer coefficients, congruences modulo `o_k` become congruences modulo `2 o_k`.

    Args:
        inst (KnapsackInstance): The instance.
        quadratic (bool): With False the central equations are left out whenever they
            are not linear. The result is then a relaxation whose size is linear in n.

    Returns:
        DiophantineSystem: Its nonnegative solutions are exactly the knapsack witnesses
            (a superset of them for `quadratic=False`).
    """
    P, g = inst.presentation, inst.target
    P.require_consistent()
    template = _system_template(P, inst.factors, quadratic)
    rhs = list(g.e) + [2 * f for f in g.f]
    system = replace(template, equations=tuple(replace(eq, rhs=int(v))
                                               for eq, v in zip(template.equations, rhs)))
    logger.debug("built a system with %d variables and %d equations",
                 system.n + len(system.aux), len(system.equations))
    return system


class Feasibility(enum.Enum):
    FEASIBLE = 'feasible'
    INFEASIBLE = 'infeasible'
    UNKNOWN = 'unknown'


@dataclass(frozen=True)
class Precheck(object):
    """
    Result of [linear_precheck][nilmonoid.diophantine.linear_precheck].

    Attributes:
        status (Feasibility): The verdict.
        lower (Tuple[float, ...]): Proven lower bounds of every alpha.
        upper (Tuple[float, ...]): Proven upper bounds of every alpha, `math.inf` if unbounded.
        reason (str): Why the verdict was reached.
    """
    status: Feasibility
    lower: Tuple[float, ...] = ()
    upper: Tuple[float, ...] = ()
    reason: str = ''


def _gcd_refutes(eq:Equation) -> bool:
    coeffs = [c for _, c in eq.terms]
    if eq.modulus is not None:
        coeffs.append(eq.modulus)
    g = math.gcd(*coeffs) if coeffs else 0
    return eq.rhs != 0 if g == 0 else eq.rhs % g != 0


def _quotient(num:float, c:int, ceil:bool) -> float:
    """Exact `num / c` rounded up or down, infinities pass through with the sign of c applied."""
    if math.isinf(num):
        return num if c > 0 else -num
    q, r = divmod(int(num), c)
    return q + 1 if ceil and r else q


def _totals(values:List[float]) -> Tuple[int, int]:
    """Sum of the finite entries and the number of infinite ones."""
    finite = [v for v in values if not math.isinf(v)]
    return sum(finite), len(values) - len(finite)


def _without(values:List[float], k:int, total:int, infinite:int, inf:float) -> float:
    own = values[k]
    if math.isinf(own):
        infinite, own = infinite - 1, 0
    return inf if infinite else total - own


def _propagate(eq:Equation, lower:List[float], upper:List[float]) -> bool:
    """Tighten bounds from one linear equation, False if it has become empty."""
    terms = [(m[0], c) for m, c in eq.terms]
    for _ in range(len(terms) + 1):
        low = [c * (lower[v] if c > 0 else upper[v]) for v, c in terms]
        high = [c * (upper[v] if c > 0 else lower[v]) for v, c in terms]
        low_total, low_inf = _totals(low)
        high_total, high_inf = _totals(high)
        if (not low_inf and low_total > eq.rhs) or (not high_inf and high_total < eq.rhs):
            return False
        changed = False
        for k, (v, c) in enumerate(terms):
            rest_lo = _without(low, k, low_total, low_inf, -math.inf)
            rest_hi = _without(high, k, high_total, high_inf, math.inf)
            # c * alpha_v lies in [rhs - rest_hi, rhs - rest_lo]
            n_lo, n_hi = eq.rhs - rest_hi, eq.rhs - rest_lo
            if c > 0:
                lo, hi = _quotient(n_lo, c, True), _quotient(n_hi, c, False)
            else:
                lo, hi = _quotient(n_hi, c, True), _quotient(n_lo, c, False)
            if lo > lower[v]:
                lower[v], changed = lo, True
            if hi < upper[v]:
                upper[v], changed = hi, True
            if lower[v] > upper[v]:
                return False
        if not changed:
            break
    return True


def linear_precheck(sys:DiophantineSystem) -> Precheck:
    """
    Cheap sound refutation: gcd tests, congruence gcd tests and bound propagation under `alpha >= 0`.

    Never answers INFEASIBLE for a satisfiable system.

    Example:
    ```python
    linear_precheck(DiophantineSystem(2, (Equation.linear([1, 1], -1),))).status
    # Feasibility.INFEASIBLE
    ```
    """
    n = sys.n
    if n == 0:
        ok = sys.is_satisfied(())
        return Precheck(Feasibility.FEASIBLE if ok else Feasibility.INFEASIBLE,
                        reason="no variables, evaluated directly")

    for k, eq in enumerate(sys.equations):
        if eq.degree <= 1 and _gcd_refutes(eq):
            return Precheck(Feasibility.INFEASIBLE, reason=f"gcd test refutes equation {k}")

    lower: List[float] = [0] * n
    upper: List[float] = [math.inf] * n
    bounded = [eq for eq in sys.equations
               if eq.modulus is None and eq.degree == 1 and all(v < n for v in eq.variables)]
    for _ in range(max(1, n)):
        before = (list(lower), list(upper))
        for eq in bounded:
            if not _propagate(eq, lower, upper):
                return Precheck(Feasibility.INFEASIBLE, tuple(lower), tuple(upper),
                                reason="bound propagation empties the domain")
        if (lower, upper) == before:
            break

    if all(lo == hi for lo, hi in zip(lower, upper)):
        alpha = [int(lo) for lo in lower]
        status = Feasibility.FEASIBLE if sys.is_satisfied(alpha) else Feasibility.INFEASIBLE
        return Precheck(status, tuple(lower), tuple(upper), reason=f"bounds force alpha = {alpha}")
    return Precheck(Feasibility.UNKNOWN, tuple(lower), tuple(upper), reason="no refutation found")


def verify_witness(inst:KnapsackInstance, alpha:Sequence[int]) -> bool:
    """True iff `x_1^{alpha_1} ... x_n^{alpha_n}` equals the target."""
    if len(alpha) != len(inst.factors) or any(a < 0 for a in alpha):
        return False
    P = inst.presentation
    value = P.identity()
    for x, a in zip(inst.factors, alpha):
        if a:
            value = P.multiply(value, P.power(x, a))
    return value == inst.target


class SolveStatus(enum.Enum):
    YES = 'yes'
    NO = 'no'
    UNKNOWN = 'unknown'

    @property
    def exit_code(self) -> int:
        return {SolveStatus.YES: 0, SolveStatus.NO: 1, SolveStatus.UNKNOWN: 2}[self]


@dataclass(frozen=True)
class SolveOutcome(object):
    """
    Tri-state answer of a bounded search. YES always carries a verified witness.
    """
    status: SolveStatus
    witness: Optional[Tuple[int, ...]] = None
    reason: str = ''

    def __bool__(self) -> bool:
        return self.status is SolveStatus.YES


@dataclass(frozen=True)
class MembershipOutcome(SolveOutcome):
    """A [SolveOutcome][nilmonoid.diophantine.SolveOutcome] with the certificate word of a YES answer."""
    certificate: Optional[Tuple[GroupElement, ...]] = None
    sequence_lengths: Tuple[int, ...] = field(default=())


def _periodic_runs(keys:Sequence, max_period:int=64) -> List[Tuple[int, int, int]]:
    """Maximal stretches `(start, period, end)` covering at least two periods."""
    runs = []
    i, n = 0, len(keys)
    while i < n:
        best = None
        for p in range(1, max_period + 1):
            j = i + p
            while j < n and keys[j] == keys[j - p]:
                j += 1
            if j - i >= 2 * p and (best is None or j > best[2]):
                best = (i, p, j)
        if best is None:
            i += 1
        else:
            runs.append(best)
            i = best[2]
    return runs


Layer: TypeAlias = Dict[GroupElement, Tuple[int, Optional[GroupElement], int]]


class _Reachability(object):
    """
    Layered search over the prefixes of a knapsack product.

    `layers[i]` maps every value of `x_1^{a_1} ... x_i^{a_i}` to its minimal weight
    and a back pointer. Inside a periodic run a layer that repeats after one period
    is a fixpoint, so the rest of the run is skipped with zero exponents.
    """
    def __init__(self, P:GroupPresentation, factors:Tuple[GroupElement, ...],
                 lower:Tuple[int, ...], upper:Tuple[int, ...], weight:Optional[int], budget:int):
        self.P = P
        self.n = len(factors)
        self.jumps: Dict[int, int] = {}
        self.layers: List[Optional[Layer]] = [None] * (self.n + 1)
        self.layers[0] = {P.identity(): (0, None, 0)}
        runs = {start: (p, end) for start, p, end in _periodic_runs(list(zip(factors, lower, upper)))}
        states = 1
        run: Optional[Tuple[int, int, int]] = None
        i = 0
        while i < self.n:
            if i in runs:
                run = (i, *runs[i])
            if run is not None and i >= run[2]:
                run = None
            if run is not None:
                start, p, end = run
                offset = i - start
                if offset >= p and offset % p == 0 and self._weights(i) == self._weights(i - p):
                    j = start + ((end - start) // p) * p
                    if j > i:
                        self.layers[j] = self.layers[i]
                        self.jumps[j] = i
                        logger.debug("fixpoint at position %d, skipping to %d", i, j)
                        i = j
                        run = None
                        continue

            layer = self._step(self.layers[i], factors[i], lower[i], upper[i], weight)
            states += len(layer)
            if states > budget:
                raise BudgetExceededError(f"layered search exceeds the budget of {budget} states")
            self.layers[i + 1] = layer
            i += 1
        logger.debug("layered search kept %d states over %d positions", states, self.n)

    def _weights(self, i:int) -> Dict[GroupElement, int]:
        return {v: w for v, (w, _, _) in self.layers[i].items()}

    def _step(self, layer:Layer, x:GroupElement, lo:int, hi:int, weight:Optional[int]) -> Layer:
        P = self.P
        new: Layer = {}
        shift = P.power(x, lo)
        for v, (w, _, _) in layer.items():
            value = P.multiply(v, shift)
            for a in range(lo, hi + 1):
                if weight is not None and w + a > weight:
                    break
                current = new.get(value)
                if current is None or w + a < current[0]:
                    new[value] = (w + a, v, a)
                value = P.multiply(value, x)
        return new

    @property
    def final(self) -> Layer:
        return self.layers[self.n]

    def witness(self, target:GroupElement) -> Optional[Tuple[int, ...]]:
        if target not in self.final:
            return None
        alpha = [0] * self.n
        position, value = self.n, target
        while position > 0:
            if position in self.jumps:
                position = self.jumps[position]
                continue
            _, previous, a = self.layers[position][value]
            alpha[position - 1] = a
            value = previous
            position -= 1
        return tuple(alpha)


@lru_cache(maxsize=2)
def _reachability(P:GroupPresentation, factors:Tuple[GroupElement, ...], lower:Tuple[int, ...],
                  upper:Tuple[int, ...], weight:Optional[int],
                  budget:int) -> Union[_Reachability, BudgetExceededError]:
    try:
        return _Reachability(P, factors, lower, upper, weight, budget)
    except BudgetExceededError as err:
        return err


def _weight_caps(B:int, total:int) -> Iterator[Optional[int]]:
    """Weight caps `B, 2B, 4B, ...` below `total`, then None for the whole box."""
    cap = max(B, 1)
    while cap < total:
        yield cap
        cap *= 2
    yield None


def solve_box(inst:KnapsackInstance, B:int=DEFAULT_BOX, weight:Optional[int]=None,
              state_budget:int=STATE_BUDGET, narrow:bool=True) -> SolveOutcome:
    """
    Decide the instance inside the box `[0, B]^n`.

    The linear precheck may answer NO outright and narrows the box. The search then
    runs layer by layer over the prefix products, keeping the minimal weight of every
    reachable value. Without an explicit `weight` the search is repeated with the
    weight caps `B, 2B, 4B, ...` and finally over the whole box, stopping at the first
    witness or at the first search exceeding `state_budget`. A found witness is
    verified by direct evaluation. When the precheck bounds every exponent by `B`,
    an exhausted search without a weight cap answers NO.

    The witness has minimal weight `sum(alpha)`. Among witnesses of equal weight the
    one reached first is kept, scanning the factors from left to right and every
    exponent upwards, so equal inputs always give the same witness.

    Args:
        inst (KnapsackInstance): The instance.
        B (int): Bound for every exponent.
        weight (Optional[int]): Optional bound for the sum of all exponents.
        state_budget (int): Maximal number of stored partial products.
        narrow (bool): Search only inside the bounds proven by the linear precheck.
            With False the search depends on the factors and the box only, so
            repeated queries over the same factors share one search.

    Returns:
        SolveOutcome: YES with witness, NO with a refutation, or UNKNOWN.

    Example:
    ```python
    x, y = h3.main_generator(0), h3.main_generator(1)
    z = h3.central_generator(0)
    inst = KnapsackInstance(h3, z, (x, y, h3.inverse(x), h3.inverse(y)))
    solve_box(inst, 3).witness   # (1, 1, 1, 1)
    ```
    """
    if B < 0:
        raise ValueError(f"box must be nonnegative, got {B}")
    if weight is not None and weight < 0:
        raise ValueError(f"weight must be nonnegative, got {weight}")
    system = build_system(inst, quadratic=False)
    pre = linear_precheck(system)
    if pre.status is Feasibility.INFEASIBLE:
        logger.info("refuted by the linear precheck: %s", pre.reason)
        return SolveOutcome(SolveStatus.NO, reason=pre.reason)
    if inst.target == inst.presentation.identity():
        return SolveOutcome(SolveStatus.YES, (0,) * len(inst.factors), reason="target is the identity")

    n = len(inst.factors)
    lower = tuple(int(pre.lower[i]) if pre.lower else 0 for i in range(n))
    upper = tuple(int(min(B, pre.upper[i])) if pre.upper else B for i in range(n))
    if any(lo > hi for lo, hi in zip(lower, upper)):
        return SolveOutcome(SolveStatus.UNKNOWN, reason=f"every solution leaves the box [0, {B}]")
    if pre.lower and pre.upper and all(lo == hi for lo, hi in zip(pre.lower, pre.upper)):
        if verify_witness(inst, lower):
            return SolveOutcome(SolveStatus.YES, lower, reason="the linear equations force the witness")
        return SolveOutcome(SolveStatus.NO, reason=f"the linear equations force alpha = {lower}, "
                                                   "which misses the target")

    if not narrow:
        lower, upper = (0,) * n, (B,) * n
    caps = [weight] if weight is not None else list(_weight_caps(B, sum(upper)))
    alpha = None
    for cap in caps:
        search = _reachability(inst.presentation, inst.factors, lower, upper, cap, state_budget)
        if isinstance(search, BudgetExceededError):
            scope = "the whole box" if cap is None else f"weight <= {cap}"
            logger.warning("search aborted at %s: %s", scope, search)
            return SolveOutcome(SolveStatus.UNKNOWN, reason=f"{search} while searching {scope}")
        alpha = search.witness(inst.target)
        if alpha is not None:
            break
    if alpha is None:
        if weight is None and pre.upper and all(u <= B for u in pre.upper):
            return SolveOutcome(SolveStatus.NO, reason=f"no witness in the box [0, {B}], "
                                                       "which holds every solution of the linear equations")
        bound = f"box [0, {B}]" + ("" if weight is None else f" with weight <= {weight}")
        return SolveOutcome(SolveStatus.UNKNOWN, reason=f"no witness in the {bound}")
    if not verify_witness(inst, alpha) or not system.is_satisfied(alpha):
        raise InvariantError(f"search produced the invalid witness {alpha}")
    logger.info("found witness of weight %d", sum(alpha))
    return SolveOutcome(SolveStatus.YES, alpha, reason="verified witness")


def member_product_of_monoids(P:GroupPresentation, g:GroupElement,
                              monoids:Sequence[Sequence[GroupElement]],
                              cs:Optional[CommutatorStructure]=None, box:int=DEFAULT_BOX,
                              weight:Optional[int]=None, state_budget:int=STATE_BUDGET,
                              narrow:bool=True) -> MembershipOutcome:
    """
    Decide `g in S_1^* S_2^* ... S_m^*` for a group with `h([G,G]) = 1`.

    Every monoid is replaced by its bounded generation sequence, the concatenation is
    a knapsack instance handed to [solve_box][nilmonoid.diophantine.solve_box].

    Args:
        P (GroupPresentation): The group.
        g (GroupElement): The target.
        monoids (Sequence[Sequence[GroupElement]]): Generators of every factor `S_j`.
        cs (Optional[CommutatorStructure]): Precomputed structure of `[G,G]`.
        box (int): Bound for every exponent.
        weight (Optional[int]): Optional bound for the certificate length. None leaves
            the box as the only bound.
        state_budget (int): Maximal number of stored partial products.
        narrow (bool): Passed on to [solve_box][nilmonoid.diophantine.solve_box].

    Raises:
        HirschLengthError: If `h([G,G]) != 1`.
    """
    cs = (commutator_structure(P) if cs is None else cs).require_h1()
    sequences = [bounded_sequence(S, cs) for S in monoids if S]
    factors = tuple(y for seq in sequences for y in seq.sequence)
    lengths = tuple(len(seq) for seq in sequences)
    if g == P.identity():
        return MembershipOutcome(SolveStatus.YES, (0,) * len(factors), "target is the identity",
                                 certificate=(), sequence_lengths=lengths)

    outcome = solve_box(KnapsackInstance(P, g, factors), box, weight=weight,
                        state_budget=state_budget, narrow=narrow)
    certificate = None
    if outcome.status is SolveStatus.YES:
        certificate = tuple(y for y, a in zip(factors, outcome.witness) for _ in range(a))
        if P.eval_word(certificate) != g:
            raise InvariantError("certificate word does not evaluate to the target")
    return MembershipOutcome(outcome.status, outcome.witness, outcome.reason,
                             certificate=certificate, sequence_lengths=lengths)
