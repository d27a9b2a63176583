"""
Jacobi-Perron continued fractions.

A vector (1, theta_1, ..., theta_{n-1}) is expanded by taking the floors
b_i = floor(theta_i) and moving to ({theta_2}/{theta_1}, ...,
{theta_{n-1}}/{theta_1}, 1/{theta_1}). Each step is the unimodular block
(0 1; I b), so (1, theta) is proportional to B(b_0) B(b_1) ... B(b_k)
applied to the state after step k. Algebraic inputs are expanded exactly and
periodicity is detected by literal equality of states; float inputs are
only ever exploratory.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from config import MAX_STEPS
from errors import (ConsistencyError, DomainError, FactorizationNotFoundError,
                    RangeError, UsageError)
from exactnum import IntMatrix, det_exact
from logger import get_logger
from numberfield import FieldElement, Ordering, compare_real
from pfdata import PerronData, perron_data

logger = get_logger("jacobiperron")

FLOAT_EPSILON = 1e-12


@dataclass(frozen=True)
class JPDigit:
    b: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(v) for v in self.b))
        if any(v < 0 for v in self.b):
            raise DomainError(f"digit entries must be nonnegative, got {list(self.b)}")

    @property
    def dimension(self) -> int:
        return len(self.b) + 1


@dataclass(frozen=True)
class JPExpansion:
    dimension: int
    digits: Tuple[JPDigit, ...]
    periodic: Optional[Tuple[int, int]] = None
    exact_states: Optional[Tuple[Tuple[FieldElement, ...], ...]] = None
    terminating: bool = False

    @property
    def preperiod(self) -> Tuple[JPDigit, ...]:
        return self.digits[:self.periodic[0]] if self.periodic else self.digits

    @property
    def period(self) -> Tuple[JPDigit, ...]:
        if not self.periodic:
            return ()
        start, length = self.periodic
        return self.digits[start:start + length]

    def digit(self, i: int) -> JPDigit:
        if i < len(self.digits):
            return self.digits[i]
        if not self.periodic:
            raise RangeError(f"digit {i} requested, only {len(self.digits)} generated")
        start, length = self.periodic
        return self.digits[start + (i - start) % length]


def jp_block(digit: JPDigit) -> IntMatrix:
    """(0 1; I b) with b in the last column below the corner"""
    n = digit.dimension
    rows = [[0] * n for _ in range(n)]
    rows[0][n - 1] = 1
    for i in range(1, n):
        rows[i][i - 1] = 1
        rows[i][n - 1] = digit.b[i - 1]
    return IntMatrix.from_rows(rows)


def ratio_vector(v: Sequence) -> tuple:
    """(v_2/v_1, ..., v_n/v_1)"""
    return tuple(x / v[0] for x in v[1:])


def _exact_expand(theta: Tuple[FieldElement, ...], max_steps: int) -> JPExpansion:
    n = len(theta) + 1
    digits: List[JPDigit] = []
    states = []
    seen = {}
    state = theta
    periodic = None
    terminating = False
    while True:
        if state in seen:
            start = seen[state]
            periodic = (start, len(digits) - start)
            break
        if len(digits) >= max_steps:
            break
        seen[state] = len(digits)
        states.append(state)
        floors = tuple(x.floor() for x in state)
        digits.append(JPDigit(floors))
        frac = [x - k for x, k in zip(state, floors)]
        if frac[0].is_zero():
            terminating = True
            break
        inv = frac[0].inverse()
        state = tuple(f * inv for f in frac[1:]) + (inv,)
    logger.debug("JP expansion: %d digits, periodic=%s, terminating=%s",
                 len(digits), periodic, terminating)
    return JPExpansion(n, tuple(digits), periodic, tuple(states), terminating)


def _float_expand(theta: Sequence[float], max_steps: int) -> JPExpansion:
    logger.warning("floating-point Jacobi-Perron expansion; periodicity is never reported")
    n = len(theta) + 1
    digits = []
    state = [float(x) for x in theta]
    terminating = False
    for _ in range(max_steps):
        floors = tuple(math.floor(x) for x in state)
        digits.append(JPDigit(floors))
        frac = [x - k for x, k in zip(state, floors)]
        if frac[0] < FLOAT_EPSILON:
            terminating = True
            break
        state = [f / frac[0] for f in frac[1:]] + [1 / frac[0]]
    return JPExpansion(n, tuple(digits), terminating=terminating)


def jp_expand(theta: Sequence, max_steps: Optional[int] = None) -> JPExpansion:
    max_steps = MAX_STEPS if max_steps is None else max_steps
    if max_steps < 1:
        raise UsageError(f"max_steps must be at least 1, got {max_steps}")
    theta = tuple(theta)
    if not theta:
        raise UsageError("theta must have at least one coordinate")
    if all(isinstance(x, FieldElement) for x in theta):
        field = theta[0].field
        if any(x.field != field for x in theta):
            raise UsageError("theta coordinates belong to different number fields")
        if any(x.sign() <= 0 for x in theta):
            raise DomainError("theta coordinates must be positive")
        return _exact_expand(theta, max_steps)
    if any(isinstance(x, FieldElement) for x in theta):
        raise UsageError("cannot mix exact and floating coordinates")
    if any(x <= 0 for x in theta):
        raise DomainError("theta coordinates must be positive")
    return _float_expand(theta, max_steps)


def jp_matrix_product(digits: Sequence[JPDigit]) -> IntMatrix:
    if not digits:
        raise UsageError("at least one digit is required")
    n = digits[0].dimension
    if any(d.dimension != n for d in digits):
        raise UsageError("digits of different dimensions")
    product = jp_block(digits[0])
    for d in digits[1:]:
        product = product @ jp_block(d)
    return product


def jp_convergents(e: JPExpansion, k: int) -> Tuple[Fraction, ...]:
    """Ratio vector of the last column of B(b_0)...B(b_k)"""
    if k < 0:
        raise RangeError(f"convergent index must be nonnegative, got {k}")
    if k >= len(e.digits) and not e.periodic:
        raise RangeError(f"convergent {k} needs {k + 1} digits, only {len(e.digits)} available")
    product = jp_matrix_product([e.digit(i) for i in range(k + 1)])
    column = product.column(e.dimension - 1)
    return tuple(Fraction(c, column[0]) for c in column[1:])


def _block_digit(m: IntMatrix) -> Optional[JPDigit]:
    """The digit of m when m already has the block shape"""
    n = m.rows
    if m.row(0) != tuple(int(j == n - 1) for j in range(n)):
        return None
    for i in range(1, n):
        if any(m[i, j] != int(j == i - 1) for j in range(n - 1)):
            return None
    return JPDigit(tuple(m[i, n - 1] for i in range(1, n)))


def jp_factorize(a: IntMatrix) -> List[JPDigit]:
    """
    Peel blocks off the left of a nonnegative unimodular matrix.

    With P = B(b) R the rows of R are recovered as R_{n-1} = P_0 and
    R_{i-1} = P_i - b_i P_0; b_i is the largest value keeping R nonnegative.
    The result is verified by multiplying back.
    """
    if not a.is_square:
        raise DomainError(f"square matrix required, got {a.rows}x{a.cols}")
    if not a.is_nonnegative():
        raise DomainError(f"{a} has negative entries")
    det = det_exact(a)
    if det not in (1, -1):
        raise DomainError(f"{a} has determinant {det}, not +-1")
    n = a.rows
    digits = []
    current = a
    limit = n * n + n * sum(a.entries)
    for _ in range(limit):
        last = _block_digit(current)
        if last is not None:
            digits.append(last)
            break
        top = current.row(0)
        support = [j for j in range(n) if top[j] > 0]
        if not support:
            raise FactorizationNotFoundError(f"cannot peel a block from {current}")
        b = tuple(min(current[i, j] // top[j] for j in support) for i in range(1, n))
        rows = [[current[i + 1, j] - b[i] * top[j] for j in range(n)] for i in range(n - 1)]
        rows.append(list(top))
        digits.append(JPDigit(b))
        current = IntMatrix.from_rows(rows)
    else:
        raise FactorizationNotFoundError(f"no block factorization of {a} within {limit} steps")
    if jp_matrix_product(digits) != a:
        raise FactorizationNotFoundError(f"greedy factorization of {a} does not multiply back")
    logger.debug("factorized %s into %d blocks", a, len(digits))
    return digits


@dataclass(frozen=True)
class PeriodicEigenvector:
    perron: PerronData
    expansion: JPExpansion
    reproduces_period: bool


def _canonical_digits(period: Sequence[JPDigit]) -> Tuple[JPDigit, ...]:
    period = tuple(period)
    return min((period[i:] + period[:i] for i in range(len(period))),
               key=lambda rotation: [d.b for d in rotation])


def periodic_jp_eigenvector(period: Sequence[JPDigit], max_steps: Optional[int] = None) -> PeriodicEigenvector:
    """
    Perron data of the period product, and whether expanding its eigenvector
    gives back the period up to rotation.
    """
    product = jp_matrix_product(period)
    data = perron_data(product)
    expansion = jp_expand(data.ratio_vector(), max_steps)
    reproduces = False
    if expansion.periodic:
        found = expansion.period
        if len(period) % len(found) == 0:
            repeated = found * (len(period) // len(found))
            reproduces = _canonical_digits(repeated) == _canonical_digits(period)
    if not reproduces:
        logger.warning("eigenvector expansion does not reproduce the period %s",
                       [list(d.b) for d in period])
    return PeriodicEigenvector(data, expansion, reproduces)


@dataclass(frozen=True)
class FixedVector:
    product: IntMatrix
    vector: Tuple[FieldElement, ...]
    eigenvalue: FieldElement
    # (j, k) with eigenvalue^j == lambda^k when a Perron eigenvalue was supplied
    relation: Optional[Tuple[int, int]] = None


def eigenvalue_relation(mu: FieldElement, lam: FieldElement, max_power: int = 24) -> Tuple[int, int]:
    """
    Smallest exponents (j, k), j first, with mu^j == lam^k exactly.

    Both values must be real and greater than one. For each j the powers of
    lam are walked upwards until they pass mu^j.
    """
    one = mu.field.one
    if compare_real(mu, one) != Ordering.GREATER or compare_real(lam, one) != Ordering.GREATER:
        raise DomainError("eigenvalue relations need two values greater than one")
    for j in range(1, max_power + 1):
        target = mu ** j
        power, k = lam, 1
        while k <= max_power and compare_real(power, target) == Ordering.LESS:
            power, k = power * lam, k + 1
        if k <= max_power and power == target:
            return j, k
    raise ConsistencyError(f"no relation mu^j = lambda^k with j, k <= {max_power}")


def period_fixed_vector(e: JPExpansion, eigenvalue: Optional[FieldElement] = None,
                        max_power: int = 24) -> FixedVector:
    """
    (P, w, mu): period-block product P, w = (1, state at the period start),
    P w = mu w. With the Perron eigenvalue lambda of the matrix whose vector
    was expanded, also the exponents tying mu to lambda.
    """
    if not e.periodic or e.exact_states is None:
        raise DomainError("expansion is not periodic")
    start, _ = e.periodic
    state = e.exact_states[start]
    field = state[0].field
    w = (field.one,) + tuple(state)
    p = jp_matrix_product(e.period)
    image = tuple(field.zero + x for x in p.apply(w))
    mu = image[0]
    if image != tuple(mu * x for x in w):
        raise ConsistencyError("period product does not fix the period state")
    relation = None
    if eigenvalue is not None:
        relation = eigenvalue_relation(mu, eigenvalue, max_power)
        logger.debug("period eigenvalue: mu^%d = lambda^%d", *relation)
    return FixedVector(p, w, mu, relation)


def tail_agreement(e1: JPExpansion, e2: JPExpansion, max_prefix: int = 10) -> Optional[Tuple[int, int]]:
    """
    Smallest prefix drops (p1, p2), by total then by p1, after which the two
    digit sequences agree. Periodic expansions are compared on a window that
    covers both periods, so the answer is exact; otherwise only the
    generated digits are compared.
    """
    if e1.dimension != e2.dimension:
        return None
    for total in range(2 * max_prefix + 1):
        for p1 in range(max(0, total - max_prefix), min(total, max_prefix) + 1):
            p2 = total - p1
            if _agree_after(e1, e2, p1, p2):
                return p1, p2
    return None


def _agree_after(e1: JPExpansion, e2: JPExpansion, p1: int, p2: int) -> bool:
    if e1.periodic and e2.periodic:
        pre = max(e1.periodic[0] - p1, e2.periodic[0] - p2, 0)
        window = pre + math.lcm(e1.periodic[1], e2.periodic[1])
    else:
        window = min(len(e1.digits) - p1, len(e2.digits) - p2)
        if window < 1:
            return False
        if e1.terminating != e2.terminating or (e1.terminating and len(e1.digits) - p1 != len(e2.digits) - p2):
            return False
    return all(e1.digit(p1 + i) == e2.digit(p2 + i) for i in range(window))
