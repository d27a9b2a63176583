"""
Exact arithmetic in real algebraic number fields K = Q(lambda).

A field is presented by the monic minimal polynomial of its generator and a
rational interval isolating one real root of it: that root is the
designated real embedding (for fields coming from Perron-Frobenius data it
is the PF root). Elements are power-basis coordinate vectors. Comparisons
and floors under the embedding are decided exactly: an element that is not
literally zero has a nonzero value, so refining the interval of lambda and
evaluating the element with interval arithmetic always terminates.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Poly, QQ, ZZ, factorint, integer_nthroot, isprime, sturm, symbols
from sympy.polys.polyerrors import NotInvertible

from config import TRIAL_DIVISION_LIMIT
from errors import (ArithmeticDomainError, DomainError, NotSquarefreeError,
                    UsageError)
from exactnum import det_rational
from logger import get_logger

logger = get_logger("numberfield")

_t = symbols("t")


class Ordering(str, Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


def to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    # sympy Rational / Integer and gmpy/python mpq all expose p, q or numerator
    p = getattr(value, "p", None)
    if p is not None:
        return Fraction(int(value.p), int(value.q))
    return Fraction(int(value.numerator), int(value.denominator))


def _horner(coeffs_low_high: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs_low_high):
        acc = acc * x + c
    return acc


def _interval_mul(a_lo, a_hi, b_lo, b_hi):
    products = (a_lo * b_lo, a_lo * b_hi, a_hi * b_lo, a_hi * b_hi)
    return min(products), max(products)


def _interval_horner(coeffs_low_high, lo, hi):
    acc_lo = acc_hi = Fraction(0)
    for c in reversed(coeffs_low_high):
        acc_lo, acc_hi = _interval_mul(acc_lo, acc_hi, lo, hi)
        acc_lo, acc_hi = acc_lo + c, acc_hi + c
    return acc_lo, acc_hi


def _sign_variations(values: Iterable[Fraction]) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


# Bisection state per isolating interval: checkpoints[i] holds the integer
# numerators of the interval after i * _CHECKPOINT_STEPS bisections.
_CHECKPOINT_STEPS = 64
_MAX_CACHED_ROOTS = 256
_refinements: Dict[Tuple, List[Tuple[int, int]]] = {}


def _sign_at(minpoly: Tuple[int, ...], num: int, den: int) -> int:
    """Sign of minpoly(num / den) for den > 0; acc ends as den^n * minpoly(num / den)"""
    acc, scale = 0, 1
    for c in minpoly:
        acc = acc * num + c * scale
        scale *= den
    return (acc > 0) - (acc < 0)


def _refined(minpoly: Tuple[int, ...], lo: Fraction, hi: Fraction, steps: int):
    """
    Isolating interval after ``steps`` bisections.

    Endpoints are kept as integer numerators over ``den * 2**k``, and the
    walk resumes from the deepest cached checkpoint not beyond ``steps``,
    so repeated doubling of the step count costs one pass in total.
    """
    if steps <= 0 or lo == hi:
        return lo, hi
    den = math.lcm(lo.denominator, hi.denominator)
    key = (minpoly, lo, hi)
    checkpoints = _refinements.get(key)
    if checkpoints is None:
        if len(_refinements) >= _MAX_CACHED_ROOTS:
            _refinements.clear()
        checkpoints = _refinements[key] = [(int(lo * den), int(hi * den))]

    index = min(steps // _CHECKPOINT_STEPS, len(checkpoints) - 1)
    n_lo, n_hi = checkpoints[index]
    done = index * _CHECKPOINT_STEPS
    s_lo = _sign_at(minpoly, n_lo, den << done)
    while done < steps:
        if s_lo == 0:
            n_hi = n_lo
        if n_lo == n_hi:
            n_lo = n_hi = 2 * n_lo
        else:
            mid = n_lo + n_hi
            s_mid = _sign_at(minpoly, mid, den << (done + 1))
            if s_mid == 0:
                n_lo = n_hi = mid
            elif s_mid != s_lo:
                n_lo, n_hi = 2 * n_lo, mid
            else:
                n_lo, n_hi, s_lo = mid, 2 * n_hi, s_mid
        done += 1
        if done % _CHECKPOINT_STEPS == 0 and done // _CHECKPOINT_STEPS == len(checkpoints):
            checkpoints.append((n_lo, n_hi))
    return Fraction(n_lo, den << steps), Fraction(n_hi, den << steps)


class NumberField:
    """
    K = Q[t]/(minpoly) with a designated real embedding.

    ``minpoly`` is monic, highest degree first. ``pf_interval`` is a closed
    rational interval holding exactly one real root (checked with a Sturm
    sequence). Irreducibility is verified with sympy unless ``trusted``.
    """

    def __init__(self, minpoly: Sequence[int], pf_interval: Tuple[Fraction, Fraction],
                 trusted: bool = False):
        minpoly = tuple(int(c) for c in minpoly)
        if len(minpoly) < 2 or minpoly[0] != 1:
            raise DomainError(f"minimal polynomial must be monic of degree >= 1, got {list(minpoly)}")
        lo, hi = (to_fraction(v) for v in pf_interval)
        if lo > hi:
            raise DomainError(f"empty interval ({lo}, {hi})")
        self.minpoly = minpoly
        self.pf_interval = (lo, hi)
        self.trusted = trusted
        if trusted:
            logger.warning("irreducibility of %s accepted without verification", list(minpoly))
        elif not self._sympy_poly.is_irreducible:
            raise DomainError(f"{self._sympy_poly.as_expr()} is reducible over Q")
        if self.root_count(lo, hi) != 1:
            raise DomainError(f"interval ({lo}, {hi}) does not isolate exactly one root")

    # ----- identity -----

    def __eq__(self, other):
        if not isinstance(other, NumberField):
            return NotImplemented
        if self is other:
            return True
        if self.minpoly != other.minpoly:
            return False
        lo = max(self.pf_interval[0], other.pf_interval[0])
        hi = min(self.pf_interval[1], other.pf_interval[1])
        return lo <= hi and self.root_count(lo, hi) == 1

    def __hash__(self):
        return hash(self.minpoly)

    def __repr__(self):
        return f"NumberField({list(self.minpoly)}, ({self.pf_interval[0]}, {self.pf_interval[1]}))"

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @cached_property
    def _sympy_poly(self) -> Poly:
        return Poly(list(self.minpoly), _t, domain=ZZ)

    @cached_property
    def _reduction(self) -> Tuple[Fraction, ...]:
        # lambda^n = -(p_0 + p_1 lambda + ... + p_{n-1} lambda^{n-1})
        return tuple(Fraction(-c) for c in reversed(self.minpoly[1:]))

    @cached_property
    def _sturm(self):
        seq = sturm(Poly(list(self.minpoly), _t, domain=QQ))
        return [tuple(to_fraction(c) for c in reversed(p.all_coeffs())) for p in seq]

    def root_count(self, lo: Fraction, hi: Fraction) -> int:
        """Number of distinct real roots in the closed interval [lo, hi]"""
        coeffs = [Fraction(c) for c in reversed(self.minpoly)]
        at_root = 1 if _horner(coeffs, lo) == 0 else 0
        v_lo = _sign_variations(_horner(p, lo) for p in self._sturm)
        v_hi = _sign_variations(_horner(p, hi) for p in self._sturm)
        return v_lo - v_hi + at_root

    def root_enclosure(self, steps: int) -> Tuple[Fraction, Fraction]:
        lo, hi = self.pf_interval
        return _refined(self.minpoly, lo, hi, steps)

    # ----- elements -----

    def element(self, coords: Sequence) -> "FieldElement":
        return FieldElement(self, tuple(to_fraction(c) for c in coords))

    def from_rational(self, value) -> "FieldElement":
        coords = [Fraction(0)] * self.degree
        coords[0] = to_fraction(value)
        return FieldElement(self, tuple(coords))

    @property
    def zero(self) -> "FieldElement":
        return self.from_rational(0)

    @property
    def one(self) -> "FieldElement":
        return self.from_rational(1)

    @property
    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self.from_rational(-self.minpoly[1])
        coords = [Fraction(0)] * self.degree
        coords[1] = Fraction(1)
        return FieldElement(self, tuple(coords))

    @cached_property
    def _power_traces(self) -> Tuple[Fraction, ...]:
        traces = []
        power = self.one
        for _ in range(self.degree):
            traces.append(sum(multiplication_matrix(power)[i][i] for i in range(self.degree)))
            power = power * self.gen
        return tuple(traces)

    def _mul_coords(self, a: Sequence[Fraction], b: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        n = self.degree
        prod = [Fraction(0)] * (2 * n - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        red = self._reduction
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c:
                prod[k] = Fraction(0)
                for i, r in enumerate(red):
                    prod[k - n + i] += c * r
        return tuple(prod[:n])


@lru_cache(maxsize=1)
def rational_field() -> NumberField:
    """Q presented as Q[t]/(t) (generator 0)"""
    return NumberField((1, 0), (Fraction(-1), Fraction(1)))


@dataclass(frozen=True, eq=True)
class FieldElement:
    field: NumberField
    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coords) != self.field.degree:
            raise UsageError(f"expected {self.field.degree} coordinates, got {len(self.coords)}")

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise UsageError("elements belong to different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.from_rational(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a * other for a in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, self.field._mul_coords(self.coords, other.coords))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ArithmeticDomainError("division by zero")
            return FieldElement(self.field, tuple(a / other for a in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def inverse(self) -> "FieldElement":
        """Inverse via the polynomial extended Euclid (sympy ``Poly.invert``)"""
        if self.is_zero():
            raise ArithmeticDomainError("division by zero")
        if self.is_rational():
            return self.field.from_rational(1 / self.coords[0])
        f = Poly(list(reversed(self.coords)), _t, domain=QQ)
        g = Poly(list(self.field.minpoly), _t, domain=QQ)
        try:
            inv = f.invert(g)
        except NotInvertible:
            raise ArithmeticDomainError("element is not invertible modulo the minimal polynomial")
        coeffs = [to_fraction(c) for c in reversed(inv.all_coeffs())]
        coeffs += [Fraction(0)] * (self.field.degree - len(coeffs))
        return FieldElement(self.field, tuple(coeffs))

    def enclosure(self, steps: int) -> Tuple[Fraction, Fraction]:
        """Rational interval containing the embedded value"""
        if self.field.degree == 1:
            value = self.coords[0]
            return value, value
        lo, hi = self.field.root_enclosure(steps)
        return _interval_horner(self.coords, lo, hi)

    def sign(self) -> int:
        if self.is_zero():
            return 0
        if self.is_rational():
            return 1 if self.coords[0] > 0 else -1
        steps = 16
        while True:
            lo, hi = self.enclosure(steps)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            steps *= 2

    def floor(self) -> int:
        if self.is_rational():
            return math.floor(self.coords[0])
        steps = 16
        while True:
            lo, hi = self.enclosure(steps)
            if math.floor(lo) == math.floor(hi):
                return math.floor(lo)
            steps *= 2

    def to_float(self) -> float:
        lo, hi = self.field.root_enclosure(64)
        root = float((lo + hi) / 2)
        return float(np.polyval([float(c) for c in reversed(self.coords)], root))

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coords):
            if c == 0:
                continue
            terms.append(str(c) if k == 0 else f"{c}*t^{k}" if k > 1 else f"{c}*t")
        return " + ".join(terms) or "0"


# ----- operations -----

def field_arith(x: FieldElement, y: FieldElement, op: str) -> FieldElement:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise UsageError(f"unknown field operation {op!r}")


def multiplication_matrix(x: FieldElement):
    """Rational matrix of y -> x*y in the power basis (column j = x*t^j)"""
    n = x.field.degree
    columns = []
    for j in range(n):
        e = [Fraction(0)] * n
        e[j] = Fraction(1)
        columns.append(x.field._mul_coords(x.coords, e))
    return [[columns[j][i] for j in range(n)] for i in range(n)]


def trace(x: FieldElement) -> Fraction:
    return sum((c * t for c, t in zip(x.coords, x.field._power_traces)), Fraction(0))


def norm(x: FieldElement) -> Fraction:
    return det_rational(multiplication_matrix(x))


def trace_matrix(elements: Sequence[FieldElement]):
    """Symmetric matrix of the trace pairing Tr(x_i * x_j)"""
    n = len(elements)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = trace(elements[i] * elements[j])
    return rows


def compare_real(x: FieldElement, y: FieldElement) -> Ordering:
    if x.field != y.field:
        raise UsageError("elements belong to different number fields")
    if x.coords == y.coords:
        return Ordering.EQUAL
    return Ordering.GREATER if (x - y).sign() > 0 else Ordering.LESS


def floor_real(x: FieldElement) -> int:
    return x.floor()


# ----- integers and quadratic fields -----

def squarefree_decomposition(n: int) -> Tuple[int, int]:
    """
    Write n = s^2 * d with d squarefree (n > 0).

    Trial division runs up to ``AFINV_TRIAL_DIVISION_LIMIT``; an unfactored
    cofactor is accepted when it is prime, a perfect square, or too small to
    hide a repeated prime above the bound.
    """
    if n <= 0:
        raise DomainError(f"positive integer required, got {n}")
    limit = TRIAL_DIVISION_LIMIT
    factors = factorint(n, limit=limit, use_rho=False, use_pm1=False, use_ecm=False)
    s, d = 1, 1
    for p, e in factors.items():
        if p > limit and not isprime(p):
            root, exact = integer_nthroot(p, 2)
            if exact:
                s *= int(root) ** e
                continue
            if p >= limit ** 3:
                raise DomainError(
                    f"cannot certify the square part of {n} beyond trial division up to {limit}"
                )
        s *= p ** (e // 2)
        if e % 2:
            d *= p
    return s, d


def is_squarefree(n: int) -> bool:
    return n > 0 and squarefree_decomposition(n)[0] == 1


@lru_cache(maxsize=256)
def quadratic_field(d: int) -> NumberField:
    """Q(sqrt d) presented by t^2 - d, embedded at the positive root"""
    if d <= 1 or not is_squarefree(d):
        raise NotSquarefreeError(f"d must be a squarefree integer > 1, got {d}")
    s = math.isqrt(d)
    return NumberField((1, 0, -d), (Fraction(s), Fraction(s + 1)))


@dataclass(frozen=True)
class QuadraticInfo:
    d: int
    sqrt_d: FieldElement


def quadratic_data(field: NumberField) -> QuadraticInfo:
    """Squarefree d and the element sqrt(d) of a degree-2 field"""
    if field.degree != 2:
        raise UsageError(f"quadratic field required, degree is {field.degree}")
    _, p, q = field.minpoly
    s, d = squarefree_decomposition(p * p - 4 * q)
    # 2*lambda + p = +-s*sqrt(d); the sign follows the embedding
    root_term = 2 * field.gen + p
    sign = root_term.sign()
    return QuadraticInfo(d, root_term * Fraction(sign, s))


@dataclass(frozen=True)
class QuadraticSurd:
    """The real number a + b*sqrt(d), d squarefree > 1"""

    d: int
    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "a", to_fraction(self.a))
        object.__setattr__(self, "b", to_fraction(self.b))
        if self.d <= 1 or not is_squarefree(self.d):
            raise NotSquarefreeError(f"d must be a squarefree integer > 1, got {self.d}")

    def is_rational(self) -> bool:
        return self.b == 0

    def _check(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadraticSurd(self.d, other)
        if other.d != self.d:
            raise UsageError(f"surds in different fields: sqrt({self.d}) and sqrt({other.d})")
        return other

    def __add__(self, other):
        other = self._check(other)
        return QuadraticSurd(self.d, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(self.d, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        return QuadraticSurd(self.d, self.a * other.a + self.d * self.b * other.b,
                             self.a * other.b + self.b * other.a)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd(self.d, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> "QuadraticSurd":
        n = self.norm()
        if n == 0:
            raise ArithmeticDomainError("division by zero")
        return QuadraticSurd(self.d, self.a / n, -self.b / n)

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def floor(self) -> int:
        """Exact floor through an integer square root"""
        if self.b == 0:
            return math.floor(self.a)
        u, w = self.a.numerator, self.a.denominator
        p, q = self.b.numerator, self.b.denominator
        # x = (u*q + sign(p)*sqrt(w^2 p^2 d)) / (w*q)
        big = w * w * p * p * self.d
        root = math.isqrt(big)
        num = u * q
        den = w * q
        if p > 0:
            return (num + root) // den
        return (num - root - 1) // den

    def sign(self) -> int:
        sign_a = (self.a > 0) - (self.a < 0)
        sign_b = (self.b > 0) - (self.b < 0)
        if sign_b == 0 or sign_a == sign_b:
            return sign_a or sign_b
        if sign_a == 0:
            return sign_b
        # opposite signs; a^2 == b^2 d is impossible for squarefree d > 1
        return sign_a if self.a * self.a > self.b * self.b * self.d else sign_b

    def __lt__(self, other):
        return (self - self._check(other)).sign() < 0

    def __le__(self, other):
        return (self - self._check(other)).sign() <= 0

    def __gt__(self, other):
        return (self - self._check(other)).sign() > 0

    def __ge__(self, other):
        return (self - self._check(other)).sign() >= 0

    def to_float(self) -> float:
        return float(self.a) + float(self.b) * float(np.sqrt(self.d))

    def to_element(self, field: Optional[NumberField] = None) -> FieldElement:
        field = field or quadratic_field(self.d)
        info = quadratic_data(field)
        if info.d != self.d:
            raise UsageError(f"sqrt({self.d}) does not live in {field!r}")
        return field.from_rational(self.a) + info.sqrt_d * self.b

    @classmethod
    def from_element(cls, x: FieldElement) -> "QuadraticSurd":
        info = quadratic_data(x.field)
        c0, c1 = x.coords
        # sqrt_d = e0 + e1*lambda, so lambda = (sqrt_d - e0) / e1
        e0, e1 = info.sqrt_d.coords
        return cls(info.d, c0 - c1 * e0 / e1, c1 / e1)

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt({self.d})"
