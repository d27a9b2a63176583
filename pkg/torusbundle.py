"""
Torus bundles with hyperbolic monodromy A in SL(2, Z).

The slope of the attracting fixed point of A is a quadratic surd whose
continued fraction is eventually periodic; the period up to rotation is a
conjugacy invariant (Gauss's method of periods). The invariant report
composes the Perron-Frobenius eigenvector, its Jacobian module, the
coefficient ring and the trace form.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Tuple

from config import CERT_BOUND
from errors import DimensionError, DomainError, NotHyperbolicError, RangeError
from exactnum import IntMatrix, charpoly, det_exact, integer_kernel
from logger import get_logger
from numberfield import QuadraticSurd, squarefree_decomposition
from pfdata import (coefficient_ring, dominant_eigendata, handelman_triple,
                    is_primitive, jacobian_module, perron_data)
from traceform import form_invariants, gram, gram_of

logger = get_logger("torusbundle")


@dataclass(frozen=True)
class TorusMonodromy:
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.rows != 2 or self.matrix.cols != 2:
            raise DimensionError(f"torus monodromy must be 2x2, got {self.matrix.rows}x{self.matrix.cols}")
        det = det_exact(self.matrix)
        if det != 1:
            raise DomainError(f"monodromy must have determinant 1, got {det}")

    @classmethod
    def from_entries(cls, a: int, b: int, c: int, d: int) -> "TorusMonodromy":
        return cls(IntMatrix(2, 2, (a, b, c, d)))

    @property
    def trace(self) -> int:
        return self.matrix.trace()

    @property
    def hyperbolic(self) -> bool:
        return abs(self.trace) > 2

    @property
    def sign(self) -> int:
        return -1 if self.trace < 0 else 1

    @property
    def sign_normalized(self) -> IntMatrix:
        return -self.matrix if self.trace < 0 else self.matrix

    def require_hyperbolic(self):
        if not self.hyperbolic:
            raise NotHyperbolicError(f"{self.matrix} has trace {self.trace}, |trace| <= 2")


# ----- continued fractions of quadratic surds -----

@dataclass(frozen=True)
class SurdCF:
    preperiod: Tuple[int, ...]
    period: Tuple[int, ...]
    value: QuadraticSurd
    terminating: bool = False

    def digit(self, i: int) -> int:
        if i < len(self.preperiod):
            return self.preperiod[i]
        if not self.period:
            raise RangeError(f"digit {i} past the end of a terminating expansion")
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def convergents(self, k: int) -> List[Fraction]:
        """p_j/q_j for j = 0..k"""
        if self.terminating and k >= len(self.preperiod):
            raise RangeError(f"expansion has only {len(self.preperiod)} digits")
        p_prev, p = 1, self.digit(0)
        q_prev, q = 0, 1
        result = [Fraction(p, q)]
        for i in range(1, k + 1):
            a = self.digit(i)
            p_prev, p = p, a * p + p_prev
            q_prev, q = q, a * q + q_prev
            result.append(Fraction(p, q))
        return result


def _rational_cf(x: Fraction) -> Tuple[int, ...]:
    digits = []
    num, den = x.numerator, x.denominator
    while den:
        a, r = divmod(num, den)
        digits.append(a)
        num, den = den, r
    return tuple(digits)


def _surd_state(x: QuadraticSurd) -> Tuple[int, int, int]:
    """(P, D, Q) with x = (P + sqrt(D))/Q and Q dividing D - P^2"""
    r = math.lcm(x.a.denominator, x.b.denominator)
    p, q = int(x.a * r), int(x.b * r)
    big_d = q * q * x.d
    if q < 0:
        p, r = -p, -r
    if (big_d - p * p) % r:
        p, big_d, r = p * abs(r), big_d * r * r, r * abs(r)
    return p, big_d, r


def cf_expand(x: QuadraticSurd) -> SurdCF:
    """
    Exact continued fraction of a rational or a quadratic surd.

    Surds are expanded on the integer state (P, Q) of (P + sqrt(D))/Q until
    a state repeats, which splits the digits into preperiod and period.
    """
    if x.is_rational():
        return SurdCF(_rational_cf(x.a), (), x, terminating=True)
    p, big_d, q = _surd_state(x)
    s = math.isqrt(big_d)
    seen = {}
    digits = []
    while (p, q) not in seen:
        seen[(p, q)] = len(digits)
        a = (p + s) // q if q > 0 else (-p - s - 1) // (-q)
        digits.append(a)
        p = a * q - p
        q = (big_d - p * p) // q
    start = seen[(p, q)]
    logger.debug("CF of %s: preperiod %d, period %d", x, start, len(digits) - start)
    return SurdCF(tuple(digits[:start]), tuple(digits[start:]), x)


def canonical_period(period) -> Tuple[int, ...]:
    """Lexicographically least rotation"""
    period = tuple(period)
    if not period:
        return period
    return min(period[i:] + period[:i] for i in range(len(period)))


def cyclically_equivalent(p1, p2) -> bool:
    """True when one period is a rotation of the other"""
    return canonical_period(p1) == canonical_period(p2)


def digit_matrix(a: int) -> IntMatrix:
    """(a 1; 1 0)"""
    return IntMatrix(2, 2, (a, 1, 1, 0))


def period_product(period) -> IntMatrix:
    """Product of the digit matrices of a period, left to right"""
    result = IntMatrix.identity(2)
    for a in period:
        result = result @ digit_matrix(a)
    return result


def periodic_value(period) -> QuadraticSurd:
    """The purely periodic continued fraction with the given period"""
    m = period_product(period)
    a, b, c, d = m.entries
    disc = (a - d) ** 2 + 4 * b * c
    s, sq = squarefree_decomposition(disc)
    return QuadraticSurd(sq, Fraction(a - d, 2 * c), Fraction(s, 2 * c))


# ----- fixed points and conjugacy -----

def fixed_point(monodromy: TorusMonodromy) -> QuadraticSurd:
    """Attracting fixed point x = (lambda - a22)/a21 of the Moebius action"""
    monodromy.require_hyperbolic()
    a11, _, a21, a22 = monodromy.sign_normalized.entries
    tr = a11 + a22
    s, d = squarefree_decomposition(tr * tr - 4)
    return QuadraticSurd(d, Fraction(a11 - a22, 2 * a21), Fraction(s, 2 * a21))


def alexander_polynomial(monodromy: TorusMonodromy) -> List[int]:
    """Characteristic polynomial of the monodromy, highest degree first"""
    return charpoly(monodromy.matrix)


def eigenvalue_surd(monodromy: TorusMonodromy) -> QuadraticSurd:
    """Dilatation (|tr| + sqrt(tr^2 - 4))/2"""
    monodromy.require_hyperbolic()
    tr = abs(monodromy.trace)
    s, d = squarefree_decomposition(tr * tr - 4)
    return QuadraticSurd(d, Fraction(tr, 2), Fraction(s, 2))


class Verdict(str, Enum):
    CONJUGATE = "conjugate"
    DISTINCT_BY_INVARIANTS = "distinct_by_invariants"
    DISTINCT_BY_PERIODS = "distinct_by_periods"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class ConjugacyResult:
    verdict: Verdict
    certificate: Optional[IntMatrix] = None
    periods: Tuple[Tuple[int, ...], ...] = ()


def _sylvester_system(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    """Integer matrix of the linear map T -> T*A - B*T on vec(T)"""
    rows = []
    for i in range(2):
        for j in range(2):
            row = [0] * 4
            for k in range(2):
                row[2 * i + k] += a[k, j]
                row[2 * k + j] -= b[i, k]
            rows.append(row)
    return IntMatrix.from_rows(rows)


def _combination(basis, x, y) -> IntMatrix:
    return IntMatrix(2, 2, tuple(x * u + y * v for u, v in zip(*basis)))


def _search_certificate(a: IntMatrix, b: IntMatrix, bound: int) -> Optional[IntMatrix]:
    kernel = integer_kernel(_sylvester_system(a, b))
    if len(kernel) != 2:
        logger.warning("Sylvester lattice has rank %d, expected 2", len(kernel))
        return None
    t1, t2 = (IntMatrix(2, 2, tuple(v)) for v in kernel)
    # det(x*T1 + y*T2) is the binary form qa x^2 + qb xy + qc y^2
    qa, qc = det_exact(t1), det_exact(t2)
    qb = det_exact(_combination(kernel, 1, 1)) - qa - qc
    for r in range(1, bound + 1):
        for x in range(-r, r + 1):
            for y in range(-r, r + 1):
                if max(abs(x), abs(y)) != r:
                    continue
                if qa * x * x + qb * x * y + qc * y * y == 1:
                    t = _combination(kernel, x, y)
                    if t @ a == b @ t:
                        return t
    return None


def conjugacy_test(m1: TorusMonodromy, m2: TorusMonodromy,
                   bound: Optional[int] = None) -> ConjugacyResult:
    """
    Layered test: characteristic polynomials, then continued-fraction
    periods, then an explicit T in SL(2, Z) with T*A = B*T.
    """
    m1.require_hyperbolic()
    m2.require_hyperbolic()
    bound = CERT_BOUND if bound is None else bound
    if charpoly(m1.matrix) != charpoly(m2.matrix):
        return ConjugacyResult(Verdict.DISTINCT_BY_INVARIANTS)
    periods = (canonical_period(cf_expand(fixed_point(m1)).period),
               canonical_period(cf_expand(fixed_point(m2)).period))
    if periods[0] != periods[1]:
        return ConjugacyResult(Verdict.DISTINCT_BY_PERIODS, periods=periods)
    if m1.matrix == m2.matrix:
        return ConjugacyResult(Verdict.CONJUGATE, IntMatrix.identity(2), periods)
    certificate = _search_certificate(m1.matrix, m2.matrix, bound)
    if certificate is None:
        logger.warning("no SL(2,Z) certificate within bound %d", bound)
        return ConjugacyResult(Verdict.UNDETERMINED, periods=periods)
    return ConjugacyResult(Verdict.CONJUGATE, certificate, periods)


# ----- nonnegative representatives -----

@dataclass(frozen=True)
class NonnegRepresentative:
    matrix: IntMatrix
    period: Tuple[int, ...]
    power: Optional[Fraction]
    sign: int


def _surd_power(x: QuadraticSurd, k: int) -> QuadraticSurd:
    result = QuadraticSurd(x.d, Fraction(1))
    for _ in range(k):
        result = result * x
    return result


def _dilatation_exponent(target: QuadraticSurd, base: QuadraticSurd) -> Optional[Fraction]:
    """r with target = base^r, verified exactly"""
    if target.d != base.d:
        return None
    estimate = Fraction(math.log(target.to_float()) / math.log(base.to_float())).limit_denominator(12)
    q, p = estimate.numerator, estimate.denominator
    if q > 0 and _surd_power(target, p) == _surd_power(base, q):
        return estimate
    return None


def nonneg_representative(monodromy: TorusMonodromy) -> NonnegRepresentative:
    """
    Product of (a 1; 1 0) over the least rotation of the fixed-point period,
    taken twice when the period is odd so the determinant is 1.
    """
    period = canonical_period(cf_expand(fixed_point(monodromy)).period)
    word = period * 2 if len(period) % 2 else period
    product = period_product(word)
    tr = product.trace()
    s, d = squarefree_decomposition(tr * tr - 4)
    lam_p = QuadraticSurd(d, Fraction(tr, 2), Fraction(s, 2))
    power = _dilatation_exponent(lam_p, eigenvalue_surd(monodromy))
    if power is None:
        logger.warning("could not relate the dilatation of %s to that of %s", product, monodromy.matrix)
    return NonnegRepresentative(product, period, power, monodromy.sign)


# ----- the invariant report -----

@dataclass(frozen=True)
class TorusReport:
    matrix: IntMatrix
    sign: int
    d: int
    conductor: int
    delta: Fraction
    module_delta: Fraction
    sigma: int
    alexander: Tuple[int, ...]
    cf_preperiod: Tuple[int, ...]
    cf_period: Tuple[int, ...]
    eigenvalue: QuadraticSurd
    eigenvector: Tuple[QuadraticSurd, ...]
    module_lattice: IntMatrix
    module_denominator: int
    order_basis: Tuple[QuadraticSurd, ...]
    ideal_class: QuadraticSurd
    representative: NonnegRepresentative
    warnings: Tuple[str, ...] = field(default_factory=tuple)


def bundle_invariants(monodromy: TorusMonodromy) -> TorusReport:
    """
    Full report for a hyperbolic monodromy. Module and order data are
    computed for the sign-normalized matrix; Δ and Σ are those of the
    coefficient ring, with the raw module Δ kept as module_delta.
    """
    monodromy.require_hyperbolic()
    normalized = monodromy.sign_normalized
    warnings = []
    if monodromy.sign < 0:
        warnings.append("negative trace: invariants computed for -A")
    if normalized.is_nonnegative() and is_primitive(normalized):
        data = perron_data(normalized)
    else:
        data = dominant_eigendata(normalized)
    module = jacobian_module(data)
    order = coefficient_ring(module)
    module_form = form_invariants(gram(module))
    order_form = form_invariants(gram_of(order.basis))
    cf = cf_expand(fixed_point(monodromy))
    representative = nonneg_representative(monodromy)
    if representative.power is None:
        warnings.append("dilatation of the nonnegative representative not related to A")
    triple = handelman_triple(module)
    report = TorusReport(
        matrix=monodromy.matrix,
        sign=monodromy.sign,
        d=fixed_point(monodromy).d,
        conductor=order.conductor,
        delta=order_form.delta,
        module_delta=module_form.delta,
        sigma=order_form.sigma,
        alexander=tuple(alexander_polynomial(monodromy)),
        cf_preperiod=cf.preperiod,
        cf_period=canonical_period(cf.period),
        eigenvalue=eigenvalue_surd(monodromy),
        eigenvector=tuple(QuadraticSurd.from_element(v) for v in data.eigenvector),
        module_lattice=module.lattice,
        module_denominator=module.denominator,
        order_basis=tuple(QuadraticSurd.from_element(b) for b in order.basis),
        ideal_class=triple.ideal_class,
        representative=representative,
        warnings=tuple(warnings),
    )
    logger.info("invariants of %s: d=%d f=%d delta=%s sigma=%d period=%s",
                monodromy.matrix, report.d, report.conductor, report.delta,
                report.sigma, list(report.cf_period))
    return report
