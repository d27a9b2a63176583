"""
Perron-Frobenius data over number fields, Jacobian modules and their
coefficient rings, module similarity, and the numeric foliation formulas.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from sympy import Poly, Rational, symbols

from errors import (ConsistencyError, DimensionError, DomainError,
                    NotHyperbolicError, NotPrimitiveError, UsageError)
from exactnum import (IntMatrix, basis_vectors, charpoly, det_rational,
                      evaluate_matrix_polynomial, lattice_contains,
                      lattice_intersection, rational_lattice_basis)
from logger import get_logger
from numberfield import (FieldElement, NumberField, QuadraticSurd,
                         quadratic_data, to_fraction, trace_matrix)

logger = get_logger("pfdata")

_t = symbols("t")

# Rectangle refinements before a complex modulus is declared inseparable
DOMINANCE_REFINEMENTS = 8


@dataclass(frozen=True)
class PerronData:
    matrix: IntMatrix
    field: NumberField
    eigenvector: Tuple[FieldElement, ...]

    @property
    def eigenvalue(self) -> FieldElement:
        return self.field.gen

    @property
    def charpoly(self) -> List[int]:
        return charpoly(self.matrix)

    def ratio_vector(self) -> Tuple[FieldElement, ...]:
        """(v_2/v_1, ..., v_n/v_1); with v_1 = 1 this is the tail of v"""
        return tuple(v / self.eigenvector[0] for v in self.eigenvector[1:])


def is_primitive(a: IntMatrix) -> bool:
    """Some power A^k with k <= n^2 is strictly positive (Wielandt bound)"""
    if not a.is_square or not a.is_nonnegative():
        return False
    n = a.rows
    pattern = [[a[i, j] > 0 for j in range(n)] for i in range(n)]
    power = pattern
    for _ in range(n * n):
        if all(all(row) for row in power):
            return True
        power = [[any(power[i][k] and pattern[k][j] for k in range(n)) for j in range(n)]
                 for i in range(n)]
    return False


def _dominant_field(a: IntMatrix) -> NumberField:
    cp = charpoly(a)
    poly = Poly(cp, _t)
    roots = poly.intervals()
    if not roots:
        raise NotHyperbolicError(f"{a} has no real eigenvalue")
    (lo, hi), multiplicity = roots[-1]
    if multiplicity > 1:
        raise DomainError(f"dominant eigenvalue of {a} is not simple")
    _, factors = poly.factor_list()
    for factor, _ in factors:
        if factor.count_roots(lo, hi) == 1:
            coeffs = [int(c) for c in factor.all_coeffs()]
            if coeffs[0] < 0:
                coeffs = [-c for c in coeffs]
            if len(coeffs) == 2:
                raise NotHyperbolicError(
                    f"dominant eigenvalue {Fraction(-coeffs[1], coeffs[0])} of {a} is rational"
                )
            return NumberField(coeffs, (to_fraction(lo), to_fraction(hi)))
    raise ConsistencyError(f"no factor of {cp} holds the dominant root")


def _modulus_bounds(rectangle) -> Tuple[Fraction, Fraction]:
    """Rational bounds on |z|^2 over an isolating rectangle (lower-left, upper-right)"""
    u, v = (to_fraction(c) for c in rectangle[0].as_real_imag())
    s, w = (to_fraction(c) for c in rectangle[1].as_real_imag())

    def nearest(a, b):
        return Fraction(0) if a <= 0 <= b else min(abs(a), abs(b))

    lower = nearest(u, s) ** 2 + nearest(v, w) ** 2
    upper = max(u * u, s * s) + max(v * v, w * w)
    return lower, upper


def _rational(x: Fraction) -> Rational:
    return Rational(x.numerator, x.denominator)


def _no_real_root_at_or_below_minus(field: NumberField, cp: Sequence[int]) -> bool:
    """No real root r of cp with r <= -lambda, decided with Sturm counts on cp(-t)"""
    n = len(cp) - 1
    mirrored = Poly([c * (-1) ** (n - i) for i, c in enumerate(cp)], _t)
    if mirrored.rem(field._sympy_poly).is_zero:
        return False
    steps = 16
    while True:
        lo, hi = field.root_enclosure(steps)
        if mirrored.count_roots(_rational(lo), _rational(hi)) == 0:
            return mirrored.count_roots(inf=_rational(lo)) == 0
        steps *= 2


def _complex_roots_inside(field: NumberField, factor: Poly) -> Optional[bool]:
    """True when every non-real root of factor has modulus below lambda, None if undecided"""
    for k in range(DOMINANCE_REFINEMENTS):
        bits = 8 << k
        lo, hi = field.root_enclosure(bits + 8)
        floor_sq = lo * lo if lo > 0 else Fraction(0)
        _, rectangles = factor.intervals(all=True, eps=Rational(1, 2 ** bits))
        undecided = False
        for rectangle, _ in rectangles:
            lower, upper = _modulus_bounds(rectangle)
            if lower >= hi * hi:
                return False
            if upper >= floor_sq:
                undecided = True
        if not undecided:
            return True
    return None


def _is_dominant(field: NumberField, cp: Sequence[int]) -> bool:
    """
    Exact check that every other eigenvalue has modulus below the embedded root.

    Real roots are compared with -lambda through Sturm counts. Non-real roots
    are enclosed in shrinking rectangles until their moduli separate from
    lambda; a modulus that never separates counts as not dominant.
    """
    if field.gen.sign() <= 0:
        return False
    poly = Poly(list(cp), _t)
    dominant = _no_real_root_at_or_below_minus(field, cp)
    if dominant:
        _, factors = poly.factor_list()
        for factor, _ in factors:
            if factor.degree() < 2:
                continue
            verdict = _complex_roots_inside(field, factor)
            if verdict is None:
                logger.warning("moduli of the complex roots of %s did not separate from the dominant root",
                               factor.as_expr())
            if not verdict:
                dominant = False
                break
    value = field.gen.to_float()
    roots = np.roots([float(c) for c in cp])
    if dominant != (sum(1 for r in roots if abs(r) >= value * (1 - 1e-9)) == 1):
        logger.warning("floating eigenvalues of %s disagree with the exact dominance verdict %s",
                       list(cp), dominant)
    return dominant


def _kernel_vector(rows: List[List[FieldElement]], field: NumberField) -> List[FieldElement]:
    """The kernel vector of a corank-one matrix over K, by exact elimination"""
    a = [list(r) for r in rows]
    n_rows, n_cols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, n_rows) if not a[i][c].is_zero()), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = a[r][c].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and not a[i][c].is_zero():
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n_cols) if c not in pivots]
    if len(free) != 1:
        raise DomainError(f"eigenspace has dimension {len(free)}, expected 1")
    v = [field.zero] * n_cols
    v[free[0]] = field.one
    for row, c in enumerate(pivots):
        v[c] = -a[row][free[0]]
    return v


def dominant_eigendata(a: IntMatrix) -> PerronData:
    """
    Exact eigenvector of the largest real eigenvalue of any integer matrix
    whose dominant eigenvalue is real, simple and irrational.

    The eigenvector is normalised to v_1 = 1; no positivity is required.
    """
    if not a.is_square:
        raise DimensionError(f"square matrix required, got {a.rows}x{a.cols}")
    cp = charpoly(a)
    if any(evaluate_matrix_polynomial(cp, a).entries):
        raise ConsistencyError(f"Cayley-Hamilton check failed for {a}")
    field = _dominant_field(a)
    if not _is_dominant(field, cp):
        raise DomainError(f"largest real eigenvalue of {a} is not dominant")
    lam = field.gen
    rows = [[field.from_rational(a[i, j]) - (lam if i == j else 0) for j in range(a.cols)]
            for i in range(a.rows)]
    v = _kernel_vector(rows, field)
    if v[0].is_zero():
        raise DomainError(f"dominant eigenvector of {a} has a zero first coordinate")
    v = [x / v[0] for x in v]
    if tuple(field.zero + x for x in a.apply(v)) != tuple(lam * x for x in v):
        raise ConsistencyError(f"A*v != lambda*v for {a}")
    logger.debug("eigenvector of %s over %r verified", a, field)
    return PerronData(a, field, tuple(v))


def perron_data(a: IntMatrix) -> PerronData:
    """Perron-Frobenius root and positive eigenvector of a primitive matrix"""
    if not a.is_square:
        raise DimensionError(f"square matrix required, got {a.rows}x{a.cols}")
    if not a.is_nonnegative() or not is_primitive(a):
        raise NotPrimitiveError(f"{a} is not a primitive nonnegative matrix")
    data = dominant_eigendata(a)
    if any(x.sign() <= 0 for x in data.eigenvector):
        raise ConsistencyError(f"Perron eigenvector of {a} is not positive")
    return data


# ----- Jacobian modules -----

@dataclass(frozen=True)
class JacobianModule:
    field: NumberField
    generators: Tuple[FieldElement, ...]
    lattice: IntMatrix
    denominator: int

    @property
    def rank(self) -> int:
        return self.lattice.cols

    def basis(self) -> Tuple[FieldElement, ...]:
        return tuple(self.field.element(v) for v in basis_vectors(self.lattice, self.denominator))

    def contains(self, x: FieldElement) -> bool:
        scaled = [c * self.denominator for c in x.coords]
        if any(c.denominator != 1 for c in scaled):
            return False
        return lattice_contains(self.lattice, [int(c) for c in scaled])

    def same_lattice(self, other: "JacobianModule") -> bool:
        return (self.field == other.field and self.lattice == other.lattice
                and self.denominator == other.denominator)

    @property
    def scale(self) -> Fraction:
        """Content of the lattice; the module is scale times its primitive lattice"""
        content = math.gcd(*self.lattice.entries)
        return Fraction(content, self.denominator)

    @property
    def primitive_lattice(self) -> IntMatrix:
        content = math.gcd(*self.lattice.entries)
        return IntMatrix(self.lattice.rows, self.lattice.cols,
                         tuple(v // content for v in self.lattice.entries))

    def scaled(self, mu: FieldElement) -> "JacobianModule":
        return jacobian_from_periods(self.field, [mu * g for g in self.generators])


def jacobian_from_periods(field: NumberField, periods: Sequence[FieldElement]) -> JacobianModule:
    if not periods:
        raise UsageError("at least one period is required")
    for p in periods:
        if p.field != field:
            raise UsageError("periods belong to different number fields")
    h, d = rational_lattice_basis([p.coords for p in periods])
    return JacobianModule(field, tuple(periods), h, d)


def jacobian_module(data: PerronData) -> JacobianModule:
    return jacobian_from_periods(data.field, data.eigenvector)


# ----- coefficient rings -----

@dataclass(frozen=True)
class OrderDescription:
    field: NumberField
    basis: Tuple[FieldElement, ...]
    conductor: Optional[int]
    is_ring: bool
    lattice: IntMatrix
    denominator: int


def fundamental_discriminant(d: int) -> int:
    return d if d % 4 == 1 else 4 * d


def quadratic_omega(field: NumberField) -> Tuple[int, FieldElement]:
    """(d, omega) with O_K = Z + omega Z"""
    info = quadratic_data(field)
    if info.d % 4 == 1:
        return info.d, (info.sqrt_d + 1) / 2
    return info.d, info.sqrt_d


def _lattice_of(elements: Sequence[FieldElement]):
    return rational_lattice_basis([e.coords for e in elements])


def coefficient_ring(m: JacobianModule) -> OrderDescription:
    """Lambda = {alpha : alpha*m in m}, the intersection of b^-1 m over a basis b"""
    field = m.field
    if m.rank != field.degree:
        raise DomainError(f"module has rank {m.rank}, the field has degree {field.degree}")
    basis = m.basis()
    quotients = [[(b / c).coords for b in basis] for c in basis]
    ring_basis = lattice_intersection(quotients)
    h, d = rational_lattice_basis(ring_basis)
    elements = tuple(field.element(v) for v in basis_vectors(h, d))

    def member(x: FieldElement) -> bool:
        scaled = [c * d for c in x.coords]
        return all(c.denominator == 1 for c in scaled) and lattice_contains(h, [int(c) for c in scaled])

    if not member(field.one):
        raise ConsistencyError("1 is not in the coefficient ring")
    for x in elements:
        for b in basis:
            if not m.contains(x * b):
                raise ConsistencyError("coefficient ring does not preserve the module")
        for y in elements:
            if not member(x * y):
                raise ConsistencyError("coefficient ring is not closed under products")

    conductor = None
    if field.degree == 2:
        conductor = _quadratic_conductor(field, elements, h, d)
        # Hermite basis in the coordinates (1, omega) of the maximal order
        elements = (field.one, quadratic_omega(field)[1] * conductor)
    logger.debug("coefficient ring of rank %d, conductor %s", len(elements), conductor)
    return OrderDescription(field, elements, conductor, True, h, d)


def _quadratic_conductor(field, elements, h, d) -> int:
    disc = det_rational(trace_matrix(elements))
    d_sq, omega = quadratic_omega(field)
    ratio = disc / fundamental_discriminant(d_sq)
    f = math.isqrt(ratio.numerator) if ratio.denominator == 1 and ratio > 0 else 0
    if f == 0 or f * f != ratio:
        raise ConsistencyError(f"discriminant {disc} is not f^2 times the field discriminant")
    expected = _lattice_of([field.one, omega * f])
    if expected != (h, d):
        raise ConsistencyError(f"coefficient ring is not Z + {f}*omega*Z")
    return f


def quadratic_order(field: NumberField, f: int) -> JacobianModule:
    """Lambda_f = Z + f*omega*Z as a module"""
    if f < 1:
        raise DomainError(f"conductor must be positive, got {f}")
    _, omega = quadratic_omega(field)
    return jacobian_from_periods(field, [field.one, omega * f])


# ----- similarity and Handelman triples -----

class Similarity(str, Enum):
    SIMILAR = "similar"
    DISTINCT = "distinct"
    UNSUPPORTED = "unsupported"


def basis_ratio(m: JacobianModule) -> QuadraticSurd:
    """theta with m = b_1 (Z + theta Z) for a rank-2 quadratic module"""
    b1, b2 = m.basis()
    return QuadraticSurd.from_element(b2 / b1)


def module_similar(m1: JacobianModule, m2: JacobianModule) -> Similarity:
    if m1.field != m2.field:
        raise UsageError("modules belong to different number fields")
    if m1.field.degree != 2:
        return Similarity.UNSUPPORTED
    if m1.rank != m2.rank:
        return Similarity.DISTINCT
    if m1.rank == 1 or m1.same_lattice(m2):
        return Similarity.SIMILAR
    from torusbundle import canonical_period, cf_expand

    p1 = canonical_period(cf_expand(basis_ratio(m1)).period)
    p2 = canonical_period(cf_expand(basis_ratio(m2)).period)
    logger.debug("module periods %s and %s", p1, p2)
    return Similarity.SIMILAR if p1 == p2 else Similarity.DISTINCT


@dataclass(frozen=True)
class HandelmanTriple:
    order: OrderDescription
    ideal_class: QuadraticSurd
    field: NumberField


def handelman_triple(m: JacobianModule) -> HandelmanTriple:
    """(Lambda, [I], K); [I] is the reduced surd of the basis ratio"""
    if m.field.degree != 2:
        raise DomainError("ideal classes are computed for quadratic fields only")
    from torusbundle import canonical_period, cf_expand, periodic_value

    order = coefficient_ring(m)
    period = canonical_period(cf_expand(basis_ratio(m)).period)
    return HandelmanTriple(order, periodic_value(period), m.field)


# ----- numeric foliation formulas -----

def _normalised_permutation(perm: Sequence[int]) -> List[int]:
    perm = [int(p) for p in perm]
    if perm and min(perm) == 1:
        perm = [p - 1 for p in perm]
    if sorted(perm) != list(range(len(perm))):
        raise DomainError(f"{perm} is not a permutation")
    return perm


def cycle_count(perm: Sequence[int]) -> int:
    perm = _normalised_permutation(perm)
    seen = [False] * len(perm)
    cycles = 0
    for start in range(len(perm)):
        if not seen[start]:
            cycles += 1
            i = start
            while not seen[i]:
                seen[i] = True
                i = perm[i]
    return cycles


def zippered_genus(perm: Sequence[int]) -> Tuple[int, int]:
    """(g, N): genus (n - N + 1)/2 and the number N of cycles of the permutation"""
    n = len(perm)
    cycles = cycle_count(perm)
    doubled = n - cycles + 1
    if doubled % 2:
        raise DomainError(f"permutation gives a non-integral genus {doubled}/2")
    return doubled // 2, cycles


def index_check(orders: Sequence[int], genus: int) -> bool:
    """Index theorem: sum k_i/2 == 2g - 2"""
    return Fraction(sum(orders), 2) == 2 * genus - 2


def riemann_hurwitz(genus: int, ramified: int) -> int:
    """Genus of the double cover ramified over an even number of points"""
    if genus < 0 or ramified < 0:
        raise DomainError("genus and ramification count must be nonnegative")
    if ramified % 2:
        raise DomainError(f"ramification count must be even, got {ramified}")
    return 2 * genus + ramified // 2 - 1


def relative_homology_rank(genus: int, singular_count: int) -> int:
    """Number of independent periods: rank of H_1(X, Sing; Z)"""
    return 2 * genus + singular_count - 1


def covering_flow_orders(orders: Sequence[int], genus: int) -> Tuple[List[int], int]:
    """Singularity orders of the covering flow and the genus of the cover"""
    odd = [k for k in orders if k % 2]
    even = [k for k in orders if k % 2 == 0]
    lifted = sorted([k for k in even for _ in range(2)] + [2 * (k + 1) for k in odd])
    return lifted, riemann_hurwitz(genus, len(odd))


FORMULAS = {
    "zippered_genus": zippered_genus,
    "index_check": index_check,
    "riemann_hurwitz": riemann_hurwitz,
    "relative_homology_rank": relative_homology_rank,
    "covering_flow": covering_flow_orders,
}


def foliation_formulas(kind: str, *args):
    if kind not in FORMULAS:
        raise UsageError(f"unknown formula {kind!r}; expected one of {sorted(FORMULAS)}")
    return FORMULAS[kind](*args)


def float_eigenvector(a: IntMatrix) -> np.ndarray:
    """Floating dominant eigenvector normalised to first coordinate 1"""
    values, vectors = np.linalg.eig(np.array(a.to_rows(), dtype=float))
    k = int(np.argmax(values.real))
    v = vectors[:, k].real
    return v / v[0]
