"""
Trace forms of modules: Gram matrix a_ij = Tr(l_i l_j), its determinant and
its signature via diagonalisation by symmetric congruence over Q.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from errors import ConsistencyError, DomainError, NotSquarefreeError
from exactnum import det_rational
from logger import get_logger
from numberfield import FieldElement, is_squarefree, quadratic_field, trace_matrix
from pfdata import JacobianModule, coefficient_ring, quadratic_order

logger = get_logger("traceform")

Matrix = Tuple[Tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class GramForm:
    n: int
    entries: Matrix
    provenance: Tuple[FieldElement, ...] = ()

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "GramForm":
        entries = tuple(tuple(Fraction(v) for v in r) for r in rows)
        n = len(entries)
        for i in range(n):
            if len(entries[i]) != n:
                raise DomainError("Gram matrix must be square")
            for j in range(i):
                if entries[i][j] != entries[j][i]:
                    raise DomainError("Gram matrix must be symmetric")
        return cls(n, entries)


@dataclass(frozen=True)
class FormInvariants:
    delta: Fraction
    sigma: int
    diagonal: Tuple[Fraction, ...]
    radical_dim: int
    full_diagonal: Tuple[Fraction, ...]
    transform: Matrix


def gram_of(elements: Sequence[FieldElement]) -> GramForm:
    rows = trace_matrix(elements)
    return GramForm(len(rows), tuple(tuple(r) for r in rows), tuple(elements))


def gram(m: JacobianModule) -> GramForm:
    return gram_of(m.generators)


def _add_multiple(s: List[List[Fraction]], t: List[List[Fraction]], src: int, dst: int, c: Fraction):
    """Basis change e_dst <- e_dst + c*e_src"""
    n = len(s)
    for k in range(n):
        s[dst][k] += c * s[src][k]
    for k in range(n):
        s[k][dst] += c * s[k][src]
    for k in range(n):
        t[k][dst] += c * t[k][src]


def _swap(s, t, i, j):
    if i == j:
        return
    s[i], s[j] = s[j], s[i]
    for row in s:
        row[i], row[j] = row[j], row[i]
    for row in t:
        row[i], row[j] = row[j], row[i]


def _diagonalize(entries: Matrix):
    n = len(entries)
    s = [list(r) for r in entries]
    t = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    k = 0
    while k < n:
        pivot = next((i for i in range(k, n) if s[i][i] != 0), None)
        if pivot is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if s[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # both diagonal entries vanish, so the new s[i][i] = 2*s[i][j]
            _add_multiple(s, t, j, i, Fraction(1))
            pivot = i
        _swap(s, t, pivot, k)
        for j in range(k + 1, n):
            if s[k][j] != 0:
                _add_multiple(s, t, k, j, -s[k][j] / s[k][k])
        k += 1
    return [s[i][i] for i in range(n)], t


def form_invariants(g: GramForm) -> FormInvariants:
    full, t = _diagonalize(g.entries)
    nonzero = tuple(v for v in full if v != 0)
    sigma = sum(1 for v in nonzero if v > 0) - sum(1 for v in nonzero if v < 0)
    delta = det_rational(g.entries) if g.n else Fraction(1)
    return FormInvariants(
        delta=delta,
        sigma=sigma,
        diagonal=nonzero,
        radical_dim=g.n - len(nonzero),
        full_diagonal=tuple(full),
        transform=tuple(tuple(r) for r in t),
    )


def verify_certificate(g: GramForm, inv: FormInvariants) -> bool:
    """T^T G T equals diag(full_diagonal) exactly"""
    n, t, a = g.n, inv.transform, g.entries
    for i in range(n):
        for j in range(n):
            value = sum(t[k][i] * a[k][l] * t[l][j] for k in range(n) for l in range(n))
            expected = inv.full_diagonal[i] if i == j else 0
            if value != expected:
                return False
    return True


@dataclass(frozen=True)
class ClosedForm:
    d: int
    f: int
    coefficients: Tuple[Fraction, Fraction, Fraction]
    invariants: FormInvariants

    def __str__(self):
        a, b, c = self.coefficients
        return f"{a}*x^2 + {b}*x*y + {c}*y^2"


def order_form_closed(d: int, f: int) -> ClosedForm:
    """
    Trace form of the order Z + f*omega*Z of Q(sqrt d):
    2x^2 + 2f xy + f^2 (d+1)/2 y^2 when d = 1 mod 4, else 2x^2 + 2 f^2 d y^2.
    The determinant is f^2 d or 4 f^2 d and the signature +2. The result is
    cross-checked against the coefficient ring computed from scratch.
    """
    if d <= 1 or not is_squarefree(d):
        raise NotSquarefreeError(f"d must be a squarefree integer > 1, got {d}")
    if f < 1:
        raise DomainError(f"conductor must be positive, got {f}")
    if d % 4 == 1:
        coefficients = (Fraction(2), Fraction(2 * f), Fraction(f * f * (d + 1), 2))
        delta = Fraction(f * f * d)
    else:
        coefficients = (Fraction(2), Fraction(0), Fraction(2 * f * f * d))
        delta = Fraction(4 * f * f * d)
    a, b, c = coefficients
    form = GramForm.from_rows([[a, b / 2], [b / 2, c]])
    invariants = form_invariants(form)
    if invariants.delta != delta or invariants.sigma != 2:
        raise ConsistencyError(f"closed form for d={d}, f={f} is not self-consistent")

    order = coefficient_ring(quadratic_order(quadratic_field(d), f))
    direct = form_invariants(gram_of(order.basis))
    if order.conductor != f or direct.delta != delta or direct.sigma != 2:
        raise ConsistencyError(
            f"closed form delta {delta} disagrees with direct computation {direct.delta}"
        )
    logger.debug("order form d=%d f=%d delta=%s", d, f, delta)
    return ClosedForm(d, f, coefficients, invariants)
