#!/usr/bin/env python3
"""
Torus bundles: continued fractions of quadratic surds, the method of
periods, nonnegative representatives and the invariant report.

Usage:
    pytest test_torusbundle.py
"""

import random
import sys
from fractions import Fraction

import pytest

from errors import DimensionError, DomainError, NotHyperbolicError
from exactnum import IntMatrix, det_exact
from numberfield import QuadraticSurd
from torusbundle import (TorusMonodromy, Verdict, alexander_polynomial,
                         bundle_invariants, canonical_period, cf_expand,
                         conjugacy_test, cyclically_equivalent, eigenvalue_surd,
                         fixed_point, nonneg_representative, period_product,
                         periodic_value)

# (surd, preperiod, period)
CF_CASES = [
    (QuadraticSurd(2, 1, 1), (), (2,)),
    (QuadraticSurd(2, Fraction(1, 2), Fraction(1, 2)), (), (1, 4)),
    (QuadraticSurd(3, 0, 1), (1,), (1, 2)),
    (QuadraticSurd(2, -1, 1), (0,), (2,)),
    (QuadraticSurd(5, Fraction(1, 2), Fraction(1, 2)), (), (1,)),
    (QuadraticSurd(7, 0, 1), (2,), (1, 1, 1, 4)),
    (QuadraticSurd(2, 0, -1), (-2, 1, 1), (2,)),
]

# (matrix, d, conductor, delta, canonical CF period)
GOLDEN_BUNDLES = [
    ([[5, 2], [2, 1]], 2, 1, 8, (2,)),
    ([[5, 1], [4, 1]], 2, 2, 32, (1, 4)),
    ([[2, 1], [1, 1]], 5, 1, 5, (1,)),
]


def _random_sl2(rng):
    t = IntMatrix.identity(2)
    for _ in range(rng.randint(1, 4)):
        k = rng.choice([-2, -1, 1, 2])
        step = IntMatrix(2, 2, (1, k, 0, 1)) if rng.random() < 0.5 else IntMatrix(2, 2, (1, 0, k, 1))
        t = t @ step
    return t


def _inverse_sl2(t: IntMatrix) -> IntMatrix:
    a, b, c, d = t.entries
    return IntMatrix(2, 2, (d, -b, -c, a))


@pytest.mark.parametrize("surd,preperiod,period", CF_CASES)
def test_cf_expand(surd, preperiod, period):
    cf = cf_expand(surd)
    assert cf.preperiod == preperiod
    assert cf.period == period
    assert not cf.terminating


def test_rational_cf_terminates():
    cf = cf_expand(QuadraticSurd(2, Fraction(7, 3)))
    assert cf.terminating
    assert cf.preperiod == (2, 3)
    assert cf.convergents(1) == [Fraction(2), Fraction(7, 3)]


def test_convergents_of_sqrt2():
    cf = cf_expand(QuadraticSurd(2, 0, 1))
    assert cf.convergents(3) == [Fraction(1), Fraction(3, 2), Fraction(7, 5), Fraction(17, 12)]
    assert cf.digit(10) == 2


@pytest.mark.parametrize("surd", [case[0] for case in CF_CASES])
def test_convergents_approximate_within_the_classical_bound(surd):
    cf = cf_expand(surd)
    convergents = cf.convergents(21)
    for k in range(21):
        c, q, q_next = convergents[k], convergents[k].denominator, convergents[k + 1].denominator
        error = surd - c
        assert not error.is_rational()
        assert error.sign() * error < Fraction(1, q * q_next)
        # convergents alternate around the surd
        assert error.sign() == (-1) ** k


def test_periods_and_products():
    assert canonical_period((4, 1)) == (1, 4)
    assert cyclically_equivalent((1, 1, 4, 1), (1, 4, 1, 1))
    assert not cyclically_equivalent((1, 4), (2,))
    assert period_product((1, 4)) == IntMatrix.from_rows([[5, 1], [4, 1]])
    assert periodic_value((1, 4)) == QuadraticSurd(2, Fraction(1, 2), Fraction(1, 2))
    assert periodic_value((2,)) == QuadraticSurd(2, 1, 1)


def test_monodromy_validation():
    with pytest.raises(DimensionError):
        TorusMonodromy(IntMatrix.identity(3))
    with pytest.raises(DomainError):
        TorusMonodromy.from_entries(2, 1, 1, 2)
    parabolic = TorusMonodromy.from_entries(1, 1, 0, 1)
    assert not parabolic.hyperbolic
    with pytest.raises(NotHyperbolicError):
        fixed_point(parabolic)


def test_fixed_points_and_dilatation():
    a = TorusMonodromy.from_entries(5, 2, 2, 1)
    assert fixed_point(a) == QuadraticSurd(2, 1, 1)
    assert fixed_point(TorusMonodromy.from_entries(5, 1, 4, 1)) == QuadraticSurd(2, Fraction(1, 2), Fraction(1, 2))
    assert eigenvalue_surd(a) == QuadraticSurd(2, 3, 2)
    assert alexander_polynomial(TorusMonodromy.from_entries(2, 1, 1, 1)) == [1, -3, 1]


def test_alexander_does_not_separate_the_golden_pair():
    a = TorusMonodromy.from_entries(5, 2, 2, 1)
    b = TorusMonodromy.from_entries(5, 1, 4, 1)
    assert alexander_polynomial(a) == alexander_polynomial(b)
    result = conjugacy_test(a, b)
    assert result.verdict == Verdict.DISTINCT_BY_PERIODS
    assert result.periods == ((2,), (1, 4))


def test_conjugacy_certificate():
    a = TorusMonodromy.from_entries(5, 2, 2, 1)
    b = TorusMonodromy.from_entries(7, -4, 2, -1)
    result = conjugacy_test(a, b)
    assert result.verdict == Verdict.CONJUGATE
    t = result.certificate
    assert det_exact(t) == 1
    assert t @ a.matrix == b.matrix @ t


@pytest.mark.parametrize("rows", [[[5, 2], [2, 1]], [[5, 1], [4, 1]], [[2, 1], [1, 1]], [[3, 1], [2, 1]]])
def test_conjugates_are_recognised_with_a_certificate(rows):
    rng = random.Random(sum(sum(r) for r in rows))
    a = TorusMonodromy(IntMatrix.from_rows(rows))
    for _ in range(8):
        t = _random_sl2(rng)
        b = TorusMonodromy(t @ a.matrix @ _inverse_sl2(t))
        result = conjugacy_test(a, b, bound=200)
        assert result.verdict == Verdict.CONJUGATE
        cert = result.certificate
        assert det_exact(cert) == 1
        assert cert @ a.matrix == b.matrix @ cert
        assert conjugacy_test(b, a, bound=200).verdict == Verdict.CONJUGATE


def test_conjugacy_shortcuts():
    a = TorusMonodromy.from_entries(5, 2, 2, 1)
    assert conjugacy_test(a, a).certificate == IntMatrix.identity(2)
    other = TorusMonodromy.from_entries(2, 1, 1, 1)
    assert conjugacy_test(a, other).verdict == Verdict.DISTINCT_BY_INVARIANTS


@pytest.mark.parametrize("rows", [[[5, 2], [2, 1]], [[5, 1], [4, 1]], [[2, 1], [1, 1]]])
def test_nonneg_representative_of_nonneg_matrices(rows):
    a = TorusMonodromy(IntMatrix.from_rows(rows))
    rep = nonneg_representative(a)
    assert rep.matrix == a.matrix
    assert rep.power == 1
    assert rep.sign == 1


def test_nonneg_representative_of_a_conjugate():
    rep = nonneg_representative(TorusMonodromy.from_entries(7, -4, 2, -1))
    assert rep.matrix.is_nonnegative()
    assert rep.matrix == IntMatrix.from_rows([[5, 2], [2, 1]])
    assert rep.power == 1


@pytest.mark.parametrize("rows,d,conductor,delta,period", GOLDEN_BUNDLES)
def test_bundle_invariants(rows, d, conductor, delta, period):
    report = bundle_invariants(TorusMonodromy(IntMatrix.from_rows(rows)))
    assert report.d == d
    assert report.conductor == conductor
    assert report.delta == delta
    assert report.sigma == 2
    assert report.cf_period == period
    assert report.warnings == ()


@pytest.mark.parametrize("rows,basis", [
    ([[5, 2], [2, 1]], (QuadraticSurd(2, 1), QuadraticSurd(2, 0, 1))),
    ([[5, 1], [4, 1]], (QuadraticSurd(2, 1), QuadraticSurd(2, 0, 2))),
    ([[2, 1], [1, 1]], (QuadraticSurd(5, 1), QuadraticSurd(5, Fraction(1, 2), Fraction(1, 2)))),
])
def test_order_basis_is_one_and_f_omega(rows, basis):
    assert bundle_invariants(TorusMonodromy(IntMatrix.from_rows(rows))).order_basis == basis


def test_negative_trace_is_normalised():
    report = bundle_invariants(TorusMonodromy.from_entries(-5, -2, -2, -1))
    assert report.sign == -1
    assert report.delta == 8
    assert report.cf_period == (2,)
    assert report.alexander == (1, 6, 1)
    assert any("negative trace" in w for w in report.warnings)


def test_invariants_survive_conjugation():
    rng = random.Random(29)
    for rows in ([[5, 2], [2, 1]], [[5, 1], [4, 1]]):
        a = IntMatrix.from_rows(rows)
        base = bundle_invariants(TorusMonodromy(a))
        for _ in range(50):
            t = _random_sl2(rng)
            conjugate = t @ a @ _inverse_sl2(t)
            report = bundle_invariants(TorusMonodromy(conjugate))
            assert (report.d, report.conductor, report.delta, report.sigma) == \
                (base.d, base.conductor, base.delta, base.sigma)
            assert report.alexander == base.alexander
            assert report.cf_period == base.cf_period
            assert report.representative.matrix == base.representative.matrix
            assert report.ideal_class == base.ideal_class


if __name__ == "__main__":
    sys.exit(pytest.main([__file__]))
