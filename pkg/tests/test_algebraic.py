"""Exact algebraic arithmetic, checked against independent numeric and
symbolic oracles (mpmath at 50 digits, sympy resultants)."""

import random
from fractions import Fraction

import mpmath
import pytest
import sympy

from leafspace.algebraic import (AlgebraicReal, NumberField, primitive_element,
                                 set_degree_cap)
from leafspace.errors import DegreeCapError, ZeroDivisionLeafError

mpmath.mp.dps = 50


def sqrt2():
    return AlgebraicReal((-2, 0, 1), 1, 2)


def cbrt2():
    return AlgebraicReal((-2, 0, 0, 1), 1, 2)


def cbrt2_sq():
    return AlgebraicReal((-4, 0, 0, 1), 1, 2)


def golden():
    return AlgebraicReal((-1, -1, 1), 1, 2)


def mpf_frac(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def mp_value(a: AlgebraicReal):
    """50-digit enclosure midpoint from the independent mpmath root finder."""
    poly = list(reversed(a.minpoly))
    lo, hi = a.interval()
    return mpmath.findroot(lambda x: mpmath.polyval(poly, x),
                           mpf_frac((lo + hi) / 2))


def assert_close(a: AlgebraicReal, value, digits=40):
    a.refine_to(Fraction(1, 10 ** (digits + 2)))
    lo, hi = a.interval()
    assert abs(mpf_frac((lo + hi) / 2) - value) < mpmath.mpf(10) ** -digits


class TestSpecValues:
    def test_add_inverse_cancels(self):
        s = sqrt2()
        assert (s + (-s)).is_rational
        assert (s + (-s)).as_fraction() == 0

    def test_twice_sqrt2(self):
        r = sqrt2() + sqrt2()
        assert r.minpoly == (-8, 0, 1)
        lo, hi = r.interval()
        assert lo < Fraction(283, 100) < hi
        assert_close(r, 2 * mpmath.sqrt(2))

    def test_cbrt2_plus_square(self):
        r = cbrt2() + cbrt2_sq()
        assert r.minpoly == (-6, -6, 0, 1)
        assert_close(r, mpmath.cbrt(2) + mpmath.cbrt(4))

    def test_sqrt2_squared(self):
        r = sqrt2() * sqrt2()
        assert r.as_fraction() == 2

    def test_cuberoot_product(self):
        assert (cbrt2() * cbrt2_sq()).as_fraction() == 2

    def test_conjugate_product(self):
        one = (1 + sqrt2()) * (-1 + sqrt2())
        assert one.as_fraction() == 1

    def test_inverse_of_two(self):
        assert AlgebraicReal.from_fraction(2).inverse().as_fraction() == \
            Fraction(1, 2)

    def test_inverse_of_silver(self):
        assert (1 + sqrt2()).inverse() == -1 + sqrt2()

    def test_inverse_of_cbrt2_minus_one(self):
        assert (cbrt2() - 1).inverse() == 1 + cbrt2() + cbrt2_sq()

    def test_inverse_of_zero(self):
        with pytest.raises(ZeroDivisionLeafError):
            AlgebraicReal.from_fraction(0).inverse()


class TestNumericOracle:
    """Random arithmetic cross-checked against mpmath at 40+ digits."""

    POOL = [lambda: AlgebraicReal.from_fraction(Fraction(3, 7)),
            sqrt2, cbrt2, golden,
            lambda: AlgebraicReal((-3, 0, 1), 1, 2)]

    def test_random_sums_and_products(self):
        rng = random.Random(7)
        for _ in range(25):
            a = self.POOL[rng.randrange(len(self.POOL))]()
            b = self.POOL[rng.randrange(len(self.POOL))]()
            va, vb = mp_value(a), mp_value(b)
            assert_close(a + b, va + vb)
            assert_close(a * b, va * vb)

    def test_result_is_root_of_its_minpoly(self):
        rng = random.Random(11)
        for _ in range(15):
            a = self.POOL[rng.randrange(len(self.POOL))]()
            b = self.POOL[rng.randrange(len(self.POOL))]()
            r = a + b if rng.random() < 0.5 else a * b
            val = mp_value(r)
            residual = mpmath.polyval(list(reversed(r.minpoly)), val)
            assert abs(residual) < mpmath.mpf(10) ** -35


class TestResultantOracle:
    """The sum's minimal polynomial must divide the Sylvester resultant
    Res_y(p(x - y), q(y)) computed by sympy."""

    def test_sum_resultant_divisibility(self):
        x, y = sympy.symbols("x y")
        cases = [(sqrt2(), cbrt2()), (sqrt2(), golden()),
                 (cbrt2(), cbrt2_sq())]
        for a, b in cases:
            r = a + b
            p = sum(c * (x - y) ** i for i, c in enumerate(a.minpoly))
            q = sum(c * y ** i for i, c in enumerate(b.minpoly))
            res = sympy.Poly(sympy.resultant(p, q, y), x)
            mp = sympy.Poly(sum(c * x ** i for i, c in enumerate(r.minpoly)), x)
            quotient, remainder = sympy.div(res, mp, x)
            assert remainder == sympy.Poly(0, x)

    def test_product_resultant_divisibility(self):
        x, y = sympy.symbols("x y")
        for a, b in [(sqrt2(), cbrt2()), (golden(), cbrt2_sq())]:
            r = a * b
            deg_a = len(a.minpoly) - 1
            p = sympy.expand(
                sum(c * x ** i * y ** (deg_a - i)
                    for i, c in enumerate(a.minpoly)))
            q = sum(c * y ** i for i, c in enumerate(b.minpoly))
            res = sympy.Poly(sympy.resultant(p, q, y), x)
            mp = sympy.Poly(sum(c * x ** i for i, c in enumerate(r.minpoly)), x)
            _, remainder = sympy.div(res, mp, x)
            assert remainder == sympy.Poly(0, x)


class TestStructure:
    def test_inverse_roundtrip(self):
        for a in (sqrt2(), cbrt2(), golden(), 3 + cbrt2_sq()):
            assert (a * a.inverse()).as_fraction() == 1

    def test_powers(self):
        assert (sqrt2() ** 4).as_fraction() == 4
        assert (cbrt2() ** -3).as_fraction() == Fraction(1, 2)

    def test_comparisons(self):
        assert sqrt2() < golden() < cbrt2() + cbrt2_sq()
        assert sqrt2() == AlgebraicReal((-2, 0, 1), Fraction(7, 5), 2)

    def test_interval_validation(self):
        with pytest.raises(ValueError):
            AlgebraicReal((-2, 0, 1), -2, 2)  # two roots inside
        with pytest.raises(ValueError):
            AlgebraicReal((-4, 0, 1), 1, 3)  # reducible

    def test_degree_cap(self):
        set_degree_cap(4)
        try:
            with pytest.raises(DegreeCapError):
                cbrt2() + AlgebraicReal((-5, 0, 0, 1), 1, 2)
        finally:
            set_degree_cap(32)


class TestPrimitiveElement:
    def test_coordinates_reconstruct_inputs(self):
        xs = [sqrt2(), cbrt2()]
        theta, vecs = primitive_element(xs)
        F = NumberField(theta)
        for x, vec in zip(xs, vecs):
            assert F.to_algebraic(vec) == x

    def test_degree_multiplies(self):
        theta, _ = primitive_element([sqrt2(), cbrt2()])
        assert len(theta.minpoly) - 1 == 6

    def test_field_inverse(self):
        theta, vecs = primitive_element([sqrt2(), golden()])
        F = NumberField(theta)
        v = F.add(vecs[0], vecs[1])
        prod = F.mul(v, F.inv(v))
        assert F.to_algebraic(prod).as_fraction() == 1
