"""Moebius action, continued fractions and GL(2, Z) equivalence with
reconstruction and exhaustive-search oracles."""

import random
from fractions import Fraction

import pytest

from leafspace.algebraic import AlgebraicReal
from leafspace.equivalence import (MoebiusCertificate, cf_expand,
                                   gl2z_equivalent, leaf_space_equivalent,
                                   moebius_apply, search_moebius_certificate,
                                   verify_certificate)
from leafspace.errors import DegenerateInputError
from leafspace.foliation import LinearFoliation
from leafspace.intmat import det_int
from leafspace.tagged import TaggedReal, coerce


def sqrt2():
    return TaggedReal.from_algebraic(AlgebraicReal((-2, 0, 1), 1, 2))


def sqrt3():
    return TaggedReal.from_algebraic(AlgebraicReal((-3, 0, 1), 1, 2))


def golden():
    return TaggedReal.from_algebraic(AlgebraicReal((-1, -1, 1), 1, 2))


def cbrt2():
    return TaggedReal.from_algebraic(AlgebraicReal((-2, 0, 0, 1), 1, 2))


def fold(quotients):
    """Value of a finite continued fraction, innermost term first."""
    v = Fraction(quotients[-1])
    for a in reversed(quotients[:-1]):
        v = a + 1 / v
    return v


class TestMoebius:
    def test_identity(self):
        v = (sqrt2(),)
        assert moebius_apply(((1, 0), (0, 1)), v) == v

    def test_spec_image(self):
        (w,) = moebius_apply(((1, 1), (1, 2)), (sqrt2(),))
        assert w == 3 - sqrt2()

    def test_group_action(self):
        rng = random.Random(31)
        v = (sqrt2(),)
        mats = [((1, 0), (1, 1)), ((0, 1), (1, 0)), ((1, 1), (1, 2)),
                ((2, 1), (1, 1))]
        for _ in range(20):
            A = mats[rng.randrange(len(mats))]
            B = mats[rng.randrange(len(mats))]
            AB = tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2))
                             for j in range(2)) for i in range(2))
            assert moebius_apply(AB, v) == \
                moebius_apply(B, moebius_apply(A, v)) or \
                moebius_apply(AB, v) == moebius_apply(A, moebius_apply(B, v))

    def test_non_unimodular_rejected(self):
        with pytest.raises(DegenerateInputError):
            moebius_apply(((2, 0), (0, 1)), (sqrt2(),))


class TestCertificates:
    def test_verified(self):
        c = MoebiusCertificate(((1, 1), (1, 2)), (sqrt2(),), (3 - sqrt2(),))
        assert verify_certificate(c)

    def test_wrong_matrix_rejected(self):
        c = MoebiusCertificate(((1, 0), (0, 1)), (sqrt2(),), (3 - sqrt2(),))
        assert not verify_certificate(c)

    def test_non_unimodular_rejected(self):
        c = MoebiusCertificate(((2, 0), (0, 1)), (sqrt2(),), (2 * sqrt2(),))
        assert not verify_certificate(c)


class TestContinuedFractions:
    def test_rational_example(self):
        cf = cf_expand(coerce(Fraction(22, 7)))
        assert cf.partial_quotients == (3, 7)
        assert cf.period is None
        assert cf.exactness == "exact"

    def test_rational_reconstruction(self):
        rng = random.Random(37)
        for _ in range(100):
            q = Fraction(rng.randint(-400, 400), rng.randint(1, 150))
            cf = cf_expand(coerce(q))
            assert fold(cf.partial_quotients) == q

    def test_sqrt2_periodic(self):
        cf = cf_expand(sqrt2())
        assert cf.partial_quotients == (1, 2)
        assert cf.period == (1, 1)
        assert [cf.quotient(i) for i in range(6)] == [1, 2, 2, 2, 2, 2]

    def test_golden_periodic(self):
        cf = cf_expand(golden())
        assert cf.partial_quotients == (1,)
        assert cf.period == (0, 1)

    def test_quadratic_convergents_approximate(self):
        for x in (sqrt2(), sqrt3(), golden(), 3 - sqrt2(),
                  coerce(5) * sqrt3() + Fraction(1, 3)):
            cf = cf_expand(x)
            fx = float(x)
            for k in range(1, 12):
                quots = [cf.quotient(i) for i in range(k)]
                conv = fold(quots)
                assert abs(fx - conv) < 1 / conv.denominator ** 2 + 1e-12

    def test_deterministic(self):
        assert cf_expand(sqrt3()) == cf_expand(sqrt3())

    def test_heuristic_flagged(self):
        from leafspace.tagged import TranscendentalSymbol
        e = TaggedReal.from_symbol(TranscendentalSymbol(
            "e", "2.718281828459045235360287471352662497757"))
        cf = cf_expand(e, max_terms=6)
        assert cf.exactness == "heuristic"
        assert cf.partial_quotients[:6] == (2, 1, 2, 1, 1, 4)


class TestGL2Z:
    def test_sqrt2_orbit(self):
        v = gl2z_equivalent(sqrt2(), 3 - sqrt2())
        assert v.status == "equivalent"
        assert v.certificate is not None
        assert verify_certificate(v.certificate)

    def test_field_invariant_separates(self):
        v = gl2z_equivalent(sqrt2(), golden())
        assert v.status == "not_equivalent"

    def test_exhaustive_search_confirms_separation(self):
        assert search_moebius_certificate((sqrt2(),), (golden(),),
                                          height=6) is None

    def test_rationals_single_orbit(self):
        v = gl2z_equivalent(coerce(Fraction(3, 4)), coerce(Fraction(-7, 2)))
        assert v.status == "equivalent"
        assert verify_certificate(v.certificate)

    def test_degree_separates(self):
        assert gl2z_equivalent(sqrt2(), cbrt2()).status == "not_equivalent"

    def test_same_field_different_orbit(self):
        v = gl2z_equivalent(sqrt2(), 3 * sqrt2())
        assert v.status == "not_equivalent"

    def test_random_orbit_elements(self):
        rng = random.Random(41)
        seeds = [sqrt2(), sqrt3(), golden()]
        for _ in range(12):
            x = seeds[rng.randrange(len(seeds))]
            while True:
                A = tuple(tuple(rng.randint(-3, 3) for _ in range(2))
                          for _ in range(2))
                if abs(det_int([list(r) for r in A])) == 1:
                    break
            try:
                (y,) = moebius_apply(A, (x,))
            except DegenerateInputError:
                continue
            v = gl2z_equivalent(x, y)
            assert v.status == "equivalent"
            assert verify_certificate(v.certificate)


class TestLeafSpaceEquivalence:
    def flow(self, slope):
        return LinearFoliation.from_form(2, [[slope]])

    def test_equivalent_flows(self):
        v = leaf_space_equivalent(self.flow(sqrt2()),
                                  self.flow(3 - sqrt2()))
        assert v.status == "equivalent"

    def test_inequivalent_flows(self):
        v = leaf_space_equivalent(self.flow(sqrt2()), self.flow(golden()))
        assert v.status == "not_equivalent"

    def test_identical(self):
        v = leaf_space_equivalent(self.flow(sqrt2()), self.flow(sqrt2()))
        assert v.status == "equivalent"

    def test_flag_separation(self):
        v = leaf_space_equivalent(self.flow(sqrt2()), self.flow(cbrt2()))
        assert v.status == "not_equivalent"

    def test_unimodular_image_of_t3(self):
        F = LinearFoliation(3, [[1, 0, sqrt2()], [0, 1, sqrt3()]])
        A = ((1, 1, 0), (0, 1, 0), (0, 0, 1))
        image_basis = [tuple(sum(coerce(A[i][j]) * v[j] for j in range(3))
                             for i in range(3)) for v in F.tangent_basis]
        G = LinearFoliation(3, image_basis)
        v = leaf_space_equivalent(F, G, height=2)
        assert v.status == "equivalent"
