"""TaggedReal model: structural equality, arithmetic, certified signs, and
linear-relation detection (exact and heuristic routes)."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from leafspace.algebraic import AlgebraicReal
from leafspace.errors import ModelError, ZeroDivisionLeafError
from leafspace.relations import (integer_relation_heuristic, q_dependencies,
                                 q_rank)
from leafspace.tagged import (TaggedReal, TranscendentalSymbol, Undecided,
                              coerce, sign)

E = TranscendentalSymbol("e", "2.718281828459045235360287471352662497757")
PI = TranscendentalSymbol("pi", "3.141592653589793238462643383279502884197")


def sym(s):
    return TaggedReal.from_symbol(s)


def sqrt2():
    return TaggedReal.from_algebraic(AlgebraicReal((-2, 0, 1), 1, 2))


class TestArithmetic:
    def test_structural_equality(self):
        x = sym(E) * 2 + 1
        y = 1 + sym(E) + sym(E)
        assert x == y
        assert x != y + 1

    def test_product_collects_monomials(self):
        x = (sym(E) + 1) * (sym(E) - 1)
        assert x == sym(E) * sym(E) - 1

    def test_single_term_inverse(self):
        x = sqrt2() * sym(E)
        assert (x * x.inverse()).as_fraction() == 1

    def test_sum_inverse_rejected(self):
        with pytest.raises(ModelError):
            (sym(E) + 1).inverse()

    def test_zero_inverse_rejected(self):
        with pytest.raises(ZeroDivisionLeafError):
            TaggedReal.from_fraction(0).inverse()

    def test_negative_exponents(self):
        x = sym(E) ** -2 * sym(E) ** 3
        assert x == sym(E)


class TestSign:
    def test_zero(self):
        assert sign(TaggedReal.from_fraction(0)) == 0

    def test_algebraic_positive(self):
        assert sign(sqrt2() - 1) == 1

    def test_e_minus_decimal(self):
        assert sign(sym(E) - Fraction("2.718")) == 1

    def test_undecided_at_declared_precision(self):
        # the symbol is only known to its declared decimal places, so a
        # difference below that precision cannot be certified
        delta = sym(E) - Fraction(E.approx)
        verdict = sign(delta)
        assert isinstance(verdict, Undecided)

    def test_mixed_negative(self):
        assert sign(sym(E) - sym(PI)) == -1


class TestExactRelations:
    def test_independent_family(self):
        r2 = sqrt2()
        fam = [coerce(1), r2, sym(E), r2 * sym(E)]
        assert q_rank(fam) == 4

    def test_cuberoot_family(self):
        a = TaggedReal.from_algebraic(AlgebraicReal((-2, 0, 0, 1), 1, 2))
        assert q_rank([coerce(1), a, a * a]) == 3

    def test_relation_found(self):
        r2 = sqrt2()
        lat = q_dependencies([coerce(1), r2, 1 + r2])
        assert lat.rank == 2
        assert lat.dimension == 1
        (rel,) = lat.basis
        # c0 * 1 + c1 * sqrt2 + c2 * (1 + sqrt2) = 0
        total = coerce(rel[0]) + r2 * rel[1] + (1 + r2) * rel[2]
        assert total.is_zero

    def test_rationals_rank_one(self):
        assert q_rank([coerce(2), coerce(Fraction(1, 3)), coerce(-5)]) == 1


class TestHeuristicRelations:
    def test_golden_ratio_relation(self):
        phi = 1.618033988749894848204586834365638118
        rel = integer_relation_heuristic(["1", str(phi), str(phi * phi)])
        assert rel is not None
        assert rel.exactness == "heuristic"
        assert rel.coeffs in ((1, 1, -1), (1, -1, 1))

    def test_no_relation_for_noise(self):
        rel = integer_relation_heuristic(
            ["1", "1.4142135623730951", "2.718281828459045"],
            tol=Fraction(1, 10 ** 12), height_cap=50)
        assert rel is None


@settings(max_examples=60, deadline=None)
@given(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9))
def test_ring_laws(a, b, c):
    x = coerce(a) + sym(E) * b
    y = coerce(c) + sym(PI) * a
    z = sqrt2() * c
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x + TaggedReal.from_fraction(0) == x
    assert x * TaggedReal.from_fraction(1) == x
