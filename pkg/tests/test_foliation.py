"""Linear foliations: normalization, holonomy, density, duality and
classification."""

import random
from fractions import Fraction

import pytest

from leafspace.algebraic import AlgebraicReal
from leafspace.errors import DegenerateInputError
from leafspace.foliation import (LinearFoliation, classify, holonomy,
                                 is_dense, leaves_simply_connected,
                                 normalize_form, orthogonal_foliation,
                                 period_map)
from leafspace.tagged import TaggedReal, TranscendentalSymbol, coerce


def sqrt2():
    return TaggedReal.from_algebraic(AlgebraicReal((-2, 0, 1), 1, 2))


def cbrt2():
    return TaggedReal.from_algebraic(AlgebraicReal((-2, 0, 0, 1), 1, 2))


def cbrt3():
    return TaggedReal.from_algebraic(AlgebraicReal((-3, 0, 0, 1), 1, 2))


def sqrt2_flow():
    return LinearFoliation.from_form(2, [[sqrt2()]])


def t3_foliation():
    return LinearFoliation(3, [[1, 0, cbrt2()], [0, 1, cbrt3()]])


class TestConstruction:
    def test_dimension_mismatch(self):
        with pytest.raises(DegenerateInputError):
            LinearFoliation(3, [[1, 0]])

    def test_dependent_basis(self):
        with pytest.raises(DegenerateInputError):
            LinearFoliation(2, [[1, 1], [2, 2]])

    def test_contains(self):
        F = sqrt2_flow()
        assert F.contains((1, sqrt2()))
        assert F.contains((2, 2 * sqrt2()))
        assert not F.contains((1, 1))


class TestNormalization:
    def test_flow_slope(self):
        form = normalize_form(sqrt2_flow())
        assert form.permutation == (0, 1)
        assert form.beta == ((sqrt2(),),)

    def test_permuted_coordinates(self):
        # the first coordinate vanishes on V, so normalization permutes it out
        F = LinearFoliation(3, [[0, 1, sqrt2()]])
        form = normalize_form(F)
        assert form.permutation == (1, 0, 2)
        assert form.beta == ((coerce(0),), (sqrt2(),))


class TestHolonomy:
    def test_flow_generators(self):
        G = holonomy(sqrt2_flow())
        assert G.ambient_dim == 1
        assert G.rank == 2
        gens = [g[0] for g in G.generators]
        assert coerce(1) in gens and sqrt2() in gens

    def test_t3_rank(self):
        G = holonomy(t3_foliation())
        assert G.rank == 3

    def test_member(self):
        G = holonomy(sqrt2_flow())
        assert G.member((1 + 2 * sqrt2(),)) is not None
        assert G.member((TaggedReal.from_fraction(Fraction(1, 2)),)) is None

    def test_period_map_kills_tangent_space(self):
        for F in (sqrt2_flow(), t3_foliation()):
            phi = period_map(F)
            for v in F.tangent_basis:
                assert all(x.is_zero for x in phi(v))


class TestDensity:
    def test_irrational_flow_dense(self):
        assert is_dense(holonomy(sqrt2_flow()))

    def test_rational_direction_not_dense(self):
        assert not is_dense(holonomy(LinearFoliation(2, [[1, 0]])))

    def test_rational_slope_not_dense(self):
        F = LinearFoliation.from_form(2, [[Fraction(2, 3)]])
        assert not is_dense(holonomy(F))

    def test_t3_dense(self):
        assert is_dense(holonomy(t3_foliation()))


class TestDuality:
    def test_flow_dual(self):
        D = orthogonal_foliation(sqrt2_flow())
        assert D.leaf_dim == 1
        assert D.contains((sqrt2(), -1))

    def test_rational_dual(self):
        D = orthogonal_foliation(LinearFoliation(2, [[1, 0]]))
        assert D.contains((0, 1))

    def test_t3_dual_direction(self):
        D = orthogonal_foliation(t3_foliation())
        assert D.leaf_dim == 1
        assert D.contains((-cbrt2(), -cbrt3(), 1))

    def test_involution(self):
        for F in (sqrt2_flow(), t3_foliation(),
                  LinearFoliation(2, [[1, 0]])):
            DD = orthogonal_foliation(orthogonal_foliation(F))
            assert DD.same_subspace(F)

    def test_simply_connected(self):
        assert leaves_simply_connected(sqrt2_flow())
        assert leaves_simply_connected(t3_foliation())
        assert not leaves_simply_connected(LinearFoliation(2, [[1, 0]]))


class TestClassification:
    def test_t3_flags(self):
        flags = classify(t3_foliation())
        assert flags.dense is True
        assert flags.simply_connected_leaves is True
        assert flags.transcendent is False
        assert flags.non_quadratic is True

    def test_quadratic_flow_flags(self):
        flags = classify(sqrt2_flow())
        assert flags.dense is True
        assert flags.transcendent is False
        assert flags.non_quadratic is False

    def test_transcendent_flags(self):
        e = TranscendentalSymbol("e", "2.718281828459045")
        pi = TranscendentalSymbol("pi", "3.141592653589793")
        F = LinearFoliation.from_form(
            3, [[TaggedReal.from_symbol(e)], [TaggedReal.from_symbol(pi)]])
        flags = classify(F)
        assert flags.transcendent is True
        assert flags.non_quadratic is True

    def test_classification_invariant_under_basis_change(self):
        F = LinearFoliation(3, [[1, 0, sqrt2()], [0, 1, 1 + sqrt2()]])
        base = classify(F)
        rng = random.Random(13)
        for _ in range(5):
            a = rng.randint(-2, 2)
            b1, b2 = F.tangent_basis
            new_b1 = tuple(x + coerce(a) * y for x, y in zip(b1, b2))
            G = LinearFoliation(3, [new_b1, b2])
            assert G.same_subspace(F)
            assert classify(G) == base

    def test_classification_invariant_under_reordering(self):
        F = t3_foliation()
        base = classify(F)
        b1, b2 = F.tangent_basis
        G = LinearFoliation(3, [tuple(-x for x in b2), b1])
        assert G.same_subspace(F)
        assert classify(G) == base


def random_quadratic_foliation(rng):
    """Random foliation of T^2 or T^3 with rational or Z[sqrt2] entries."""
    d = rng.choice((2, 3))
    m = rng.randint(1, d - 1)
    while True:
        rows = []
        for _ in range(m):
            row = []
            for _ in range(d):
                a = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                b = rng.randint(-2, 2) if rng.random() < 0.5 else 0
                row.append(coerce(a) + sqrt2() * b)
            rows.append(row)
        try:
            return LinearFoliation(d, rows)
        except DegenerateInputError:
            continue


class TestDualityProperties:
    def test_random_sample(self):
        rng = random.Random(17)
        for _ in range(25):
            F = random_quadratic_foliation(rng)
            D = orthogonal_foliation(F)
            assert orthogonal_foliation(D).same_subspace(F)
            G = holonomy(F)
            assert (G.rank == F.ambient_dim) == is_dense(holonomy(D))
