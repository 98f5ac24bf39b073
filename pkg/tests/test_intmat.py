"""Integer matrix normal forms, kernels and lattices, with brute-force and
determinant-minor oracles."""

import random
from fractions import Fraction
from itertools import combinations

from leafspace.intmat import (det_int, hnf, identity, integer_kernel, is_hnf,
                              is_unimodular, lattice_basis, lattice_intersect,
                              lattice_member, lattice_solve, matmul,
                              preimage_lattice, rational_kernel, rational_rank,
                              snf, solve_rational, transpose)


def in_lattice(v, rows):
    """Membership of v in the lattice spanned by independent row vectors."""
    return lattice_member(v, transpose(rows)) is not None


def random_matrix(rng, rows, cols, bound=3):
    return [[rng.randint(-bound, bound) for _ in range(cols)]
            for _ in range(rows)]


def frac_det(M):
    """Independent determinant: fraction-free Laplace expansion."""
    n = len(M)
    if n == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * frac_det(
        [row[:j] + row[j + 1:] for row in M[1:]]) for j in range(n))


def minor_gcd(M, k):
    """gcd of all k x k minors; 0 if all vanish."""
    from math import gcd
    rows, cols = len(M), len(M[0])
    g = 0
    for ri in combinations(range(rows), k):
        for ci in combinations(range(cols), k):
            sub = [[M[i][j] for j in ci] for i in ri]
            g = gcd(g, abs(frac_det(sub)))
    return g


class TestDeterminant:
    def test_against_laplace(self):
        rng = random.Random(1)
        for _ in range(200):
            n = rng.choice((1, 2, 3, 4))
            M = random_matrix(rng, n, n)
            assert det_int(M) == frac_det(M)


class TestHNF:
    def test_random_matrices(self):
        rng = random.Random(2)
        for _ in range(400):
            n = rng.choice((2, 3))
            M = random_matrix(rng, n, rng.choice((2, 3)))
            H, U = hnf(M)
            assert is_unimodular(U)
            assert matmul(U, M) == H
            assert is_hnf(H)

    def test_canonical_under_row_equivalence(self):
        """Two row-equivalent matrices must reach the same HNF."""
        rng = random.Random(3)
        for _ in range(150):
            M = random_matrix(rng, 3, 3)
            H1, _ = hnf(M)
            # random unimodular transform: product of elementary operations
            W = identity(3)
            for _ in range(6):
                i, k = rng.sample(range(3), 2)
                q = rng.randint(-2, 2)
                for j in range(3):
                    W[i][j] += q * W[k][j]
            assert is_unimodular(W)
            H2, _ = hnf(matmul(W, M))
            assert H1 == H2

    def test_idempotent(self):
        rng = random.Random(4)
        for _ in range(50):
            H, _ = hnf(random_matrix(rng, 3, 3))
            H2, _ = hnf(H)
            assert H2 == H


class TestSNF:
    def test_minor_gcd_oracle(self):
        """d1 * ... * dk equals the gcd of all k x k minors."""
        rng = random.Random(5)
        for _ in range(200):
            n = rng.choice((2, 3))
            M = random_matrix(rng, n, rng.choice((2, 3)))
            S, U, V = snf(M)
            assert is_unimodular(U) and is_unimodular(V)
            assert matmul(matmul(U, M), V) == S
            diag = [S[i][i] for i in range(min(len(S), len(S[0])))]
            for i in range(len(diag) - 1):
                assert diag[i] >= 0
                if diag[i + 1] != 0:
                    assert diag[i] != 0 and diag[i + 1] % diag[i] == 0
            prod = 1
            for k, d in enumerate(diag, start=1):
                prod *= d
                assert prod == minor_gcd(M, k)


class TestKernels:
    def test_integer_kernel_annihilates(self):
        rng = random.Random(6)
        for _ in range(150):
            M = random_matrix(rng, rng.choice((1, 2, 3)), rng.choice((2, 3, 4)))
            ker = integer_kernel(M)
            for v in ker:
                assert all(sum(M[i][j] * v[j] for j in range(len(v))) == 0
                           for i in range(len(M)))
            assert len(ker) == len(M[0]) - rational_rank(M)

    def test_integer_kernel_saturated(self):
        """Any rational kernel vector scaled to integers lies in the integer
        kernel lattice."""
        rng = random.Random(7)
        for _ in range(80):
            M = random_matrix(rng, 2, 4)
            ker = lattice_basis(integer_kernel(M))
            for v in rational_kernel(M):
                den = 1
                for x in v:
                    den = den * x.denominator // __import__(
                        "math").gcd(den, x.denominator)
                w = [int(x * den) for x in v]
                assert not any(w) or in_lattice(w, ker)


class TestLattices:
    def test_lattice_solve(self):
        G = [[2, 0], [0, 3], [1, 1]]
        x = lattice_solve(G, [5, 7])
        assert x is not None
        assert [sum(x[i] * G[i][j] for i in range(3)) for j in range(2)] == \
            [5, 7]
        assert lattice_solve([[2, 0], [0, 2]], [1, 0]) is None

    def test_intersection_membership(self):
        rng = random.Random(8)
        for _ in range(60):
            A = lattice_basis(random_matrix(rng, 2, 3))
            B = lattice_basis(random_matrix(rng, 2, 3))
            if not A or not B:
                continue
            C = lattice_intersect(A, B)
            for v in C:
                assert lattice_solve(A, v) is not None
                assert lattice_solve(B, v) is not None

    def test_preimage(self):
        rng = random.Random(9)
        for _ in range(60):
            T = random_matrix(rng, 2, 2)
            G = lattice_basis([[2, 0], [0, 3]])
            P = preimage_lattice(T, G)
            for v in P:
                img = [sum(T[i][j] * v[j] for j in range(2)) for i in range(2)]
                assert lattice_solve(G, img) is not None

    def test_solve_rational(self):
        rng = random.Random(10)
        for _ in range(80):
            A = random_matrix(rng, 3, 3)
            if frac_det(A) == 0:
                continue
            x = [Fraction(rng.randint(-5, 5), rng.randint(1, 4))
                 for _ in range(3)]
            b = [sum(Fraction(A[i][j]) * x[j] for j in range(3))
                 for i in range(3)]
            assert solve_rational(A, b) == x
