"""Exact integer and rational matrix algebra.

Matrices are lists of row lists; integer entries are Python ints (unbounded),
rational entries are Fractions.  Lattices are represented by lists of integer
generator rows; the canonical basis of a lattice is the nonzero rows of its
row Hermite normal form.

HNF convention (fixed package-wide): row style, upper echelon with pivot
columns strictly increasing, positive pivots, and entries above each pivot
reduced into [0, pivot).
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .errors import DegenerateInputError


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A, B):
    rb = len(B)
    return [[sum(A[i][k] * B[k][j] for k in range(rb))
             for j in range(len(B[0]))] for i in range(len(A))]


def transpose(A):
    return [list(col) for col in zip(*A)]


def mat_vec(A, v):
    return [sum(A[i][j] * v[j] for j in range(len(v))) for i in range(len(A))]


def det_int(M) -> int:
    """Determinant of a square integer matrix by fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    a = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(U) -> bool:
    return abs(det_int(U)) == 1


# ---------------------------------------------------------------------------
# Hermite normal form
# ---------------------------------------------------------------------------

def hnf(M) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite normal form.  Returns (H, U) with U unimodular, H = U*M,
    H in the package HNF convention."""
    if not M:
        return [], []
    rows, cols = len(M), len(M[0])
    H = [[int(x) for x in row] for row in M]
    U = identity(rows)
    r = 0
    for c in range(cols):
        # move a nonzero into the pivot row and kill the column below it
        while True:
            nz = [i for i in range(r, rows) if H[i][c] != 0]
            if not nz:
                break
            i_min = min(nz, key=lambda i: abs(H[i][c]))
            if i_min != r:
                H[r], H[i_min] = H[i_min], H[r]
                U[r], U[i_min] = U[i_min], U[r]
            if len(nz) == 1:
                break
            for i in range(r + 1, rows):
                if H[i][c]:
                    q = H[i][c] // H[r][c]
                    for j in range(cols):
                        H[i][j] -= q * H[r][j]
                    for j in range(rows):
                        U[i][j] -= q * U[r][j]
        if r < rows and H[r][c] != 0:
            if H[r][c] < 0:
                H[r] = [-x for x in H[r]]
                U[r] = [-x for x in U[r]]
            for i in range(r):
                q = H[i][c] // H[r][c]
                if q:
                    for j in range(cols):
                        H[i][j] -= q * H[r][j]
                    for j in range(rows):
                        U[i][j] -= q * U[r][j]
            r += 1
            if r == rows:
                break
    return H, U


def is_hnf(H) -> bool:
    """Checkable predicate for the package HNF convention."""
    last_pivot = -1
    seen_zero_row = False
    for row in H:
        nz = [j for j, x in enumerate(row) if x != 0]
        if not nz:
            seen_zero_row = True
            continue
        if seen_zero_row:
            return False
        p = nz[0]
        if p <= last_pivot or row[p] <= 0:
            return False
        last_pivot = p
    # entries above pivots reduced
    pivots = []
    for i, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x != 0]
        if nz:
            pivots.append((i, nz[0]))
    for i, p in pivots:
        for k in range(i):
            if not 0 <= H[k][p] < H[i][p]:
                return False
    return True


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def snf(M) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form: (S, U, V) with S = U*M*V, S diagonal with
    nonnegative invariant factors d1 | d2 | ..."""
    if not M:
        return [], [], []
    rows, cols = len(M), len(M[0])
    S = [[int(x) for x in row] for row in M]
    U = identity(rows)
    V = identity(cols)

    def row_op(i, k, q):  # row i -= q * row k
        for j in range(cols):
            S[i][j] -= q * S[k][j]
        for j in range(rows):
            U[i][j] -= q * U[k][j]

    def col_op(j, k, q):  # col j -= q * col k
        for i in range(rows):
            S[i][j] -= q * S[i][k]
        for i in range(cols):
            V[i][j] -= q * V[i][k]

    def swap_rows(i, k):
        S[i], S[k] = S[k], S[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for row in S:
            row[j], row[k] = row[k], row[j]
        for row in V:
            row[j], row[k] = row[k], row[j]

    t = 0
    while t < min(rows, cols):
        # locate smallest nonzero entry in the trailing block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if S[i][j] != 0 and (best is None
                                     or abs(S[i][j]) < abs(S[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = False
        for i in range(t + 1, rows):
            if S[i][t]:
                row_op(i, t, S[i][t] // S[t][t])
                dirty = dirty or S[i][t] != 0
        for j in range(t + 1, cols):
            if S[t][j]:
                col_op(j, t, S[t][j] // S[t][t])
                dirty = dirty or S[t][j] != 0
        if dirty:
            continue
        # divisibility: fold any non-divisible entry into the pivot block
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if S[i][j] % S[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_op(t, offender, -1)  # adds offending row into pivot row
            continue
        if S[t][t] < 0:
            for j in range(cols):
                S[t][j] = -S[t][j]
            for j in range(rows):
                U[t][j] = -U[t][j]
        t += 1
    return S, U, V


# ---------------------------------------------------------------------------
# Rational elimination and kernels
# ---------------------------------------------------------------------------

def rref(M) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (R, pivot column list)."""
    R = [[Fraction(x) for x in row] for row in M]
    rows = len(R)
    cols = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if R[i][c] != 0), None)
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def rational_rank(M) -> int:
    return len(rref(M)[1])


def rational_kernel(M) -> list[list[Fraction]]:
    """Basis of {c : M c = 0} over Q (c indexed by columns of M)."""
    if not M:
        return []
    cols = len(M[0])
    R, pivots = rref(M)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -R[r][f]
        basis.append(v)
    return basis


def integer_kernel(M) -> list[list[int]]:
    """Canonical basis (HNF rows) of {c in Z^cols : M c = 0} for a rational
    matrix M.  The lattice is saturated by construction."""
    if not M:
        return []
    cols = len(M[0])
    # clear denominators row by row
    Mi = []
    for row in M:
        d = 1
        for x in row:
            d = lcm(d, Fraction(x).denominator)
        Mi.append([int(Fraction(x) * d) for x in row])
    # rows of U mapping M^T to zero rows of its HNF span the kernel
    H, U = hnf(transpose(Mi) if Mi else [])
    if not Mi or not Mi[0]:
        return identity(cols)
    ker = [U[i] for i in range(len(H)) if all(x == 0 for x in H[i])]
    return lattice_basis(ker, cols)


def lattice_basis(generators, ncols=None) -> list[list[int]]:
    """Canonical (HNF) basis of the lattice spanned by integer row vectors."""
    gens = [list(g) for g in generators if any(g)]
    if not gens:
        return []
    H, _ = hnf(gens)
    return [row for row in H if any(row)]


def solve_rational(A, b):
    """Unique-or-none rational solution of A x = b (A columns independent).
    Returns None if inconsistent; raises if the columns are dependent."""
    rows = len(A)
    cols = len(A[0]) if A else 0
    aug = [[Fraction(A[i][j]) for j in range(cols)] + [Fraction(b[i])]
           for i in range(rows)]
    R, pivots = rref(aug)
    if cols in pivots:
        return None  # inconsistent
    if len(pivots) < cols:
        raise DegenerateInputError("basis columns are linearly dependent")
    x = [Fraction(0)] * cols
    for r, p in enumerate(pivots):
        x[p] = R[r][cols]
    return x


def lattice_member(v, basis_columns):
    """Integer coordinates of rational vector v over independent lattice basis
    columns, or None if v is not in the lattice."""
    if not basis_columns or not basis_columns[0]:
        return [] if all(Fraction(x) == 0 for x in v) else None
    if len(v) != len(basis_columns):
        raise DegenerateInputError(
            f"dimension mismatch: vector has {len(v)} entries, "
            f"basis has {len(basis_columns)}")
    x = solve_rational(basis_columns, v)
    if x is None:
        return None
    if any(c.denominator != 1 for c in x):
        return None
    return [int(c) for c in x]


def preimage_lattice(T, G) -> list[list[int]]:
    """Canonical basis of {x in Z^k : T x in Z-span of the columns of G},
    for rational matrices T (d x k) and G (d x k')."""
    k = len(T[0]) if T else 0
    kp = len(G[0]) if G else 0
    if not T:
        return identity(k)
    combined = [[Fraction(T[i][j]) for j in range(k)]
                + [-Fraction(G[i][j]) for j in range(kp)] for i in range(len(T))]
    ker = integer_kernel(combined)
    projected = [row[:k] for row in ker]
    return lattice_basis(projected, k)


def lattice_intersect(A, B) -> list[list[int]]:
    """Canonical basis of the intersection of two lattices given by generator
    rows (in Z^n)."""
    if not A or not B:
        return []
    n = len(A[0])
    # x = y^T A = z^T B: solve over the stacked kernel
    rows = [[Fraction(x) for x in row] for row in transpose(A)]
    rows = [r + [-Fraction(x) for x in tb] for r, tb in zip(rows, transpose(B))]
    ker = integer_kernel(rows)
    vecs = []
    for w in ker:
        y = w[: len(A)]
        vecs.append([sum(y[i] * A[i][j] for i in range(len(A)))
                     for j in range(n)])
    return lattice_basis(vecs, n)


def lattice_solve(G, t):
    """Integer coefficients x with x * G = t for integer generator rows G and a
    rational target row t, or None.  G may be rank-deficient."""
    if not G:
        return [] if all(Fraction(x) == 0 for x in t) else None
    H, U = hnf(G)
    t = [Fraction(x) for x in t]
    y = [Fraction(0)] * len(G)
    for i, row in enumerate(H):
        nz = next((j for j, x in enumerate(row) if x != 0), None)
        if nz is None:
            break
        q = t[nz] / row[nz]
        if q.denominator != 1:
            return None
        y[i] = q
        t = [a - q * b for a, b in zip(t, row)]
    if any(x != 0 for x in t):
        return None
    return [int(sum(y[i] * U[i][j] for i in range(len(G))))
            for j in range(len(G))]
