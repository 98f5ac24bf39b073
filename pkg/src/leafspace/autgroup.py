"""Automorphisms of the transverse structure: the group Aut(R^n : Gamma) of
linear maps preserving the holonomy group, and the full diffeomorphism group
of the leaf space, Diff = Aut(R^n : Gamma) |x (R^n / Gamma).

For n = 1 the automorphisms are the units of the coefficient ring
O = { lambda : lambda * Gamma is contained in Gamma }, an order in a number
field; rank-2 (real quadratic) orders get their fundamental unit from the
continued-fraction algorithm, higher ranks get a Dirichlet bound plus a
verified bounded search.  The general case searches integer matrices
stabilizing the tangent subspace; the invariance equation
R + T*beta - beta*P - beta*Q*beta = 0 is linear in the matrix entries, so all
solutions form an integer lattice and the search is an enumeration of short
lattice vectors, not of all matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm

from .algebraic import AlgebraicReal, NumberField, primitive_element
from .coords import Coordinatizer, FieldValue
from .errors import (DegenerateInputError, LeafspaceError, ModelError,
                     NonDenseError)
from .foliation import (ClassificationFlags, HolonomyGroup, LinearFoliation,
                        classify, holonomy, is_dense, normalize_form,
                        orthogonal_foliation)
from .intmat import (det_int, hnf, integer_kernel, lattice_basis,
                     lattice_solve, rational_kernel, solve_rational, transpose)
from .polys import count_real_roots
from .relations import q_dependencies
from .tagged import TaggedReal, coerce

DEFAULT_SEARCH_HEIGHT = 12


# ---------------------------------------------------------------------------
# Rational lattices (Z-modules inside Q^d)
# ---------------------------------------------------------------------------

def _common_den(rows) -> int:
    d = 1
    for row in rows:
        for x in row:
            d = lcm(d, Fraction(x).denominator)
    return d


def _rat_lattice_canonical(rows):
    rows = [row for row in rows if any(Fraction(x) != 0 for x in row)]
    if not rows:
        return []
    d = _common_den(rows)
    H = lattice_basis([[int(Fraction(x) * d) for x in row] for row in rows])
    return [[Fraction(x, d) for x in row] for row in H]


def _rat_lattice_intersect(A, B):
    if not A or not B:
        return []
    d = _common_den(A) * _common_den(B)
    from .intmat import lattice_intersect
    Ai = [[int(Fraction(x) * d) for x in row] for row in A]
    Bi = [[int(Fraction(x) * d) for x in row] for row in B]
    I = lattice_intersect(Ai, Bi)
    return [[Fraction(x, d) for x in row] for row in I]


def _rat_lattice_member(rows, v):
    if not rows:
        return all(Fraction(x) == 0 for x in v)
    d = _common_den(rows + [v])
    G = [[int(Fraction(x) * d) for x in row] for row in rows]
    t = [Fraction(x) * d for x in v]
    return lattice_solve(G, t) is not None


# ---------------------------------------------------------------------------
# Coefficient ring O_Gamma (codimension one)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientRing:
    """The ring O = { lambda : lambda * Gamma inside Gamma } for a holonomy
    group Gamma in R^1, as a Z-lattice in the coordinatizing field Q(theta)."""

    field: NumberField
    z_basis: tuple        # rows of Fractions over the power basis of theta
    rank: int
    group: HolonomyGroup

    def basis_algebraic(self) -> list[AlgebraicReal]:
        return [self.field.to_algebraic(tuple(row)) for row in self.z_basis]

    def contains(self, vec) -> bool:
        return _rat_lattice_member([list(r) for r in self.z_basis], list(vec))

    def one_omega(self):
        """For a rank-2 ring, the canonical basis {1, omega} with omega having
        positive theta-coefficient; None otherwise."""
        if self.rank != 2 or self.field.deg != 2:
            return None
        rows = [list(r) for r in self.z_basis]
        d = _common_den(rows)
        # echelonize with the theta coordinate first so the second row is
        # purely rational (it must be a unit multiple of 1)
        flipped = [[int(Fraction(row[1]) * d), int(Fraction(row[0]) * d)]
                   for row in rows]
        H = lattice_basis(flipped)
        omega = (Fraction(H[0][1], d), Fraction(H[0][0], d))
        if Fraction(H[1][1], d) != 1 or H[1][0] != 0:
            raise LeafspaceError("coefficient ring does not contain 1 cleanly")
        return omega


def _stacked_flatten(ctx, values, basis):
    cols = []
    for v in values:
        col, _ = ctx.flatten([v], basis)
        cols.append([row[0] for row in col])
    return cols  # one list per value


def _field_scale(fv: FieldValue, vec) -> FieldValue:
    F = fv.ctx.field
    return FieldValue(fv.ctx, {m: F.mul(v, vec) for m, v in fv.terms.items()})


def coefficient_ring(G: HolonomyGroup) -> CoefficientRing:
    """Z-basis of O = { lambda : lambda * Gamma inside Gamma }, Gamma in R.

    Any such lambda is algebraic, hence lies in the coordinatizing field
    Q(theta); writing lambda over the power basis turns each condition
    lambda * alpha_j in Gamma into a rational lattice condition, and O is the
    intersection of those lattices."""
    if G.ambient_dim != 1:
        raise DegenerateInputError("coefficient ring is defined for rank-1 "
                                   "ambient groups")
    if G.rank < 1:
        raise DegenerateInputError("trivial group has no coefficient ring")
    ctx = G._ctx
    F = ctx.field
    deg = F.deg
    gens = [g[0] for g in G._embedded]
    powers = [F.pow(F.gen(), i) for i in range(deg)]
    scaled = [[_field_scale(g, p) for p in powers] for g in gens]
    basis = ctx.basis_for(gens + [x for row in scaled for x in row])
    Gcols = _stacked_flatten(ctx, gens, basis)      # k columns of length N
    Gmat = [[Gcols[j][i] for j in range(len(gens))]
            for i in range(len(basis))]             # N x k
    ring = None
    for j, g in enumerate(gens):
        if g.is_zero:
            continue
        Tcols = _stacked_flatten(ctx, scaled[j], basis)
        Tmat = [[Tcols[i][r] for i in range(deg)] for r in range(len(basis))]
        left_kernel = rational_kernel(transpose(Tmat))
        constraints = [[sum(u[i] * Gmat[i][c] for i in range(len(basis)))
                        for c in range(len(gens))] for u in left_kernel]
        constraints = [row for row in constraints if any(x != 0 for x in row)]
        if constraints:
            C = integer_kernel(constraints)
        else:
            from .intmat import identity
            C = identity(len(gens))
        lam_rows = []
        for c in C:
            rhs = [sum(Gmat[i][t] * c[t] for t in range(len(gens)))
                   for i in range(len(basis))]
            lam = solve_rational(Tmat, rhs)
            if lam is None:  # pragma: no cover - solvable by construction
                raise LeafspaceError("lattice parametrization is inconsistent")
            lam_rows.append(lam)
        L = _rat_lattice_canonical(lam_rows)
        ring = L if ring is None else _rat_lattice_intersect(ring, L)
    if ring is None:
        raise DegenerateInputError("all generators are zero")
    one = [Fraction(1)] + [Fraction(0)] * (deg - 1)
    if not _rat_lattice_member(ring, one):
        raise LeafspaceError("coefficient ring misses 1")
    # multiplicative closure on basis products
    for a in ring:
        for b in ring:
            prod = F.mul(tuple(a), tuple(b))
            if not _rat_lattice_member(ring, list(prod)):
                raise LeafspaceError("coefficient ring is not closed under "
                                     "multiplication")
    return CoefficientRing(F, tuple(tuple(r) for r in ring), len(ring), G)


# ---------------------------------------------------------------------------
# Units
# ---------------------------------------------------------------------------

def _surd_cf(P: int, D: int, Q: int):
    """Continued fraction of (P + sqrt(D)) / Q; yields (a_k, p_k, q_k) with
    convergents p_k / q_k.  Requires D > 0 non-square."""
    if Q == 0:
        raise DegenerateInputError("zero denominator in surd")
    if (D - P * P) % Q != 0:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    s = isqrt(D)
    p_prev, p_cur = 0, 1
    q_prev, q_cur = 1, 0
    while True:
        # exact floor of (P + sqrt(D))/Q: no integer lies in (s, sqrt(D)]
        a = (P + s) // Q if Q > 0 else -((P + s) // (-Q)) - 1
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        yield a, p_cur, q_cur
        P = a * Q - P
        Q = (D - P * P) // Q


def pell_fundamental_unit(O: CoefficientRing) -> AlgebraicReal:
    """Smallest unit > 1 of a real quadratic order O = Z + Z*omega, found on
    the convergents of omega and certified minimal by a bounded sweep."""
    pair = O.one_omega()
    if pair is None:
        raise DegenerateInputError("fundamental unit via continued fractions "
                                   "needs a rank-2 quadratic ring")
    omega_alg = O.field.to_algebraic(pair)
    if omega_alg.sign() < 0:
        omega_alg = -omega_alg  # Z + Z*omega is unchanged
    poly = omega_alg.minpoly
    if len(poly) != 3 or poly[2] != 1:
        raise LeafspaceError("ring generator is not a quadratic integer")
    c0, c1, _ = poly          # omega^2 + c1*omega + c0 = 0
    u, v = -c1, -c0           # omega^2 = u*omega + v
    D = c1 * c1 - 4 * c0
    if D <= 0 or isqrt(D) ** 2 == D:
        raise DegenerateInputError("ring is not a real quadratic order")

    def norm(a: int, b: int) -> int:
        return a * a + a * b * u - b * b * v

    def value(a: int, b: int) -> AlgebraicReal:
        return omega_alg._mul_fraction(Fraction(b))._add_fraction(Fraction(a))

    candidate = None
    for steps, (_ak, p, q) in enumerate(_surd_cf(-c1, D, 2)):
        lam_a, lam_b = p + q * c1, q   # p - q * conj(omega)
        if norm(lam_a, lam_b) in (1, -1):
            lam = value(lam_a, lam_b)
            if (lam._add_fraction(Fraction(-1))).sign() > 0:
                candidate = (lam_a, lam_b, lam)
                break
        if steps > 10 ** 5:
            raise LeafspaceError("continued fraction failed to produce a unit")
    a0, b0, eps = candidate
    # minimality sweep: any unit 1 < lam < eps has |conj(lam)| <= 1, which
    # bounds both coefficients.  The sweep is a second, independent route and
    # only feasible for moderate units; the first norm +-1 convergent is the
    # fundamental unit by the classical theory either way.
    eps_hi = eps.approx_fraction(Fraction(1, 100)) + Fraction(1, 100)
    gap = omega_alg._mul_fraction(Fraction(2))._add_fraction(Fraction(c1))
    gap_lo = abs(gap.approx_fraction(Fraction(1, 100))) - Fraction(1, 100)
    b_cap = int((eps_hi + 1) / gap_lo) + 1
    w_hi = abs(omega_alg.approx_fraction(Fraction(1, 100))) + 1
    if b_cap * (int(eps_hi + b_cap * w_hi) + 2) > 10 ** 6:
        return eps
    best = (a0, b0, eps)
    for b in range(-b_cap, b_cap + 1):
        a_cap = int(eps_hi + abs(b) * w_hi) + 2
        for a in range(-a_cap, a_cap + 1):
            if (a, b) == (best[0], best[1]) or norm(a, b) not in (1, -1):
                continue
            lam = value(a, b)
            if (lam._add_fraction(Fraction(-1))).sign() > 0 \
                    and (best[2] - lam).sign() > 0:
                best = (a, b, lam)
    return best[2]


@dataclass(frozen=True)
class DirichletBound:
    complex_pairs: int
    real_roots: int
    bound: int


def dirichlet_rank_bound(O: CoefficientRing) -> DirichletBound:
    """Dirichlet bound s + t - 1 for the unit rank of the field generated by
    the ring's basis (t real roots of the minimal polynomial, counted by Sturm
    sequences; s complex-conjugate pairs)."""
    elems = [x for x in O.basis_algebraic() if not x.is_rational]
    if not elems:
        return DirichletBound(0, 1, 0)
    theta, _ = primitive_element(elems)
    deg = len(theta.minpoly) - 1
    t = count_real_roots(tuple(Fraction(c) for c in theta.minpoly))
    s = (deg - t) // 2
    return DirichletBound(s, t, s + t - 1)


def _unit_preserves_group(O: CoefficientRing, lam_vec) -> bool:
    """Exact check that multiplication by lam maps Gamma onto Gamma."""
    G = O.group
    ctx = G._ctx
    F = ctx.field
    gens = [g[0] for g in G._embedded]
    basis = ctx.basis_for(gens + [_field_scale(g, lam_vec) for g in gens]
                          + [_field_scale(g, F.inv(lam_vec)) for g in gens])
    cols = _stacked_flatten(ctx, gens, basis)
    d = _common_den(cols)
    Gi = [[int(Fraction(x) * d) for x in col] for col in cols]
    for vec in (lam_vec, F.inv(lam_vec)):
        for g in gens:
            t = _stacked_flatten(ctx, [_field_scale(g, vec)], basis)[0]
            if lattice_solve(Gi, [Fraction(x) * d for x in t]) is None:
                return False
    return True


def unit_search(O: CoefficientRing, height: int) -> list[AlgebraicReal]:
    """All units of O up to the coefficient height that preserve Gamma, each
    verified in both directions; deduplicated up to sign and inversion and
    sorted by absolute value."""
    if height < 1:
        raise DegenerateInputError("height must be at least 1")
    F = O.field
    found = []
    for coeffs in _boxed_vectors(O.rank, height):
        if not any(coeffs):
            continue
        vec = tuple(sum(Fraction(c) * Fraction(O.z_basis[i][j])
                        for i, c in enumerate(coeffs))
                    for j in range(F.deg))
        if F.is_zero(vec):
            continue
        inv = F.inv(vec)
        if not O.contains(inv) or not _unit_preserves_group(O, vec):
            continue
        canon = F.to_algebraic(vec)
        if canon.sign() < 0:
            canon = canon._mul_fraction(Fraction(-1))
        if (canon._add_fraction(Fraction(-1))).sign() < 0:
            canon = canon.inverse()
        if not any(canon == u for u in found):
            found.append(canon)
    return sorted(found, key=float)


def _boxed_vectors(dim: int, height: int):
    if dim == 0:
        yield ()
        return
    for rest in _boxed_vectors(dim - 1, height):
        for c in range(-height, height + 1):
            yield (c,) + rest


# ---------------------------------------------------------------------------
# Stabilizer search: integer matrices with A(V) = V
# ---------------------------------------------------------------------------

def stabilizer_search(F: LinearFoliation, height: int = DEFAULT_SEARCH_HEIGHT):
    """All A in GL(m+n, Z) with A(V) = V and entries bounded by the height.

    Writing A in blocks [[P, Q], [R, T]] against the normalized basis, the
    invariance condition is R + T*beta - beta*P - beta*Q*beta = 0, linear in
    the entries of A; its integer solutions form a lattice, and only short
    vectors of that lattice are enumerated.  Returns pairs (A, theta) with
    theta = T - beta*Q the induced transverse map, in normalized coordinates,
    sorted by the entries of A."""
    nf = normalize_form(F)
    m, n, d = F.leaf_dim, F.codim, F.ambient_dim
    entries = [x for row in nf.beta for x in row]
    ctx = Coordinatizer(entries)
    B = [[ctx.embed(nf.beta[j][i]) for i in range(m)] for j in range(n)]

    def unknown(r, c):
        return r * d + c

    coeff_rows = []   # one row of ring coefficients per scalar equation
    for j in range(n):
        for i in range(m):
            row = [ctx.zero() for _ in range(d * d)]
            row[unknown(m + j, i)] = row[unknown(m + j, i)] \
                + ctx.from_fraction(1)
            for l in range(n):
                row[unknown(m + j, m + l)] = row[unknown(m + j, m + l)] \
                    + B[l][i]
            for l in range(m):
                row[unknown(l, i)] = row[unknown(l, i)] - B[j][l]
            for l in range(m):
                for t in range(n):
                    row[unknown(l, m + t)] = row[unknown(l, m + t)] \
                        - B[j][l] * B[t][i]
            coeff_rows.append(row)
    flat = [x for row in coeff_rows for x in row]
    basis = ctx.basis_for(flat)
    constraints = []
    for row in coeff_rows:
        matrix, _ = ctx.flatten(row, basis)
        constraints.extend(matrix)
    lattice = integer_kernel(constraints)
    results = []
    for vec in _short_lattice_vectors(lattice, height):
        A = [[vec[unknown(r, c)] for c in range(d)] for r in range(d)]
        if abs(det_int(A)) != 1:
            continue
        P = [[A[l][i] for i in range(m)] for l in range(m)]
        Q = [[A[l][m + t] for t in range(n)] for l in range(m)]
        T = [[A[m + j][m + l] for l in range(n)] for j in range(n)]
        theta = []
        for j in range(n):
            trow = []
            for l in range(n):
                acc = ctx.from_fraction(T[j][l])
                for t in range(m):
                    acc = acc - B[j][t].scal(Fraction(Q[t][l]))
                trow.append(ctx.to_tagged(acc))
            theta.append(tuple(trow))
        results.append((tuple(tuple(r) for r in A), tuple(theta)))
    results.sort(key=lambda pair: pair[0])
    return results


def _short_lattice_vectors(basis_rows, height: int):
    """All lattice vectors with every entry bounded by the height, enumerated
    through the echelon structure of the HNF basis."""
    if not basis_rows:
        return
    H = lattice_basis([list(r) for r in basis_rows])
    pivots = [next(j for j, x in enumerate(row) if x) for row in H]

    def rec(i, partial):
        if i == len(H):
            if all(abs(x) <= height for x in partial):
                yield tuple(partial)
            return
        p = pivots[i]
        piv = H[i][p]
        lo = -((height + partial[p]) // piv)
        hi = (height - partial[p]) // piv
        for c in range(lo, hi + 1):
            nxt = [partial[j] + c * H[i][j] for j in range(len(partial))]
            if abs(nxt[p]) <= height:
                yield from rec(i + 1, nxt)

    yield from rec(0, [0] * len(H[0]))


# ---------------------------------------------------------------------------
# Aut group assembly
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AutGroupReport:
    """Aut(R^n : Gamma) = {+-1} x (free part).  Generators are scalars
    (AlgebraicReal) for n = 1 and TaggedReal matrices otherwise; every listed
    generator preserves Gamma in both directions."""

    torsion_order: int
    free_rank: int
    rank_is_exact: bool
    generators: tuple
    method: str
    dirichlet: DirichletBound | None = None
    coefficient_ring: CoefficientRing | None = None
    notes: tuple = ()

    @property
    def structure(self) -> str:
        if self.free_rank == 0:
            return "Z2"
        if self.free_rank == 1:
            return "Z2 x Z"
        return f"Z2 x Z^{self.free_rank}"


def _codim_one_report(F: LinearFoliation, height: int) -> AutGroupReport:
    G = holonomy(F)
    O = coefficient_ring(G)
    bound = dirichlet_rank_bound(O)
    if O.rank == 1:
        return AutGroupReport(2, 0, True, (), "cubic_search",
                              dirichlet=bound, coefficient_ring=O,
                              notes=("units of Z are +-1",))
    if O.rank == 2 and O.field.deg == 2:
        eps = pell_fundamental_unit(O)
        vec = _algebraic_in_field(O, eps)
        if not _unit_preserves_group(O, vec):  # pragma: no cover
            raise LeafspaceError("fundamental unit fails to preserve Gamma")
        return AutGroupReport(2, 1, True, (eps,), "pell",
                              dirichlet=bound, coefficient_ring=O)
    units = [u for u in unit_search(O, height)
             if not (u.is_rational and u.as_fraction() == 1)]
    rank_lower = 1 if units else 0
    exact = rank_lower == bound.bound
    return AutGroupReport(2, bound.bound, exact, tuple(units[:1]),
                          "cubic_search",
                          dirichlet=bound, coefficient_ring=O,
                          notes=() if exact else
                          ("free rank is the Dirichlet bound, not verified "
                           "exact",))


def _algebraic_in_field(O: CoefficientRing, x: AlgebraicReal):
    """Coordinates of x over the power basis of the ring's field."""
    F = O.field
    deg = F.deg
    powers = [F.to_algebraic(F.pow(F.gen(), i)) for i in range(deg)]
    cols = []
    basis_ctx = Coordinatizer([coerce(p) for p in powers] + [coerce(x)])
    embedded = [basis_ctx.embed(coerce(p)) for p in powers]
    target = basis_ctx.embed(coerce(x))
    matrix, _ = basis_ctx.flatten(embedded + [target])
    A = [[matrix[i][j] for j in range(deg)] for i in range(len(matrix))]
    b = [matrix[i][deg] for i in range(len(matrix))]
    sol = solve_rational(A, b)
    if sol is None:
        raise ModelError("value does not lie in the coordinatizing field")
    return tuple(sol)


def aut_group(F: LinearFoliation,
              height: int = DEFAULT_SEARCH_HEIGHT) -> AutGroupReport:
    """Aut(R^n : Gamma) for a foliation with dense leaves.

    Dispatch: rigidity (non-quadratic coefficients force {+-id}), then the
    codimension-one unit-group computation, then duality for flows, then a
    bounded stabilizer search."""
    G = holonomy(F)
    if not is_dense(G):
        raise NonDenseError("Aut(R^n : Gamma) requires dense leaves")
    flags = classify(F)
    if flags.non_quadratic:
        extra = [pair for pair in stabilizer_search(F, height)
                 if not _is_pm_identity(pair[0])]
        if extra:
            raise LeafspaceError("rigidity contradicted by stabilizer search")
        return AutGroupReport(2, 0, True, (), "rigidity",
                              notes=(f"stabilizer search at height {height} "
                                     "found only +-id",))
    if F.codim == 1:
        return _codim_one_report(F, height)
    if F.leaf_dim == 1:
        Fd = orthogonal_foliation(F)
        if is_dense(holonomy(Fd)):
            dual = aut_group(Fd, height)
            return AutGroupReport(2, dual.free_rank, dual.rank_is_exact,
                                  dual.generators, "duality",
                                  dirichlet=dual.dirichlet,
                                  coefficient_ring=dual.coefficient_ring,
                                  notes=dual.notes + (
                                      "computed on the orthogonal foliation",))
    found = stabilizer_search(F, height)
    thetas = []
    seen = set()
    for A, theta in found:
        if _is_pm_identity(A):
            continue
        key = min(A, tuple(tuple(-x for x in row) for row in A))
        if key in seen:
            continue
        seen.add(key)
        thetas.append(theta)
    return AutGroupReport(2, len(thetas), False, tuple(thetas),
                          "bounded_search",
                          notes=(f"stabilizer search at height {height}; "
                                 "free rank not certified",))


def _is_pm_identity(A) -> bool:
    d = len(A)
    return all(A[i][j] == (1 if i == j else 0) for i in range(d)
               for j in range(d)) or \
        all(A[i][j] == (-1 if i == j else 0) for i in range(d)
            for j in range(d))


# ---------------------------------------------------------------------------
# Diff group elements and report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiffElement:
    """Element (theta, g) of Aut(R^n : Gamma) |x (R^n / Gamma); theta is a
    scalar (n = 1) or an n x n TaggedReal matrix, g a canonical representative
    modulo Gamma."""

    theta: object
    g: tuple


def _theta_apply(theta, vec):
    vec = [coerce(x) for x in vec]
    if not isinstance(theta, tuple):
        t = coerce(theta)
        return tuple(t * x for x in vec)
    return tuple(sum((theta[i][j] * vec[j] for j in range(len(vec))),
                     TaggedReal.from_fraction(0)) for i in range(len(theta)))


def _theta_mul(t1, t2):
    if not isinstance(t1, tuple):
        return coerce(t1) * coerce(t2)
    n = len(t1)
    return tuple(tuple(sum((t1[i][k] * t2[k][j] for k in range(n)),
                           TaggedReal.from_fraction(0)) for j in range(n))
                 for i in range(n))


def _theta_inverse(theta):
    if not isinstance(theta, tuple):
        return coerce(theta).inverse()
    n = len(theta)
    entries = [x for row in theta for x in row]
    ctx = Coordinatizer(entries)
    M = [[ctx.embed(x) for x in row] for row in theta]
    from .coords import frac_solve
    I = [[ctx.from_fraction(1 if i == j else 0) for j in range(n)]
         for i in range(n)]
    X = frac_solve(ctx, M, I)
    return tuple(tuple(ctx.to_tagged(X[i][j].as_field_value())
                       for j in range(n)) for i in range(n))


def reduce_mod(G: HolonomyGroup, vec):
    """Canonical representative of a vector modulo Gamma: the flattened
    rational coordinates are reduced against the HNF basis of the generator
    lattice, so coordinates along each pivot land in [0, 1) times the pivot."""
    v = [coerce(x) for x in vec]
    ctx = Coordinatizer([x for g in G.generators for x in g] + v)
    embedded = [[ctx.embed(x) for x in g] for g in G.generators]
    target = [ctx.embed(x) for x in v]
    flat = [x for g in embedded for x in g] + target
    basis = ctx.basis_for(flat)

    def stack(vv):
        out = []
        for x in vv:
            col, _ = ctx.flatten([x], basis)
            out.extend(row[0] for row in col)
        return out

    rows = [stack(g) for g in embedded]
    den = _common_den(rows)
    H = lattice_basis([[int(Fraction(x) * den) for x in row] for row in rows])
    t = [Fraction(x) * den for x in stack(target)]
    for row in H:
        p = next(j for j, x in enumerate(row) if x)
        q = t[p] // row[p]
        if q:
            t = [a - q * b for a, b in zip(t, row)]
    # rebuild the TaggedReal vector from the reduced coordinates
    n = G.ambient_dim
    per = len(basis)
    out = []
    for coord in range(n):
        fv = ctx.zero()
        for b_idx, (mono, i) in enumerate(basis):
            c = t[coord * per + b_idx] / den
            if c:
                unit = tuple(Fraction(1) if k == i else Fraction(0)
                             for k in range(ctx.field.deg))
                fv = fv + FieldValue(ctx, {mono: unit}).scal(c)
        out.append(ctx.to_tagged(fv))
    return tuple(out)


def diff_element(G: HolonomyGroup, theta, g) -> DiffElement:
    return DiffElement(theta, reduce_mod(G, g))


def diff_compose(a: DiffElement, b: DiffElement,
                 G: HolonomyGroup) -> DiffElement:
    """Product (theta_a theta_b, g_a + theta_a(g_b)) in
    Aut(R^n : Gamma) |x (R^n / Gamma)."""
    if len(a.g) != len(b.g) or len(a.g) != G.ambient_dim:
        raise DegenerateInputError("dimension mismatch")
    theta = _theta_mul(a.theta, b.theta)
    g = tuple(x + y for x, y in zip(a.g, _theta_apply(a.theta, b.g)))
    return DiffElement(theta, reduce_mod(G, g))


def diff_inverse(a: DiffElement, G: HolonomyGroup) -> DiffElement:
    inv = _theta_inverse(a.theta)
    g = tuple(-x for x in _theta_apply(inv, a.g))
    return DiffElement(inv, reduce_mod(G, g))


def diff_equal(a: DiffElement, b: DiffElement, G: HolonomyGroup) -> bool:
    """Group-element equality: equal theta and g_a - g_b in Gamma.  This is
    the reliable comparison; structural equality of canonical representatives
    holds only when both were reduced in the same coordinate frame."""
    if isinstance(a.theta, tuple) != isinstance(b.theta, tuple):
        return False
    if isinstance(a.theta, tuple):
        if any(coerce(x) != coerce(y) for ra, rb in zip(a.theta, b.theta)
               for x, y in zip(ra, rb)):
            return False
    elif coerce(a.theta) != coerce(b.theta):
        return False
    diff = tuple(coerce(x) - coerce(y) for x, y in zip(a.g, b.g))
    return G.member(diff) is not None


def diff_identity(G: HolonomyGroup) -> DiffElement:
    n = G.ambient_dim
    theta = TaggedReal.from_fraction(1) if n == 1 else \
        tuple(tuple(TaggedReal.from_fraction(1 if i == j else 0)
                    for j in range(n)) for i in range(n))
    return DiffElement(theta, tuple(TaggedReal.from_fraction(0)
                                    for _ in range(n)))


@dataclass(frozen=True)
class DiffGroupReport:
    """Full description of Diff(T^(m+n)/F)."""

    ambient_dim: int
    leaf_dim: int
    holonomy_rank: int
    flags: ClassificationFlags
    aut: AutGroupReport
    presentation: str
    notes: tuple = ()


def diff_group_report(F: LinearFoliation,
                      height: int = DEFAULT_SEARCH_HEIGHT) -> DiffGroupReport:
    """Diff(T^(m+n)/F) = Aut(R^n : Gamma) |x (R^n / Gamma) for dense leaves,
    with the automorphism part computed by aut_group."""
    G = holonomy(F)
    if not is_dense(G):
        raise NonDenseError("the diffeomorphism group formula requires "
                            "dense leaves")
    aut = aut_group(F, height)
    m, n, d = F.leaf_dim, F.codim, F.ambient_dim
    if aut.rank_is_exact:
        if n == 1 and aut.free_rank > m:
            raise LeafspaceError("free rank exceeds the leaf dimension")
        if m == 1 and aut.free_rank > n:
            raise LeafspaceError("free rank exceeds the codimension")
    core = aut.structure if aut.free_rank == 0 else f"({aut.structure})"
    presentation = f"{core} |x (T^{d}/F)"
    flags = classify(F)
    notes = aut.notes
    if not aut.rank_is_exact:
        notes = notes + ("presentation shows a rank bound, not an exact "
                         "rank",)
    return DiffGroupReport(d, m, G.rank, flags, aut, presentation, notes)
