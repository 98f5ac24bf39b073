"""Linear foliations of the torus T^(m+n).

A foliation is given by an m-dimensional tangent subspace V of R^(m+n),
spanned by TaggedReal vectors.  After a coordinate permutation making the
leading m x m minor invertible, V is the graph subspace {(x, S x)} for a
slope matrix S; the normalized coefficient matrix is beta = S^T (n x m),
so column i of beta lists the transverse coordinates of the i-th normalized
tangent vector.

The holonomy group is computed through the quotient map
phi(x, y) = y - S^T x, a linear identification of R^(m+n)/V with R^n that
kills V exactly; its images of the standard lattice vectors are the unit
vectors of R^n together with the columns of beta.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .coords import Coordinatizer, FieldValue, frac_kernel, frac_rank, frac_solve
from .errors import DegenerateInputError, LeafspaceError
from .intmat import lattice_solve, rational_kernel
from .relations import RelationLattice, q_dependencies
from .tagged import TaggedReal, coerce


def _coerce_matrix(rows):
    return tuple(tuple(coerce(x) for x in row) for row in rows)


def _unit_vector(n: int, j: int) -> tuple:
    return tuple(TaggedReal.from_fraction(1 if i == j else 0) for i in range(n))


class LinearFoliation:
    """Linear foliation of T^(m+n), determined by its tangent subspace V."""

    def __init__(self, ambient_dim: int, tangent_basis):
        basis = _coerce_matrix(tangent_basis)
        if any(len(v) != ambient_dim for v in basis):
            raise DegenerateInputError(
                f"tangent vectors must have {ambient_dim} coordinates")
        if len(basis) > ambient_dim:
            raise DegenerateInputError("more tangent vectors than dimensions")
        entries = [x for v in basis for x in v]
        ctx = Coordinatizer(entries)
        rows = [[ctx.embed(x) for x in v] for v in basis]
        if basis and frac_rank(rows) != len(basis):
            raise DegenerateInputError("tangent vectors are linearly dependent")
        self.ambient_dim = ambient_dim
        self.tangent_basis = basis
        self._ctx = ctx
        self._rows = rows

    @classmethod
    def from_form(cls, ambient_dim: int, beta) -> "LinearFoliation":
        """Foliation with graph tangent space {(x, beta^T x)}; beta is the
        n x m transverse coefficient matrix."""
        beta = _coerce_matrix(beta)
        n = len(beta)
        m = ambient_dim - n
        if m < 0 or any(len(row) != m for row in beta):
            raise DegenerateInputError("coefficient matrix shape mismatch")
        basis = [tuple(_unit_vector(m, i)) + tuple(beta[j][i] for j in range(n))
                 for i in range(m)]
        return cls(ambient_dim, basis)

    @property
    def leaf_dim(self) -> int:
        return len(self.tangent_basis)

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.leaf_dim

    def contains(self, vector) -> bool:
        """Exact membership of a vector in the tangent subspace V."""
        v = [coerce(x) for x in vector]
        ctx = Coordinatizer([x for row in self.tangent_basis for x in row]
                            + list(v))
        rows = [[ctx.embed(x) for x in row] for row in self.tangent_basis]
        if all(x.is_zero for x in (ctx.embed(c) for c in v)):
            return True
        return frac_rank(rows + [[ctx.embed(x) for x in v]]) == len(rows)

    def same_subspace(self, other: "LinearFoliation") -> bool:
        return (self.ambient_dim == other.ambient_dim
                and self.leaf_dim == other.leaf_dim
                and all(other.contains(v) for v in self.tangent_basis))

    def __repr__(self):
        return (f"LinearFoliation(dim {self.leaf_dim} "
                f"in R^{self.ambient_dim})")


@dataclass(frozen=True)
class NormalizedForm:
    """Transverse coefficient matrix beta (n x m) together with the coordinate
    permutation that made the leading minor invertible: permutation[i] is the
    original index of normalized coordinate i (leaf coordinates first)."""

    beta: tuple
    permutation: tuple


def normalize_form(F: LinearFoliation) -> NormalizedForm:
    """Normalized coefficients of F: after permuting coordinates by the first
    suitable permutation in lexicographic order, V is the graph {(x, S x)} and
    beta = S^T is returned with that permutation."""
    m, d = F.leaf_dim, F.ambient_dim
    ctx, rows = F._ctx, F._rows
    chosen = None
    for cols in combinations(range(d), m):
        if frac_rank([[rows[i][c] for c in cols] for i in range(m)]) == m:
            chosen = cols
            break
    if chosen is None:
        raise DegenerateInputError("no invertible transverse block")
    rest = tuple(c for c in range(d) if c not in chosen)
    X = [[rows[i][c] for c in chosen] for i in range(m)]
    Y = [[rows[i][c] for c in rest] for i in range(m)]
    if rest:
        S = frac_solve(ctx, X, Y)
        beta = tuple(tuple(ctx.to_tagged(S[i][j].as_field_value())
                           for i in range(m))
                     for j in range(len(rest)))
    else:
        beta = ()
    return NormalizedForm(beta, chosen + rest)


class HolonomyGroup:
    """Finitely generated subgroup of R^n given by generator vectors, with an
    exact rational coordinatization and Z-rank."""

    def __init__(self, ambient_dim: int, generators):
        gens = _coerce_matrix(generators)
        if any(len(g) != ambient_dim for g in gens):
            raise DegenerateInputError(
                f"generators must have {ambient_dim} coordinates")
        self.ambient_dim = ambient_dim
        self.generators = gens
        self._ctx = Coordinatizer([x for g in gens for x in g])
        self._embedded = [[self._ctx.embed(x) for x in g] for g in gens]
        self.relations = self._relation_lattice()
        self.rank = self.relations.rank
        self.coordinates, self.coordinate_basis = self._coordinatize()

    def _stacked_columns(self, ctx, embedded):
        # one column per generator; rows run over (coordinate, basis element)
        flat = [x for g in embedded for x in g]
        basis = ctx.basis_for(flat)
        cols = []
        for g in embedded:
            col = []
            for v in g:
                column, _ = ctx.flatten([v], basis)
                col.extend(row[0] for row in column)
            cols.append(col)
        rows = [[cols[j][i] for j in range(len(cols))]
                for i in range(len(basis) * self.ambient_dim)]
        labels = [(coord, b) for coord in range(self.ambient_dim)
                  for b in basis]
        return rows, labels

    def _relation_lattice(self) -> RelationLattice:
        from .intmat import integer_kernel
        rows, _ = self._stacked_columns(self._ctx, self._embedded)
        ker = integer_kernel(rows) if rows else []
        return RelationLattice(tuple(tuple(r) for r in ker),
                               len(self.generators))

    def _coordinatize(self):
        rows, labels = self._stacked_columns(self._ctx, self._embedded)
        matrix = [[rows[i][j] for i in range(len(rows))]
                  for j in range(len(self.generators))]
        return tuple(tuple(row) for row in matrix), tuple(labels)

    def z_basis(self):
        """A Z-basis of the group as TaggedReal vectors (the generators may
        be Z-dependent; this returns rank-many independent ones)."""
        from math import lcm
        rows = [list(r) for r in self.coordinates]
        den = 1
        for row in rows:
            for x in row:
                den = lcm(den, Fraction(x).denominator)
        from .intmat import lattice_basis
        H = lattice_basis([[int(Fraction(x) * den) for x in row]
                           for row in rows])
        ctx = self._ctx
        out = []
        for row in H:
            vec = []
            for coord in range(self.ambient_dim):
                fv = ctx.zero()
                for idx, (c, (mono, i)) in enumerate(self.coordinate_basis):
                    if c != coord or row[idx] == 0:
                        continue
                    unit = tuple(Fraction(1) if k == i else Fraction(0)
                                 for k in range(ctx.field.deg))
                    fv = fv + FieldValue(ctx, {mono: unit}).scal(
                        Fraction(row[idx], den))
                vec.append(ctx.to_tagged(fv))
            out.append(tuple(vec))
        return tuple(out)

    def member(self, vector):
        """Integer coordinates of the vector over the generators, or None.
        Exact for any TaggedReal vector."""
        v = [coerce(x) for x in vector]
        if len(v) != self.ambient_dim:
            raise DegenerateInputError("dimension mismatch")
        ctx = Coordinatizer([x for g in self.generators for x in g] + v)
        embedded = [[ctx.embed(x) for x in g] for g in self.generators]
        target = [ctx.embed(x) for x in v]
        flat = [x for g in embedded for x in g] + target
        basis = ctx.basis_for(flat)
        def stack(vec):
            out = []
            for x in vec:
                column, _ = ctx.flatten([x], basis)
                out.extend(row[0] for row in column)
            return out
        G = [stack(g) for g in embedded]
        # generator rows are rational after scaling; clear denominators jointly
        from math import lcm
        den = 1
        for row in G:
            for x in row:
                den = lcm(den, Fraction(x).denominator)
        Gi = [[int(x * den) for x in row] for row in G]
        t = [Fraction(x) * den for x in stack(target)]
        return lattice_solve(Gi, t)

    def __repr__(self):
        return (f"HolonomyGroup(rank {self.rank}, "
                f"{len(self.generators)} generators in R^{self.ambient_dim})")


def holonomy(F: LinearFoliation) -> HolonomyGroup:
    """Holonomy group of F: the image of the integer lattice under the linear
    quotient map R^(m+n) -> R^(m+n)/V = R^n.  In normalized coordinates the
    generators are the unit vectors of R^n and the columns of beta."""
    nf = normalize_form(F)
    m = F.leaf_dim
    n = F.codim
    gens = [_unit_vector(n, j) for j in range(n)]
    gens += [tuple(nf.beta[j][i] for j in range(n)) for i in range(m)]
    return HolonomyGroup(n, gens)


def period_map(F: LinearFoliation):
    """The quotient map phi realizing holonomy: phi(v) = y - S^T x in the
    permuted coordinates.  phi kills every tangent vector of F exactly."""
    nf = normalize_form(F)
    m, n = F.leaf_dim, F.codim

    def phi(vector):
        v = [coerce(x) for x in vector]
        x = [v[nf.permutation[i]] for i in range(m)]
        y = [v[nf.permutation[m + j]] for j in range(n)]
        return tuple(y[j] - sum((nf.beta[j][i] * x[i] for i in range(m)),
                                TaggedReal.from_fraction(0))
                     for j in range(n))

    return phi


def is_dense(G: HolonomyGroup) -> bool:
    """Exact density of the subgroup generated by G in R^n.

    The group fails to be dense exactly when some nonzero linear form maps
    every generator to an integer.  Solvability of  phi . g_i = m_i  over the
    reals for a fixed integer vector m is a rank condition over the exact
    coordinatizing field, which turns the search for m into rational linear
    algebra: m must be orthogonal to the kernel of the generator matrix."""
    n = G.ambient_dim
    k = len(G.generators)
    if n == 0:
        return True  # R^0 is a point
    if k == 0:
        return False
    ctx = G._ctx
    rows = G._embedded  # k x n, rows are generators
    if frac_rank(rows) < n:
        return False  # nonzero form vanishing on all generators
    # transpose: columns are generators; kernel vectors u give constraints
    # u . m = 0 on admissible integer vectors m
    cols = [[rows[i][j] for i in range(k)] for j in range(n)]
    kernel = frac_kernel(ctx, cols)
    if not kernel:
        return False  # generators independent over the field: Gamma discrete
    constraints = []
    for u in kernel:
        matrix, _ = ctx.flatten(u)
        constraints.extend(matrix)
    admissible = rational_kernel(constraints)
    return not admissible


def _field_det(rows) -> FieldValue:
    """Determinant by Laplace expansion; division-free, so it stays inside
    the model ring even when entries are sums of monomials."""
    k = len(rows)
    if k == 1:
        return rows[0][0]
    ctx = rows[0][0].ctx
    total = ctx.zero()
    for i in range(k):
        if rows[i][0].is_zero:
            continue
        minor = [[rows[r][c] for c in range(1, k)] for r in range(k) if r != i]
        term = rows[i][0] * _field_det(minor)
        total = total + (term if i % 2 == 0 else -term)
    return total


def orthogonal_foliation(F: LinearFoliation) -> LinearFoliation:
    """The foliation tangent to V-perp.  Codimension one uses the cofactor
    vector of the tangent matrix; the general case uses exact kernel
    computation over the coordinatizing field."""
    m, d = F.leaf_dim, F.ambient_dim
    ctx, rows = F._ctx, F._rows
    if d - m == 1 and m >= 1:
        w = []
        for j in range(d):
            minor = [[rows[i][c] for c in range(d) if c != j] for i in range(m)]
            det = _field_det(minor) if m else ctx.from_fraction(1)
            w.append(ctx.to_tagged(det if j % 2 == 0 else -det))
        return LinearFoliation(d, [tuple(w)])
    kernel = frac_kernel(ctx, rows) if rows else \
        [[ctx.from_fraction(1 if i == j else 0) for i in range(d)]
         for j in range(d)]
    basis = [tuple(ctx.to_tagged(x) for x in vec) for vec in kernel]
    return LinearFoliation(d, basis)


def leaves_simply_connected(F: LinearFoliation) -> bool:
    """True iff the leaves are simply connected, i.e. the holonomy rank equals
    the ambient dimension.  Cross-checked against density of the orthogonal
    foliation's holonomy; a disagreement would be an internal error."""
    primary = holonomy(F).rank == F.ambient_dim
    dual = is_dense(holonomy(orthogonal_foliation(F)))
    if primary != dual:
        raise LeafspaceError(
            "internal inconsistency: rank criterion and dual density disagree")
    return primary


@dataclass(frozen=True)
class ClassificationFlags:
    """dense / simply_connected_leaves are always decided; transcendent and
    non_quadratic may be None (unknown) when neither a proof nor a refutation
    is available in the model."""

    dense: bool
    simply_connected_leaves: bool
    transcendent: bool | None
    non_quadratic: bool | None


def _transcendence_flag(entries, quadratic_relations) -> bool | None:
    if not entries:
        return None
    # any algebraic coordinate already violates joint algebraic independence
    if any(e.is_algebraic for e in entries):
        return False
    clean = all(e.is_single_term
                and len(e.monomials()[0]) == 1
                and e.monomials()[0][0][1] == 1
                and e.coefficients()[0].is_rational
                for e in entries)
    distinct = len({e.monomials()[0] for e in entries
                    if e.is_single_term}) == len(entries)
    if clean and distinct:
        return True
    if quadratic_relations:
        return False
    return None


def classify(F: LinearFoliation) -> ClassificationFlags:
    """Classification flags of F.

    transcendent: true iff the normalized coefficients are distinct declared
    transcendental symbols of degree one with rational coefficients; false if
    a rational algebraic relation among them is provable; None otherwise.
    non_quadratic: true iff the family {1, coefficients, pairwise products}
    has no integer linear relation (no rational polynomial relation of total
    degree at most two)."""
    nf = normalize_form(F)
    entries = [x for row in nf.beta for x in row]
    family = [TaggedReal.from_fraction(1)] + entries
    for i in range(len(entries)):
        for j in range(i, len(entries)):
            family.append(entries[i] * entries[j])
    relations = q_dependencies(family)
    non_quadratic = relations.dimension == 0
    transcendent = _transcendence_flag(entries, relations.dimension > 0)
    G = holonomy(F)
    return ClassificationFlags(
        dense=is_dense(G),
        simply_connected_leaves=leaves_simply_connected(F),
        transcendent=transcendent,
        non_quadratic=non_quadratic,
    )
