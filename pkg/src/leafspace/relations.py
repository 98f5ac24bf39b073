"""Exact Q-linear dependence of TaggedReal families, plus a clearly flagged
floating-input integer-relation heuristic (LLL).

Exact results and heuristic results never mix: the heuristic returns values
carrying exactness="heuristic" and is only offered for decimal input."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .coords import Coordinatizer
from .intmat import integer_kernel
from .tagged import coerce

LLL_DELTA = Fraction(99, 100)
DEFAULT_HEURISTIC_TOL = Fraction(1, 10 ** 10)
DEFAULT_HEIGHT_CAP = 10 ** 6


@dataclass(frozen=True)
class RelationLattice:
    """Basis of the lattice { c in Z^k : sum c_i x_i = 0 }, rows in HNF."""

    basis: tuple
    family_size: int

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def rank(self) -> int:
        """Q-rank of the family the relations annihilate."""
        return self.family_size - self.dimension


def q_dependencies(xs) -> RelationLattice:
    """Exact basis of all integer linear relations among the given values.

    Coordinatizes the family over a common Q-basis (primitive element for the
    algebraic parts, monomials for the transcendental parts) and computes the
    integer kernel."""
    xs = [coerce(x) for x in xs]
    if not xs:
        return RelationLattice((), 0)
    ctx = Coordinatizer(xs)
    embedded = [ctx.embed(x) for x in xs]
    matrix, _basis = ctx.flatten(embedded)
    ker = integer_kernel(matrix)
    return RelationLattice(tuple(tuple(row) for row in ker), len(xs))


def q_rank(xs) -> int:
    return q_dependencies(xs).rank


# ---------------------------------------------------------------------------
# Heuristic integer relations (LLL on decimal input)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HeuristicRelation:
    coeffs: tuple
    residual: Fraction
    exactness: str = field(default="heuristic")


def _lll_reduce(basis: list[list[Fraction]], delta: Fraction):
    """Textbook LLL with exact rational arithmetic."""
    b = [row[:] for row in basis]
    n = len(b)

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gram_schmidt():
        ortho, mu = [], [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = b[i][:]
            for j in range(i):
                denom = dot(ortho[j], ortho[j])
                mu[i][j] = dot(b[i], ortho[j]) / denom if denom else Fraction(0)
                v = [x - mu[i][j] * y for x, y in zip(v, ortho[j])]
            ortho.append(v)
        return ortho, mu

    ortho, mu = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            if abs(mu[k][j]) > Fraction(1, 2):
                q = round(mu[k][j])
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                ortho, mu = gram_schmidt()
        lhs = dot(ortho[k], ortho[k])
        rhs = (delta - mu[k][k - 1] ** 2) * dot(ortho[k - 1], ortho[k - 1])
        if lhs >= rhs:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            ortho, mu = gram_schmidt()
            k = max(k - 1, 1)
    return b


def integer_relation_heuristic(xs, tol=DEFAULT_HEURISTIC_TOL,
                               height_cap=DEFAULT_HEIGHT_CAP):
    """LLL-based search for a small integer relation among decimal values.

    Input values must be finite decimals (strings, Fractions or floats); the
    result, if any, is flagged heuristic and must never feed exact-mode
    conclusions.  Returns None when no candidate below the height cap and
    tolerance shows up in the reduced basis."""
    vals = [Fraction(str(x)) if isinstance(x, float) else Fraction(x)
            for x in xs]
    k = len(vals)
    if k < 2:
        return None
    tol = Fraction(tol)
    scale = Fraction(1) / tol
    basis = []
    for i in range(k):
        row = [Fraction(1) if j == i else Fraction(0) for j in range(k)]
        row.append(scale * vals[i])
        basis.append(row)
    reduced = _lll_reduce(basis, LLL_DELTA)
    best = None
    for row in reduced:
        c = [int(x) for x in row[:k]]
        if not any(c) or max(abs(v) for v in c) > height_cap:
            continue
        residual = abs(sum(ci * vi for ci, vi in zip(c, vals)))
        if residual >= tol:
            continue
        norm = sum(v * v for v in c)
        if best is None or norm < best[0]:
            best = (norm, c, residual)
    if best is None:
        return None
    _, c, residual = best
    # canonical sign: first nonzero coefficient positive
    first = next(v for v in c if v)
    if first < 0:
        c = [-v for v in c]
    return HeuristicRelation(tuple(c), residual)
