"""Coordinatization of TaggedReal families over a common Q-basis.

A family of TaggedReals lives in the ring  Q(theta)[s1^+-1, ..., sr^+-1]
where theta is a primitive element for all algebraic coefficients involved
and the s_i are the declared transcendental symbols.  A Coordinatizer fixes
theta once and represents every value as a map  monomial -> Q(theta)-vector,
which makes equality, rank and kernel questions exact rational linear
algebra.

Values produced by ring operations on embedded values stay embedded; the
basis of monomials is dynamic, and `flatten` fixes a finite Q-basis
(theta-power x monomial) for a concrete family when a matrix is needed.
"""

from __future__ import annotations

from fractions import Fraction

from .algebraic import AlgebraicReal, NumberField, primitive_element
from .errors import ModelError, ZeroDivisionLeafError
from .tagged import EMPTY, TaggedReal, coerce, mono_inv, mono_mul


class Coordinatizer:
    """Common-field context for a fixed collection of source values."""

    def __init__(self, values):
        values = [coerce(v) for v in values]
        self.symbols = {}
        coeffs = []
        for v in values:
            self.symbols.update(v.symbols)
            for c in v.terms.values():
                coeffs.append(c)
        irr = [c for c in coeffs if not c.is_rational]
        theta, vecs = primitive_element(irr if irr
                                        else [AlgebraicReal.from_fraction(1)])
        self.theta = theta
        self.field = NumberField(theta)
        self._known = list(zip(irr, vecs if irr else []))

    # -- embedding ------------------------------------------------------------

    def _coeff_vec(self, c: AlgebraicReal):
        if c.is_rational:
            return self.field.from_fraction(c.as_fraction())
        for known, vec in self._known:
            if known is c:
                return vec
        for known, vec in self._known:
            if known == c:
                return vec
        raise ModelError("coefficient was not part of this coordinatization")

    def embed(self, x) -> "FieldValue":
        x = coerce(x)
        if not set(x.symbols) <= set(self.symbols):
            self.symbols.update(x.symbols)
        return FieldValue(self, {m: self._coeff_vec(c)
                                 for m, c in x.terms.items()})

    def from_fraction(self, q) -> "FieldValue":
        return FieldValue(self, {EMPTY: self.field.from_fraction(q)})

    def zero(self) -> "FieldValue":
        return FieldValue(self, {})

    # -- flattening to rational vectors --------------------------------------

    def basis_for(self, values) -> list:
        monos = set()
        for v in values:
            monos.update(v.terms)
        return [(m, i) for m in sorted(monos) for i in range(self.field.deg)]

    def flatten(self, values, basis=None):
        """Rational coordinate matrix: one column per value, rows indexed by
        the (monomial, theta-power) basis."""
        if basis is None:
            basis = self.basis_for(values)
        cols = []
        for v in values:
            col = []
            for m, i in basis:
                vec = v.terms.get(m)
                col.append(vec[i] if vec is not None else Fraction(0))
            cols.append(col)
        # rows = basis elements, columns = values
        return [[cols[j][i] for j in range(len(cols))]
                for i in range(len(basis))], basis

    def to_tagged(self, v: "FieldValue") -> TaggedReal:
        terms = {m: self.field.to_algebraic(vec) for m, vec in v.terms.items()}
        return TaggedReal(terms, self.symbols)


class FieldValue:
    """A TaggedReal in coordinates: monomial -> Q(theta)-vector."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: Coordinatizer, terms: dict):
        self.ctx = ctx
        F = ctx.field
        self.terms = {m: v for m, v in terms.items() if not F.is_zero(v)}

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_algebraic(self) -> bool:
        return all(m == EMPTY for m in self.terms)

    @property
    def is_single_term(self) -> bool:
        return len(self.terms) == 1

    def __add__(self, other):
        F = self.ctx.field
        terms = dict(self.terms)
        for m, v in other.terms.items():
            terms[m] = F.add(terms[m], v) if m in terms else v
        return FieldValue(self.ctx, terms)

    def __neg__(self):
        F = self.ctx.field
        return FieldValue(self.ctx, {m: F.neg(v) for m, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.ctx.field
        terms: dict = {}
        for m1, v1 in self.terms.items():
            for m2, v2 in other.terms.items():
                m = mono_mul(m1, m2)
                p = F.mul(v1, v2)
                terms[m] = F.add(terms[m], p) if m in terms else p
        return FieldValue(self.ctx, terms)

    def scal(self, q):
        F = self.ctx.field
        return FieldValue(self.ctx, {m: F.scal(q, v)
                                     for m, v in self.terms.items()})

    def inverse(self) -> "FieldValue":
        if self.is_zero:
            raise ZeroDivisionLeafError("inverse of zero")
        if not self.is_single_term:
            raise ModelError("cannot invert a sum of distinct monomials")
        ((m, v),) = self.terms.items()
        return FieldValue(self.ctx, {mono_inv(m): self.ctx.field.inv(v)})

    def __eq__(self, other):
        if not isinstance(other, FieldValue):
            return NotImplemented
        return (self - other).is_zero

    def __hash__(self):  # pragma: no cover - not used as dict keys
        return hash(frozenset(self.terms))

    def sign(self):
        """Sign; exact for algebraic values, raises ModelError otherwise
        (callers with mixed values go through tagged.sign)."""
        if self.is_zero:
            return 0
        if not self.is_algebraic:
            raise ModelError("sign of a mixed value needs interval data")
        return self.ctx.field.sign(self.terms[EMPTY])

    def exact_divide(self, den: "FieldValue"):
        """Exact quotient self/den in the Laurent ring, or None if the
        quotient is not a Laurent polynomial."""
        if den.is_zero:
            raise ZeroDivisionLeafError("division by zero")
        if den.is_single_term:
            return self * den.inverse()
        F = self.ctx.field

        def shift_nonneg(terms):
            # Laurent units: shift so every symbol exponent is >= 0
            mins: dict[str, int] = {}
            for m in terms:
                for name, e in m:
                    mins[name] = min(mins.get(name, 0), e)
            shift = tuple(sorted((n, -e) for n, e in mins.items() if e < 0))
            return ({mono_mul(m, shift): v for m, v in terms.items()}, shift)

        num, num_shift = shift_nonneg(self.terms)
        den_terms, den_shift = shift_nonneg(den.terms)
        den_items = sorted(den_terms.items())
        lead_m, lead_v = den_items[-1]
        lead_inv = F.inv(lead_v)
        quo: dict = {}
        # greedy leading-term division; lex order on nonnegative exponents is
        # well-founded, so this terminates
        while True:
            num = {m: v for m, v in num.items() if not F.is_zero(v)}
            if not num:
                unshift = mono_mul(den_shift, mono_inv(num_shift))
                return FieldValue(self.ctx,
                                  {mono_mul(m, unshift): v
                                   for m, v in quo.items()})
            nm = sorted(num)[-1]
            t_m = mono_mul(nm, mono_inv(lead_m))
            if any(e < 0 for _n, e in t_m):
                return None  # leading monomial not divisible: no quotient
            t_v = F.mul(num[nm], lead_inv)
            quo[t_m] = F.add(quo.get(t_m, F.zero()), t_v)
            for m, v in den_items:
                mm = mono_mul(t_m, m)
                num[mm] = F.sub(num.get(mm, F.zero()), F.mul(t_v, v))

    def __repr__(self):
        return f"FieldValue({self.terms})"


class FracValue:
    """Quotient of two FieldValues, for internal elimination only."""

    __slots__ = ("num", "den")

    def __init__(self, num: FieldValue, den: FieldValue | None = None):
        if den is None:
            den = num.ctx.from_fraction(1)
        if den.is_zero:
            raise ZeroDivisionLeafError("zero denominator")
        q = num.exact_divide(den)
        if q is not None:
            num, den = q, num.ctx.from_fraction(1)
        self.num = num
        self.den = den

    @property
    def is_zero(self):
        return self.num.is_zero

    def __add__(self, other):
        return FracValue(self.num * other.den + other.num * self.den,
                         self.den * other.den)

    def __sub__(self, other):
        return FracValue(self.num * other.den - other.num * self.den,
                         self.den * other.den)

    def __neg__(self):
        return FracValue(-self.num, self.den)

    def __mul__(self, other):
        return FracValue(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        if other.is_zero:
            raise ZeroDivisionLeafError("division by zero")
        return FracValue(self.num * other.den, self.den * other.num)

    def as_field_value(self) -> FieldValue:
        q = self.num.exact_divide(self.den)
        if q is None:
            raise ModelError("value is not a Laurent polynomial in the model")
        return q


# ---------------------------------------------------------------------------
# Linear algebra over the fraction field of the model ring
# ---------------------------------------------------------------------------

def _as_frac_matrix(rows):
    return [[x if isinstance(x, FracValue) else FracValue(x) for x in row]
            for row in rows]


def frac_rref(rows):
    """Gaussian elimination over Frac(model ring); returns (R, pivot cols)."""
    R = _as_frac_matrix(rows)
    nrows = len(R)
    ncols = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if not R[i][c].is_zero), None)
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        inv = R[r][c]
        R[r] = [x / inv for x in R[r]]
        for i in range(nrows):
            if i != r and not R[i][c].is_zero:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return R, pivots


def frac_rank(rows) -> int:
    return len(frac_rref(rows)[1])


def frac_kernel(ctx: Coordinatizer, rows) -> list[list[FieldValue]]:
    """Kernel basis of a FieldValue matrix, with denominators cleared so each
    kernel vector has entries in the model ring."""
    if not rows:
        return []
    ncols = len(rows[0])
    R, pivots = frac_rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    one = FracValue(ctx.from_fraction(1))
    zero = FracValue(ctx.from_fraction(0))
    for f in free:
        vec = [zero] * ncols
        vec[f] = one
        for r, p in enumerate(pivots):
            vec[p] = zero - R[r][f]
        # clear denominators: multiply the whole vector by each denominator
        cleared = vec
        for i in range(ncols):
            den = cleared[i].den
            if den.is_single_term and den.terms.get((), None) is not None:
                pass  # cheap case handled by FracValue normalization
            cleared = [FracValue(x.num * den, x.den * den) for x in cleared]
        out = []
        for x in cleared:
            fv = x.num.exact_divide(x.den)
            if fv is None:  # pragma: no cover - denominators were cleared
                raise ModelError("kernel vector escaped the model ring")
            out.append(fv)
        basis.append(out)
    return basis


def frac_solve(ctx: Coordinatizer, A, B):
    """Solve A X = B column by column over Frac(model ring); A square
    invertible (FieldValue entries).  Returns X as FracValue rows."""
    n = len(A)
    ncols = len(B[0])
    aug = [[A[i][j] for j in range(n)] + [B[i][j] for j in range(ncols)]
           for i in range(n)]
    R, pivots = frac_rref(aug)
    if pivots != list(range(n)):
        raise ModelError("matrix is singular")
    return [[R[i][n + j] for j in range(ncols)] for i in range(n)]
