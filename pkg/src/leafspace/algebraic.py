"""Exact real algebraic numbers.

An AlgebraicReal is a primitive irreducible integer polynomial together with
an open rational interval isolating exactly one of its real roots.  Rationals
are the degree-1 case and take fast paths everywhere.  Sums and products go
through bivariate resultants; the correct irreducible factor of the resultant
is selected by interval refinement, so no floating point enters any decision.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import sympy

from .errors import DegreeCapError, ZeroDivisionLeafError
from .polys import (
    degree,
    eval_interval,
    int_primitive,
    monic,
    padd,
    pcompose_linear,
    peval,
    pgcd,
    pmod,
    pmul,
    pneg,
    pscale,
    psub,
    sturm_count,
    sturm_sequence,
    trim,
)

#: Maximum supported minimal-polynomial degree.  Inputs and intermediate
#: results beyond this raise DegreeCapError; configurable at desk scale.
DEGREE_CAP = 32


def set_degree_cap(cap: int) -> None:
    global DEGREE_CAP
    if cap < 1:
        raise ValueError("degree cap must be positive")
    DEGREE_CAP = cap


_x, _y = sympy.symbols("x y")


@lru_cache(maxsize=4096)
def _factor_squarefree(coeffs: tuple) -> tuple:
    """Distinct irreducible factors over Q of an integer polynomial,
    each returned primitive with positive leading coefficient."""
    poly = sympy.Poly(list(reversed(coeffs)), _x, domain="QQ")
    _, factors = poly.factor_list()
    out = []
    for f, _mult in factors:
        c = tuple(int(v) for v in reversed(f.all_coeffs()))
        out.append(int_primitive(c))
    return tuple(out)


@lru_cache(maxsize=4096)
def _is_irreducible(coeffs: tuple) -> bool:
    if len(coeffs) == 2:
        return True
    facs = _factor_squarefree(coeffs)
    return len(facs) == 1 and len(facs[0]) == len(coeffs)


def _resultant_sum(p: tuple, q: tuple) -> tuple:
    """Res_t(p(s - t), q(t)) as an integer polynomial in s; its roots are
    all sums of a root of p and a root of q."""
    s, t = _x, _y
    ps = sum(int(c) * (s - t) ** i for i, c in enumerate(p))
    qs = sum(int(c) * t ** i for i, c in enumerate(q))
    res = sympy.resultant(sympy.Poly(ps, t, s), sympy.Poly(qs, t, s))
    return _poly_from_sympy(res, s)


def _resultant_product(p: tuple, q: tuple) -> tuple:
    """Res_t(t^m p(s/t), q(t)); roots are products (q must not vanish at 0,
    which holds for the minpoly of a nonzero value)."""
    s, t = _x, _y
    m = len(p) - 1
    ps = sum(int(c) * s ** i * t ** (m - i) for i, c in enumerate(p))
    qs = sum(int(c) * t ** i for i, c in enumerate(q))
    res = sympy.resultant(sympy.Poly(ps, t, s), sympy.Poly(qs, t, s))
    return _poly_from_sympy(res, s)


def _poly_from_sympy(expr, var) -> tuple:
    poly = sympy.Poly(expr, var)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


class AlgebraicReal:
    """Exact real algebraic number: irreducible minpoly + isolating interval."""

    __slots__ = ("minpoly", "_lo", "_hi", "_sturm")

    def __init__(self, minpoly, lo, hi, _trusted=False):
        minpoly = tuple(int(c) for c in minpoly)
        lo, hi = Fraction(lo), Fraction(hi)
        if not _trusted:
            minpoly = int_primitive(minpoly)
            if degree(minpoly) < 1:
                raise ValueError("minpoly must be non-constant")
            if degree(minpoly) > DEGREE_CAP:
                raise DegreeCapError(
                    f"degree {degree(minpoly)} exceeds cap {DEGREE_CAP}"
                )
            if not _is_irreducible(minpoly):
                raise ValueError(f"minpoly {minpoly} is reducible over Q")
            if lo >= hi:
                raise ValueError("interval must be non-degenerate")
            if sturm_count(minpoly, lo, hi) != 1:
                raise ValueError(
                    f"interval ({lo}, {hi}) does not isolate exactly one real "
                    f"root of {minpoly}"
                )
        self.minpoly = minpoly
        self._lo = lo
        self._hi = hi
        self._sturm = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_fraction(cls, q) -> "AlgebraicReal":
        q = Fraction(q)
        mp = (-q.numerator, q.denominator)
        return cls(mp, q - 1, q + 1, _trusted=True)

    @classmethod
    def from_int_root(cls, n: int, k: int) -> "AlgebraicReal":
        """The real k-th root of a positive integer n (convenience for tests
        and specs: sqrt(2) = from_int_root(2, 2))."""
        if n <= 0 or k <= 0:
            raise ValueError("need n > 0, k > 0")
        mp = int_primitive((-n,) + (0,) * (k - 1) + (1,))
        facs = _factor_squarefree(mp)
        hi = Fraction(max(n, 2))
        for f in facs:
            if sturm_count(f, Fraction(0), hi) == 1:
                return cls(f, Fraction(0), hi, _trusted=True)
        raise ValueError("no real root found")  # pragma: no cover

    # -- basic queries --------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return len(self.minpoly) == 2

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("not a rational value")
        return Fraction(-self.minpoly[0], self.minpoly[1])

    @property
    def degree(self) -> int:
        return degree(self.minpoly)

    def interval(self) -> tuple[Fraction, Fraction]:
        if self.is_rational:
            v = self.as_fraction()
            return v, v
        return self._lo, self._hi

    # -- interval refinement --------------------------------------------------

    def _sturm_seq(self):
        if self._sturm is None:
            self._sturm = sturm_sequence(tuple(Fraction(c) for c in self.minpoly))
        return self._sturm

    def refine(self) -> None:
        """Halve the isolating interval (no-op for rationals)."""
        if self.is_rational:
            return
        lo, hi = self._lo, self._hi
        mid = (lo + hi) / 2
        # irreducible of degree >= 2 has no rational roots, so sign(mid) != 0
        if peval(self.minpoly, lo) * peval(self.minpoly, mid) < 0:
            self._hi = mid
        else:
            self._lo = mid

    def refine_to(self, width: Fraction) -> None:
        if self.is_rational:
            return
        while self._hi - self._lo > width:
            self.refine()

    def approx_fraction(self, eps: Fraction) -> Fraction:
        if self.is_rational:
            return self.as_fraction()
        self.refine_to(Fraction(eps))
        return (self._lo + self._hi) / 2

    def __float__(self) -> float:
        return float(self.approx_fraction(Fraction(1, 10 ** 17)))

    def decimal(self, digits: int = 12) -> str:
        """Decimal approximation string with the given number of digits."""
        q = self.approx_fraction(Fraction(1, 10 ** (digits + 2)))
        scaled = round(q * 10 ** digits)
        sign = "-" if scaled < 0 else ""
        scaled = abs(scaled)
        whole, frac = divmod(scaled, 10 ** digits)
        return f"{sign}{whole}.{str(frac).zfill(digits)}"

    # -- sign and comparison --------------------------------------------------

    def sign(self) -> int:
        if self.is_rational:
            v = self.as_fraction()
            return (v > 0) - (v < 0)
        while self._lo < 0 < self._hi:
            self.refine()
        return 1 if self._lo >= 0 else -1

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraicReal):
            if isinstance(other, (int, Fraction)):
                return self.is_rational and self.as_fraction() == Fraction(other)
            return NotImplemented
        if self.minpoly != other.minpoly:
            return False
        if self.is_rational:
            return True
        # same irreducible minpoly: equal iff the two intervals isolate the
        # same root; distinct roots separate under refinement
        while True:
            alo, ahi = self._lo, self._hi
            blo, bhi = other._lo, other._hi
            if ahi <= blo or bhi <= alo:
                return False
            lo, hi = min(alo, blo), max(ahi, bhi)
            if sturm_count(self.minpoly, lo, hi, seq=self._sturm_seq()) == 1:
                return True
            self.refine()
            other.refine()

    def __hash__(self):
        # hash by minpoly only; equal values share a minpoly
        return hash(self.minpoly)

    def __lt__(self, other):
        other = _coerce(other)
        if self == other:
            return False
        while True:
            alo, ahi = self.interval()
            blo, bhi = other.interval()
            if ahi <= blo:
                return True
            if bhi <= alo:
                return False
            self.refine()
            other.refine()

    def __le__(self, other):
        other = _coerce(other)
        return self == other or self < other

    def __gt__(self, other):
        return _coerce(other) < self

    def __ge__(self, other):
        other = _coerce(other)
        return self == other or other < self

    # -- arithmetic -----------------------------------------------------------

    def __neg__(self) -> "AlgebraicReal":
        if self.is_rational:
            return AlgebraicReal.from_fraction(-self.as_fraction())
        mp = int_primitive(tuple(c if i % 2 == 0 else -c
                                 for i, c in enumerate(self.minpoly)))
        return AlgebraicReal(mp, -self._hi, -self._lo, _trusted=True)

    def _add_fraction(self, r: Fraction) -> "AlgebraicReal":
        if r == 0:
            return self
        if self.is_rational:
            return AlgebraicReal.from_fraction(self.as_fraction() + r)
        mp = int_primitive(pcompose_linear(self.minpoly, Fraction(1), -r))
        return AlgebraicReal(mp, self._lo + r, self._hi + r, _trusted=True)

    def _mul_fraction(self, r: Fraction) -> "AlgebraicReal":
        if r == 0:
            return AlgebraicReal.from_fraction(0)
        if self.is_rational:
            return AlgebraicReal.from_fraction(self.as_fraction() * r)
        m = degree(self.minpoly)
        mp = int_primitive(tuple(Fraction(c) * r ** (m - i)
                                 for i, c in enumerate(self.minpoly)))
        lo, hi = self._lo * r, self._hi * r
        if r < 0:
            lo, hi = hi, lo
        return AlgebraicReal(mp, lo, hi, _trusted=True)

    def __add__(self, other) -> "AlgebraicReal":
        other = _coerce(other)
        if other.is_rational:
            return self._add_fraction(other.as_fraction())
        if self.is_rational:
            return other._add_fraction(self.as_fraction())
        _check_cap(self.degree * other.degree)
        res = _resultant_sum(self.minpoly, other.minpoly)

        def current_interval():
            return self._lo + other._lo, self._hi + other._hi

        def refine_operands():
            self.refine()
            other.refine()

        return _select_root(res, current_interval, refine_operands)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        return self.__add__(-_coerce(other))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other) -> "AlgebraicReal":
        other = _coerce(other)
        if other.is_rational:
            return self._mul_fraction(other.as_fraction())
        if self.is_rational:
            return other._mul_fraction(self.as_fraction())
        _check_cap(self.degree * other.degree)
        # exclude 0 from both intervals so interval products stay isolating
        self._refine_away_from_zero()
        other._refine_away_from_zero()
        res = _resultant_product(self.minpoly, other.minpoly)

        def current_interval():
            cands = (self._lo * other._lo, self._lo * other._hi,
                     self._hi * other._lo, self._hi * other._hi)
            return min(cands), max(cands)

        def refine_operands():
            self.refine()
            other.refine()

        return _select_root(res, current_interval, refine_operands)

    def __rmul__(self, other):
        return self.__mul__(other)

    def _refine_away_from_zero(self):
        if self.is_rational:
            return
        while self._lo <= 0 and self._hi >= 0:
            self.refine()

    def inverse(self) -> "AlgebraicReal":
        if self.is_rational:
            v = self.as_fraction()
            if v == 0:
                raise ZeroDivisionLeafError("inverse of zero")
            return AlgebraicReal.from_fraction(1 / v)
        self._refine_away_from_zero()
        mp = int_primitive(tuple(reversed(self.minpoly)))
        lo, hi = 1 / self._hi, 1 / self._lo
        return AlgebraicReal(mp, lo, hi, _trusted=True)

    def __truediv__(self, other):
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "AlgebraicReal":
        if n == 0:
            return AlgebraicReal.from_fraction(1)
        base = self if n > 0 else self.inverse()
        acc = None
        for _ in range(abs(n)):
            acc = base if acc is None else acc * base
        return acc

    def __repr__(self):
        if self.is_rational:
            return f"AlgebraicReal({self.as_fraction()})"
        return (f"AlgebraicReal(minpoly={self.minpoly}, "
                f"in ({self._lo}, {self._hi}))")


def _coerce(v) -> AlgebraicReal:
    if isinstance(v, AlgebraicReal):
        return v
    if isinstance(v, (int, Fraction)):
        return AlgebraicReal.from_fraction(v)
    raise TypeError(f"cannot interpret {v!r} as an algebraic real")


def _check_cap(deg: int) -> None:
    if deg > DEGREE_CAP:
        raise DegreeCapError(f"intermediate degree {deg} exceeds cap {DEGREE_CAP}")


def _select_root(respoly, current_interval, refine_operands) -> AlgebraicReal:
    """Pick the irreducible factor of `respoly` having exactly one root inside
    the (shrinking) interval enclosing the true value, and build the result."""
    factors = [(f, sturm_sequence(f)) for f in _factor_squarefree(tuple(respoly))]
    while True:
        lo, hi = current_interval()
        alive = []
        total = 0
        for f, seq in factors:
            if len(f) == 2:
                r = Fraction(-f[0], f[1])
                n = 1 if lo < r < hi else 0
            else:
                n = sturm_count(f, lo, hi, seq=seq)
            if n:
                alive.append((f, n))
                total += n
        if total == 1:
            f = alive[0][0]
            if len(f) == 2:
                return AlgebraicReal.from_fraction(Fraction(-f[0], f[1]))
            return AlgebraicReal(f, lo, hi, _trusted=True)
        factors = [(f, seq) for f, seq in factors
                   if any(f is g for g, _ in alive)]
        refine_operands()


# ---------------------------------------------------------------------------
# Number field arithmetic and primitive elements
# ---------------------------------------------------------------------------

class NumberField:
    """Arithmetic in Q(theta) with elements as coefficient tuples of length
    deg(theta) over the power basis 1, theta, ..., theta^(d-1)."""

    def __init__(self, theta: AlgebraicReal):
        self.theta = theta
        self.minpoly = monic(tuple(Fraction(c) for c in theta.minpoly))
        self.deg = degree(self.minpoly)

    # -- element constructors ----------------------------------------------

    def zero(self):
        return (Fraction(0),) * self.deg

    def one(self):
        return self.from_fraction(1)

    def from_fraction(self, q):
        return tuple([Fraction(q)] + [Fraction(0)] * (self.deg - 1))

    def gen(self):
        """The element theta itself."""
        if self.deg == 1:
            return (self.theta.as_fraction(),)
        return tuple(Fraction(1) if i == 1 else Fraction(0)
                     for i in range(self.deg))

    def from_poly(self, coeffs):
        p = pmod(trim(Fraction(c) for c in coeffs), self.minpoly)
        return tuple(p[i] if i < len(p) else Fraction(0) for i in range(self.deg))

    # -- ring operations ----------------------------------------------------

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def scal(self, q, a):
        q = Fraction(q)
        return tuple(q * x for x in a)

    def mul(self, a, b):
        return self.from_poly(pmul(trim(a), trim(b)))

    def is_zero(self, a) -> bool:
        return all(x == 0 for x in a)

    def inv(self, a):
        p = trim(a)
        if not p:
            raise ZeroDivisionLeafError("inverse of zero field element")
        # extended Euclid: s*p + t*minpoly = gcd = 1
        r0, r1 = self.minpoly, p
        s0, s1 = (), (Fraction(1),)
        while r1:
            q, r = _poly_divmod_frac(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, psub(s0, pmul(q, s1))
        lc = Fraction(r0[-1])
        inv = tuple(Fraction(c) / lc for c in s0)
        return self.from_poly(inv)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n: int):
        if n < 0:
            return self.pow(self.inv(a), -n)
        acc = self.one()
        for _ in range(n):
            acc = self.mul(acc, a)
        return acc

    # -- back to numbers -----------------------------------------------------

    def interval(self, a, width: Fraction) -> tuple[Fraction, Fraction]:
        """Rational enclosure of the real value of `a`, of width <= width."""
        p = trim(a)
        if degree(p) <= 0:
            v = p[0] if p else Fraction(0)
            return v, v
        while True:
            lo, hi = self.theta.interval()
            vlo, vhi = eval_interval(p, lo, hi)
            if vhi - vlo <= width:
                return vlo, vhi
            self.theta.refine()

    def sign(self, a) -> int:
        p = trim(a)
        if degree(p) <= 0:
            v = p[0] if p else Fraction(0)
            return (v > 0) - (v < 0)
        # a != 0 here, since deg p < deg minpoly and minpoly is irreducible
        while True:
            lo, hi = self.theta.interval()
            vlo, vhi = eval_interval(p, lo, hi)
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            self.theta.refine()

    def to_algebraic(self, a) -> AlgebraicReal:
        p = trim(a)
        if degree(p) <= 0:
            return AlgebraicReal.from_fraction(p[0] if p else 0)
        if self.deg == 1:
            return AlgebraicReal.from_fraction(peval(p, self.theta.as_fraction()))
        # resultant Res_t(minpoly(t), s - p(t)) has p(theta) among its roots
        from math import lcm

        s, t = _x, _y
        mp_int = int_primitive(self.minpoly)
        mt = sum(int(c) * t ** i for i, c in enumerate(mp_int))
        den = 1
        for c in p:
            den = lcm(den, Fraction(c).denominator)
        pint = [int(Fraction(c) * den) for c in p]
        pt = sum(c * t ** i for i, c in enumerate(pint))
        res = sympy.resultant(sympy.Poly(mt, t, s),
                              sympy.Poly(den * s - pt, t, s))
        respoly = _poly_from_sympy(res, s)
        width = [Fraction(1)]

        def current_interval():
            return self.interval(a, width[0])

        def refine_operands():
            width[0] /= 2

        return _select_root(respoly, current_interval, refine_operands)


def _poly_divmod_frac(a, b):
    from .polys import pdivmod
    return pdivmod(a, b)


# -- primitive element -------------------------------------------------------

def primitive_element(xs):
    """Common primitive element for a family of AlgebraicReals.

    Returns (theta, coords) where theta is an AlgebraicReal generating a field
    containing every x, and coords[i] is the coefficient tuple of xs[i] over
    the power basis of theta (length deg(theta)).
    """
    if not xs:
        raise ValueError("empty family")
    theta = None
    coords: list = []
    for x in xs:
        if x.is_rational:
            coords.append(("rat", x.as_fraction()))
            continue
        if theta is None:
            theta = x
            coords.append(("gen",))
            continue
        theta_new, old_gen_vec, x_vec = _combine(theta, x)
        F = NumberField(theta_new)
        remapped = []
        for c in coords:
            if c[0] == "rat" or c[0] == "vec_final":
                remapped.append(c)
            elif c[0] == "gen":
                remapped.append(("vec", old_gen_vec))
            else:  # previous vec over old theta: re-express via Horner
                remapped.append(("vec", _subst(F, c[1], old_gen_vec)))
        coords = remapped
        coords.append(("vec", x_vec))
        theta = theta_new
    if theta is None:
        theta = AlgebraicReal.from_fraction(1)
    F = NumberField(theta)
    out = []
    for c in coords:
        if c[0] == "rat":
            out.append(F.from_fraction(c[1]))
        elif c[0] == "gen":
            out.append(F.gen())
        else:
            out.append(c[1])
    return theta, out


def _subst(F: NumberField, coeffs, vec):
    """Evaluate the polynomial `coeffs` at the field element `vec`."""
    acc = F.zero()
    for c in reversed(coeffs):
        acc = F.mul(acc, vec)
        acc = F.add(acc, F.from_fraction(c))
    return acc


def _combine(a: AlgebraicReal, b: AlgebraicReal):
    """Primitive element for the pair (a, b), with coordinates of both.

    Tries theta = a + k*b for k = 1, 2, 3, ...; k works when the field gcd
    below is linear, which happens for all but finitely many k.
    """
    for k in range(1, 200):
        try:
            theta = a + b._mul_fraction(Fraction(k))
        except DegreeCapError:
            raise
        F = NumberField(theta)
        if F.deg == 1:
            # degenerate: a + k b rational, so b generates both; retry shifts
            continue
        # gcd over Q(theta)[t] of q_b(t) and p_a(theta - k t)
        qb = [F.from_fraction(c) for c in b.minpoly]
        lin = [F.gen(), F.from_fraction(-k)]  # theta - k t
        pa = _fpoly_eval_linear(F, a.minpoly, lin)
        g = _fpoly_gcd(F, qb, pa)
        if len(g) == 2:  # linear: t - root
            b_vec = F.div(F.neg(g[0]), g[1])
            a_vec = F.sub(F.gen(), F.scal(k, b_vec))
            return theta, a_vec, b_vec
    raise RuntimeError("primitive element search failed")  # pragma: no cover


def _fpoly_eval_linear(F: NumberField, int_poly, lin):
    """int_poly composed with the degree-1 F-polynomial `lin` (list [c0, c1])."""
    acc: list = []
    for c in reversed(int_poly):
        acc = _fpoly_mul(F, acc, lin)
        acc = _fpoly_add(F, acc, [F.from_fraction(c)])
    return _fpoly_trim(F, acc)


def _fpoly_trim(F, p):
    while p and F.is_zero(p[-1]):
        p.pop()
    return p


def _fpoly_add(F, p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else F.zero()
        b = q[i] if i < len(q) else F.zero()
        out.append(F.add(a, b))
    return _fpoly_trim(F, out)


def _fpoly_mul(F, p, q):
    if not p or not q:
        return []
    out = [F.zero() for _ in range(len(p) + len(q) - 1)]
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return _fpoly_trim(F, out)


def _fpoly_mod(F, p, q):
    p = list(p)
    dq = len(q) - 1
    inv_lc = F.inv(q[-1])
    while len(p) - 1 >= dq:
        if F.is_zero(p[-1]):
            p.pop()
            continue
        factor = F.mul(p[-1], inv_lc)
        shift = len(p) - 1 - dq
        for i in range(len(q)):
            p[shift + i] = F.sub(p[shift + i], F.mul(factor, q[i]))
        p.pop()
    return _fpoly_trim(F, p)


def _fpoly_gcd(F, p, q):
    a, b = _fpoly_trim(F, list(p)), _fpoly_trim(F, list(q))
    while b:
        a, b = b, _fpoly_mod(F, a, b)
    inv_lc = F.inv(a[-1])
    return [F.mul(c, inv_lc) for c in a]
