"""Exact reals with declared transcendental symbols.

A TaggedReal is a finite sum of terms  coefficient * monomial  where each
coefficient is an AlgebraicReal and each monomial is a product of integer
powers of declared transcendental symbols (the empty monomial carries the
pure-algebraic part).  Under the user's assertion that the symbols are
algebraically independent over the real algebraic numbers, equality of
TaggedReals is decidable structurally: equal iff identical term maps.

Monomial exponents may be negative so that single-term values stay
invertible; inputs always start with nonnegative exponents.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebraic import AlgebraicReal
from .errors import ModelError, ZeroDivisionLeafError

#: Signs below this interval width are reported as undecided.
MAX_SIGN_PRECISION = Fraction(1, 10 ** 60)


@dataclass(frozen=True)
class TranscendentalSymbol:
    """A named real declared transcendental, known only through a finite
    decimal approximation.  The declared set is asserted to be algebraically
    independent over the real algebraic numbers."""

    name: str
    approx: str

    def __post_init__(self):
        Fraction(self.approx)  # must parse as a finite decimal

    @property
    def precision(self) -> Fraction:
        """One unit in the last decimal place of the stated approximation."""
        if "." in self.approx:
            return Fraction(1, 10 ** len(self.approx.split(".")[1]))
        return Fraction(1)

    def interval(self) -> tuple[Fraction, Fraction]:
        v = Fraction(self.approx)
        u = self.precision
        return v - u, v + u


Monomial = tuple  # sorted tuple of (symbol name, nonzero integer exponent)

EMPTY: Monomial = ()


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps: dict[str, int] = {}
    for name, e in a:
        exps[name] = exps.get(name, 0) + e
    for name, e in b:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted((n, e) for n, e in exps.items() if e != 0))


def mono_inv(a: Monomial) -> Monomial:
    return tuple((n, -e) for n, e in a)


def mono_degree(a: Monomial) -> int:
    return sum(e for _n, e in a)


def mono_str(a: Monomial) -> str:
    if not a:
        return "1"
    parts = []
    for n, e in a:
        parts.append(n if e == 1 else f"{n}^{e}")
    return "*".join(parts)


class Undecided:
    """Sign verdict when interval certification gave up; carries the interval
    width at which it stopped."""

    def __init__(self, precision: Fraction):
        self.precision = precision

    def __repr__(self):
        return f"Undecided(precision={self.precision})"

    def __eq__(self, other):
        return isinstance(other, Undecided)

    def __hash__(self):
        return hash("undecided")


class TaggedReal:
    """Finite sum of algebraic-coefficient monomials in declared symbols."""

    __slots__ = ("terms", "symbols")

    def __init__(self, terms: dict, symbols: dict | None = None):
        clean = {}
        for mono, coeff in terms.items():
            if isinstance(coeff, (int, Fraction)):
                coeff = AlgebraicReal.from_fraction(coeff)
            if coeff.is_rational and coeff.as_fraction() == 0:
                continue
            clean[tuple(mono)] = coeff
        self.terms = clean
        self.symbols = dict(symbols or {})

    # -- constructors ---------------------------------------------------------

    @classmethod
    def from_fraction(cls, q) -> "TaggedReal":
        return cls({EMPTY: AlgebraicReal.from_fraction(q)})

    @classmethod
    def from_algebraic(cls, a: AlgebraicReal) -> "TaggedReal":
        return cls({EMPTY: a})

    @classmethod
    def from_symbol(cls, s: TranscendentalSymbol) -> "TaggedReal":
        return cls({((s.name, 1),): AlgebraicReal.from_fraction(1)},
                   {s.name: s})

    # -- structure queries ----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_algebraic(self) -> bool:
        return all(m == EMPTY for m in self.terms)

    @property
    def is_rational(self) -> bool:
        return self.is_algebraic and all(c.is_rational for c in self.terms.values())

    def algebraic_part(self) -> AlgebraicReal:
        return self.terms.get(EMPTY, AlgebraicReal.from_fraction(0))

    def as_algebraic(self) -> AlgebraicReal:
        if not self.is_algebraic:
            raise ModelError("value has transcendental terms")
        return self.algebraic_part()

    def as_fraction(self) -> Fraction:
        return self.as_algebraic().as_fraction()

    @property
    def is_single_term(self) -> bool:
        return len(self.terms) == 1

    def monomials(self):
        return sorted(self.terms)

    def coefficients(self) -> list[AlgebraicReal]:
        return [self.terms[m] for m in self.monomials()]

    # -- arithmetic -----------------------------------------------------------

    def _merged_symbols(self, other) -> dict:
        out = dict(self.symbols)
        out.update(other.symbols)
        return out

    def __add__(self, other) -> "TaggedReal":
        other = coerce(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            if m in terms:
                terms[m] = terms[m] + c
            else:
                terms[m] = c
        return TaggedReal(terms, self._merged_symbols(other))

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self) -> "TaggedReal":
        return TaggedReal({m: -c for m, c in self.terms.items()}, self.symbols)

    def __sub__(self, other):
        return self.__add__(-coerce(other))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other) -> "TaggedReal":
        other = coerce(other)
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = c1 * c2
                if m in terms:
                    terms[m] = terms[m] + c
                else:
                    terms[m] = c
        return TaggedReal(terms, self._merged_symbols(other))

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self) -> "TaggedReal":
        """Exact inverse, defined for single-term values only (the model does
        not invert mixed sums of monomials)."""
        if self.is_zero:
            raise ZeroDivisionLeafError("inverse of zero")
        if not self.is_single_term:
            raise ModelError(
                "cannot invert a sum of distinct monomials in this model")
        ((m, c),) = self.terms.items()
        return TaggedReal({mono_inv(m): c.inverse()}, self.symbols)

    def __truediv__(self, other):
        return self * coerce(other).inverse()

    def __rtruediv__(self, other):
        return coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "TaggedReal":
        if n == 0:
            return TaggedReal.from_fraction(1)
        base = self if n > 0 else self.inverse()
        acc = base
        for _ in range(abs(n) - 1):
            acc = acc * base
        return acc

    # -- equality (decidable under the independence assertion) ---------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, AlgebraicReal)):
            other = coerce(other)
        if not isinstance(other, TaggedReal):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[m] == other.terms[m] for m in self.terms)

    def __hash__(self):
        return hash(frozenset(self.terms))

    # -- numerics -------------------------------------------------------------

    def enclosure(self, width: Fraction) -> tuple[Fraction, Fraction]:
        """Rational interval containing the value.  Algebraic coefficients are
        refined to the requested width; symbol intervals stay at their declared
        precision, so the result may be wider than requested."""
        lo_total, hi_total = Fraction(0), Fraction(0)
        for mono, coeff in self.terms.items():
            coeff.refine_to(width)
            clo, chi = coeff.interval()
            mlo, mhi = Fraction(1), Fraction(1)
            for name, e in mono:
                sym = self.symbols.get(name)
                if sym is None:
                    raise ModelError(f"symbol {name!r} lacks a declaration")
                slo, shi = sym.interval()
                if e < 0:
                    if slo <= 0 <= shi:
                        raise ModelError(
                            f"symbol {name!r} interval touches zero; cannot "
                            f"take a negative power")
                    slo, shi = 1 / shi, 1 / slo
                    e = -e
                for _ in range(e):
                    cands = (mlo * slo, mlo * shi, mhi * slo, mhi * shi)
                    mlo, mhi = min(cands), max(cands)
            cands = (clo * mlo, clo * mhi, chi * mlo, chi * mhi)
            lo_total += min(cands)
            hi_total += max(cands)
        return lo_total, hi_total

    def __float__(self) -> float:
        lo, hi = self.enclosure(Fraction(1, 10 ** 17))
        return float((lo + hi) / 2)

    def __repr__(self):
        if self.is_zero:
            return "TaggedReal(0)"
        parts = []
        for m in self.monomials():
            c = self.terms[m]
            cs = str(c.as_fraction()) if c.is_rational else f"alg({c.decimal(6)})"
            parts.append(cs if m == EMPTY else f"{cs}*{mono_str(m)}")
        return f"TaggedReal({' + '.join(parts)})"


def coerce(v) -> TaggedReal:
    if isinstance(v, TaggedReal):
        return v
    if isinstance(v, AlgebraicReal):
        return TaggedReal.from_algebraic(v)
    if isinstance(v, (int, Fraction)):
        return TaggedReal.from_fraction(v)
    if isinstance(v, TranscendentalSymbol):
        return TaggedReal.from_symbol(v)
    raise TypeError(f"cannot interpret {v!r} as a TaggedReal")


def sign(x, max_precision: Fraction = MAX_SIGN_PRECISION):
    """Certified sign of a TaggedReal: -1, 0, +1, or Undecided.

    Zero is reported only from the exact structural test.  Pure-algebraic
    values are always decided; values with transcendental monomials are
    decided by interval arithmetic at escalating coefficient precision and
    give up at `max_precision` (the declared symbol approximations bound how
    much can be decided)."""
    x = coerce(x)
    if x.is_zero:
        return 0
    if x.is_algebraic:
        return x.algebraic_part().sign()
    width = Fraction(1, 10 ** 6)
    while True:
        lo, hi = x.enclosure(width)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if width <= max_precision:
            return Undecided(width)
        width = width / 10 ** 6
        if width < max_precision:
            width = max_precision
