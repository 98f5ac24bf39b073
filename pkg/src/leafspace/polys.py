"""Dense univariate polynomial helpers over exact rationals.

Polynomials are tuples of Fractions (or ints), index = power of x, with no
trailing zero coefficients.  The zero polynomial is the empty tuple.  All
decision procedures here (Sturm counts, interval evaluation) use exact
rational arithmetic only.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Poly = tuple  # tuple of Fraction/int coefficients, lowest degree first


def trim(coeffs) -> Poly:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(p: Poly) -> int:
    """Degree, with the zero polynomial mapped to -1."""
    return len(p) - 1


def padd(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return trim(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def pneg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def psub(p: Poly, q: Poly) -> Poly:
    return padd(p, pneg(q))


def pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def pscale(p: Poly, c) -> Poly:
    if c == 0:
        return ()
    return tuple(a * c for a in p)


def pdivmod(p: Poly, q: Poly) -> tuple[Poly, Poly]:
    """Division with remainder over the rationals; q must be nonzero."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(c) for c in p]
    quo = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    dq = len(q) - 1
    lc = Fraction(q[-1])
    while len(rem) - 1 >= dq and any(rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) - 1 < dq:
            break
        shift = len(rem) - 1 - dq
        factor = rem[-1] / lc
        quo[shift] = factor
        for i in range(len(q)):
            rem[shift + i] -= factor * q[i]
    return trim(quo), trim(rem)


def pmod(p: Poly, q: Poly) -> Poly:
    return pdivmod(p, q)[1]


def monic(p: Poly) -> Poly:
    if not p:
        return ()
    lc = Fraction(p[-1])
    return tuple(Fraction(c) / lc for c in p)


def pgcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd over the rationals."""
    a, b = p, q
    while b:
        a, b = b, pmod(a, b)
    return monic(a)


def pderiv(p: Poly) -> Poly:
    return trim(i * p[i] for i in range(1, len(p)))


def peval(p: Poly, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def pcompose_linear(p: Poly, a, b) -> Poly:
    """p(a*x + b) by Horner over the linear substitution."""
    acc: Poly = ()
    lin = trim((b, a))
    for c in reversed(p):
        acc = padd(pmul(acc, lin), (Fraction(c),) if c != 0 else ())
    return acc


def int_clear_denominators(p: Poly) -> tuple:
    """Scale a rational polynomial to integer coefficients (content untouched)."""
    from math import lcm

    if not p:
        return ()
    denom = 1
    for c in p:
        denom = lcm(denom, Fraction(c).denominator)
    return tuple(int(Fraction(c) * denom) for c in p)


def int_primitive(p) -> tuple:
    """Primitive integer polynomial with positive leading coefficient."""
    q = int_clear_denominators(p)
    if not q:
        return ()
    g = 0
    for c in q:
        g = gcd(g, abs(int(c)))
    q = tuple(int(c) // g for c in q)
    if q[-1] < 0:
        q = tuple(-c for c in q)
    return q


def sturm_sequence(p: Poly) -> list[Poly]:
    """Sturm sequence of a squarefree polynomial."""
    seq = [p, pderiv(p)]
    while seq[-1]:
        r = pmod(seq[-2], seq[-1])
        seq.append(pneg(r))
    seq.pop()
    return seq


def _variations(seq: list[Poly], x) -> int:
    signs = []
    for p in seq:
        v = peval(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _variations_at_inf(seq: list[Poly], positive: bool) -> int:
    signs = []
    for p in seq:
        if not p:
            continue
        lc = p[-1]
        s = 1 if lc > 0 else -1
        if not positive and degree(p) % 2 == 1:
            s = -s
        signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: Poly, lo=None, hi=None, seq=None) -> int:
    """Number of distinct real roots of squarefree p in (lo, hi].

    None endpoints mean -inf / +inf.  Callers that need open intervals must
    ensure hi is not a root (always true for irreducible p of degree >= 2
    with rational endpoints).
    """
    if not p:
        raise ValueError("zero polynomial has no root count")
    if seq is None:
        seq = sturm_sequence(p)
    va = _variations(seq, lo) if lo is not None else _variations_at_inf(seq, False)
    vb = _variations(seq, hi) if hi is not None else _variations_at_inf(seq, True)
    return va - vb


def count_real_roots(p: Poly) -> int:
    return sturm_count(p)


def eval_interval(p: Poly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Interval extension of p over [lo, hi] by Horner in interval arithmetic."""
    alo, ahi = Fraction(0), Fraction(0)
    for c in reversed(p):
        cands = (alo * lo, alo * hi, ahi * lo, ahi * hi)
        alo, ahi = min(cands) + c, max(cands) + c
    return alo, ahi
