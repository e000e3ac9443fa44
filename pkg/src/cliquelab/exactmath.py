"""Exact integer and rational arithmetic helpers.

Everything here either returns an exact value or raises CapExceeded; nothing
silently rounds.  Powers like n^(p/q) are handled through integer q-th roots,
so ceilings are computed without floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction

from mpmath import iv, mp, mpf
from mpmath import log as mp_log

from .caps import BIGINT_BIT_CAP
from .errors import CapExceeded

# Exact powers that cannot be reduced to a binary shift are capped much lower:
# big-int pow and iroot on results beyond ~10^7 bits take minutes to hours.
SLOW_BIT_CAP = 10**7


def pow2_split(n: int) -> tuple[int, int]:
    """n = odd << s with odd odd; returns (s, odd)."""
    if n <= 0:
        raise ValueError("n must be positive")
    s = (n & -n).bit_length() - 1
    return s, n >> s


def exact_log2(n: int) -> int | None:
    """log2(n) when n is a power of two, else None."""
    s, odd = pow2_split(n)
    return s if odd == 1 else None


def approx_log2_fraction(n: int, prec: int = 200) -> Fraction:
    """log2(n) as the exact rational value of a prec-bit float approximation."""
    if n < 1:
        raise ValueError("n must be positive")
    s = exact_log2(n)
    if s is not None:
        return Fraction(s)
    old = mp.prec
    try:
        mp.prec = prec
        return _mpf_to_fraction(mp_log(n, 2))
    finally:
        mp.prec = old


def iroot_floor(x: int, q: int) -> int:
    """Largest r with r**q <= x, for x >= 0, q >= 1."""
    if x < 0:
        raise ValueError("x must be non-negative")
    if q < 1:
        raise ValueError("q must be positive")
    if q == 1 or x < 2:
        return x
    if q == 2:
        return math.isqrt(x)
    # Newton iteration from an overestimate; decreasing, so it terminates.
    r = 1 << -(-x.bit_length() // q)
    while True:
        nr = ((q - 1) * r + x // r ** (q - 1)) // q
        if nr >= r:
            break
        r = nr
    while r**q > x:
        r -= 1
    while (r + 1) ** q <= x:
        r += 1
    return r


def ceil_root(x: int, q: int) -> int:
    """Smallest r with r**q >= x, for x >= 0."""
    r = iroot_floor(x, q)
    return r if r**q == x else r + 1


def ceil_pow_product(a: int, n: int, exponent: Fraction) -> int:
    """Exact ceil(a * n**exponent) for positive a, n and positive rational exponent.

    Power-of-two n with integer exponent reduces to a shift and is allowed up
    to BIGINT_BIT_CAP bits; every other path materializes n**p and is capped
    at SLOW_BIT_CAP bits.
    """
    if a <= 0 or n <= 1 or exponent <= 0:
        raise ValueError("need a >= 1, n >= 2, exponent > 0")
    p, q = exponent.numerator, exponent.denominator
    est_bits = p * n.bit_length() + q * a.bit_length()
    s = exact_log2(n)
    if q == 1:
        if s is not None:
            if s * p + a.bit_length() > BIGINT_BIT_CAP:
                raise CapExceeded(
                    f"exact value needs ~{s * p} bits, above cap {BIGINT_BIT_CAP}"
                )
            return a << (s * p)
        if est_bits > SLOW_BIT_CAP:
            raise CapExceeded(
                f"exact value needs ~{est_bits} bits and n is not a power of two "
                f"(cap {SLOW_BIT_CAP})"
            )
        return a * n**p
    if est_bits > SLOW_BIT_CAP:
        raise CapExceeded(
            f"exact q-th root path needs ~{est_bits} bits (cap {SLOW_BIT_CAP})"
        )
    return ceil_root(a**q * n**p, q)


def _raw_to_fraction(data: tuple) -> Fraction:
    """Exact value of an mpf data tuple (sign, mantissa, exponent, bitcount)."""
    sign, man, exp, _ = data
    man = int(man)
    if man == 0 and exp != 0:
        raise ValueError("non-finite value")
    v = Fraction(man) * (Fraction(2) ** int(exp))
    return -v if sign else v


def _mpf_to_fraction(x: mpf) -> Fraction:
    return _raw_to_fraction(x._mpf_)


def _iv_bounds(x) -> tuple[Fraction, Fraction]:
    """Exact rational endpoints of an interval float."""
    lo, hi = x._mpi_
    return _raw_to_fraction(lo), _raw_to_fraction(hi)


def exp_neg_upper(x: Fraction, prec: int = 120) -> Fraction:
    """A rational upper bound on exp(-x), tight to the working precision."""
    if x < 0:
        raise ValueError("x must be non-negative")
    old = iv.prec
    try:
        iv.prec = prec
        val = iv.exp(-iv.mpf(x.numerator) / x.denominator)
        return _iv_bounds(val)[1]
    finally:
        iv.prec = old


def compare_pow(a: int, ea: int, b: int, eb: int) -> int:
    """Sign of a**ea - b**eb for positive ints, avoiding huge materialization."""
    if a <= 0 or b <= 0 or ea < 0 or eb < 0:
        raise ValueError("need positive bases and non-negative exponents")
    old = iv.prec
    try:
        iv.prec = 400
        la = iv.log(iv.mpf(a)) * ea
        lb = iv.log(iv.mpf(b)) * eb
        if la.b < lb.a:
            return -1
        if lb.b < la.a:
            return 1
    finally:
        iv.prec = old
    # Interval enclosures overlap; fall back to exact comparison if affordable.
    est = max(ea * a.bit_length(), eb * b.bit_length())
    if est > SLOW_BIT_CAP:
        raise CapExceeded(
            f"power comparison too close to decide below {SLOW_BIT_CAP} bits"
        )
    va, vb = a**ea, b**eb
    return (va > vb) - (va < vb)


def ceil_frac_log2(coeff: Fraction, n: int) -> int:
    """Exact ceil(coeff * log2(n)) for n >= 2 and positive rational coeff."""
    if n < 2 or coeff <= 0:
        raise ValueError("need n >= 2 and coeff > 0")
    s = exact_log2(n)
    if s is not None:
        return math.ceil(coeff * s)
    old = iv.prec
    try:
        iv.prec = 400
        val = (iv.log(iv.mpf(n)) / iv.log(iv.mpf(2))) * iv.mpf(
            coeff.numerator
        ) / coeff.denominator
        blo, bhi = _iv_bounds(val)
        lo = math.ceil(blo)
        hi = math.ceil(bhi)
    finally:
        iv.prec = old
    if lo == hi:
        return lo
    # The enclosure straddles an integer m: decide val <= m exactly via
    # n**num <= 2**(m*den).  Only powers of two tie exactly, handled above.
    a, b = coeff.numerator, coeff.denominator
    for m in range(lo, hi + 1):
        if compare_pow(n, a, 2, m * b) <= 0:
            return m
    return hi


def binom_cdf(n: int, k: int, p: Fraction) -> Fraction:
    """Exact P[Binomial(n, p) <= k]."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if k < 0:
        return Fraction(0)
    if k >= n:
        return Fraction(1)
    q = 1 - p
    total = Fraction(0)
    for i in range(k + 1):
        total += math.comb(n, i) * p**i * q ** (n - i)
    return total
