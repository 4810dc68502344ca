"""Shared exact-rational and high-precision numeric helpers.

Counting is always exact (Python ints / fractions.Fraction).  Transcendental
evaluations go through mpmath at a configurable mantissa width; one-sided
comparisons that involve a transcendental use interval arithmetic so that a
reported verdict never depends on rounding direction.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath as mp

# Working mantissa width for transcendental evaluation.  Entropy differences
# near x = 1/2 are second-order small, so double precision is not enough at
# class sizes around 2**20.
DEFAULT_PRECISION_BITS = 128
_GUARD_BITS = 32


def set_precision(bits: int = DEFAULT_PRECISION_BITS) -> None:
    """Set the working precision (mantissa bits, guard bits added on top)."""
    if bits < 53:
        raise ValueError("precision below double precision is not supported")
    mp.mp.prec = bits + _GUARD_BITS
    mp.iv.prec = bits + _GUARD_BITS


set_precision()


def binom(n: int, k: int) -> int:
    """C(n, k) with the usual convention: 0 outside 0 <= k <= n."""
    if k < 0 or k > n or n < 0:
        return 0
    return math.comb(n, k)


def mpf_from(q) -> mp.mpf:
    """Exact conversion of int/Fraction to mpf followed by one rounding."""
    if isinstance(q, Fraction):
        return mp.mpf(q.numerator) / q.denominator
    return mp.mpf(q)


def iv_from(q) -> mp.iv.mpf:
    """Enclosing interval for an int/Fraction."""
    if isinstance(q, Fraction):
        return mp.iv.mpf(q.numerator) / mp.iv.mpf(q.denominator)
    return mp.iv.mpf(q)


def log2_fraction(q: Fraction) -> mp.mpf:
    """log2 of a positive rational."""
    if q <= 0:
        raise ValueError("log2 of a non-positive rational")
    return mp.log(mp.mpf(q.numerator), 2) - mp.log(mp.mpf(q.denominator), 2)


def log2_binom(n: int, k: int) -> mp.mpf:
    """log2 C(n, k), usable for astronomically large n via loggamma."""
    if k < 0 or k > n:
        return mp.mpf("-inf")
    if n <= 4096:
        return mp.log(mp.mpf(binom(n, k)), 2)
    ln = mp.loggamma(mp.mpf(n) + 1) - mp.loggamma(mp.mpf(k) + 1) \
        - mp.loggamma(mp.mpf(n - k) + 1)
    return ln / mp.log(2)


def entropy_power(n: int, t: int) -> Fraction:
    """Exact value of 2**(n*H(t/n)) as a rational, H the binary entropy.

    Uses 2**(n*H(t/n)) = n**n / (t**t * (n-t)**(n-t)) for integer 0 <= t <= n,
    with the endpoint convention 0**0 = 1.
    """
    if not 0 <= t <= n:
        raise ValueError("t outside [0, n]")
    if t == 0 or t == n:
        return Fraction(1)
    return Fraction(n ** n, t ** t * (n - t) ** (n - t))


class UndecidedComparison(ArithmeticError):
    """An interval comparison stayed ambiguous after precision escalation."""


def leq_exp_of(x: Fraction, exponent: Fraction, max_prec: int = 4096) -> bool:
    """Certified test of x <= exp(exponent) for rationals x and exponent.

    Escalates interval precision until the comparison is decided.
    """
    if x <= 0:
        return True
    saved = mp.iv.prec
    try:
        prec = saved
        while prec <= max_prec:
            mp.iv.prec = prec
            rhs = mp.iv.exp(iv_from(exponent))
            lhs = iv_from(x)
            if lhs.b <= rhs.a:
                return True
            if lhs.a > rhs.b:
                return False
            prec *= 2
        raise UndecidedComparison(f"x vs exp({exponent}) undecided at {max_prec} bits")
    finally:
        mp.iv.prec = saved


def leq_scaled_exp(x: Fraction, scale: Fraction, exp_arg: int,
                   max_prec: int = 4096) -> bool:
    """Certified test of x <= scale * e**exp_arg (integer exp_arg >= 0).

    exp_arg == 0 is decided exactly in rational arithmetic; this matters
    because some of the checked inequalities are tight to equality.
    """
    if exp_arg == 0:
        return x <= scale
    if scale <= 0:
        return x <= 0
    return leq_exp_of(x / scale, Fraction(exp_arg), max_prec=max_prec)


def ceil_of_product_with_e(q: Fraction, max_prec: int = 4096) -> int:
    """ceil(q * e) for rational q >= 0, certified by interval escalation.

    q * e is irrational for q > 0, so the ceiling is always well defined.
    """
    if q < 0:
        raise ValueError("negative argument")
    if q == 0:
        return 0
    saved = mp.iv.prec
    try:
        prec = saved
        while prec <= max_prec:
            mp.iv.prec = prec
            prod = iv_from(q) * mp.iv.exp(mp.iv.mpf(1))
            lo = mp.ceil(mp.mpf(prod.a))
            hi = mp.ceil(mp.mpf(prod.b))
            if lo == hi:
                return int(lo)
            prec *= 2
        raise UndecidedComparison(f"ceil({q} * e) undecided at {max_prec} bits")
    finally:
        mp.iv.prec = saved


def popcount(x: int) -> int:
    return x.bit_count()


def bits_of(mask: int):
    """Iterate set bit positions of a Python-int bitset, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low
