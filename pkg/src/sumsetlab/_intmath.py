"""Exact integer roots and logarithms used where the math calls for real powers."""

from __future__ import annotations

import math
from fractions import Fraction


def iroot_floor(x: int, k: int) -> int:
    """Largest r >= 0 with r**k <= x."""
    if x < 0 or k < 1:
        raise ValueError("need x >= 0 and k >= 1")
    if x < 2 or k == 1:
        return x
    r = 1 << ((x.bit_length() + k - 1) // k)
    # Newton from above; monotone decreasing to the floor root
    while True:
        s = ((k - 1) * r + x // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r ** k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def iroot_ceil(x: int, k: int) -> int:
    r = iroot_floor(x, k)
    return r if r ** k == x else r + 1


def rational_power_floor(n: int, e: Fraction) -> int:
    """floor(n ** e) for n >= 1 and rational e >= 0."""
    e = Fraction(e)
    if e < 0:
        raise ValueError("exponent must be non-negative")
    return iroot_floor(n ** e.numerator, e.denominator)


def rational_power_ceil(n: int, e: Fraction) -> int:
    e = Fraction(e)
    if e < 0:
        raise ValueError("exponent must be non-negative")
    return iroot_ceil(n ** e.numerator, e.denominator)


def floor_log2(q: Fraction) -> int:
    """The j with 2**j <= q < 2**(j+1), for q > 0, without floating point."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("floor_log2 needs a positive argument")
    p, d = q.numerator, q.denominator
    j = p.bit_length() - d.bit_length()
    # 2**j <= p/d  <=>  p << -j >= d  (j<0)  or  p >= d << j  (j>=0)
    if j >= 0:
        if p < d << j:
            j -= 1
    elif p << -j < d:
        j -= 1
    return j


def safe_log(x: int | Fraction) -> float:
    """Natural log of a positive exact number, robust for huge integers."""
    x = Fraction(x)
    return math.log(x.numerator) - math.log(x.denominator)
