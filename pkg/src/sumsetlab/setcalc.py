"""Exact set calculus over the rationals.

Elements are :class:`fractions.Fraction` values.  A :class:`NumberSet` keeps
them as strictly increasing integer numerators over one shared positive
denominator, which lets additive operations run on plain integers.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, Union

from .errors import CapExceeded, DivisionByZero

Number = Union[int, Fraction, str]

DEFAULT_CAP = 10_000_000


def default_cap() -> int:
    """Element cap, overridable through ``SUMSETLAB_CAP``."""
    raw = os.environ.get("SUMSETLAB_CAP")
    if raw:
        cap = int(raw)
        if cap <= 0:
            raise ValueError("SUMSETLAB_CAP must be positive")
        return cap
    return DEFAULT_CAP


def to_rational(x: Number) -> Fraction:
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use Fraction or 'p/q' strings")
    return Fraction(x)


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


class NumberSet:
    """A finite set of rationals, canonical and immutable.

    >>> NumberSet([3, "1/2", 3])
    NumberSet(['1/2', 3])
    """

    __slots__ = ("_nums", "_den", "_lookup", "_hash")

    def __init__(self, elements: Iterable[Number] = ()) -> None:
        fracs = [to_rational(x) for x in elements]
        den = reduce(_lcm, (f.denominator for f in fracs), 1)
        nums = sorted({f.numerator * (den // f.denominator) for f in fracs})
        self._set_raw(nums, den)

    @classmethod
    def _from_scaled(cls, nums: Iterable[int], den: int, *, presorted: bool = False) -> "NumberSet":
        """Build from integer numerators over ``den``; reduces to lowest terms."""
        obj = cls.__new__(cls)
        seq = list(nums) if presorted else sorted(set(nums))
        obj._set_raw(seq, den)
        return obj

    def _set_raw(self, nums: list[int], den: int) -> None:
        if den < 0:
            nums = sorted(-x for x in nums)
            den = -den
        g = den
        for x in nums:
            if g == 1:
                break
            g = math.gcd(g, x)
        if g > 1:
            nums = [x // g for x in nums]
            den //= g
        self._nums = tuple(nums)
        self._den = den
        self._lookup = None
        self._hash = None

    # -- container protocol -------------------------------------------------

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._nums

    @property
    def denominator(self) -> int:
        return self._den

    @property
    def elements(self) -> tuple[Fraction, ...]:
        d = self._den
        return tuple(Fraction(x, d) for x in self._nums)

    def __len__(self) -> int:
        return len(self._nums)

    def __iter__(self) -> Iterator[Fraction]:
        d = self._den
        for x in self._nums:
            yield Fraction(x, d)

    def __getitem__(self, i: int) -> Fraction:
        return Fraction(self._nums[i], self._den)

    def __contains__(self, x: object) -> bool:
        try:
            f = to_rational(x)  # type: ignore[arg-type]
        except (TypeError, ValueError):
            return False
        scaled = f * self._den
        if scaled.denominator != 1:
            return False
        if self._lookup is None:
            self._lookup = frozenset(self._nums)
        return scaled.numerator in self._lookup

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NumberSet):
            return NotImplemented
        return self._den == other._den and self._nums == other._nums

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._den, self._nums))
        return self._hash

    def __repr__(self) -> str:
        shown = [format_rational(f) if f.denominator != 1 else f.numerator for f in self]
        return f"NumberSet({shown!r})"

    def __bool__(self) -> bool:
        return bool(self._nums)

    # -- convenience --------------------------------------------------------

    def min(self) -> Fraction:
        return self[0]

    def max(self) -> Fraction:
        return self[-1]

    def issubset(self, other: "NumberSet") -> bool:
        return all(x in other for x in self)

    def union(self, other: "NumberSet") -> "NumberSet":
        return NumberSet(list(self) + list(other))

    def intersection(self, other: "NumberSet") -> "NumberSet":
        return NumberSet(x for x in self if x in other)

    def negate(self) -> "NumberSet":
        return NumberSet._from_scaled(reversed([-x for x in self._nums]), self._den, presorted=True)

    def positive_part(self) -> "NumberSet":
        return NumberSet._from_scaled([x for x in self._nums if x > 0], self._den, presorted=True)

    def nonnegative_part(self) -> "NumberSet":
        return NumberSet._from_scaled([x for x in self._nums if x >= 0], self._den, presorted=True)

    def is_zero_set(self) -> bool:
        return self._nums == (0,)


EMPTY = NumberSet()
ZERO = NumberSet([0])


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# -- families ----------------------------------------------------------------

def geometric(ratio: Number, n: int, start: Number = 1) -> NumberSet:
    """GP(ratio, n) = {start * ratio**i : 0 <= i < n}."""
    r = to_rational(ratio)
    a = to_rational(start)
    return NumberSet(a * r ** i for i in range(n))


def arithmetic(step: Number, n: int, start: Number = 0) -> NumberSet:
    d = to_rational(step)
    a = to_rational(start)
    return NumberSet(a + i * d for i in range(n))


# -- binary operations ---------------------------------------------------------

def _guarded_pairs(xs, ys, combine, cap: int, what: str) -> set:
    if len(xs) * len(ys) <= cap:
        return {combine(x, y) for x in xs for y in ys}
    out: set = set()
    for x in xs:
        out.update(combine(x, y) for y in ys)
        if len(out) > cap:
            raise CapExceeded(len(out), cap, what)
    return out


def _additive(A: NumberSet, B: NumberSet, sign: int, cap: int | None) -> NumberSet:
    if not A or not B:
        return EMPTY
    cap = default_cap() if cap is None else cap
    den = _lcm(A._den, B._den)
    sa, sb = den // A._den, den // B._den
    xs = [x * sa for x in A._nums]
    ys = [sign * y * sb for y in B._nums]
    out = _guarded_pairs(xs, ys, int.__add__, cap, "sumset")
    if len(out) > cap:
        raise CapExceeded(len(out), cap, "sumset")
    return NumberSet._from_scaled(out, den)


def sumset(A: NumberSet, B: NumberSet, cap: int | None = None) -> NumberSet:
    """A + B.  Empty if either operand is empty."""
    return _additive(A, B, 1, cap)


def difference_set(A: NumberSet, B: NumberSet, cap: int | None = None) -> NumberSet:
    """A - B."""
    return _additive(A, B, -1, cap)


def product_set(A: NumberSet, B: NumberSet, cap: int | None = None) -> NumberSet:
    """A . B, the set of pairwise products."""
    if not A or not B:
        return EMPTY
    cap = default_cap() if cap is None else cap
    out = _guarded_pairs(A._nums, B._nums, int.__mul__, cap, "product set")
    if len(out) > cap:
        raise CapExceeded(len(out), cap, "product set")
    return NumberSet._from_scaled(out, A._den * B._den)


def quotient_set(A: NumberSet, B: NumberSet, cap: int | None = None) -> NumberSet:
    """A / B.  Raises DivisionByZero if 0 is in B."""
    if 0 in B._nums:
        raise DivisionByZero("0 in denominator set")
    if not A or not B:
        return EMPTY
    cap = default_cap() if cap is None else cap
    # (x/dA) / (y/dB) = (x*dB) / (y*dA)
    xs = [x * B._den for x in A._nums]
    ys = [y * A._den for y in B._nums]
    out = _guarded_pairs(xs, ys, Fraction, cap, "quotient set")
    if len(out) > cap:
        raise CapExceeded(len(out), cap, "quotient set")
    return NumberSet(out)


def _fold(A: NumberSet, h: int, op, cap: int | None) -> NumberSet:
    if h < 1:
        raise ValueError("h must be >= 1")
    cap = default_cap() if cap is None else cap
    if len(A) > cap:
        raise CapExceeded(len(A), cap)
    acc = A
    for _ in range(h - 1):
        acc = op(acc, A, cap)
    return acc


def hfold_sum(A: NumberSet, h: int, cap: int | None = None) -> NumberSet:
    """hA by a left fold of pairwise sumsets."""
    return _fold(A, h, sumset, cap)


def hfold_product(A: NumberSet, h: int, cap: int | None = None) -> NumberSet:
    """A^(h), the h-fold product set."""
    return _fold(A, h, product_set, cap)


def signed_fold(A: NumberSet, k: int, l: int, cap: int | None = None) -> NumberSet:
    """kA - lA; a 0-fold operand is {0}."""
    if k < 0 or l < 0 or k + l < 1:
        raise ValueError("need k, l >= 0 and k + l >= 1")
    pos = hfold_sum(A, k, cap) if k else ZERO
    neg = hfold_sum(A, l, cap) if l else ZERO
    return difference_set(pos, neg, cap)


def fold_difference(A: NumberSet, h: int, cap: int | None = None) -> NumberSet:
    """hA - hA, computed as h-fold sum of A - A (same set, smaller intermediates)."""
    if h < 1:
        raise ValueError("h must be >= 1")
    return hfold_sum(difference_set(A, A, cap), h, cap)


def additive_energy(A: NumberSet, B: NumberSet) -> int:
    """E(A, B) = sum over s of r(s)**2, r(s) = #{(a, b): a + b = s}."""
    if not A or not B:
        return 0
    den = _lcm(A._den, B._den)
    sa, sb = den // A._den, den // B._den
    ys = [y * sb for y in B._nums]
    reps = Counter(x * sa + y for x in A._nums for y in ys)
    return sum(c * c for c in reps.values())


def dilate(A: NumberSet, lam: Number) -> NumberSet:
    lam = to_rational(lam)
    if lam == 0:
        return ZERO if A else EMPTY
    nums = [x * lam.numerator for x in A._nums]
    if lam < 0:
        nums.reverse()
    return NumberSet._from_scaled(nums, A._den * lam.denominator, presorted=True)


def translate(A: NumberSet, tau: Number) -> NumberSet:
    tau = to_rational(tau)
    den = _lcm(A._den, tau.denominator)
    sa = den // A._den
    shift = tau.numerator * (den // tau.denominator)
    return NumberSet._from_scaled([x * sa + shift for x in A._nums], den, presorted=True)


def doubling_constant(A: NumberSet) -> Fraction:
    """|A + A| / |A|."""
    if not A:
        raise ValueError("doubling constant of the empty set")
    return Fraction(len(sumset(A, A)), len(A))
