"""Brute-force reference implementations by direct tuple enumeration.

Nothing here touches the scaled-integer machinery of :mod:`setcalc`; inputs
are any iterables of numbers and results are plain Python sets.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable


def _elems(A: Iterable) -> list[Fraction]:
    return sorted({Fraction(a) for a in A})


def sumset(A, B) -> set[Fraction]:
    return {a + b for a in _elems(A) for b in _elems(B)}


def difference_set(A, B) -> set[Fraction]:
    return {a - b for a in _elems(A) for b in _elems(B)}


def hfold_sum(A, h: int) -> set[Fraction]:
    return {sum(t, Fraction(0)) for t in product(_elems(A), repeat=h)}


def hfold_product(A, h: int) -> set[Fraction]:
    return {math.prod(t, start=Fraction(1)) for t in product(_elems(A), repeat=h)}


def signed_fold(A, k: int, l: int) -> set[Fraction]:
    xs = _elems(A)
    return {
        sum(p, Fraction(0)) - sum(m, Fraction(0))
        for p in product(xs, repeat=k)
        for m in product(xs, repeat=l)
    }


def additive_energy(A, B) -> int:
    """Number of (a, b, a', b') with a + b = a' + b'."""
    xs, ys = _elems(A), _elems(B)
    return sum(1 for a, b, c, d in product(xs, ys, xs, ys) if a + b == c + d)


def distinct_ksums(B, k: int) -> bool:
    sums = [sum(c, Fraction(0)) for c in combinations(_elems(B), k)]
    return len(sums) == len(set(sums))


def delta_sums(blocks, deltas, beta=1) -> list[Fraction]:
    """All beta * sum c_i delta_i, with multiplicity."""
    beta = Fraction(beta)
    return [
        beta * sum((Fraction(c) * Fraction(d) for c, d in zip(combo, deltas)), Fraction(0))
        for combo in product(*(_elems(b) for b in blocks))
    ]


def common_neighbors(left_adj, n_left: int, right_vertices) -> set[int]:
    """Left vertices adjacent to every listed right vertex."""
    rv = list(right_vertices)
    return {x for x in range(n_left) if all(y in left_adj[x] for y in rv)}


def poly_value(coeffs: dict[int, int], x) -> Fraction:
    x = Fraction(x)
    return sum((c * x ** e for e, c in coeffs.items()), Fraction(0))


def order_at_one(coeffs: dict[int, int]) -> int:
    """Largest m with p(1) = p'(1) = ... = p^(m-1)(1) = 0, by falling factorial sums."""
    if not any(coeffs.values()):
        raise ValueError("zero polynomial")
    m = 0
    while sum(c * math.perm(e, m) for e, c in coeffs.items()) == 0:
        m += 1
    return m
