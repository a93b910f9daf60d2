"""Tarry-Escott solutions and polynomials vanishing at 1 to a prescribed order.

A solution ``(a, b)`` of degree k gives the polynomial
``x**(-m) * sum(x**a_i - x**b_i)`` with m the smallest element (0 when all are
non-negative).  Both sides have the same size, so the zeroth power sums agree
as well, and the order of vanishing at ``x = 1`` is exactly k + 1.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import (
    BudgetExceeded,
    DegenerateInput,
    TableVerificationError,
    UnsupportedDegree,
    ZeroPolynomial,
)
from .io import parse_te_table


@dataclass(frozen=True)
class SignedPolynomial:
    """Sparse polynomial with integer coefficients in non-negative exponents.

    ``terms`` is kept sorted by decreasing exponent with no zero coefficients.
    """

    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        for e, c in self.terms:
            if e < 0:
                raise ValueError("negative exponent")
            if c == 0:
                raise ValueError("zero coefficient stored")

    @classmethod
    def from_mapping(cls, coeffs: Mapping[int, int]) -> "SignedPolynomial":
        items = sorted(((e, c) for e, c in coeffs.items() if c != 0), reverse=True)
        return cls(tuple(items))

    @classmethod
    def from_exponents(cls, plus: Iterable[int], minus: Iterable[int] = ()) -> "SignedPolynomial":
        acc: Counter[int] = Counter()
        for e in plus:
            acc[e] += 1
        for e in minus:
            acc[e] -= 1
        return cls.from_mapping(acc)

    @classmethod
    def one(cls) -> "SignedPolynomial":
        return cls(((0, 1),))

    @classmethod
    def x_power_minus_one(cls, n: int) -> "SignedPolynomial":
        return cls.from_mapping({n: 1, 0: -1})

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("degree of the zero polynomial")
        return self.terms[0][0]

    @property
    def leading_coefficient(self) -> int:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.terms[0][1]

    @property
    def term_count(self) -> int:
        return len(self.terms)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(e for e, _ in self.terms))

    @property
    def is_signed(self) -> bool:
        return all(c in (-1, 1) for _, c in self.terms)

    @property
    def is_monic(self) -> bool:
        return bool(self.terms) and self.terms[0][1] == 1

    def __neg__(self) -> "SignedPolynomial":
        return SignedPolynomial(tuple((e, -c) for e, c in self.terms))

    def __mul__(self, other: "SignedPolynomial") -> "SignedPolynomial":
        acc: Counter[int] = Counter()
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                acc[e1 + e2] += c1 * c2
        return SignedPolynomial.from_mapping(acc)

    def monic(self) -> "SignedPolynomial":
        """Negate if the leading coefficient is -1."""
        if self.terms and self.terms[0][1] < 0:
            return -self
        return self

    def __call__(self, x) -> Fraction:
        return eval_poly(self, x)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for idx, (e, c) in enumerate(self.terms):
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                mono = "x" if e == 1 else f"x^{e}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            if idx == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)


def eval_poly(p: SignedPolynomial, x) -> Fraction:
    """Exact value of p at a rational point (Horner over the sparse terms)."""
    x = Fraction(x)
    acc = Fraction(0)
    prev = None
    for e, c in p.terms:
        if prev is not None:
            acc *= x ** (prev - e)
        acc += c
        prev = e
    if prev is not None and prev > 0:
        acc *= x ** prev
    return acc


def _dense(p: SignedPolynomial) -> list[int]:
    """Coefficients from the constant term upward."""
    coeffs = [0] * (p.degree + 1)
    for e, c in p.terms:
        coeffs[e] = c
    return coeffs


def vanishing_order(p: SignedPolynomial) -> int:
    """Largest m with (x - 1)**m dividing p, by repeated synthetic division."""
    if p.is_zero:
        raise ZeroPolynomial("order of vanishing is undefined for 0")
    high_first = _dense(p)[::-1]
    order = 0
    while len(high_first) > 1:
        quotient = [high_first[0]]
        for c in high_first[1:-1]:
            quotient.append(c + quotient[-1])
        remainder = high_first[-1] + quotient[-1]
        if remainder != 0:
            break
        order += 1
        high_first = quotient
    return order


def vanishing_order_by_derivatives(p: SignedPolynomial) -> int:
    """Order of vanishing at 1 as the first non-vanishing derivative."""
    if p.is_zero:
        raise ZeroPolynomial("order of vanishing is undefined for 0")
    m = 0
    while True:
        value = sum(c * math.perm(e, m) for e, c in p.terms)
        if value != 0:
            return m
        m += 1


# -- Tarry-Escott solutions ------------------------------------------------------

def power_sum(values: Sequence[int], j: int) -> int:
    if j < 0:
        raise ValueError("j must be non-negative")
    return sum(v ** j for v in values)


@dataclass(frozen=True)
class TarryEscottSolution:
    left: tuple[int, ...]
    right: tuple[int, ...]
    claimed_degree: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))

    @property
    def size(self) -> int:
        return len(self.left)

    def normalized(self) -> "TarryEscottSolution":
        """Translate so the smallest element is 0, sort, put 0 on the left."""
        m = min(self.left + self.right)
        left = tuple(sorted(v - m for v in self.left))
        right = tuple(sorted(v - m for v in self.right))
        if left[0] != 0:
            left, right = right, left
        return TarryEscottSolution(left, right, self.claimed_degree)

    def wooley_size_bound_holds(self) -> bool:
        """s < (5/8)(k+1)**2 for the claimed degree."""
        k = self.claimed_degree if self.claimed_degree is not None else verify_te(self)
        return 8 * self.size < 5 * (k + 1) ** 2


def verify_te(sol: TarryEscottSolution) -> int:
    """Largest k with equal power sums for j = 1..k (0 if the sums differ)."""
    if len(sol.left) != len(sol.right):
        raise DegenerateInput("left and right have different sizes")
    if Counter(sol.left) == Counter(sol.right):
        raise DegenerateInput("left and right are equal as multisets")
    k = 0
    while power_sum(sol.left, k + 1) == power_sum(sol.right, k + 1):
        k += 1
    return k


def search_te(k: int, s: int, value_range: int, budget: int = 5_000_000) -> TarryEscottSolution | None:
    """Exhaustive search for two disjoint s-sets in [0, value_range] of degree >= k.

    Candidates are scanned in lexicographic order; the first match is returned
    in normalized form.  ``None`` means no solution exists in the range.
    """
    if k < 1 or s < 2 or value_range < 1:
        raise ValueError("need k >= 1, s >= 2, range >= 1")
    n_sets = math.comb(value_range + 1, s)
    if n_sets > budget:
        raise BudgetExceeded(f"{n_sets} candidate sets exceed the node budget {budget}")
    seen: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for cand in combinations(range(value_range + 1), s):
        sig = tuple(power_sum(cand, j) for j in range(1, k + 1))
        bucket = seen.setdefault(sig, [])
        cset = set(cand)
        for other in bucket:
            if cset.isdisjoint(other):
                sol = TarryEscottSolution(other, cand)
                norm = sol.normalized()
                return TarryEscottSolution(norm.left, norm.right, verify_te(sol))
        bucket.append(cand)
    return None


def te_to_polynomial(sol: TarryEscottSolution, monic: bool = True) -> SignedPolynomial:
    degree = verify_te(sol)
    if degree < 1:
        raise DegenerateInput("power sums differ already at j = 1")
    shift = min(sol.left + sol.right)
    shift = shift if shift < 0 else 0
    p = SignedPolynomial.from_exponents((a - shift for a in sol.left), (b - shift for b in sol.right))
    if p.is_zero:
        raise DegenerateInput("all terms cancel")
    if not p.is_signed:
        raise DegenerateInput("repeated elements give coefficients outside {-1, +1}")
    return p.monic() if monic else p


# -- shipped table ---------------------------------------------------------------

@dataclass(frozen=True)
class SolutionTable:
    by_degree: Mapping[int, TarryEscottSolution] = field(default_factory=dict)

    @property
    def max_degree(self) -> int:
        return max(self.by_degree, default=0)

    def __getitem__(self, k: int) -> TarryEscottSolution:
        return self.by_degree[k]

    def __contains__(self, k: int) -> bool:
        return k in self.by_degree


def load_table(text: str, source: str | None = None) -> SolutionTable:
    """Parse a table and re-verify every row by exact power sums."""
    entries: dict[int, TarryEscottSolution] = {}
    for k, left, right in parse_te_table(text, source):
        sol = TarryEscottSolution(left, right, k)
        try:
            exact = verify_te(sol)
        except DegenerateInput as exc:
            raise TableVerificationError(f"degree {k}: {exc}") from None
        if exact != k:
            raise TableVerificationError(f"degree {k} row has exact degree {exact}")
        entries[k] = sol
    return SolutionTable(entries)


@lru_cache(maxsize=1)
def default_table() -> SolutionTable:
    text = resources.files("sumsetlab.data").joinpath("te_solutions.txt").read_text()
    return load_table(text, "te_solutions.txt")


def construct_vanishing_poly(k: int, table: SolutionTable | None = None) -> SignedPolynomial:
    """Monic {-1,0,1} polynomial with at most max(k**2, 2) terms vanishing at 1 to order k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return SignedPolynomial.one()
    if k <= 3:
        p = SignedPolynomial.one()
        for i in range(k):
            p = p * SignedPolynomial.x_power_minus_one(2 ** i)
        return p.monic()
    table = default_table() if table is None else table
    # a degree k - 1 solution vanishes to order k
    if k - 1 not in table:
        raise UnsupportedDegree(
            f"order {k} needs a degree {k - 1} Tarry-Escott solution (table max {table.max_degree})"
        )
    sol = table[k - 1]
    if 2 * sol.size > k * k:
        raise UnsupportedDegree(f"table row for degree {k - 1} is too large ({2 * sol.size} > {k * k} terms)")
    return te_to_polynomial(sol)
