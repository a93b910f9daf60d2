"""Structural lemmas on ordered sets of rationals.

Dyadic sparsification, decreasing partitions with delta-weighted sums, and
the search for long geometric progressions ``a * y_i * theta**i in alpha*A``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from ._intmath import floor_log2
from .errors import BlockMismatch, EmptySetError, TooSmall, ZeroElement
from .graphkit import BipartiteGraph, DRCResult, drc_select
from .setcalc import NumberSet, product_set


# -- dyadic sparsification ----------------------------------------------------------

@dataclass(frozen=True)
class DyadicProfile:
    """Counts of elements in [2^j, 2^(j+1)); negatives are binned by |a|."""

    occupancy: dict[int, int]
    negative_occupancy: dict[int, int] = field(default_factory=dict)

    @property
    def s(self) -> int:
        return max(list(self.occupancy.values()) + list(self.negative_occupancy.values()), default=0)

    @property
    def positive_count(self) -> int:
        return sum(self.occupancy.values())


def dyadic_profile(A: NumberSet) -> DyadicProfile:
    pos: Counter[int] = Counter()
    neg: Counter[int] = Counter()
    for a in A:
        if a > 0:
            pos[floor_log2(a)] += 1
        elif a < 0:
            neg[floor_log2(-a)] += 1
    return DyadicProfile(dict(sorted(pos.items())), dict(sorted(neg.items())))


def sparse_subselect(A: NumberSet, s: int) -> NumberSet:
    """Every (2s)-th element of the non-negative part (or of -A if that is larger)."""
    if s < 1:
        raise ValueError("s must be positive")
    nonneg = A.nonnegative_part()
    flip = 2 * len(nonneg) < len(A)
    base = A.negate().nonnegative_part() if flip else nonneg
    if len(base) < 2 * s:
        raise TooSmall(f"need at least {2 * s} elements on the chosen side, have {len(base)}")
    elems = base.elements
    picked = NumberSet(elems[i - 1] for i in range(2 * s, len(elems) + 1, 2 * s))
    return picked.negate() if flip else picked


@dataclass(frozen=True)
class KSumCheck:
    distinct: bool
    count: int
    witness: tuple[tuple[Fraction, ...], tuple[Fraction, ...]] | None = None


def verify_distinct_ksums(B: NumberSet, k: int) -> KSumCheck:
    """Are the sums over strictly increasing k-tuples of B pairwise distinct?"""
    if k < 1 or k > len(B):
        raise ValueError("need 1 <= k <= |B|")
    seen: dict[Fraction, tuple[Fraction, ...]] = {}
    for combo in combinations(B.elements, k):
        total = sum(combo, Fraction(0))
        if total in seen:
            return KSumCheck(False, len(seen), (seen[total], combo))
        seen[total] = combo
    return KSumCheck(True, len(seen))


# -- decreasing partitions and delta sums --------------------------------------------------

@dataclass(frozen=True)
class DeltaSystem:
    """Weights 1 = d_0 > d_1 > ... > d_{k-1} > 0."""

    deltas: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        ds = tuple(Fraction(d) for d in self.deltas)
        object.__setattr__(self, "deltas", ds)
        if not ds or ds[0] != 1:
            raise ValueError("delta_0 must equal 1")
        if any(not (a > b) for a, b in zip(ds, ds[1:])) or ds[-1] <= 0:
            raise ValueError("deltas must strictly decrease and stay positive")

    def __len__(self) -> int:
        return len(self.deltas)


@dataclass(frozen=True)
class DecreasingPartition:
    blocks: tuple[NumberSet, ...]

    def __post_init__(self) -> None:
        blocks = tuple(self.blocks)
        object.__setattr__(self, "blocks", blocks)
        for hi, lo in zip(blocks, blocks[1:]):
            if hi and lo and min(abs(c) for c in hi) <= max(abs(d) for d in lo):
                raise ValueError("earlier blocks must dominate later ones in absolute value")

    @classmethod
    def split(cls, C: NumberSet, k: int) -> "DecreasingPartition":
        """Largest elements first; the first k-1 blocks get floor(|C|/k) each."""
        if k < 1:
            raise ValueError("k must be positive")
        ordered = sorted(C.elements, key=abs, reverse=True)
        size = len(ordered) // k
        blocks = [NumberSet(ordered[i * size:(i + 1) * size]) for i in range(k - 1)]
        blocks.append(NumberSet(ordered[(k - 1) * size:]))
        return cls(tuple(blocks))

    @property
    def ground_set(self) -> NumberSet:
        return NumberSet(x for b in self.blocks for x in b)

    def __len__(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class DeltaCheck:
    holds: bool
    worst_pair: tuple[Fraction, Fraction] | None
    worst_index: int | None
    slack: Fraction | None


def check_delta_hypothesis(C: NumberSet, deltas: DeltaSystem | Sequence[Fraction], k: int) -> DeltaCheck:
    """c/d - 1 > 2k * delta_i / delta_{i-1} for all c > d in C and i = 1..k-1."""
    ds = deltas.deltas if isinstance(deltas, DeltaSystem) else tuple(Fraction(d) for d in deltas)
    if len(ds) != k:
        raise BlockMismatch(f"{len(ds)} deltas for k = {k}")
    if 0 in C:
        raise ZeroElement("0 in C")
    if k == 1 or len(C) < 2:
        return DeltaCheck(True, None, None, None)
    ratios = [ds[i] / ds[i - 1] for i in range(1, k)]
    worst_i = max(range(len(ratios)), key=lambda i: (ratios[i], -i))
    bound = 2 * k * ratios[worst_i]
    elems = C.elements
    worst_pair, worst_val = None, None
    for i, d in enumerate(elems):
        for c in elems[i + 1:]:
            val = c / d - 1
            if worst_val is None or val < worst_val:
                worst_pair, worst_val = (c, d), val
    slack = worst_val - bound
    return DeltaCheck(slack > 0, worst_pair, worst_i + 1, slack)


def delta_sum_set(P: DecreasingPartition, deltas: DeltaSystem | Sequence[Fraction], beta=1) -> NumberSet:
    """{beta * sum c_i delta_i : c_i in C_i}."""
    ds = deltas.deltas if isinstance(deltas, DeltaSystem) else tuple(Fraction(d) for d in deltas)
    if len(ds) != len(P.blocks):
        raise BlockMismatch(f"{len(P.blocks)} blocks but {len(ds)} deltas")
    beta = Fraction(beta)
    if beta == 0:
        raise ValueError("beta must be nonzero")
    scaled = [[c * d for c in block] for block, d in zip(P.blocks, ds)]
    sums = {Fraction(0)}
    for terms in scaled:
        sums = {s + t for s in sums for t in terms}
    return NumberSet(beta * s for s in sums)


# -- progressions in quotient sets ----------------------------------------------------------

@dataclass(frozen=True)
class ProgressionWitness:
    alpha: Fraction
    theta: Fraction
    tuple_count: int
    N: int
    total: int = 0
    pigeonhole_floor: Fraction = Fraction(0)


def _quotient_reps(A: NumberSet) -> Counter:
    elems = A.elements
    return Counter(y / w for y in elems for w in elems)


def progression_count(A: NumberSet, alpha, theta, N: int, reps: Counter | None = None) -> int:
    """Number of (a, y_0..y_N) in A^(N+2) with a * y_i * theta^i in alpha*A."""
    alpha, theta = Fraction(alpha), Fraction(theta)
    reps = _quotient_reps(A) if reps is None else reps
    powers = [theta ** i for i in range(N + 1)]
    total = 0
    for a in A:
        prod_ = 1
        for p in powers:
            # y works iff y / w = alpha / (a theta^i) for some w in A
            prod_ *= reps.get(alpha / (a * p), 0)
            if not prod_:
                break
        total += prod_
    return total


def _check_progression_inputs(A: NumberSet, B: NumberSet, N: int) -> None:
    if not A or not B:
        raise EmptySetError("A and B must be non-empty")
    if 0 in A:
        raise ZeroElement("0 in A")
    if not B.issubset(A):
        raise ValueError("B must be a subset of A")
    if N < 0:
        raise ValueError("N must be non-negative")


def rank_progressions(A: NumberSet, B: NumberSet, N: int) -> list[ProgressionWitness]:
    """All candidate (theta, alpha), best first: count desc, then theta, alpha ascending."""
    _check_progression_inputs(A, B, N)
    reps = _quotient_reps(A)
    thetas = Counter(b2 / b1 for b1 in B for b2 in B)
    elems = A.elements
    alphas = Counter(v * a1 / u for u in elems for v in elems for a1 in elems)
    counts: dict[tuple[Fraction, Fraction], int] = {}
    total = 0
    for theta, mult_t in thetas.items():
        for alpha, mult_a in alphas.items():
            c = progression_count(A, alpha, theta, N, reps)
            counts[(theta, alpha)] = c
            total += c * mult_t * mult_a
    floor = Fraction(total, len(B) ** 2 * len(A) ** 3)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0][0], kv[0][1]))
    return [ProgressionWitness(alpha, theta, c, N, total, floor) for (theta, alpha), c in ranked]


def progression_search(A: NumberSet, B: NumberSet, N: int) -> ProgressionWitness:
    return rank_progressions(A, B, N)[0]


def progression_energy(A: NumberSet, B: NumberSet, N: int) -> int:
    """sum over t of r(t)^2, r(t) = #{(b, v, a, z) : v a b^i z_i = t_i}."""
    _check_progression_inputs(A, B, N)
    elems = A.elements
    r: Counter = Counter()
    for b in B:
        bpows = [b ** i for i in range(N + 1)]
        for v in elems:
            for a in elems:
                base = [v * a * bp for bp in bpows]
                for zs in product(elems, repeat=N + 1):
                    r[tuple(x * z for x, z in zip(base, zs))] += 1
    return sum(c * c for c in r.values())


def progression_energy_lower_bound(A: NumberSet, B: NumberSet, N: int) -> Fraction:
    """|B|^2 |A|^(2N+6) / prod_{i=3}^{N+3} |A^(i)|."""
    denom = 1
    power = product_set(A, A)
    for i in range(3, N + 4):
        power = product_set(power, A)
        denom *= len(power)
    return Fraction(len(B) ** 2 * len(A) ** (2 * N + 6), denom)


# -- spread sets via dependent random choice ----------------------------------------------------

@dataclass(frozen=True)
class SpreadSets:
    witness: ProgressionWitness
    Y: tuple[NumberSet, ...]
    r: int
    m: int
    tuples: tuple[tuple[Fraction, ...], ...]
    neighbors: tuple[frozenset[Fraction], ...]
    drc: DRCResult

    def tuple_for(self, i: int, y) -> int:
        """Index of the lowest selected tuple whose i-th coordinate is y."""
        y = Fraction(y)
        for idx, tup in enumerate(self.tuples):
            if tup[i] == y:
                return idx
        raise KeyError(f"{y} is not in Y_{i}")

    def shared_support(self, indices: Iterable[int]) -> NumberSet:
        """Elements a of A adjacent to every listed selected tuple."""
        acc: frozenset | None = None
        for idx in indices:
            acc = self.neighbors[idx] if acc is None else acc & self.neighbors[idx]
        if acc is None:
            raise ValueError("no tuples given")
        return NumberSet(acc)


def tuple_graph(A: NumberSet, witness: ProgressionWitness, max_tuples: int = 200_000):
    """Bipartite graph A vs tuples (y_0..y_N) with a y_i theta^i in alpha*A for all i.

    Only tuples with at least one neighbor are listed.
    """
    alpha, theta, N = witness.alpha, witness.theta, witness.N
    elems = A.elements
    per_a = []
    for a in elems:
        cols = [tuple(y for y in elems if a * y * theta ** i / alpha in A) for i in range(N + 1)]
        per_a.append(cols)
    universe: set[tuple[Fraction, ...]] = set()
    for cols in per_a:
        size = math.prod(len(c) for c in cols)
        if len(universe) + size > max_tuples:
            raise ValueError(f"tuple universe exceeds {max_tuples}")
        universe.update(product(*cols))
    tuples = sorted(universe)
    index = {tup: j for j, tup in enumerate(tuples)}
    left = tuple(frozenset(index[tup] for tup in product(*cols)) for cols in per_a)
    return BipartiteGraph(len(elems), len(tuples), left), tuples


def find_spread_sets(
    A: NumberSet,
    B: NumberSet,
    N: int,
    t: int,
    r: int,
    m: int,
    a: int,
    seed: int,
    witness: ProgressionWitness | None = None,
    max_retries: int = 1000,
) -> SpreadSets:
    """Project dependent-random-choice survivors of the tuple graph onto coordinates."""
    if witness is None:
        witness = progression_search(A, B, N)
    elif witness.N != N:
        raise ValueError("witness was computed for a different N")
    G, tuples = tuple_graph(A, witness)
    drc = drc_select(G, t, r, m, a, seed, max_retries)
    chosen = [tuples[j] for j in drc.selected]
    Ys = tuple(NumberSet(tup[i] for tup in chosen) for i in range(N + 1))
    elems = A.elements
    nbrs = tuple(frozenset(elems[x] for x in G.right_adj[j]) for j in drc.selected)
    return SpreadSets(witness, Ys, r, m, tuple(chosen), nbrs, drc)


def verify_spread_sets(A: NumberSet, spread: SpreadSets) -> bool:
    """Re-derive every edge and check the r-subset common-neighbor guarantee."""
    w = spread.witness
    for tup, nb in zip(spread.tuples, spread.neighbors):
        expect = frozenset(a for a in A if all(a * y * w.theta ** i / w.alpha in A for i, y in enumerate(tup)))
        if expect != nb:
            return False
    for i, Yi in enumerate(spread.Y):
        if not Yi.issubset(A) or set(Yi) != {tup[i] for tup in spread.tuples}:
            return False
    size = min(spread.r, len(spread.tuples))
    for S in combinations(range(len(spread.tuples)), size):
        common = frozenset.intersection(*(spread.neighbors[j] for j in S)) if S else frozenset(A)
        if len(common) < spread.m:
            return False
    return True
