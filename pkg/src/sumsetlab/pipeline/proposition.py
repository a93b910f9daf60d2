"""One round of the few-products/many-sums construction.

Either A is dyadically sparse (distinct k-sums), or a short window of A is
multiplicatively tight; then a long progression ``a y_i theta^i in alpha A``
is found, and either its coordinate sets have trivially intersecting fold
difference sets (intersection algorithm, :class:`SubsetWitness`) or a common
nonzero beta is expanded through delta-weighted sums into many distinct
elements of ``l1 A - l2 A`` (:class:`GrowthWitness`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .._intmath import iroot_floor, rational_power_floor
from ..errors import CapExceeded, RetriesExhausted, StageFailed, TooSmall
from ..setcalc import NumberSet, default_cap, format_rational
from ..structure import (
    DecreasingPartition,
    DeltaSystem,
    ProgressionWitness,
    check_delta_hypothesis,
    delta_sum_set,
    dyadic_profile,
    find_spread_sets,
    rank_progressions,
    sparse_subselect,
    verify_distinct_ksums,
)
from ..tarry_escott import SignedPolynomial, construct_vanishing_poly
from .intersection import IntersectionCertificate, check_trivial_intersection, intersection_algorithm

GAMMA_FLOOR = Fraction(1, 2 ** 20)


def k_from_h(h: int) -> float:
    """k = exp(sqrt(log(h/2) / 100)); close to 1 for every h one can compute with."""
    if h < 2:
        raise ValueError("h must be >= 2")
    return math.exp(math.sqrt(math.log(h / 2) / 100))


def ell_from_k(k: float) -> float:
    return k ** 8


@dataclass(frozen=True)
class GrowthWitness:
    """Many distinct elements of l1*A - l2*A (scaled by alpha)."""

    branch: str  # "dyadic" or "delta"
    k: int
    alpha: Fraction
    beta: Fraction
    theta: Fraction | None
    witness: ProgressionWitness | None
    C: NumberSet
    partition: DecreasingPartition
    deltas: tuple[Fraction, ...]
    signs: tuple[int, ...]
    polys: tuple[SignedPolynomial, ...]
    reps: dict[int, tuple[tuple[Fraction, Fraction], ...]]  # exponent -> (y+, y-) pairs summing to beta
    sums: NumberSet
    ell1: int
    ell2: int
    params: dict = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.sums)

    @property
    def bound(self) -> int:
        return (len(self.C) // self.k) ** (self.k - 1)

    def expand(self, combo: Sequence[Fraction]) -> list[Fraction]:
        """Signed summands of the sum indexed by (c_0, ..., c_{k-1})."""
        if self.branch == "dyadic":
            return list(combo)
        terms: list[Fraction] = []
        for c, sigma, f in zip(combo, self.signs, self.polys):
            for e, coef in f.terms:
                w = sigma * coef * c * self.theta ** e
                for yp, ym in self.reps[e]:
                    terms.append(w * yp)
                    terms.append(-w * ym)
        return terms

    def combos(self):
        if self.branch == "dyadic":
            from itertools import combinations

            return combinations(self.C.elements, self.k)
        return product(*(b.elements for b in self.partition.blocks))

    def to_json(self) -> dict:
        fr = format_rational
        return {
            "branch": self.branch,
            "k": self.k,
            "alpha": fr(self.alpha),
            "beta": fr(self.beta),
            "theta": None if self.theta is None else fr(self.theta),
            "C": [fr(x) for x in self.C],
            "blocks": [[fr(x) for x in b] for b in self.partition.blocks],
            "deltas": [fr(d) for d in self.deltas],
            "signs": list(self.signs),
            "polys": [str(p) for p in self.polys],
            "reps": {str(e): [[fr(a), fr(b)] for a, b in pairs] for e, pairs in sorted(self.reps.items())},
            "count": self.count,
            "bound": self.bound,
            "ell1": self.ell1,
            "ell2": self.ell2,
            "params": self.params,
        }


@dataclass(frozen=True)
class SubsetWitness:
    """A subset A' whose l^j-fold is dwarfed by a fold sumset of A."""

    A_prime: NumberSet
    j: int
    certificate: IntersectionCertificate
    A_sets: tuple[NumberSet, ...]
    ell: int
    t: int
    params: dict = field(default_factory=dict)

    @property
    def ratio(self) -> Fraction:
        return self.certificate.growth_ratio

    def to_json(self) -> dict:
        return {
            "A_prime": [format_rational(x) for x in self.A_prime],
            "j": self.j,
            "ell": self.ell,
            "t": self.t,
            "ratio": format_rational(self.ratio),
            "A_sets": [[format_rational(x) for x in S] for S in self.A_sets],
            "certificate": self.certificate.to_json(),
            "params": self.params,
        }


def verify_growth_witness(A: NumberSet, w: GrowthWitness) -> bool:
    """Re-expand every counted sum into signed summands in +-alpha*A."""
    Aset = set(A)
    seen = set()
    pos_count = neg_count = None
    target_scale = w.beta
    for combo in w.combos():
        terms = w.expand(combo)
        if w.branch == "dyadic":
            value = sum(combo, Fraction(0))
        else:
            value = target_scale * sum((c * d for c, d in zip(combo, w.deltas)), Fraction(0))
        if sum(terms, Fraction(0)) != value:
            return False
        pos = [x for x in terms if x > 0]
        neg = [x for x in terms if x < 0]
        if any(x / w.alpha not in Aset for x in pos) or any(-x / w.alpha not in Aset for x in neg):
            return False
        if w.branch == "delta":
            # zero summands cannot occur (0 is not in A), so counts are structural
            if len(pos) + len(neg) != len(terms):
                return False
            if pos_count is None:
                pos_count, neg_count = len(pos), len(neg)
        seen.add(value)
    if w.branch == "delta" and (pos_count, neg_count) != (w.ell1, w.ell2):
        return False
    return seen == set(w.sums)


# -- helpers ------------------------------------------------------------------------------------

def minimal_ratio_window(A: NumberSet, s: int) -> NumberSet:
    """s consecutive positive elements with the smallest max/min ratio (leftmost on ties)."""
    pos = A.positive_part().elements
    if len(pos) < s:
        raise TooSmall(f"need {s} positive elements")
    best = min(range(len(pos) - s + 1), key=lambda i: (pos[i + s - 1] / pos[i], i))
    return NumberSet(pos[best:best + s])


def tight_subinterval(A: NumberSet, window: NumberSet, gamma: Fraction) -> tuple[Fraction, NumberSet]:
    """The [y, y + gamma x) with y in the window that holds the most elements of A."""
    x = window.min()
    width = gamma * x
    best_y, best = None, None
    for y in window:
        inside = NumberSet(a for a in A if y <= a < y + width)
        if best is None or len(inside) > len(best):
            best_y, best = y, inside
    return best_y, best


def fold_representation(Y: NumberSet, target: Fraction, limit: int, cap: int):
    """Shortest (y+, y-) pairs from Y with sum(y+ - y-) = target, at most ``limit`` pairs."""
    diffs: dict[Fraction, tuple[Fraction, Fraction]] = {}
    for yp in Y:
        for ym in Y:
            d = yp - ym
            if d != 0 and d not in diffs:
                diffs[d] = (yp, ym)
    if target == 0:
        return ()
    reached: dict[Fraction, tuple] = {Fraction(0): ()}
    frontier = [Fraction(0)]
    order = sorted(diffs)
    for _ in range(limit):
        new: dict[Fraction, tuple] = {}
        for x in frontier:
            for d in order:
                z = x + d
                if z not in reached and z not in new:
                    new[z] = reached[x] + (diffs[d],)
        if target in new:
            return new[target]
        reached.update(new)
        if len(reached) > cap:
            raise CapExceeded(len(reached), cap, "fold representation")
        frontier = sorted(new)
        if not frontier:
            break
    return None


def _signed_delta(f: SignedPolynomial, theta: Fraction) -> tuple[Fraction, int]:
    v = f(theta)
    return (abs(v), 1 if v >= 0 else -1)


def _spaced(Ap: NumberSet, spacing: int) -> NumberSet:
    elems = Ap.elements
    return NumberSet(elems[j - 1] for j in range(spacing, len(elems) + 1, spacing))


def _dyadic_witness(A: NumberSet, k: int, s: int, params: dict) -> GrowthWitness:
    try:
        B = sparse_subselect(A, s)
    except TooSmall as exc:
        raise StageFailed("dyadic", str(exc), {"n": len(A), "s": s}) from None
    if len(B) < k:
        raise StageFailed("dyadic", f"selected set has {len(B)} < k elements", {"B": len(B)})
    check = verify_distinct_ksums(B, k)
    if not check.distinct:
        raise StageFailed("dyadic", "k-sums collide", {"witness": check.witness})
    from itertools import combinations

    sums = NumberSet(sum(c, Fraction(0)) for c in combinations(B.elements, k))
    return GrowthWitness(
        branch="dyadic", k=k, alpha=Fraction(1), beta=Fraction(1), theta=None, witness=None,
        C=B, partition=DecreasingPartition((B,)), deltas=(), signs=(), polys=(), reps={},
        sums=sums, ell1=k, ell2=0, params=params,
    )


def proposition_run(
    A: NumberSet,
    k: int,
    ell: int = 2,
    N: int | None = None,
    gamma: Fraction = Fraction(1, 2),
    delta: Fraction = Fraction(1, 5),
    seed: int = 0,
    cap: int | None = None,
    drc_t: int = 1,
    drc_r: int = 2,
    drc_m: int | None = None,
    drc_a: int = 1,
    max_retries: int = 200,
    gamma_floor: Fraction = GAMMA_FLOOR,
) -> GrowthWitness | SubsetWitness:
    if k < 2:
        raise ValueError("k must be >= 2")
    if 0 in A:
        raise ValueError("0 must not be in A")
    cap = default_cap() if cap is None else cap
    n = len(A)
    s = rational_power_floor(n, Fraction(delta))
    params = {
        "k": k, "ell": ell, "seed": seed, "delta": format_rational(Fraction(delta)),
        "s": s, "n": n,
    }

    # (1) dyadic sparsity
    profile = dyadic_profile(A)
    if profile.s <= max(s, 1):
        # any bound on the occupancy works; the tightest keeps the most elements
        return _dyadic_witness(A, k, max(profile.s, 1), params)

    # (3) polynomials, support, padding to a power of two
    polys = tuple(construct_vanishing_poly(j) for j in range(k))
    degree = max(p.degree for p in polys)
    if N is None:
        N = degree
    elif N < degree:
        raise ValueError(f"N must be at least {degree}")
    S = sorted({e for p in polys for e in p.support})
    M = len(S)
    t = max(1, (M - 1).bit_length())
    params.update({"N": N, "S": S, "M": M, "t": t})

    window = minimal_ratio_window(A, max(s, 2))
    g = Fraction(gamma)
    failures = []
    while g >= gamma_floor:
        try:
            return _attempt(A, k, ell, N, g, seed, cap, window, polys, S, t, params,
                            drc_t, drc_r, drc_m, drc_a, max_retries)
        except _Retry as exc:
            failures.append({"gamma": format_rational(g), "reason": str(exc)})
            if exc.final:
                # a smaller gamma only shrinks the sub-interval further
                raise StageFailed("interval", str(exc), {"attempts": failures}) from None
            g /= 2
    raise StageFailed("gamma", "delta hypothesis never verified above the gamma floor", {"attempts": failures})


class _Retry(Exception):
    def __init__(self, reason: str, final: bool = False) -> None:
        super().__init__(reason)
        self.final = final


def _attempt(A, k, ell, N, gamma, seed, cap, window, polys, S, t, params, drc_t, drc_r, drc_m, drc_a, max_retries):
    n = len(A)
    # (2) tight sub-interval
    y0, B = tight_subinterval(A, window, gamma)
    if len(B) < 2:
        raise _Retry(f"sub-interval at {y0} holds {len(B)} element(s)", final=True)

    # (4) progression with theta != 1, then spread sets
    ranked = [w for w in rank_progressions(A, B, N) if w.theta != 1 and w.tuple_count > 0]
    if not ranked:
        raise StageFailed("progression", "no progression with theta != 1", {"B": len(B)})
    witness = ranked[0]
    m = drc_m if drc_m is not None else max(1, iroot_floor(n, 2))
    try:
        spread = find_spread_sets(A, B, N, drc_t, drc_r, m, drc_a, seed, witness=witness,
                                  max_retries=max_retries)
    except RetriesExhausted as exc:
        raise StageFailed("spread", str(exc), {"m": m, "r": drc_r}) from exc
    kept = [spread.Y[e] for e in S]
    padded = kept + [kept[-1]] * (2 ** t - len(kept))

    # (5) trivial intersection -> subset branch
    check = check_trivial_intersection(padded, ell, t, cap)
    base = dict(params, gamma=format_rational(gamma), theta=format_rational(witness.theta),
                alpha=format_rational(witness.alpha))
    if check.trivial:
        cert = intersection_algorithm(A, padded, ell, t, cap)
        return SubsetWitness(padded[cert.high_index - 1], cert.g_high, cert, tuple(padded), ell, t, base)

    beta = check.beta
    folds = check.folds
    reps: dict[int, tuple] = {}
    for pos, e in enumerate(S):
        rep = fold_representation(spread.Y[e], beta, folds[pos], cap)
        if rep is None:
            raise StageFailed("beta", f"no representation of beta in Y_{e}", {"beta": format_rational(beta)})
        reps[e] = rep
    used = sorted({spread.tuple_for(e, y) for e, pairs in reps.items() for pair in pairs for y in pair})
    A_prime = spread.shared_support(used)

    theta = witness.theta
    dels = [_signed_delta(f, theta) for f in polys]
    deltas = tuple(d for d, _ in dels)
    signs = tuple(sg for _, sg in dels)
    try:
        DeltaSystem(deltas)
    except ValueError as exc:
        raise _Retry(f"delta system invalid: {exc}")

    # (6) spaced selection with adaptive thinning
    spacing = max(1, iroot_floor(n, 4))
    spread_ratio = max(theta, 1 / theta)
    while True:
        C = _spaced(A_prime, spacing)
        if len(C) < k:
            raise _Retry(f"|A'| = {len(A_prime)} too small for spacing {spacing}")
        elems = sorted(C.elements, key=abs)
        spaced_ok = all(abs(c) / abs(d) > spread_ratio for d, c in zip(elems, elems[1:]))
        if spaced_ok and check_delta_hypothesis(C, deltas, k).holds:
            break
        spacing *= 2

    partition = DecreasingPartition.split(C, k)
    sums = delta_sum_set(partition, deltas, beta)
    terms = sum(len(reps[e]) for f in polys for e in f.support)
    base.update({"spacing": spacing, "A_prime": len(A_prime), "beta": format_rational(beta)})
    return GrowthWitness(
        branch="delta", k=k, alpha=witness.alpha, beta=beta, theta=theta, witness=witness,
        C=C, partition=partition, deltas=deltas, signs=signs, polys=polys, reps=reps,
        sums=sums, ell1=terms, ell2=terms, params=base,
    )
