"""Randomized property suites, run by ``sumsetlab lemma-check`` and the tests.

Each suite draws instances from a seeded generator, checks the library
against brute-force oracles or exact inequalities, and reports failures
rather than raising.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable

from . import oracles
from .errors import RetriesExhausted
from .graphkit import COVERED, DISJOINT, covering_split, drc_select, random_bipartite
from .setcalc import (
    NumberSet,
    additive_energy,
    difference_set,
    geometric,
    hfold_product,
    hfold_sum,
    signed_fold,
    sumset,
)
from .structure import DecreasingPartition, check_delta_hypothesis, delta_sum_set
from .tarry_escott import (
    construct_vanishing_poly,
    default_table,
    power_sum,
    vanishing_order,
    vanishing_order_by_derivatives,
)


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "failures": self.failures[:20],
            "notes": self.notes,
        }


def _fmt(A) -> str:
    return "{" + ",".join(str(x) for x in A) + "}"


def random_rational_set(rng: random.Random, max_size: int, num: int = 12, den: int = 4) -> NumberSet:
    size = rng.randint(1, max_size)
    return NumberSet(Fraction(rng.randint(-num, num), rng.randint(1, den)) for _ in range(size))


def random_int_set(rng: random.Random, max_size: int, lo: int = -50, hi: int = 50) -> NumberSet:
    size = rng.randint(1, max_size)
    return NumberSet(rng.randint(lo, hi) for _ in range(size))


# -- suites ---------------------------------------------------------------------------------------

def suite_oracle(seed: int = 1, count: int = 200) -> SuiteResult:
    """Fold sums/products, energy and signed folds against tuple enumeration."""
    res = SuiteResult("oracle")
    rng = random.Random(seed)
    for _ in range(count):
        A = random_rational_set(rng, 8)
        B = random_rational_set(rng, 8)
        h = rng.randint(1, 4)
        k = rng.randint(0, h)
        l = h - k
        res.cases += 1
        if set(hfold_sum(A, h)) != oracles.hfold_sum(A, h):
            res.fail(f"hfold_sum {_fmt(A)} h={h}")
        if set(hfold_product(A, h)) != oracles.hfold_product(A, h):
            res.fail(f"hfold_product {_fmt(A)} h={h}")
        if additive_energy(A, B) != oracles.additive_energy(A, B):
            res.fail(f"energy {_fmt(A)} {_fmt(B)}")
        if set(signed_fold(A, k, l)) != oracles.signed_fold(A, k, l):
            res.fail(f"signed_fold {_fmt(A)} k={k} l={l}")
    return res


def _separated_pair(rng: random.Random, max_size: int) -> tuple[NumberSet, NumberSet]:
    X = random_int_set(rng, max_size, 0, 40)
    span = 2 * 40 + 1
    Y = NumberSet(span * y for y in random_int_set(rng, max_size, 0, 40))
    return X, Y


def suite_easyint(seed: int = 1, count: int = 500) -> SuiteResult:
    """|X+Y| |(X-X) & (Y-Y)| >= |X||Y|, with equality of |X+Y| and |X||Y| when the intersection is {0}."""
    res = SuiteResult("easyint")
    rng = random.Random(seed)
    trivial_seen = 0
    for i in range(count):
        if i % 2:
            X, Y = _separated_pair(rng, 30)
        else:
            X, Y = random_int_set(rng, 30), random_int_set(rng, 30, -200, 200)
        res.cases += 1
        common = set(difference_set(X, X)) & set(difference_set(Y, Y))
        S = len(sumset(X, Y))
        if S * len(common) < len(X) * len(Y):
            res.fail(f"bound fails for {_fmt(X)} {_fmt(Y)}")
        if common == {0}:
            trivial_seen += 1
            if S != len(X) * len(Y):
                res.fail(f"equality fails for {_fmt(X)} {_fmt(Y)}")
    res.notes["trivial_intersections"] = trivial_seen
    return res


def suite_plunnecke(seed: int = 1, count: int = 100) -> SuiteResult:
    """|kA - lA| <= (|A+A|/|A|)^(k+l) |A| exactly."""
    res = SuiteResult("plunnecke")
    rng = random.Random(seed)
    for _ in range(count):
        A = random_int_set(rng, 25, -100, 100)
        total = rng.randint(1, 4)
        k = rng.randint(0, total)
        l = total - k
        res.cases += 1
        K = Fraction(len(sumset(A, A)), len(A))
        lhs = len(signed_fold(A, k, l))
        if lhs > K ** (k + l) * len(A):
            res.fail(f"{_fmt(A)} k={k} l={l}: {lhs} > {K ** (k + l) * len(A)}")
    return res


def suite_vanish(seed: int = 1, max_k: int = 7) -> SuiteResult:
    """Monic signed polynomials of the right order and sparsity; table rows re-verified."""
    res = SuiteResult("vanish")
    for k in range(max_k + 1):
        res.cases += 1
        p = construct_vanishing_poly(k)
        coeffs = p.as_dict()
        if not p.is_monic or any(c not in (-1, 1) for c in coeffs.values()):
            res.fail(f"k={k}: not a monic signed polynomial")
        if p.term_count > max(k * k, 2):
            res.fail(f"k={k}: {p.term_count} terms")
        orders = (vanishing_order(p), vanishing_order_by_derivatives(p), oracles.order_at_one(coeffs))
        if orders != (k, k, k):
            res.fail(f"k={k}: orders {orders}")
    table = default_table()
    for degree in sorted(table.by_degree):
        res.cases += 1
        sol = table[degree]
        sums_equal = [power_sum(sol.left, j) == power_sum(sol.right, j) for j in range(degree + 2)]
        if sums_equal != [True] * (degree + 1) + [False]:
            res.fail(f"table degree {degree} does not re-verify")
    return res


def suite_cover(seed: int = 1, count: int = 300) -> SuiteResult:
    res = SuiteResult("cover")
    rng = random.Random(seed)
    cases = Counter({DISJOINT: 0, COVERED: 0})
    for _ in range(count):
        X = random_int_set(rng, 14, -30, 30)
        Y = random_int_set(rng, 6, -30, 30)
        K = Fraction(rng.randint(1, 8), rng.randint(1, 2))
        res.cases += 1
        out = covering_split(X, Y, K)
        cases[out.case] += 1
        Xp = set(out.subset)
        dY = oracles.difference_set(Y, Y)
        ok = bool(Xp) and Xp <= set(X)
        if out.case == DISJOINT:
            ok = ok and len(Xp) >= K and all(u - v not in dY for u, v in combinations(sorted(Xp), 2))
        else:
            two = oracles.sumset(dY, dY)
            ok = ok and len(Xp) * K >= len(X) and oracles.difference_set(Xp, Xp) <= two
        if not ok:
            res.fail(f"{out.case} outcome fails for X={_fmt(X)} Y={_fmt(Y)} K={K}")
    res.notes["cases"] = dict(cases)
    return res


def suite_drc(seed: int = 1, count: int = 100) -> SuiteResult:
    res = SuiteResult("drc")
    rng = random.Random(seed)
    produced = 0
    for i in range(count):
        nl, nr = rng.randint(1, 25), rng.randint(1, 25)
        G = random_bipartite(nl, nr, Fraction(rng.randint(3, 9), 10), seed * 100_003 + i)
        t, r = rng.randint(1, 3), rng.randint(1, 3)
        m = rng.randint(1, max(1, nl // 2))
        res.cases += 1
        try:
            out = drc_select(G, t, r, m, 1, seed=rng.randrange(2 ** 32), max_retries=50)
        except RetriesExhausted:
            continue
        produced += 1
        U = sorted(out.selected)
        size = min(r, len(U))
        adj = [set(a) for a in G.left_adj]
        for S in combinations(U, size):
            if len(oracles.common_neighbors(adj, nl, S)) < m:
                res.fail(f"instance {i}: subset {S} has < {m} common neighbors")
                break
    res.notes["outputs"] = produced
    return res


def random_delta_instance(rng: random.Random):
    """Blocks with forced ratio gaps and a valid delta system (usually satisfying the hypothesis)."""
    k = rng.randint(1, 4)
    deltas = [Fraction(1)]
    for _ in range(k - 1):
        deltas.append(deltas[-1] / rng.randint(2, 30))
    worst = max((deltas[i] / deltas[i - 1] for i in range(1, k)), default=Fraction(0))
    gap = 1 + 2 * k * worst + Fraction(rng.randint(0, 3), 7)
    if rng.random() < 0.1:
        gap = 1 + Fraction(rng.randint(1, 5), 10)  # may violate the hypothesis
    sizes = [rng.randint(1, 3) for _ in range(k)]
    c = Fraction(rng.randint(1, 5), rng.randint(1, 3))
    elems = []
    for _ in range(sum(sizes)):
        elems.append(c)
        c = c * gap + Fraction(rng.randint(0, 4), 5)
    elems.reverse()  # largest first
    blocks, pos = [], 0
    for s in sizes:
        blocks.append(NumberSet(elems[pos:pos + s]))
        pos += s
    return DecreasingPartition(tuple(blocks)), tuple(deltas), k


COLLISION_INSTANCE = (({10, 9}, {4, 2}), (Fraction(1), Fraction(1, 2)))


def suite_delta(seed: int = 1, count: int = 500) -> SuiteResult:
    res = SuiteResult("delta")
    rng = random.Random(seed)
    held = drawn = 0
    # count only instances where the hypothesis holds
    while held < count and drawn < 4 * count:
        drawn += 1
        P, deltas, k = random_delta_instance(rng)
        beta = Fraction(rng.choice([-3, -1, 1, 2, 5]), rng.randint(1, 3))
        if not check_delta_hypothesis(P.ground_set, deltas, k).holds:
            continue
        res.cases += 1
        held += 1
        expected = math.prod(len(b) for b in P.blocks)
        raw = oracles.delta_sums(P.blocks, deltas, beta)
        got = delta_sum_set(P, deltas, beta)
        if len(got) != expected or len(set(raw)) != expected or set(got) != set(raw):
            res.fail(f"blocks {[_fmt(b) for b in P.blocks]} deltas {deltas}")
    (b0, b1), ds = COLLISION_INSTANCE
    P = DecreasingPartition((NumberSet(b0), NumberSet(b1)))
    res.cases += 1
    if check_delta_hypothesis(P.ground_set, ds, 2).holds or len(delta_sum_set(P, ds)) >= 4:
        res.fail("pinned collision instance no longer collides")
    if held < count:
        res.fail(f"only {held} of {drawn} draws satisfied the hypothesis")
    res.notes["hypothesis_held"] = held
    res.notes["drawn"] = drawn
    return res


FG_LISTING = {1: (1, 2), 2: (1, 2, 2, 4), 3: (1, 2, 2, 4, 2, 4, 4, 8)}


def suite_fg(seed: int = 1, a_max: int = 12) -> SuiteResult:
    from .pipeline.fg import fg_table

    res = SuiteResult("fg")
    table = fg_table(a_max)
    for a, row in FG_LISTING.items():
        res.cases += 1
        if table.row(a) != row:
            res.fail(f"f({a},.) = {table.row(a)}")
    for a in range(1, a_max + 1):
        for b in range(1, 2 ** a + 1):
            res.cases += 1
            v, g = table.f(a, b), table.g(a, b)
            if v & (v - 1) or v.bit_length() - 1 > a or g > a + 1 or 2 ** (g - 1) != v:
                res.fail(f"bound at ({a},{b})")
            if b % 2 == 0 and (v != 2 * table.f(a, b - 1) or g != table.g(a, b - 1) + 1):
                res.fail(f"pair rule at ({a},{b})")
            if a > 1 and b % 2 == 1 and v != table.f(a - 1, (b + 1) // 2):
                res.fail(f"odd rule at ({a},{b})")
    return res


def intersection_instance(rng: random.Random, t: int):
    """2^t subsets at separated scales, so every fold difference set meets the others only in 0."""
    sets = []
    for i in range(2 ** t):
        scale = 10_000 ** i * rng.choice([1, 3, 7])
        size = rng.randint(1, 2)
        digits = sorted(rng.sample(range(3), size))
        sets.append(NumberSet(scale * d + i for d in digits))
    A = NumberSet(x for S in sets for x in S)
    return A, sets


def suite_intersection(seed: int = 1, count: int = 20, ell: int = 2) -> SuiteResult:
    from .pipeline.intersection import intersection_algorithm, verify_certificate

    res = SuiteResult("intersection")
    rng = random.Random(seed)
    halts: dict[str, int] = {}
    for i in range(count):
        t = 1 + i % 2
        A, sets = intersection_instance(rng, t)
        res.cases += 1
        cert = intersection_algorithm(A, sets, ell, t)
        halts[cert.halt_kind] = halts.get(cert.halt_kind, 0) + 1
        if not verify_certificate(cert, A, sets, ell, t):
            res.fail(f"certificate {i} does not verify")
        if cert.halt_kind == "final":
            P, Q = cert.levels[t - 1]
            if len(oracles.sumset(P, Q)) != len(P) * len(Q):
                res.fail(f"final-step equality fails on instance {i}")
    res.notes["halts"] = halts
    return res


def suite_pipeline(seed: int = 1) -> SuiteResult:
    from .pipeline.growth import growth_experiment
    from .pipeline.proposition import GrowthWitness, proposition_run, verify_growth_witness

    res = SuiteResult("pipeline")
    A = geometric(2, 32)
    w = proposition_run(A, 2, seed=seed)
    res.cases += 1
    if not isinstance(w, GrowthWitness):
        res.fail("GP(2,32) did not yield a growth witness")
    else:
        if w.count < len(w.C) // 2:
            res.fail(f"count {w.count} < |C|/2")
        if not verify_growth_witness(A, w):
            res.fail("summand re-expansion failed")
        res.notes["gp_2_32"] = {"branch": w.branch, "count": w.count, "C": len(w.C)}
    rows = {
        ("gp:2", 16, 2): (31, 136),
        ("gp:2", 4, 3): (7, 17),
    }
    for (family, n, h), (prod, hs) in rows.items():
        res.cases += 1
        row = growth_experiment(family, [n], [h]).rows[0]
        if (row.product_size, row.hfold[h]) != (prod, hs):
            res.fail(f"{family} n={n} h={h}: {(row.product_size, row.hfold[h])}")
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "oracle": suite_oracle,
    "easyint": suite_easyint,
    "plunnecke": suite_plunnecke,
    "vanish": suite_vanish,
    "cover": suite_cover,
    "drc": suite_drc,
    "delta": suite_delta,
    "fg": suite_fg,
    "intersection": suite_intersection,
    "pipeline": suite_pipeline,
}


def run_suites(names: list[str] | str = "all", seed: int = 1) -> list[SuiteResult]:
    if names == "all" or names == ["all"]:
        names = list(SUITES)
    elif isinstance(names, str):
        names = [names]
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    return [SUITES[n](seed=seed) for n in names]
