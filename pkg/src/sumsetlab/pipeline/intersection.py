"""Trivially intersecting multifold difference sets and the pairing algorithm.

Given subsets A_1..A_{2^t} of A whose fold difference sets
``f(t,i) l^g(t,i) A_i - f(t,i) l^g(t,i) A_i`` meet only in 0, the algorithm
pairs sets level by level with the covering dichotomy until it halts with a
sumset of product size, and emits a certificate whose every size and
inequality :func:`verify_certificate` recomputes from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .._intmath import iroot_ceil
from ..errors import EmptyInput, HypothesisViolated
from ..graphkit import COVERED, DISJOINT, covering_split
from ..setcalc import NumberSet, default_cap, difference_set, format_rational, hfold_sum, sumset
from .fg import FGTable, fg_table


def fold_sizes(ell: int, t: int, table: FGTable | None = None) -> list[int]:
    """f(t,i) * l^g(t,i) for i = 1..2^t."""
    table = fg_table(t) if table is None else table
    return [table.f(t, i) * ell ** table.g(t, i) for i in range(1, 2 ** t + 1)]


def k_schedule(n: int, t: int) -> list[int]:
    """K_j = ceil(n^(1/3^(t-j))) for j = 0..t-1."""
    return [iroot_ceil(n, 3 ** (t - j)) for j in range(t)]


@dataclass(frozen=True)
class IntersectionCheck:
    trivial: bool
    beta: Fraction | None
    folds: tuple[int, ...]
    levels_used: tuple[int, ...]


def _pick_beta(common: NumberSet) -> Fraction | None:
    nonzero = [x for x in common if x != 0]
    if not nonzero:
        return None
    return min(nonzero, key=lambda x: (abs(x), x < 0))


def check_trivial_intersection(
    A_sets: Sequence[NumberSet], ell: int, t: int, cap: int | None = None
) -> IntersectionCheck:
    """Is the intersection of the fold difference sets exactly {0}?

    Folds grow one level at a time.  Lower levels are subsets of the full
    fold sets (0 is in A_i - A_i), so a nonzero common element at any level
    already witnesses nontriviality; once the fully grown sets meet only in 0
    the answer is trivial.
    """
    if len(A_sets) != 2 ** t:
        raise ValueError(f"expected {2 ** t} sets, got {len(A_sets)}")
    if any(not S for S in A_sets):
        raise EmptyInput("every A_i must be non-empty")
    cap = default_cap() if cap is None else cap
    folds = fold_sizes(ell, t)
    base = [difference_set(S, S, cap) for S in A_sets]
    current = list(base)
    level = [1] * len(base)
    while True:
        common = current[0]
        for S in current[1:]:
            common = common.intersection(S)
        beta = _pick_beta(common)
        if beta is not None:
            return IntersectionCheck(False, beta, tuple(folds), tuple(level))
        full = [S for S, lv, L in zip(current, level, folds) if lv == L]
        if len(full) == len(current):
            return IntersectionCheck(True, None, tuple(folds), tuple(level))
        if len(full) >= 2:
            common_full = full[0]
            for S in full[1:]:
                common_full = common_full.intersection(S)
            if common_full.is_zero_set():
                return IntersectionCheck(True, None, tuple(folds), tuple(level))
        # grow the smallest unfinished set first
        idx = min(
            (i for i in range(len(current)) if level[i] < folds[i]),
            key=lambda i: (len(current[i]) * len(base[i]), i),
        )
        current[idx] = sumset(current[idx], base[idx], cap)
        level[idx] += 1


# -- certificate ------------------------------------------------------------------------

@dataclass(frozen=True)
class StepRecord:
    step: int
    pair: int
    case: str
    K: int
    x_size: int
    y_size: int
    subset_size: int
    hub: Fraction | None = None


@dataclass
class IntersectionCertificate:
    n: int
    ell: int
    t: int
    K: list[int]
    levels: list[list[NumberSet]]  # levels[j][i-1] = A_{j,i}
    steps: list[StepRecord]
    halt_kind: str  # "case1" or "final"
    halt_step: int
    halt_pair: int | None
    subset: NumberSet | None  # X' for case1
    sumset_size: int
    product_size: int
    low_index: int  # ancestor of the left set in the original indexing (1-based)
    high_index: int
    g_low: int
    g_high: int
    rhs_chain: list[dict] = field(default_factory=list)
    lhs_chain: list[int] = field(default_factory=list)
    fold_sumset_size: int = 0
    claimed_bound: Fraction = Fraction(0)
    base_fold_size: int = 0
    root_form_holds: bool | None = None

    @property
    def conclusion(self) -> str:
        return (
            f"|({self.ell}^{self.g_low} + {self.ell}^{self.g_high})A| = {self.fold_sumset_size} >= "
            f"{format_rational(self.claimed_bound)}"
        )

    @property
    def growth_ratio(self) -> Fraction:
        """|(l^(i-1) + l^i)A| / |l^i A_s| for the certified pair."""
        return Fraction(self.fold_sumset_size, self.base_fold_size)

    def to_json(self) -> dict:
        fr = format_rational
        return {
            "n": self.n,
            "ell": self.ell,
            "t": self.t,
            "K": list(self.K),
            "levels": [[[fr(x) for x in S] for S in lvl] for lvl in self.levels],
            "steps": [
                {
                    "step": s.step,
                    "pair": s.pair,
                    "case": s.case,
                    "K": s.K,
                    "x_size": s.x_size,
                    "y_size": s.y_size,
                    "subset_size": s.subset_size,
                    "hub": None if s.hub is None else fr(s.hub),
                }
                for s in self.steps
            ],
            "halt_kind": self.halt_kind,
            "halt_step": self.halt_step,
            "halt_pair": self.halt_pair,
            "subset": None if self.subset is None else [fr(x) for x in self.subset],
            "sumset_size": self.sumset_size,
            "product_size": self.product_size,
            "low_index": self.low_index,
            "high_index": self.high_index,
            "g_low": self.g_low,
            "g_high": self.g_high,
            "rhs_chain": [dict(link, bound=fr(link["bound"])) for link in self.rhs_chain],
            "lhs_chain": list(self.lhs_chain),
            "fold_sumset_size": self.fold_sumset_size,
            "claimed_bound": fr(self.claimed_bound),
            "base_fold_size": self.base_fold_size,
            "root_form_holds": self.root_form_holds,
        }

    @classmethod
    def from_json(cls, d: dict) -> "IntersectionCertificate":
        return cls(
            n=d["n"],
            ell=d["ell"],
            t=d["t"],
            K=list(d["K"]),
            levels=[[NumberSet(S) for S in lvl] for lvl in d["levels"]],
            steps=[
                StepRecord(
                    s["step"], s["pair"], s["case"], s["K"], s["x_size"], s["y_size"], s["subset_size"],
                    None if s["hub"] is None else Fraction(s["hub"]),
                )
                for s in d["steps"]
            ],
            halt_kind=d["halt_kind"],
            halt_step=d["halt_step"],
            halt_pair=d["halt_pair"],
            subset=None if d["subset"] is None else NumberSet(d["subset"]),
            sumset_size=d["sumset_size"],
            product_size=d["product_size"],
            low_index=d["low_index"],
            high_index=d["high_index"],
            g_low=d["g_low"],
            g_high=d["g_high"],
            rhs_chain=[dict(link, bound=Fraction(link["bound"])) for link in d["rhs_chain"]],
            lhs_chain=list(d["lhs_chain"]),
            fold_sumset_size=d["fold_sumset_size"],
            claimed_bound=Fraction(d["claimed_bound"]),
            base_fold_size=d["base_fold_size"],
            root_form_holds=d.get("root_form_holds"),
        )


def _ancestors(level: int, index: int) -> list[tuple[int, int]]:
    """[(level, index), (level-1, 2*index-1), ..., (0, s)]."""
    path = [(level, index)]
    while level > 0:
        level, index = level - 1, 2 * index - 1
        path.append((level, index))
    return path


def _rhs_chain(levels, K, level: int, index: int) -> list[dict]:
    """Lower bounds |A_{m,p}| >= |A_{m-1,parent}| / K_{m-1} walking up to level 0."""
    chain = []
    path = _ancestors(level, index)
    for (m, p), (m0, p0) in zip(path, path[1:]):
        chain.append(
            {
                "level": m,
                "index": p,
                "size": len(levels[m][p - 1]),
                "parent_size": len(levels[m0][p0 - 1]),
                "K": K[m0],
                "bound": Fraction(len(levels[m0][p0 - 1]), K[m0]),
            }
        )
    return chain


def _root_form(fold_size: int, n: int, base_size: int, t: int) -> bool:
    # fold_size >= n^(1/3^(t+1)) * base_size, raised to the 3^(t+1) power
    e = 3 ** (t + 1)
    return fold_size ** e >= n * base_size ** e


def intersection_algorithm(
    A: NumberSet, A_sets: Sequence[NumberSet], ell: int, t: int, cap: int | None = None
) -> IntersectionCertificate:
    if ell < 2:
        raise ValueError("ell must be >= 2")
    if t < 1:
        raise ValueError("t must be >= 1")
    if len(A_sets) != 2 ** t:
        raise ValueError(f"expected {2 ** t} sets, got {len(A_sets)}")
    for S in A_sets:
        if not S.issubset(A):
            raise ValueError("every A_i must be a subset of A")
    cap = default_cap() if cap is None else cap
    check = check_trivial_intersection(A_sets, ell, t, cap)
    if not check.trivial:
        raise HypothesisViolated(check.beta)

    n = len(A)
    table = fg_table(t)
    K = k_schedule(n, t)
    levels: list[list[NumberSet]] = [
        [hfold_sum(S, ell ** table.g(t, i), cap) for i, S in enumerate(A_sets, start=1)]
    ]
    steps: list[StepRecord] = []

    for j in range(t - 1):
        sets = levels[j]
        nxt: list[NumberSet] = []
        for i in range(1, len(sets) // 2 + 1):
            X, Y = sets[2 * i - 2], sets[2 * i - 1]
            out = covering_split(X, Y, K[j])
            steps.append(StepRecord(j, i, out.case, K[j], len(X), len(Y), len(out.subset), out.hub))
            if out.case == DISJOINT:
                return _case1_certificate(A, levels, steps, K, ell, t, table, j, i, out.subset, cap)
            nxt.append(out.subset)
        levels.append(nxt)

    return _final_certificate(A, levels, steps, K, ell, t, table, cap)


def _fold_of_A(A: NumberSet, ell: int, g_low: int, g_high: int, cap: int) -> int:
    return len(hfold_sum(A, ell ** g_low + ell ** g_high, cap))


def _lhs_chain(levels, level: int, left: int, right: int, cap: int) -> list[int]:
    sizes = []
    lp, rp = _ancestors(level, left), _ancestors(level, right)
    for (m, a), (_, b) in zip(lp, rp):
        sizes.append(len(sumset(levels[m][a - 1], levels[m][b - 1], cap)))
    return sizes


def _case1_certificate(A, levels, steps, K, ell, t, table, j, i, Xp, cap) -> IntersectionCertificate:
    Y = levels[j][2 * i - 1]
    s_low = _ancestors(j, 2 * i - 1)[-1][1]
    s_high = _ancestors(j, 2 * i)[-1][1]
    g_low, g_high = table.g(t, s_low), table.g(t, s_high)
    sumsize = len(sumset(Xp, Y, cap))
    rhs = _rhs_chain(levels, K, j, 2 * i)
    divisor = 1
    for link in rhs:
        divisor *= link["K"]
    base = len(levels[0][s_high - 1])
    bound = Fraction(K[j] * base, divisor)
    lhs = _lhs_chain(levels, j, 2 * i - 1, 2 * i, cap)
    fold = _fold_of_A(A, ell, g_low, g_high, cap)
    return IntersectionCertificate(
        n=len(A), ell=ell, t=t, K=K, levels=levels, steps=steps,
        halt_kind="case1", halt_step=j, halt_pair=i, subset=Xp,
        sumset_size=sumsize, product_size=len(Xp) * len(Y),
        low_index=s_low, high_index=s_high, g_low=g_low, g_high=g_high,
        rhs_chain=rhs, lhs_chain=lhs, fold_sumset_size=fold, claimed_bound=bound,
        base_fold_size=base, root_form_holds=_root_form(fold, len(A), base, t),
    )


def _final_certificate(A, levels, steps, K, ell, t, table, cap) -> IntersectionCertificate:
    last = t - 1
    P, Q = levels[last]
    s_low = _ancestors(last, 1)[-1][1]
    s_high = _ancestors(last, 2)[-1][1]
    g_low, g_high = table.g(t, s_low), table.g(t, s_high)
    sumsize = len(sumset(P, Q, cap))
    rhs = _rhs_chain(levels, K, last, 1) + _rhs_chain(levels, K, last, 2)
    divisor = 1
    for link in rhs:
        divisor *= link["K"]
    low_base = len(levels[0][s_low - 1])
    base = len(levels[0][s_high - 1])
    bound = Fraction(low_base * base, divisor)
    lhs = _lhs_chain(levels, last, 1, 2, cap)
    fold = _fold_of_A(A, ell, g_low, g_high, cap)
    return IntersectionCertificate(
        n=len(A), ell=ell, t=t, K=K, levels=levels, steps=steps,
        halt_kind="final", halt_step=last, halt_pair=None, subset=None,
        sumset_size=sumsize, product_size=len(P) * len(Q),
        low_index=s_low, high_index=s_high, g_low=g_low, g_high=g_high,
        rhs_chain=rhs, lhs_chain=lhs, fold_sumset_size=fold, claimed_bound=bound,
        base_fold_size=base, root_form_holds=_root_form(fold, len(A), base, t),
    )


# -- independent verifier ------------------------------------------------------------------
# Deliberately written against plain Python sets of Fractions; shares no code
# with the NumberSet arithmetic used to produce the certificate.

def _plain_sum(X: set, Y: set) -> set:
    return {x + y for x in X for y in Y}


def _plain_diff(X: set, Y: set) -> set:
    return {x - y for x in X for y in Y}


def _plain_fold(X: set, h: int) -> set:
    acc = set(X)
    for _ in range(h - 1):
        acc = _plain_sum(acc, X)
    return acc


def _plain_iroot_ceil(n: int, k: int) -> int:
    r = 0
    while r ** k < n:
        r += 1
    return r


def _plain_f(a: int, b: int) -> int:
    if a == 1:
        return b  # f(1,1) = 1, f(1,2) = 2
    half = (b + 1) // 2
    return _plain_f(a - 1, half) * (1 if b % 2 else 2)


def _plain_g(a: int, b: int) -> int:
    v, g = _plain_f(a, b), 1
    while v > 1:
        v //= 2
        g += 1
    return g


def verify_certificate(
    cert: IntersectionCertificate, A: NumberSet, A_sets: Sequence[NumberSet], ell: int, t: int
) -> bool:
    """Recompute every set, size and inequality recorded in the certificate."""
    try:
        return _verify(cert, A, A_sets, ell, t)
    except (IndexError, KeyError, TypeError, ValueError, ZeroDivisionError):
        return False


def _verify(cert, A, A_sets, ell, t) -> bool:
    Aset = set(A)
    n = len(Aset)
    if (cert.n, cert.ell, cert.t) != (n, ell, t) or len(A_sets) != 2 ** t:
        return False
    bases = [set(S) for S in A_sets]
    if any(not B or not B <= Aset for B in bases):
        return False
    K = [_plain_iroot_ceil(n, 3 ** (t - j)) for j in range(t)]
    if list(cert.K) != K:
        return False

    # hypothesis: intersection of the fold difference sets is {0}
    common = None
    for i, B in enumerate(bases, start=1):
        D = _plain_diff(B, B)
        F = _plain_fold(D, _plain_f(t, i) * ell ** _plain_g(t, i))
        common = F if common is None else common & F
    if common != {Fraction(0)}:
        return False

    levels = [[set(S) for S in lvl] for lvl in cert.levels]
    level0 = [_plain_fold(B, ell ** _plain_g(t, i)) for i, B in enumerate(bases, start=1)]
    if not levels or levels[0] != level0:
        return False

    # every completed pairing step is a Covered outcome with the lemma's guarantees
    completed = len(levels) - 1
    steps = {(s.step, s.pair): s for s in cert.steps}
    for j in range(completed):
        if len(levels[j + 1]) * 2 != len(levels[j]):
            return False
        for i in range(1, len(levels[j + 1]) + 1):
            X, Y, Xp = levels[j][2 * i - 2], levels[j][2 * i - 1], levels[j + 1][i - 1]
            rec = steps.get((j, i))
            if rec is None or rec.case != COVERED or rec.K != K[j]:
                return False
            if not Xp or not Xp <= X or len(Xp) * K[j] < len(X):
                return False
            dY = _plain_diff(Y, Y)
            if not _plain_diff(Xp, Xp) <= _plain_sum(dY, dY):
                return False
            if (rec.x_size, rec.y_size, rec.subset_size) != (len(X), len(Y), len(Xp)):
                return False

    if cert.halt_kind == "case1":
        j, i = cert.halt_step, cert.halt_pair
        if j != completed or cert.subset is None:
            return False
        X, Y = levels[j][2 * i - 2], levels[j][2 * i - 1]
        Xp = set(cert.subset)
        rec = steps.get((j, i))
        if rec is None or rec.case != DISJOINT or rec.K != K[j]:
            return False
        if not Xp or not Xp <= X or len(Xp) < K[j]:
            return False
        if _plain_diff(Xp, Xp) & _plain_diff(Y, Y) != {Fraction(0)}:
            return False
        left, right = Xp, Y
        left_pos, right_pos = (j, 2 * i - 1), (j, 2 * i)
        rhs_paths = [right_pos]
        numerator_factor = K[j]
    elif cert.halt_kind == "final":
        j = t - 1
        if completed != j or len(levels[j]) != 2:
            return False
        left, right = levels[j]
        if _plain_diff(left, left) & _plain_diff(right, right) != {Fraction(0)}:
            return False
        left_pos, right_pos = (j, 1), (j, 2)
        rhs_paths = [left_pos, right_pos]
        numerator_factor = 1
    else:
        return False

    total = _plain_sum(left, right)
    if len(total) != len(left) * len(right):
        return False
    if cert.sumset_size != len(total) or cert.product_size != len(left) * len(right):
        return False

    def path(level, index):
        out = [(level, index)]
        while level > 0:
            level, index = level - 1, 2 * index - 1
            out.append((level, index))
        return out

    # lower-bound chain
    bound = Fraction(numerator_factor)
    links = []
    for lv, idx in rhs_paths:
        p = path(lv, idx)
        for (m, a), (m0, a0) in zip(p, p[1:]):
            size, parent = len(levels[m][a - 1]), len(levels[m0][a0 - 1])
            if size * K[m0] < parent:
                return False
            links.append((m, a, size, parent, K[m0]))
            bound /= K[m0]
        base_idx = p[-1][1]
        bound *= len(levels[0][base_idx - 1])
    recorded = [
        (lk["level"], lk["index"], lk["size"], lk["parent_size"], lk["K"]) for lk in cert.rhs_chain
    ]
    if recorded != links or any(lk["bound"] != Fraction(lk["parent_size"], lk["K"]) for lk in cert.rhs_chain):
        return False
    if bound != cert.claimed_bound or len(total) < bound:
        return False

    # upper chain: sums of nested sets grow toward the root
    lp, rp = path(*left_pos), path(*right_pos)
    lhs = [len(_plain_sum(levels[m][a - 1], levels[m][b - 1])) for (m, a), (_, b) in zip(lp, rp)]
    if lhs != list(cert.lhs_chain) or lhs[0] < len(total):
        return False
    if any(x > y for x, y in zip(lhs, lhs[1:])):
        return False
    s_low, s_high = lp[-1][1], rp[-1][1]
    g_low, g_high = _plain_g(t, s_low), _plain_g(t, s_high)
    if (cert.low_index, cert.high_index, cert.g_low, cert.g_high) != (s_low, s_high, g_low, g_high):
        return False
    if g_high != g_low + 1:
        return False
    fold = _plain_fold(Aset, ell ** g_low + ell ** g_high)
    if cert.fold_sumset_size != len(fold) or len(fold) < lhs[-1]:
        return False
    if cert.base_fold_size != len(levels[0][s_high - 1]):
        return False
    return len(fold) >= cert.claimed_bound
