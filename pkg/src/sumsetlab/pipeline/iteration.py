"""Repeated rounds of the proposition, shrinking A and l until growth appears."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from ..errors import StepBudgetExhausted
from ..setcalc import NumberSet, default_cap, format_rational, hfold_sum, product_set
from .proposition import GrowthWitness, SubsetWitness, proposition_run

UNSPECIFIED = "unspecified in source"

StepFn = Callable[[NumberSet, int, int], "GrowthWitness | SubsetWitness"]


def product_exponent(A: NumberSet) -> float | None:
    """epsilon with |A.A| = |A|^(1 + epsilon); None when |A| < 2."""
    if len(A) < 2:
        return None
    return math.log(len(product_set(A, A))) / math.log(len(A)) - 1


@dataclass
class IterationStep:
    index: int
    n: int
    ell: int
    branch: str  # "growth" or "subset"
    epsilon: float | None
    epsilon_bookkept: float | str
    t: int | None = None
    fold_size: int | None = None  # |(l_j^t + l_j^(t-1)) A_j|
    base_size: int | None = None  # |l_j^t A_j'|
    next_n: int | None = None
    t_in_range: bool | None = None
    witness: dict = field(default_factory=dict)

    @property
    def ratio(self) -> Fraction | None:
        if self.fold_size is None:
            return None
        return Fraction(self.fold_size, self.base_size)

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "n": self.n,
            "ell": self.ell,
            "branch": self.branch,
            "epsilon": None if self.epsilon is None else round(self.epsilon, 12),
            "epsilon_bookkept": self.epsilon_bookkept
            if isinstance(self.epsilon_bookkept, str)
            else round(self.epsilon_bookkept, 12),
            "t": self.t,
            "fold_size": self.fold_size,
            "base_size": self.base_size,
            "ratio": None if self.ratio is None else format_rational(self.ratio),
            "next_n": self.next_n,
            "t_in_range": self.t_in_range,
            "witness": self.witness,
        }


@dataclass
class Transcript:
    k: int
    ell: int
    seed: int
    c: Fraction | None
    steps: list[IterationStep] = field(default_factory=list)
    outcome: str = "running"  # "growth", "analysis" (l/2 subset steps done) or "running"
    ell_monotone: bool = True
    telescoping: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "ell": self.ell,
            "seed": self.seed,
            "c": UNSPECIFIED if self.c is None else format_rational(self.c),
            "outcome": self.outcome,
            "ell_monotone": self.ell_monotone,
            "telescoping": self.telescoping,
            "steps": [s.to_json() for s in self.steps],
        }


def t_range(k: int) -> range:
    """Allowed step exponents {2, ..., floor(ln(8 k^5))}."""
    return range(2, int(math.log(8 * k ** 5)) + 1)


def _telescoping(transcript: Transcript, sets: list[tuple[NumberSet, NumberSet]], cap: int) -> dict:
    subset_steps = [(s, pair) for s, pair in zip(transcript.steps, sets) if s.branch == "subset"]
    if not subset_steps:
        return {}
    freq = Counter(s.t for s, _ in subset_steps)
    top = min(freq, key=lambda v: (-freq[v], v))
    chosen = [(s, pair) for s, pair in subset_steps if s.t == top]
    recorded = Fraction(1)
    recomputed = Fraction(1)
    links = []
    for s, (Aj, Ajp) in chosen:
        recorded *= s.ratio
        lj = s.ell
        fold = len(hfold_sum(Aj, lj ** top + lj ** (top - 1), cap))
        base = len(hfold_sum(Ajp, lj ** top, cap))
        recomputed *= Fraction(fold, base)
    # consecutive chosen steps: |l_a^s A_a'| >= |(l_b^s + l_b^(s-1)) A_b| since A_b is inside A_a'
    for (sa, (_, Aap)), (sb, (Ab, _)) in zip(chosen, chosen[1:]):
        big = len(hfold_sum(Aap, sa.ell ** top, cap))
        small = len(hfold_sum(Ab, sb.ell ** top + sb.ell ** (top - 1), cap))
        links.append(big >= small)
    return {
        "s": top,
        "occurrences": freq[top],
        "recorded_product": format_rational(recorded),
        "recomputed_product": format_rational(recomputed),
        "matches": recorded == recomputed,
        "links_hold": all(links),
    }


def iterate_main(
    A: NumberSet,
    k: int = 2,
    ell: int = 4,
    max_steps: int = 8,
    seed: int = 0,
    c: Fraction | None = None,
    cap: int | None = None,
    step_fn: StepFn | None = None,
    **run_kwargs,
) -> Transcript:
    """Apply the proposition repeatedly; A_(j+1) = A_j', l_(j+1) = l_j - 1.

    ``step_fn(A_j, l_j, j)`` replaces :func:`proposition_run` when given
    (used to drive engineered instances).  Stops on growth, or after l/2
    subset rounds; exceeding ``max_steps`` first raises StepBudgetExhausted.
    """
    cap = default_cap() if cap is None else cap
    transcript = Transcript(k, ell, seed, None if c is None else Fraction(c))
    if max_steps < 1:
        raise StepBudgetExhausted("max_steps must be positive", transcript)
    if step_fn is None:
        def step_fn(Aj, lj, j):
            return proposition_run(Aj, k, lj, seed=seed + j, cap=cap, **run_kwargs)

    Aj, lj = A, ell
    eps_book: float | str = UNSPECIFIED
    pairs: list[tuple[NumberSet, NumberSet]] = []
    allowed = t_range(k)
    for j in range(max_steps):
        eps = product_exponent(Aj)
        if j == 0:
            eps_book = UNSPECIFIED if eps is None else eps
        elif c is not None and not isinstance(eps_book, str):
            eps_book = 2 * float(c) * eps_book
        else:
            eps_book = UNSPECIFIED
        result = step_fn(Aj, lj, j)
        if isinstance(result, GrowthWitness):
            transcript.steps.append(
                IterationStep(j, len(Aj), lj, "growth", eps, eps_book, witness=result.to_json())
            )
            pairs.append((Aj, Aj))
            transcript.outcome = "growth"
            break
        cert = result.certificate
        step = IterationStep(
            j, len(Aj), lj, "subset", eps, eps_book,
            t=result.j, fold_size=cert.fold_sumset_size, base_size=cert.base_fold_size,
            next_n=len(result.A_prime), t_in_range=result.j in allowed,
            witness=result.to_json(),
        )
        transcript.steps.append(step)
        pairs.append((Aj, result.A_prime))
        if len(transcript.steps) > 1:
            prev = transcript.steps[-2].ell
            transcript.ell_monotone &= lj * lj + lj <= prev * prev
        Aj, lj = result.A_prime, lj - 1
        if 2 * (j + 1) >= ell or lj < 2:
            transcript.outcome = "analysis"
            break
    else:
        transcript.telescoping = _telescoping(transcript, pairs, cap)
        raise StepBudgetExhausted(f"no conclusion within {max_steps} steps", transcript)
    transcript.telescoping = _telescoping(transcript, pairs, cap)
    return transcript
