"""Exact |A.A| and |hA| tables for parametrized set families."""

from __future__ import annotations

import csv
import io
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from ..errors import CapExceeded
from ..io import parse_rational
from ..setcalc import NumberSet, arithmetic, default_cap, geometric, hfold_sum, product_set

FAMILIES = ("gp:RATIO", "ap:STEP", "union-gp:R1,R2", "random:RANGE:SEED")


def family_set(family: str, n: int) -> NumberSet:
    """Build the n-element member of a family descriptor."""
    kind, _, arg = family.partition(":")
    if n < 1:
        raise ValueError("n must be positive")
    if kind == "gp":
        return geometric(parse_rational(arg), n)
    if kind == "ap":
        step = parse_rational(arg)
        return arithmetic(step, n, start=step)
    if kind == "union-gp":
        r1, r2 = (parse_rational(x) for x in arg.split(","))
        both = geometric(r1, n).union(geometric(r2, n))
        return NumberSet(both.elements[:n])
    if kind == "random":
        hi, seed = (int(x) for x in arg.split(":"))
        if hi < n:
            raise ValueError(f"range {hi} too small for {n} distinct elements")
        rng = random.Random(seed * 1_000_003 + n)
        return NumberSet(rng.sample(range(1, hi + 1), n))
    raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


def _exponent(size: int | None, n: int) -> float | None:
    if size is None or n < 2:
        return None
    return round(math.log(size) / math.log(n), 6)


@dataclass(frozen=True)
class GrowthRow:
    n: int
    size: int
    product_size: int | None
    hfold: dict[int, int | None]
    errors: dict[str, str] = field(default_factory=dict)

    @property
    def exponents(self) -> dict[int, float | None]:
        return {h: _exponent(v, self.size) for h, v in self.hfold.items()}

    @property
    def epsilon(self) -> float | None:
        """|A.A| = |A|^(1 + epsilon)."""
        e = _exponent(self.product_size, self.size)
        return None if e is None else round(e - 1, 6)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "size": self.size,
            "product_size": self.product_size,
            "epsilon": self.epsilon,
            "hfold": {str(h): v for h, v in self.hfold.items()},
            "exponents": {str(h): v for h, v in self.exponents.items()},
            "errors": dict(self.errors),
        }


@dataclass(frozen=True)
class GrowthReport:
    family: str
    h_list: tuple[int, ...]
    rows: tuple[GrowthRow, ...]
    cap: int

    def row(self, n: int) -> GrowthRow:
        for r in self.rows:
            if r.n == n:
                return r
        raise KeyError(n)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "h": list(self.h_list),
            "cap": self.cap,
            "rows": [r.to_json() for r in self.rows],
        }

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            ["family", "n", "size", "product_size", "epsilon"]
            + [f"h{h}" for h in self.h_list]
            + [f"exp_h{h}" for h in self.h_list]
        )
        for r in self.rows:
            exps = r.exponents
            writer.writerow(
                [self.family, r.n, r.size, _blank(r.product_size), _blank(r.epsilon)]
                + [_blank(r.hfold[h]) for h in self.h_list]
                + [_blank(exps[h]) for h in self.h_list]
            )
        return out.getvalue()


def _blank(v):
    return "" if v is None else v


def growth_row(family: str, n: int, h_list: Sequence[int], cap: int) -> GrowthRow:
    A = family_set(family, n)
    errors: dict[str, str] = {}
    try:
        prod = len(product_set(A, A, cap))
    except CapExceeded as exc:
        prod = None
        errors["product"] = str(exc)
    hfold: dict[int, int | None] = {}
    for h in h_list:
        try:
            hfold[h] = len(hfold_sum(A, h, cap))
        except CapExceeded as exc:
            hfold[h] = None
            errors[f"h{h}"] = str(exc)
    return GrowthRow(n, len(A), prod, hfold, errors)


def _cell(args):
    return growth_row(*args)


def growth_experiment(
    family: str, n_list: Sequence[int], h_list: Sequence[int], cap: int | None = None, jobs: int = 1
) -> GrowthReport:
    """One row per n; cap overruns are recorded in the row rather than raised."""
    cap = default_cap() if cap is None else cap
    h_list = tuple(h_list)
    if any(h < 1 for h in h_list):
        raise ValueError("h must be positive")
    for n in n_list:
        family_set(family, n)  # validate the descriptor before any work
    cells = [(family, n, h_list, cap) for n in n_list]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_cell, cells))  # map keeps input order
    else:
        rows = [_cell(c) for c in cells]
    return GrowthReport(family, h_list, tuple(rows), cap)

