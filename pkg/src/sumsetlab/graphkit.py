"""Graph engines: independent set or hub, the covering dichotomy, dependent random choice.

Randomness comes from :class:`random.Random` (Mersenne Twister MT19937) seeded
with an explicit integer; the same seed always reproduces the same output.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import EmptyGraph, EmptyInput, RetriesExhausted
from .setcalc import NumberSet, difference_set, hfold_sum


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    adjacency: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if len(self.adjacency) != self.n:
            raise ValueError("adjacency length must equal n")
        for v, nbrs in enumerate(self.adjacency):
            if v in nbrs:
                raise ValueError(f"self-loop at {v}")
            for u in nbrs:
                if not 0 <= u < self.n or v not in self.adjacency[u]:
                    raise ValueError(f"edge {v}-{u} is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            adj[u].add(v)
            adj[v].add(u)
        return cls(n, tuple(frozenset(s) for s in adj))

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def max_degree(self) -> int:
        return max((len(s) for s in self.adjacency), default=0)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adjacency[u]) if u < v]

    def is_independent(self, vertices: Iterable[int]) -> bool:
        vs = set(vertices)
        return all(self.adjacency[v].isdisjoint(vs) for v in vs)


@dataclass(frozen=True)
class IndependentSet:
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class Hub:
    """A vertex whose neighborhood is large.

    ``closed`` marks the fallback where ``members`` is the closed neighborhood
    N[v]; otherwise ``members`` is the open neighborhood N(v).
    """

    vertex: int
    degree: int
    members: tuple[int, ...]
    closed: bool = False


def _greedy_independent(G: SimpleGraph) -> list[int]:
    chosen: list[int] = []
    blocked: set[int] = set()
    for v in range(G.n):
        if v not in blocked:
            chosen.append(v)
            blocked.add(v)
            blocked.update(G.adjacency[v])
    return chosen


def independent_or_hub(G: SimpleGraph, K) -> IndependentSet | Hub:
    """Either a vertex of degree >= |G|/K or an independent set of size >= K.

    Hubs are checked first (highest degree, lowest id on ties).  Otherwise the
    greedy independent set in ascending id order is returned when it reaches K.
    When it does not, the greedy bound |I| >= |G|/(Delta+1) forces
    Delta + 1 > |G|/K, and the closed neighborhood of a max-degree vertex is
    returned instead; its elements still pairwise differ through the hub.
    """
    if G.n == 0:
        raise EmptyGraph("graph has no vertices")
    K = Fraction(K)
    if K <= 0:
        raise ValueError("K must be positive")
    n = G.n
    best = max(range(n), key=lambda v: (G.degree(v), -v))
    delta = G.degree(best)
    if delta * K >= n:
        return Hub(best, delta, tuple(sorted(G.adjacency[best])))
    indep = _greedy_independent(G)
    assert len(indep) * (delta + 1) >= n
    if len(indep) >= K:
        return IndependentSet(tuple(indep))
    members = tuple(sorted(G.adjacency[best] | {best}))
    assert len(members) * K >= n
    return Hub(best, delta, members, closed=True)


# -- covering dichotomy -------------------------------------------------------------

DISJOINT = "Disjoint"
COVERED = "Covered"


@dataclass(frozen=True)
class CoverOutcome:
    case: str
    subset: NumberSet
    K: Fraction
    hub: Fraction | None = None
    closed_neighborhood: bool = False

    def to_json(self) -> dict:
        from .setcalc import format_rational

        return {
            "case": self.case,
            "K": format_rational(self.K),
            "subset": [format_rational(x) for x in self.subset],
            "hub": None if self.hub is None else format_rational(self.hub),
            "closed_neighborhood": self.closed_neighborhood,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CoverOutcome":
        return cls(
            data["case"],
            NumberSet(data["subset"]),
            Fraction(data["K"]),
            None if data.get("hub") is None else Fraction(data["hub"]),
            bool(data.get("closed_neighborhood", False)),
        )


def cover_graph(X: NumberSet, Y: NumberSet) -> SimpleGraph:
    """Graph on the elements of X (by sorted index), u ~ v iff u - v in Y - Y."""
    dY = difference_set(Y, Y)
    xs = X.elements
    edges = [(i, j) for i, j in combinations(range(len(xs)), 2) if xs[i] - xs[j] in dY]
    return SimpleGraph.from_edges(len(xs), edges)


def verify_cover_outcome(outcome: CoverOutcome, X: NumberSet, Y: NumberSet) -> bool:
    """Re-check the case invariant by enumeration, independent of the graph."""
    Xp = outcome.subset
    if not Xp or not Xp.issubset(X):
        return False
    dY = {a - b for a in Y for b in Y}
    if outcome.case == DISJOINT:
        if len(Xp) < outcome.K:
            return False
        return all(u - v not in dY for u in Xp for v in Xp if u != v)
    if outcome.case == COVERED:
        if len(Xp) * outcome.K < len(X):
            return False
        two_dY = {a + b for a in dY for b in dY}
        return all(u - v in two_dY for u in Xp for v in Xp)
    return False


def covering_split(X: NumberSet, Y: NumberSet, K) -> CoverOutcome:
    """Split X against Y: a large Y-difference-free subset, or a subset covered by 2Y - 2Y."""
    if not X:
        raise EmptyInput("X must be non-empty")
    K = Fraction(K)
    if K <= 0:
        raise ValueError("K must be positive")
    G = cover_graph(X, Y)
    res = independent_or_hub(G, K)
    xs = X.elements
    if isinstance(res, IndependentSet):
        outcome = CoverOutcome(DISJOINT, NumberSet(xs[i] for i in res.vertices), K)
    else:
        outcome = CoverOutcome(
            COVERED, NumberSet(xs[i] for i in res.members), K, xs[res.vertex], res.closed
        )
    if not verify_cover_outcome(outcome, X, Y):
        raise AssertionError("covering outcome failed re-verification")
    return outcome


def folded_cover_holds(outcome: CoverOutcome, Y: NumberSet, s: int) -> bool:
    """sX' - sX' is contained in 2sY - 2sY for a Covered outcome."""
    Xp = outcome.subset
    left = hfold_sum(difference_set(Xp, Xp), s)
    right = hfold_sum(difference_set(Y, Y), 2 * s)
    return left.issubset(right)


# -- bipartite graphs and dependent random choice ----------------------------------------

@dataclass(frozen=True)
class BipartiteGraph:
    """Left part 0..n_left-1, right part 0..n_right-1; ``left_adj[x]`` lists right neighbors."""

    n_left: int
    n_right: int
    left_adj: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if len(self.left_adj) != self.n_left:
            raise ValueError("left adjacency length must equal n_left")
        for nbrs in self.left_adj:
            for y in nbrs:
                if not 0 <= y < self.n_right:
                    raise ValueError(f"right vertex {y} out of range")
        right: list[set[int]] = [set() for _ in range(self.n_right)]
        for x, nbrs in enumerate(self.left_adj):
            for y in nbrs:
                right[y].add(x)
        object.__setattr__(self, "_right_adj", tuple(frozenset(s) for s in right))

    @classmethod
    def from_edges(cls, n_left: int, n_right: int, edges: Iterable[tuple[int, int]]) -> "BipartiteGraph":
        adj: list[set[int]] = [set() for _ in range(n_left)]
        for x, y in edges:
            if not (0 <= x < n_left and 0 <= y < n_right):
                raise ValueError(f"edge ({x}, {y}) out of range")
            adj[x].add(y)
        return cls(n_left, n_right, tuple(frozenset(s) for s in adj))

    @property
    def right_adj(self) -> tuple[frozenset[int], ...]:
        return self._right_adj  # type: ignore[attr-defined]

    @property
    def edge_count(self) -> int:
        return sum(len(s) for s in self.left_adj)

    def edges(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.n_left) for y in sorted(self.left_adj[x])]


def common_neighborhood(G: BipartiteGraph, T: Iterable[int]) -> frozenset[int]:
    """Right vertices adjacent to every left vertex of T; all of Y for empty T."""
    result: frozenset[int] | None = None
    for x in T:
        if not 0 <= x < G.n_left:
            raise ValueError(f"left vertex {x} out of range")
        result = G.left_adj[x] if result is None else result & G.left_adj[x]
    return frozenset(range(G.n_right)) if result is None else result


def right_common_neighborhood(G: BipartiteGraph, S: Iterable[int]) -> frozenset[int]:
    """Left vertices adjacent to every right vertex of S."""
    result: frozenset[int] | None = None
    for y in S:
        result = G.right_adj[y] if result is None else result & G.right_adj[y]
    return frozenset(range(G.n_left)) if result is None else result


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    margin: Fraction
    lhs: Fraction


def drc_feasible(G: BipartiteGraph, t: int, r: int, m: int, a: int) -> Feasibility:
    """Exact test of |E|^t / (|X|^t |Y|^(t-1)) - C(|Y|, r) (m/|X|)^t >= a."""
    if min(t, r) < 1:
        raise ValueError("t and r must be positive")
    nX, nY = G.n_left, G.n_right
    if nX == 0 or nY == 0:
        return Feasibility(False, Fraction(-a), Fraction(0))
    lhs = Fraction(G.edge_count ** t, nX ** t * nY ** (t - 1)) - math.comb(nY, r) * Fraction(m, nX) ** t
    return Feasibility(lhs >= a, lhs - a, lhs)


def verify_drc(G: BipartiteGraph, U: Iterable[int], r: int, m: int) -> bool:
    """Every r-subset of U (every subset when |U| < r) has >= m common neighbors."""
    U = sorted(U)
    size = min(r, len(U))
    return all(len(right_common_neighborhood(G, S)) >= m for S in combinations(U, size))


@dataclass(frozen=True)
class DRCResult:
    selected: tuple[int, ...]
    sample: tuple[int, ...]
    attempts: int
    seed: int


def drc_select(
    G: BipartiteGraph,
    t: int,
    r: int,
    m: int,
    a: int,
    seed: int,
    max_retries: int = 1000,
) -> DRCResult:
    """Dependent random choice: sample T of size t (with repetition), prune Gamma(T).

    Each r-subset of Gamma(T) with fewer than m common neighbors loses its
    largest vertex.  Retries with fresh draws until at least ``a`` vertices
    survive.  Feasibility (see :func:`drc_feasible`) only guarantees a positive
    success probability per draw, so failure raises ``RetriesExhausted``.
    """
    if G.n_left == 0:
        raise EmptyGraph("left part is empty")
    rng = random.Random(seed)
    for attempt in range(1, max_retries + 1):
        sample = tuple(rng.randrange(G.n_left) for _ in range(t))
        alive = set(common_neighborhood(G, sample))
        for S in combinations(sorted(alive), r):
            if not alive.issuperset(S):
                continue
            if len(right_common_neighborhood(G, S)) < m:
                alive.discard(S[-1])
        # fewer than r survivors: the whole set must share m neighbors
        while alive and len(alive) < r and len(right_common_neighborhood(G, alive)) < m:
            alive.discard(max(alive))
        if len(alive) >= a:
            selected = tuple(sorted(alive))
            assert verify_drc(G, selected, r, m)
            return DRCResult(selected, sample, attempts=attempt, seed=seed)
    raise RetriesExhausted(f"no draw kept {a} vertices in {max_retries} attempts")


def random_bipartite(n_left: int, n_right: int, p: Fraction | float, seed: int) -> BipartiteGraph:
    """G(n_left, n_right, p) from a seeded generator."""
    rng = random.Random(seed)
    p = float(p)
    edges = [(x, y) for x in range(n_left) for y in range(n_right) if rng.random() < p]
    return BipartiteGraph.from_edges(n_left, n_right, edges)


def random_graph(n: int, p: Fraction | float, seed: int) -> SimpleGraph:
    rng = random.Random(seed)
    p = float(p)
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return SimpleGraph.from_edges(n, edges)


def star(leaves: int) -> SimpleGraph:
    return SimpleGraph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, combinations(range(n), 2))


def complete_bipartite(n_left: int, n_right: int) -> BipartiteGraph:
    return BipartiteGraph.from_edges(n_left, n_right, [(x, y) for x in range(n_left) for y in range(n_right)])


def perfect_matching(n: int) -> BipartiteGraph:
    return BipartiteGraph.from_edges(n, n, [(i, i) for i in range(n)])


def bipartite_from_relation(left: Sequence, right: Sequence, related) -> BipartiteGraph:
    edges = [(i, j) for i, x in enumerate(left) for j, y in enumerate(right) if related(x, y)]
    return BipartiteGraph.from_edges(len(left), len(right), edges)
