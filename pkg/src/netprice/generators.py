"""Seeded graph family generators.

All randomness comes from numpy's PCG64 bit generator, seeded per call, so
every generator is a pure function of (parameters, seed) with identical
output across platforms. All families produce unit weights and zero
intrinsic values.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .algorithms import SplitPartition
from .core import PncInstance, WeightedGraph


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


_DENSE_PAIR_LIMIT = 30_000_000


def gen_er(n: int, eta: float, seed: int) -> PncInstance:
    """Every unordered pair becomes an edge independently with probability eta."""
    if n < 2:
        raise ValueError(f"gen_er needs n >= 2, got {n}")
    if not 0 <= eta <= 1:
        raise ValueError(f"eta must be in [0, 1], got {eta}")
    if n * (n - 1) // 2 > _DENSE_PAIR_LIMIT:
        raise ValueError("gen_er samples all pairs at once; n is too large for that")
    rng = _rng(seed)
    us, vs = np.triu_indices(n, k=1)
    keep = rng.random(len(us)) < eta
    edges = tuple((int(u), int(v), 1) for u, v in zip(us[keep], vs[keep]))
    graph = WeightedGraph._from_canonical(n, edges)  # triu order is already canonical
    return PncInstance(graph, (0,) * n)


def gen_ba(n: int, beta: int, seed: int) -> PncInstance:
    """Preferential attachment starting from a complete graph on beta nodes.

    Each arrival connects to beta distinct existing nodes, drawn repeatedly
    in proportion to current degree with duplicates discarded. The first
    arrival necessarily takes the whole seed clique, so the final minimum
    degree is beta.
    """
    if not isinstance(beta, int) or isinstance(beta, bool) or beta < 1:
        raise ValueError(f"beta must be a positive integer, got {beta!r}")
    if n <= beta:
        raise ValueError(f"gen_ba needs n > beta, got n={n}, beta={beta}")
    rng = _rng(seed)
    edges = []
    # one entry per edge endpoint, so uniform picks are degree-proportional
    targets: list[int] = []
    for i in range(beta):
        for j in range(i + 1, beta):
            edges.append((i, j, 1))
            targets.append(i)
            targets.append(j)
    for arrival in range(beta, n):
        if arrival == beta:
            chosen = set(range(beta))
        else:
            chosen = set()
            while len(chosen) < beta:
                chosen.add(targets[int(rng.integers(0, len(targets)))])
        for node in sorted(chosen):
            edges.append((node, arrival, 1))
            targets.append(node)
            targets.append(arrival)
    edges.sort()
    graph = WeightedGraph._from_canonical(n, tuple(edges))
    return PncInstance(graph, (0,) * n)


def gen_spider(k: int) -> PncInstance:
    """A center of degree k whose k legs each have length 2 (n = 2k + 1)."""
    if k < 1:
        raise ValueError(f"gen_spider needs k >= 1, got {k}")
    pairs = []
    for leg in range(k):
        middle = 1 + 2 * leg
        pairs.append((0, middle))
        pairs.append((middle, middle + 1))
    return PncInstance.unweighted(2 * k + 1, pairs)


def gen_example1(k: int) -> PncInstance:
    """Hub joined to i disjoint cliques of size k!/i for every i in [k].

    n = k * k! + 1. The hub has degree k * k!; every node in a size-(k!/i)
    clique has degree k!/i. Grows factorially: k=7 already needs tens of
    millions of edges.
    """
    if not 2 <= k <= 8:
        raise ValueError(f"gen_example1 needs 2 <= k <= 8, got {k}")
    fact = math.factorial(k)
    n = k * fact + 1
    edges = [(0, v, 1) for v in range(1, n)]
    start = 1
    for i in range(1, k + 1):
        size = fact // i
        for _ in range(i):
            members = range(start, start + size)
            for a in members:
                for b in range(a + 1, start + size):
                    edges.append((a, b, 1))
            start += size
    graph = WeightedGraph._from_canonical(n, tuple(edges))
    return PncInstance(graph, (0,) * n)


def gen_split(
    n: int, clique_fraction: float, edge_prob: float, seed: int
) -> tuple[PncInstance, SplitPartition]:
    """Clique on ceil(clique_fraction * n) nodes, random links to the rest.

    Nodes 0..k-1 form the clique; each (clique, independent) pair is linked
    independently with probability edge_prob. Returns the generating
    partition (clique ordered by nondecreasing degree).
    """
    if n < 2:
        raise ValueError(f"gen_split needs n >= 2, got {n}")
    if not 0 < clique_fraction < 1:
        raise ValueError(f"clique_fraction must be in (0, 1), got {clique_fraction}")
    if not 0 <= edge_prob <= 1:
        raise ValueError(f"edge_prob must be in [0, 1], got {edge_prob}")
    rng = _rng(seed)
    k = math.ceil(clique_fraction * n)
    pairs = [(a, b) for a in range(k) for b in range(a + 1, k)]
    if k < n:
        hits = rng.random((k, n - k)) < edge_prob
        pairs.extend(
            (int(c), int(k + j)) for c, j in zip(*np.nonzero(hits))
        )
    instance = PncInstance.unweighted(n, pairs)
    degrees = instance.graph.degrees
    partition = SplitPartition(
        tuple(sorted(range(k), key=lambda v: (degrees[v], v))),
        tuple(range(k, n)),
    )
    return instance, partition


# --- uniform labeled forests ------------------------------------------------


@lru_cache(maxsize=None)
def _tree_count(m: int) -> int:
    # labeled trees on m nodes (Cayley); 1 for m = 1 and m = 2
    return m ** (m - 2) if m >= 2 else 1


@lru_cache(maxsize=None)
def _forest_count(n: int, t: int) -> int:
    """Labeled forests on n nodes with exactly t components."""
    if t == 0:
        return 1 if n == 0 else 0
    if t > n:
        return 0
    total = 0
    # condition on the size of the component containing the lowest label
    for m in range(1, n - t + 2):
        total += math.comb(n - 1, m - 1) * _tree_count(m) * _forest_count(n - m, t - 1)
    return total


def _uniform_below(rng: np.random.Generator, bound: int) -> int:
    """Uniform integer in [0, bound) with arbitrary precision, via rng bytes."""
    bits = bound.bit_length()
    nbytes = (bits + 7) // 8
    while True:
        value = int.from_bytes(rng.bytes(nbytes), "big") >> (8 * nbytes - bits)
        if value < bound:
            return value


def _prufer_decode(labels: list[int], code: list[int]) -> list[tuple[int, int]]:
    m = len(labels)
    degree = [1] * m
    for x in code:
        degree[x] += 1
    leaves = [i for i in range(m) if degree[i] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in code:
        leaf = heapq.heappop(leaves)
        edges.append((labels[leaf], labels[x]))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    # exactly the two ends of the last edge remain
    last = heapq.heappop(leaves)
    edges.append((labels[last], labels[heapq.heappop(leaves)]))
    return edges


def gen_forest(n: int, tree_count: int, seed: int) -> PncInstance:
    """Uniformly random labeled forest with exactly ``tree_count`` components.

    Samples the component of the lowest remaining label with probability
    proportional to the exact count of forests completing it, then a uniform
    Prufer tree inside the component. All counting is exact integer
    arithmetic, so the distribution is exactly uniform.
    """
    if n < 1:
        raise ValueError(f"gen_forest needs n >= 1, got {n}")
    if not 1 <= tree_count <= n:
        raise ValueError(f"tree_count must be in [1, n], got {tree_count}")
    if n > 1000:
        raise ValueError("gen_forest's exact sampler is limited to n <= 1000")
    rng = _rng(seed)
    labels = list(range(n))
    pairs: list[tuple[int, int]] = []
    remaining_trees = tree_count
    while labels:
        pool = len(labels)
        anchor = labels.pop(0)
        weights = [
            math.comb(pool - 1, m - 1) * _tree_count(m) * _forest_count(pool - m, remaining_trees - 1)
            for m in range(1, pool - remaining_trees + 2)
        ]
        total = sum(weights)
        pick = _uniform_below(rng, total)
        size = 1
        for m, weight in enumerate(weights, start=1):
            if pick < weight:
                size = m
                break
            pick -= weight
        order = rng.permutation(len(labels))
        members = [anchor] + [labels[int(i)] for i in order[: size - 1]]
        chosen = set(members[1:])
        labels = [x for x in labels if x not in chosen]
        if size == 2:
            pairs.append((members[0], members[1]))
        elif size > 2:
            code = [int(x) for x in rng.integers(0, size, size=size - 2)]
            pairs.extend(_prufer_decode(sorted(members), code))
        remaining_trees -= 1
    normalized = [(min(a, b), max(a, b)) for a, b in pairs]
    return PncInstance.unweighted(n, normalized)


@dataclass(frozen=True)
class GenSpec:
    """A graph family request: family tag, parameters, seed.

    ``core_peripheral`` is accepted as an alias for ``split`` (a clique core
    with an independent periphery).
    """

    family: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def build(self) -> PncInstance:
        instance, _ = self.build_with_partition()
        return instance

    def build_with_partition(self) -> tuple[PncInstance, SplitPartition | None]:
        p = dict(self.params)
        family = "split" if self.family == "core_peripheral" else self.family
        if family == "er":
            return gen_er(p["n"], p["eta"], self.seed), None
        if family == "ba":
            return gen_ba(p["n"], p["beta"], self.seed), None
        if family == "spider":
            return gen_spider(p["k"]), None
        if family == "example1":
            return gen_example1(p["k"]), None
        if family == "split":
            return gen_split(p["n"], p["clique_fraction"], p["edge_prob"], self.seed)
        if family == "forest":
            return gen_forest(p["n"], p["tree_count"], self.seed), None
        raise ValueError(f"unknown family {self.family!r}")
