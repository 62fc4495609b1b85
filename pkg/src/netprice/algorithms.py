"""Pricing strategies and structural helpers.

Every strategy returns a PricingResult whose trace comes from re-simulating
the chosen prices, so reported revenue is always the engine's, not a
formula's.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .core import PncInstance, PriceSequence, SaleTrace, WeightedGraph
from .engine import simulate


@dataclass(frozen=True)
class PricingResult:
    prices: PriceSequence
    revenue: int
    trace: SaleTrace


@dataclass(frozen=True)
class SplitPartition:
    """Clique / independent-set partition of a split graph.

    ``clique`` is ordered by nondecreasing degree (ties by node id);
    ``independent`` is sorted by node id. Consistency with a concrete graph
    is checked by ``split_dp``, not here.
    """

    clique: tuple[int, ...]
    independent: tuple[int, ...]


def _require_plain(instance: PncInstance, op: str) -> None:
    if not instance.graph.is_unweighted():
        raise ValueError(f"{op} requires unit edge weights")
    if any(instance.intrinsic):
        raise ValueError(f"{op} requires all intrinsic values to be zero")


def greedy_iterative(instance: PncInstance) -> PricingResult:
    """Repeatedly post the highest current total value until everyone owns.

    Each round sells exactly the argmax set. Revenue is at least the sum of
    all intrinsic values plus the total edge weight: every edge has the
    earlier-selling endpoint charged for it, and intrinsic value is always
    charged. A price of 0 can only appear in the final round.

    A lazy max-heap keeps each round's argmax cheap; stale entries (from
    before a neighbor's decrement) are discarded on pop. Values only
    decrease, so the freshest entry for a node is the first valid one seen.
    """
    values = list(instance.initial_values)
    remaining = set(range(instance.node_count))
    adjacency = instance.graph.adjacency
    heap = [(-values[i], i) for i in remaining]
    heapq.heapify(heap)
    prices = []
    while remaining:
        price = -1
        while heap:
            negative, node = heap[0]
            if node not in remaining or -negative != values[node]:
                heapq.heappop(heap)
                continue
            price = -negative
            break
        prices.append(price)
        buyers = []
        while heap:
            negative, node = heap[0]
            if -negative < price:
                break
            heapq.heappop(heap)
            if node in remaining and -negative == values[node]:
                buyers.append(node)
        remaining.difference_update(buyers)
        for buyer in buyers:
            for neighbor, weight in adjacency[buyer]:
                if neighbor in remaining:
                    values[neighbor] -= weight
                    heapq.heappush(heap, (-values[neighbor], neighbor))
    trace = simulate(instance, tuple(prices))
    return PricingResult(tuple(prices), trace.total_revenue, trace)


def best_single_price(instance: PncInstance) -> PricingResult:
    """Best revenue from posting one price, over all initial total values.

    Only initial total values can be optimal single prices (any other price
    can be raised to the next value below it without losing a buyer). Ties
    break toward the higher price.
    """
    values = sorted(instance.initial_values, reverse=True)
    best_price = values[0]
    best_revenue = -1
    index = 0
    while index < len(values):
        price = values[index]
        while index < len(values) and values[index] == price:
            index += 1
        revenue = price * index  # every consumer valued at >= price buys
        if revenue > best_revenue:
            best_revenue = revenue
            best_price = price
    trace = simulate(instance, (best_price,))
    return PricingResult((best_price,), trace.total_revenue, trace)


def _require_forest(graph: WeightedGraph) -> None:
    parent = list(range(graph.node_count))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in graph.edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            raise ValueError("forest_single_price requires an acyclic graph")
        parent[ru] = rv


def forest_single_price(instance: PncInstance) -> PricingResult:
    """Better of the single prices 1 and 2 on an unweighted forest.

    Price 1 sells every non-isolated node; price 2 sells every node of degree
    at least 2, i.e. everything but leaves and isolated nodes. On a forest
    this is within factor 1.5 of the optimum. Ties break toward price 2.
    """
    _require_plain(instance, "forest_single_price")
    _require_forest(instance.graph)
    degrees = instance.graph.degrees
    revenue_at_1 = sum(1 for d in degrees if d >= 1)
    revenue_at_2 = 2 * sum(1 for d in degrees if d >= 2)
    price = 2 if revenue_at_2 >= revenue_at_1 else 1
    trace = simulate(instance, (price,))
    return PricingResult((price,), trace.total_revenue, trace)


def recognize_split(graph: WeightedGraph) -> SplitPartition | None:
    """Degree-sequence recognition of split graphs.

    With degrees sorted nonincreasing and m the largest index (1-based) with
    d_i >= i - 1, the graph is split iff the first m degrees sum to
    m(m-1) plus the remaining degrees; the m highest-degree nodes then form
    a clique and the rest an independent set. Returns None if not split.
    """
    if not graph.is_unweighted():
        raise ValueError("recognize_split requires unit edge weights")
    degrees = graph.degrees
    order = sorted(range(graph.node_count), key=lambda v: (-degrees[v], v))
    ranked = [degrees[v] for v in order]
    m = 0
    while m < len(ranked) and ranked[m] >= m:
        m += 1
    if sum(ranked[:m]) != m * (m - 1) + sum(ranked[m:]):
        return None
    clique = sorted(order[:m], key=lambda v: (degrees[v], v))
    independent = sorted(order[m:])
    neighbor_sets = [set() for _ in range(graph.node_count)]
    for u, v, _ in graph.edges:
        neighbor_sets[u].add(v)
        neighbor_sets[v].add(u)
    assert all(
        b in neighbor_sets[a] for i, a in enumerate(clique) for b in clique[i + 1:]
    ), "degree test accepted a non-clique"
    indep_set = set(independent)
    assert all(
        not (u in indep_set and v in indep_set) for u, v, _ in graph.edges
    ), "degree test accepted a non-independent part"
    return SplitPartition(tuple(clique), tuple(independent))


def split_dp(instance: PncInstance, partition: SplitPartition | None = None) -> PricingResult:
    """Exact optimum on a split graph in O(n^2), with a realizing sequence.

    Processes clique prefixes in nondecreasing degree order. The optimum for
    the subgraph induced by the first i clique nodes and their independent
    neighbors either sells a clique suffix at that suffix's lowest degree and
    recurses on a shorter prefix, or sells the whole prefix plus the j
    highest-degree independent neighbors at one closing price, after which
    the leftover independent nodes are worthless. Only threshold candidates
    are scored: a clique-suffix price must strictly exceed both the next
    clique degree down and every current independent degree, otherwise the
    posted price would sell a different set than the candidate assumes.
    """
    _require_plain(instance, "split_dp")
    graph = instance.graph
    n = graph.node_count
    if partition is None:
        partition = recognize_split(graph)
        if partition is None:
            raise ValueError("split_dp requires a split graph")
    degrees = graph.degrees
    clique = tuple(sorted(partition.clique, key=lambda v: (degrees[v], v)))
    independent = tuple(sorted(partition.independent))
    indep_set = set(independent)
    if sorted(clique + independent) != list(range(n)):
        raise ValueError("partition must cover every node exactly once")
    neighbor_sets = [set() for _ in range(n)]
    for u, v, _ in graph.edges:
        neighbor_sets[u].add(v)
        neighbor_sets[v].add(u)
    for i, a in enumerate(clique):
        for b in clique[i + 1:]:
            if b not in neighbor_sets[a]:
                raise ValueError(f"partition clique misses edge ({a}, {b})")
    for u, v, _ in graph.edges:
        if u in indep_set and v in indep_set:
            raise ValueError(f"partition independent set contains edge ({u}, {v})")

    k = len(clique)
    clique_deg = [degrees[v] for v in clique]  # nondecreasing
    adjacency = graph.adjacency

    # prefix_deg[u]: neighbors of independent node u among the first i clique nodes
    prefix_deg = [0] * n
    bucket = [0] * (k + 2)  # count of independent nodes at each prefix degree
    max_indep_deg = 0
    opt = [0] * (k + 1)
    # back[i]: ("clique", h) sells clique[h:i] then recurses at h,
    #          ("indep", d, j) sells the whole prefix plus j independents and stops,
    #          None sells nothing (prefix is worthless).
    back: list[tuple | None] = [None] * (k + 1)

    for i in range(1, k + 1):
        for u, _ in adjacency[clique[i - 1]]:
            if u in indep_set:
                old = prefix_deg[u]
                prefix_deg[u] = old + 1
                if old:
                    bucket[old] -= 1
                bucket[old + 1] += 1
                if old + 1 > max_indep_deg:
                    max_indep_deg = old + 1
        best = 0
        choice: tuple | None = None
        for h in range(i):
            if h > 0 and clique_deg[h - 1] == clique_deg[h]:
                continue  # price would also sell clique[h-1]
            price = clique_deg[h] - (k - i)
            if price <= max_indep_deg:
                continue  # price would also sell an independent node
            candidate = opt[h] + price * (i - h)
            if candidate > best:
                best = candidate
                choice = ("clique", h)
        lowest_clique_deg = clique_deg[0] - (k - i)
        ahead = 0
        for d in range(k, 0, -1):
            ahead += bucket[d]
            if bucket[d] == 0:
                continue
            assert d <= lowest_clique_deg, "independent degree above the whole clique"
            candidate = (i + ahead) * d
            if candidate > best:
                best = candidate
                choice = ("indep", d, ahead)
        opt[i] = best
        back[i] = choice

    prices = []
    i = k
    while i > 0 and back[i] is not None:
        step = back[i]
        if step[0] == "clique":
            h = step[1]
            prices.append(clique_deg[h] - (k - i))
            i = h
        else:
            prices.append(step[1])
            break
    realizer = tuple(prices)
    trace = simulate(instance, realizer)
    assert trace.total_revenue == opt[k], "realizer must reproduce the table optimum"
    return PricingResult(realizer, opt[k], trace)


def er_single_price(instance: PncInstance, eta: float, delta: float) -> PricingResult:
    """Post floor((1 - delta) * (n - 1) * eta) once, for near-average-degree graphs.

    On a dense random graph with edge probability eta this undercuts almost
    every degree, so nearly everyone buys in the single round.
    """
    _require_plain(instance, "er_single_price")
    if not 0 < eta <= 1:
        raise ValueError(f"eta must be in (0, 1], got {eta}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    price = math.floor((1 - delta) * (instance.node_count - 1) * eta)
    if price < 1:
        raise ValueError(f"computed price {price} is not positive; n or eta too small for delta")
    trace = simulate(instance, (price,))
    return PricingResult((price,), trace.total_revenue, trace)


def ba_single_price(instance: PncInstance, beta: int) -> PricingResult:
    """Post the minimum-attachment count beta once; with min degree >= beta
    every consumer buys immediately, for revenue exactly n * beta."""
    if not isinstance(beta, int) or isinstance(beta, bool) or beta < 1:
        raise ValueError(f"beta must be a positive integer, got {beta!r}")
    if min(instance.graph.degrees) < beta:
        raise ValueError("ba_single_price requires minimum degree >= beta")
    trace = simulate(instance, (beta,))
    return PricingResult((beta,), trace.total_revenue, trace)


def min_degree_independent(graph: WeightedGraph) -> bool:
    """Whether the minimum-degree nodes form an independent set."""
    lowest = min(graph.degrees)
    return not any(
        graph.degrees[u] == lowest and graph.degrees[v] == lowest
        for u, v, _ in graph.edges
    )


def degree_bound(instance: PncInstance) -> int:
    """max_i i * d_i over the nonincreasing degree sequence (1-based).

    A bound witness: posting d_i alone sells at least i copies. The optimum
    is at most (1 + ln n) times this value on unweighted instances.
    """
    _require_plain(instance, "degree_bound")
    ranked = sorted(instance.graph.degrees, reverse=True)
    return max(rank * d for rank, d in enumerate(ranked, start=1))
