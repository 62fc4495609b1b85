"""Graph family generators: shapes, determinism, parameter validation."""

import math

import pytest

from netprice import (
    GenSpec,
    gen_ba,
    gen_er,
    gen_example1,
    gen_forest,
    gen_spider,
    gen_split,
    recognize_split,
)


def _component_count(instance):
    n = instance.node_count
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in instance.graph.edges:
        parent[find(u)] = find(v)
    return len({find(x) for x in range(n)})


def _is_plain(instance):
    return all(w == 1 for _, _, w in instance.graph.edges) and all(
        v == 0 for v in instance.intrinsic
    )


# --- Erdos-Renyi -------------------------------------------------------------


def test_er_extreme_probabilities():
    empty = gen_er(10, 0.0, seed=3)
    assert empty.graph.edges == ()
    complete = gen_er(10, 1.0, seed=3)
    assert len(complete.graph.edges) == 45
    assert _is_plain(empty) and _is_plain(complete)


def test_er_reproducible_and_seed_sensitive():
    a = gen_er(40, 0.3, seed=7)
    b = gen_er(40, 0.3, seed=7)
    c = gen_er(40, 0.3, seed=8)
    assert a.graph.edges == b.graph.edges
    assert a.graph.edges != c.graph.edges


def test_er_density_tracks_eta():
    total = sum(len(gen_er(60, 0.25, seed=s).graph.edges) for s in range(30))
    expected = 30 * 0.25 * (60 * 59 // 2)
    assert abs(total - expected) < 0.08 * expected


def test_er_validation():
    with pytest.raises(ValueError, match="n >= 2"):
        gen_er(1, 0.5, seed=0)
    with pytest.raises(ValueError, match=r"eta must be in \[0, 1\]"):
        gen_er(5, 1.2, seed=0)


# --- preferential attachment -------------------------------------------------


def test_ba_shape():
    n, beta = 50, 3
    inst = gen_ba(n, beta, seed=11)
    assert inst.node_count == n
    assert len(inst.graph.edges) == math.comb(beta, 2) + beta * (n - beta)
    assert min(inst.graph.degrees) == beta
    assert _component_count(inst) == 1
    assert _is_plain(inst)


def test_ba_reproducible_and_seed_sensitive():
    a = gen_ba(120, 2, seed=5)
    b = gen_ba(120, 2, seed=5)
    c = gen_ba(120, 2, seed=6)
    assert a.graph.edges == b.graph.edges
    assert a.graph.edges != c.graph.edges


def test_ba_degree_beta_mass():
    # preferential attachment puts roughly a 2/(beta+2) fraction of nodes
    # at the minimum degree once n is moderately large
    inst = gen_ba(2000, 3, seed=1)
    frac = sum(1 for d in inst.graph.degrees if d == 3) / inst.node_count
    assert 0.33 <= frac <= 0.47


def test_ba_validation():
    with pytest.raises(ValueError, match="n > beta"):
        gen_ba(3, 3, seed=0)
    with pytest.raises(ValueError, match="positive integer"):
        gen_ba(10, 0, seed=0)
    with pytest.raises(ValueError, match="positive integer"):
        gen_ba(10, True, seed=0)


# --- spiders and the hub-of-cliques family ------------------------------------


@pytest.mark.parametrize("k", [1, 2, 5])
def test_spider_shape(k):
    inst = gen_spider(k)
    assert inst.node_count == 2 * k + 1
    assert len(inst.graph.edges) == 2 * k
    degrees = inst.graph.degrees
    assert degrees[0] == k
    middles = [degrees[1 + 2 * leg] for leg in range(k)]
    leaves = [degrees[2 + 2 * leg] for leg in range(k)]
    assert middles == [2] * k if k > 0 else True
    assert leaves == [1] * k
    assert _is_plain(inst)


def test_spider_validation():
    with pytest.raises(ValueError, match="k >= 1"):
        gen_spider(0)


def test_example1_shape():
    inst = gen_example1(3)
    assert inst.node_count == 3 * math.factorial(3) + 1 == 19
    # hub to all 18 others, one K6, two K3s, three K2s
    assert len(inst.graph.edges) == 18 + 15 + 2 * 3 + 3 * 1 == 42
    assert inst.graph.degrees[0] == 18
    assert _is_plain(inst)


@pytest.mark.parametrize("k", [2, 4])
def test_example1_counts(k):
    inst = gen_example1(k)
    fact = math.factorial(k)
    assert inst.node_count == k * fact + 1
    clique_edges = sum(i * math.comb(fact // i, 2) for i in range(1, k + 1))
    assert len(inst.graph.edges) == k * fact + clique_edges
    # each non-hub node sits in exactly one clique: degree 1 + (size - 1)
    sizes = sorted(d for d in inst.graph.degrees[1:])
    expected = sorted(
        fact // i
        for i in range(1, k + 1)
        for _ in range(i * (fact // i))
    )
    assert sizes == expected


def test_example1_validation():
    with pytest.raises(ValueError, match="2 <= k <= 8"):
        gen_example1(1)
    with pytest.raises(ValueError, match="2 <= k <= 8"):
        gen_example1(9)


# --- split graphs -------------------------------------------------------------


def test_split_partition_is_valid():
    inst, part = gen_split(20, 0.4, 0.5, seed=9)
    assert len(part.clique) == math.ceil(0.4 * 20)
    assert sorted(part.clique + part.independent) == list(range(20))
    adjacency = {(u, v) for u, v, _ in inst.graph.edges}
    for i, a in enumerate(part.clique):
        for b in part.clique[i + 1 :]:
            assert (min(a, b), max(a, b)) in adjacency
    for i, a in enumerate(part.independent):
        for b in part.independent[i + 1 :]:
            assert (a, b) not in adjacency
    assert recognize_split(inst.graph) is not None


def test_split_clique_ordered_by_degree():
    inst, part = gen_split(25, 0.3, 0.6, seed=2)
    degs = [inst.graph.degrees[v] for v in part.clique]
    assert degs == sorted(degs)


def test_split_reproducible():
    a, _ = gen_split(30, 0.5, 0.4, seed=13)
    b, _ = gen_split(30, 0.5, 0.4, seed=13)
    assert a.graph.edges == b.graph.edges


def test_split_validation():
    with pytest.raises(ValueError, match="n >= 2"):
        gen_split(1, 0.5, 0.5, seed=0)
    with pytest.raises(ValueError, match="clique_fraction"):
        gen_split(10, 1.0, 0.5, seed=0)
    with pytest.raises(ValueError, match="edge_prob"):
        gen_split(10, 0.5, -0.1, seed=0)


# --- uniform forests ----------------------------------------------------------


def test_forest_shape():
    for seed in range(25):
        inst = gen_forest(17, 4, seed=seed)
        assert inst.node_count == 17
        assert len(inst.graph.edges) == 17 - 4
        assert _component_count(inst) == 4  # with n-t edges this forces acyclicity
        assert _is_plain(inst)


def test_forest_single_tree_and_fully_isolated():
    tree = gen_forest(9, 1, seed=0)
    assert len(tree.graph.edges) == 8
    assert _component_count(tree) == 1
    dust = gen_forest(6, 6, seed=0)
    assert dust.graph.edges == ()


def test_forest_sampler_hits_every_tree():
    # all 16 labeled trees on 4 nodes should show up quickly
    seen = {gen_forest(4, 1, seed=s).graph.edges for s in range(400)}
    assert len(seen) == 16


def test_forest_sampler_hits_every_two_tree_forest():
    # all 15 labeled forests on 4 nodes with 2 components
    seen = {gen_forest(4, 2, seed=s).graph.edges for s in range(400)}
    assert len(seen) == 15


def test_forest_component_sizes_unbiased():
    # for n=3, t=2 the forests are the three single-edge graphs; each
    # should appear about a third of the time
    counts = {}
    for s in range(600):
        edges = gen_forest(3, 2, seed=s).graph.edges
        counts[edges] = counts.get(edges, 0) + 1
    assert len(counts) == 3
    assert all(140 <= c <= 260 for c in counts.values())


def test_forest_validation():
    with pytest.raises(ValueError, match="n >= 1"):
        gen_forest(0, 1, seed=0)
    with pytest.raises(ValueError, match=r"tree_count must be in \[1, n\]"):
        gen_forest(5, 6, seed=0)
    with pytest.raises(ValueError, match=r"tree_count must be in \[1, n\]"):
        gen_forest(5, 0, seed=0)
    with pytest.raises(ValueError, match="n <= 1000"):
        gen_forest(1001, 3, seed=0)


# --- the GenSpec dispatcher ---------------------------------------------------


def test_genspec_matches_direct_calls():
    assert (
        GenSpec("er", {"n": 15, "eta": 0.4}, seed=3).build().graph.edges
        == gen_er(15, 0.4, seed=3).graph.edges
    )
    assert (
        GenSpec("ba", {"n": 12, "beta": 2}, seed=4).build().graph.edges
        == gen_ba(12, 2, seed=4).graph.edges
    )
    assert GenSpec("spider", {"k": 3}).build().node_count == 7
    assert GenSpec("example1", {"k": 2}).build().node_count == 5
    assert (
        GenSpec("forest", {"n": 10, "tree_count": 2}, seed=5).build().graph.edges
        == gen_forest(10, 2, seed=5).graph.edges
    )


def test_genspec_split_alias_and_partition():
    direct, part_direct = gen_split(14, 0.5, 0.5, seed=6)
    spec = GenSpec(
        "core_peripheral", {"n": 14, "clique_fraction": 0.5, "edge_prob": 0.5}, seed=6
    )
    inst, part = spec.build_with_partition()
    assert inst.graph.edges == direct.graph.edges
    assert part == part_direct
    assert spec.build().graph.edges == direct.graph.edges


def test_genspec_partition_none_for_other_families():
    _, part = GenSpec("spider", {"k": 2}).build_with_partition()
    assert part is None


def test_genspec_unknown_family():
    with pytest.raises(ValueError, match="unknown family"):
        GenSpec("smallworld", {"n": 5}).build()
