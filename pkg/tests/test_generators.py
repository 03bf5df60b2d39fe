import pytest

from probal import (
    GenSpec,
    GenerationStalledError,
    ba_tree,
    enumerate_trees,
    gw_tree,
    instance_batch,
    prufer_tree,
)


def test_ba_two_vertices():
    tree = ba_tree(2, 0)
    assert tree.n == 2 and len(tree.edges) == 1


def test_ba_deterministic():
    a = ba_tree(50, 7)
    b = ba_tree(50, 7)
    assert a.edges == b.edges and a.labels == b.labels


def test_ba_is_tree_with_heavy_tail():
    # trees always have mean degree 2(n-1)/n; preferential attachment should
    # additionally produce hubs far above the mean
    degrees = []
    for seed in range(30):
        tree = ba_tree(2000, seed)
        assert tree.is_tree
        degrees.append(tree.max_degree)
    assert min(degrees) > 8
    assert max(degrees) > 20


def test_gw_max_degree_two_gives_paths():
    for seed in range(20):
        tree = gw_tree(5, 2, seed)
        assert tree.max_degree <= 2  # a connected max-degree-2 tree is a path


def test_gw_deterministic():
    a = gw_tree(100, 4, 3)
    b = gw_tree(100, 4, 3)
    assert a.edges == b.edges


def test_gw_degree_bound_many_seeds():
    for seed in range(1000):
        tree = gw_tree(100, 4, seed)
        assert tree.is_tree
        assert tree.max_degree <= 4


def test_gw_stalls_when_subcritical():
    # offspring mean 1/2 for max_degree=2 makes 50 vertices unreachable
    with pytest.raises(GenerationStalledError):
        gw_tree(50, 2, 0, restart_cap=50)


def test_instance_batch_deterministic():
    spec = GenSpec(model="gw", n=30, max_degree=4, seed=9)
    a = instance_batch(spec, 10, "uniform")
    b = instance_batch(spec, 10, "uniform")
    assert [t.edges for t, _ in a] == [t.edges for t, _ in b]
    assert all(p.kind == "uniform" for _, p in a)


def test_instance_batch_degree_priors_match_trees():
    spec = GenSpec(model="ba", n=25, seed=5)
    for tree, prior in instance_batch(spec, 5, "degree"):
        for v in tree.labels:
            assert prior.mass_of(v) == pytest.approx(tree.degree(v) / (2 * (tree.n - 1)))


def test_genspec_validation():
    with pytest.raises(ValueError):
        GenSpec(model="xx", n=10)
    with pytest.raises(ValueError):
        GenSpec(model="gw", n=10, max_degree=1)
    with pytest.raises(ValueError):
        GenSpec(model="ba", n=1)


def test_prufer_decode_known():
    # sequence (2, 2) on 4 vertices is the star centred at 2
    tree = prufer_tree([2, 2], 4)
    assert sorted(tree.degree(v) for v in tree.labels) == [1, 1, 1, 3]


def test_enumerate_trees_counts():
    assert sum(1 for _ in enumerate_trees(2)) == 1
    assert sum(1 for _ in enumerate_trees(4)) == 16
    assert sum(1 for _ in enumerate_trees(5)) == 125
    for tree in enumerate_trees(5):
        assert tree.is_tree
