import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from probal import (
    DuplicateEdgeError,
    NotATreeError,
    SelfLoopError,
    UnknownVertexError,
    components,
    descendants,
    is_star_with_center,
    lobes,
    path_graph,
    prufer_tree,
    read_edge_list,
    root_tree,
    star_graph,
    validate_skeleton,
    write_edge_list,
)


def random_tree(draw):
    n = draw(st.integers(min_value=2, max_value=10))
    if n == 2:
        return prufer_tree([], 2)
    seq = draw(st.lists(st.integers(0, n - 1), min_size=n - 2, max_size=n - 2))
    return prufer_tree(seq, n)


trees = st.composite(random_tree)()


def test_validate_smallest_path():
    skel = validate_skeleton([(1, 2), (2, 3)], require_tree=True)
    assert skel.n == 3
    assert skel.is_tree


def test_validate_rejects_cycle():
    with pytest.raises(NotATreeError):
        validate_skeleton([(1, 2), (2, 3), (3, 1)], require_tree=True)


def test_validate_rejects_disconnected():
    with pytest.raises(NotATreeError, match="disconnected"):
        validate_skeleton([(1, 2), (3, 4)], require_tree=True)


def test_validate_rejects_duplicate_edge():
    with pytest.raises(DuplicateEdgeError):
        validate_skeleton([(1, 2), (1, 2)])
    with pytest.raises(DuplicateEdgeError):
        validate_skeleton([(1, 2), (2, 1)])


def test_validate_rejects_self_loop():
    with pytest.raises(SelfLoopError):
        validate_skeleton([(1, 1)])


def test_components_path_removed_middle(path5):
    assert components(path5, [3]) == [(1, 2), (4, 5)]


def test_components_nothing_removed(path5):
    assert components(path5) == [(1, 2, 3, 4, 5)]


def test_components_star_center_removed(star4):
    assert components(star4, ["c"]) == [("a",), ("b",), ("d",)]


def test_components_unknown_vertex(path5):
    with pytest.raises(UnknownVertexError):
        components(path5, [99])


def test_lobes_path(path5):
    assert lobes(path5, 3) == [(1, 2), (4, 5)]
    assert lobes(path5, 1) == [(2, 3, 4, 5)]


def test_lobes_star(star4):
    assert lobes(star4, "c") == [("a",), ("b",), ("d",)]


def test_lobes_requires_tree():
    square = validate_skeleton([(1, 2), (2, 3), (3, 4), (4, 1)])
    with pytest.raises(NotATreeError):
        lobes(square, 1)


@settings(max_examples=60)
@given(trees)
def test_lobe_count_and_sizes(tree):
    for v in tree.labels:
        lv = lobes(tree, v)
        assert len(lv) == tree.degree(v)
        assert sum(len(l) for l in lv) == tree.n - 1


@settings(max_examples=40)
@given(trees, st.data())
def test_components_refine_under_larger_removal(tree, data):
    small = data.draw(st.sets(st.sampled_from(tree.labels), max_size=3))
    extra = data.draw(st.sets(st.sampled_from(tree.labels), max_size=3))
    big = small | extra
    coarse = [set(c) for c in components(tree, small)]
    fine = [set(c) for c in components(tree, big)]
    for f in fine:
        assert sum(1 for c in coarse if f <= c) == 1


def test_descendants_examples(path5):
    r3 = root_tree(path5, 3)
    assert descendants(r3, 1) == set()
    assert descendants(r3, 4) == {5}
    r1 = root_tree(path5, 1)
    assert descendants(r1, 1) == {2, 3, 4, 5}


@settings(max_examples=40)
@given(trees)
def test_descendants_partition(tree):
    for root in tree.labels:
        rt = root_tree(tree, root)
        # every non-root vertex appears below exactly one of root's children
        assert sum(1 for p in rt.parent if p >= 0) == tree.n - 1
        total = sum(len(descendants(rt, v)) + 1 for v in tree.labels)
        # each vertex is counted once per ancestor plus once for itself
        assert total >= tree.n


def test_star_detection(star4):
    assert is_star_with_center(star4, "c")
    assert not is_star_with_center(star4, "a")
    assert not is_star_with_center(path_graph(3), 1)
    assert is_star_with_center(validate_skeleton([(1, 2)]), 2)


def test_edge_list_round_trip(tmp_path):
    src = tmp_path / "g.edges"
    src.write_text("# comment\na b\nb c\n\nc d\n")
    pairs = read_edge_list(src)
    assert pairs == [("a", "b"), ("b", "c"), ("c", "d")]
    skel = validate_skeleton(pairs, require_tree=True)
    out1 = tmp_path / "out1.edges"
    out2 = tmp_path / "out2.edges"
    write_edge_list(skel, out1)
    write_edge_list(validate_skeleton(read_edge_list(out1)), out2)
    assert out1.read_bytes() == out2.read_bytes()


def test_edge_list_bad_token_count(tmp_path):
    from probal import FileFormatError

    bad = tmp_path / "bad.edges"
    bad.write_text("a b c\n")
    with pytest.raises(FileFormatError):
        read_edge_list(bad)


def test_single_vertex_tree():
    skel = validate_skeleton([], vertices=["x"])
    assert skel.n == 1
    assert skel.is_tree
