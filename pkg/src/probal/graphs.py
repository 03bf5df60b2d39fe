"""Undirected skeletons and rooted trees.

Vertices carry arbitrary hashable labels.  Internally every graph maps its
labels to dense integer indices in order of first appearance; all public
functions accept and return labels.  Instances are never mutated after
construction, so they are safe to share between any number of threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import (
    DuplicateEdgeError,
    FileFormatError,
    GraphError,
    NotATreeError,
    SelfLoopError,
    UnknownVertexError,
)

Label = Hashable


@dataclass(frozen=True, eq=False)
class Skeleton:
    """Undirected graph with positive integer vertex weights (default 1)."""

    labels: tuple
    edges: tuple  # (u, v) index pairs with u < v, in construction order
    adj: tuple  # adj[i] is a sorted tuple of neighbour indices
    weights: tuple
    is_tree: bool
    total_weight: int
    max_degree: int
    _index: dict = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index_of(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownVertexError(f"unknown vertex {label!r}") from None

    def indices_of(self, labels: Iterable) -> list[int]:
        return [self.index_of(v) for v in labels]

    def labels_of(self, indices: Iterable[int]) -> tuple:
        return tuple(self.labels[i] for i in indices)

    def degree(self, label) -> int:
        return len(self.adj[self.index_of(label)])

    def weight_of(self, label) -> int:
        return self.weights[self.index_of(label)]

    def has_edge(self, a, b) -> bool:
        i, j = self.index_of(a), self.index_of(b)
        return j in self.adj[i]


def validate_skeleton(
    edges: Iterable[Sequence],
    require_tree: bool = False,
    vertices: Iterable | None = None,
    weights: Mapping | None = None,
) -> Skeleton:
    """Build a skeleton from an edge list, rejecting malformed input.

    ``vertices`` optionally pre-registers labels (fixing their index order
    and allowing isolated vertices).  With ``require_tree`` the graph must
    be connected and acyclic.
    """
    labels: list = []
    index: dict = {}

    def register(v) -> int:
        i = index.get(v)
        if i is None:
            i = len(labels)
            index[v] = i
            labels.append(v)
        return i

    if vertices is not None:
        for v in vertices:
            register(v)

    idx_edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for e in edges:
        a, b = e
        if a == b:
            raise SelfLoopError(f"self loop at vertex {a!r}")
        i, j = register(a), register(b)
        key = (i, j) if i < j else (j, i)
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge between {a!r} and {b!r}")
        seen.add(key)
        idx_edges.append(key)

    n = len(labels)
    if n == 0:
        raise GraphError("empty graph: supply at least one edge or vertex")

    adj_lists: list[list[int]] = [[] for _ in range(n)]
    for i, j in idx_edges:
        adj_lists[i].append(j)
        adj_lists[j].append(i)
    adj = tuple(tuple(sorted(a)) for a in adj_lists)

    is_tree = _is_tree(adj, n, len(idx_edges), labels, raise_on_fail=require_tree)

    if weights is None:
        wt = tuple([1] * n)
    else:
        wt = tuple(int(weights[v]) for v in labels)
        if any(w < 1 for w in wt):
            raise GraphError("vertex weights must be positive integers")

    return Skeleton(
        labels=tuple(labels),
        edges=tuple(idx_edges),
        adj=adj,
        weights=wt,
        is_tree=is_tree,
        total_weight=sum(wt),
        max_degree=max((len(a) for a in adj), default=0),
        _index=index,
    )


def _is_tree(adj, n, n_edges, labels, raise_on_fail=False) -> bool:
    # BFS from vertex 0; report a concrete offending vertex or edge on failure.
    parent = [-2] * n
    parent[0] = -1
    queue = [0]
    head = 0
    cycle_edge = None
    while head < len(queue):
        v = queue[head]
        head += 1
        for u in adj[v]:
            if parent[u] == -2:
                parent[u] = v
                queue.append(u)
            elif u != parent[v] and cycle_edge is None:
                cycle_edge = (v, u)
    if len(queue) < n:
        if raise_on_fail:
            missing = next(i for i in range(n) if parent[i] == -2)
            raise NotATreeError(f"graph is disconnected: vertex {labels[missing]!r} unreachable")
        return False
    if n_edges != n - 1:
        if raise_on_fail:
            v, u = cycle_edge
            raise NotATreeError(f"graph has a cycle through edge ({labels[v]!r}, {labels[u]!r})")
        return False
    return True


def _components_idx(adj, n: int, removed: set[int]) -> list[list[int]]:
    """Connected components of the induced subgraph, as sorted index lists.

    Ordered by ascending minimum contained index (hence deterministic).
    """
    seen = bytearray(n)
    for r in removed:
        seen[r] = 1
    comps: list[list[int]] = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = 1
        comp = [start]
        head = 0
        while head < len(comp):
            v = comp[head]
            head += 1
            for u in adj[v]:
                if not seen[u]:
                    seen[u] = 1
                    comp.append(u)
        comp.sort()
        comps.append(comp)
    return comps


def components(skel: Skeleton, removed: Iterable = ()) -> list[tuple]:
    """Partition of the remaining vertices after deleting ``removed``."""
    removed_idx = set(skel.indices_of(removed))
    return [skel.labels_of(c) for c in _components_idx(skel.adj, skel.n, removed_idx)]


def lobes(skel: Skeleton, center) -> list[tuple]:
    """Components left after removing one vertex of a tree; one per neighbour."""
    if not skel.is_tree:
        raise NotATreeError("lobes are defined on trees only")
    return components(skel, [center])


@dataclass(frozen=True, eq=False)
class RootedTree:
    """A tree skeleton oriented away from a chosen root."""

    skeleton: Skeleton
    root: Label
    parent: tuple  # parent index per vertex, -1 at the root
    order: tuple  # BFS preorder indices

    def directed_edges(self) -> list[tuple]:
        lab = self.skeleton.labels
        return [(lab[self.parent[v]], lab[v]) for v in self.order if self.parent[v] >= 0]


def root_tree(skel: Skeleton, root) -> RootedTree:
    if not skel.is_tree:
        raise NotATreeError("cannot root a non-tree skeleton")
    r = skel.index_of(root)
    parent = [-2] * skel.n
    parent[r] = -1
    order = [r]
    head = 0
    while head < len(order):
        v = order[head]
        head += 1
        for u in skel.adj[v]:
            if parent[u] == -2:
                parent[u] = v
                order.append(u)
    return RootedTree(skeleton=skel, root=root, parent=tuple(parent), order=tuple(order))


def descendants(rooted: RootedTree, v) -> set:
    """Vertices strictly below ``v`` when edges point away from the root."""
    skel = rooted.skeleton
    i = skel.index_of(v)
    out: set[int] = set()
    stack = [c for c in skel.adj[i] if rooted.parent[c] == i]
    while stack:
        u = stack.pop()
        out.add(u)
        stack.extend(c for c in skel.adj[u] if rooted.parent[c] == u)
    return {skel.labels[u] for u in out}


def is_star_with_center(skel: Skeleton, center) -> bool:
    """True iff every edge is incident to ``center`` (single vertex/edge qualify)."""
    if not skel.is_tree:
        raise NotATreeError("star test is defined on trees only")
    c = skel.index_of(center)
    return all(c in e for e in skel.edges)


# ---------------------------------------------------------------------------
# Edge-list text format: one edge per line, two whitespace-separated labels,
# lines starting with '#' ignored.  Labels are arbitrary non-whitespace tokens.
# ---------------------------------------------------------------------------


def read_edge_list(path) -> list[tuple[str, str]]:
    pairs: list[tuple[str, str]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            tokens = stripped.split()
            if len(tokens) != 2:
                raise FileFormatError(
                    f"{path}:{lineno}: expected two labels per line, got {len(tokens)}"
                )
            pairs.append((tokens[0], tokens[1]))
    return pairs


def skeleton_from_edge_list(path, require_tree: bool = False) -> Skeleton:
    return validate_skeleton(read_edge_list(path), require_tree=require_tree)


def write_edge_list(skel: Skeleton, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i, j in skel.edges:
            fh.write(f"{skel.labels[i]} {skel.labels[j]}\n")


def path_graph(n: int) -> Skeleton:
    """Path on labels 1..n (handy fixture used throughout the tests)."""
    if n == 1:
        return validate_skeleton([], vertices=[1])
    return validate_skeleton([(i, i + 1) for i in range(1, n)], require_tree=True)


def star_graph(center, leaves: Sequence) -> Skeleton:
    return validate_skeleton([(center, leaf) for leaf in leaves], require_tree=True)
