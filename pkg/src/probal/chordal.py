"""Reduce a moral chordal component to the tree instance the designer consumes.

Edges that lie in no triangle are the "safe" edges; removing them leaves
dense clusters (cysts) that get contracted into weighted supernodes.  After
contraction the graph must be a tree, otherwise the input violated the
modelling assumptions and we report that instead of repairing it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ContractionNotTreeError, NotATreeError
from .graphs import Skeleton, _components_idx, validate_skeleton


def triangle_free_edges(skel: Skeleton) -> set[tuple]:
    """Edges whose endpoints share no common neighbour, as label pairs."""
    nbr = [set(a) for a in skel.adj]
    out = set()
    for i, j in skel.edges:
        if not (nbr[i] & nbr[j]):
            out.add((skel.labels[i], skel.labels[j]))
    return out


def _cyst_index_sets(skel: Skeleton) -> list[list[int]]:
    nbr = [set(a) for a in skel.adj]
    triangle_adj: list[list[int]] = [[] for _ in range(skel.n)]
    for i, j in skel.edges:
        if nbr[i] & nbr[j]:
            triangle_adj[i].append(j)
            triangle_adj[j].append(i)
    comps = _components_idx(tuple(map(tuple, triangle_adj)), skel.n, set())
    return [c for c in comps if len(c) >= 2]


def find_cysts(skel: Skeleton) -> list[tuple]:
    """Connected clusters of in-triangle edges with at least two vertices."""
    return [skel.labels_of(c) for c in _cyst_index_sets(skel)]


@dataclass(frozen=True, eq=False)
class ChordalDecomposition:
    triangle_free: tuple  # label pairs
    cysts: tuple  # tuples of member labels
    contracted: Skeleton  # tree with supernode weights
    vertex_map: dict  # original label -> contracted label

    def expand(self, contracted_labels) -> list:
        """Original vertices represented by the given contracted vertices."""
        members: dict = {}
        for cyst in self.cysts:
            members[self.vertex_map[cyst[0]]] = list(cyst)
        out: list = []
        for v in contracted_labels:
            out.extend(members.get(v, [v]))
        return out

    def report(self) -> dict:
        return {
            "original_n": len(self.vertex_map),
            "contracted_n": self.contracted.n,
            "triangle_free_edges": [[str(a), str(b)] for a, b in sorted(self.triangle_free, key=str)],
            "cysts": [[str(v) for v in c] for c in self.cysts],
            "vertex_map": {str(k): str(v) for k, v in self.vertex_map.items()},
        }


def contract(skel: Skeleton) -> ChordalDecomposition:
    """Merge every cyst into a single weighted supernode.

    The supernode inherits the label of its lowest-index member.  Raises
    ``ContractionNotTreeError`` when the merged graph is not a tree (for
    example a chordless cycle, or two cysts joined by parallel safe edges).
    """
    cysts_idx = _cyst_index_sets(skel)
    rep: dict[int, int] = {}  # member index -> representative index
    for comp in cysts_idx:
        head = comp[0]
        for v in comp:
            rep[v] = head

    safe = triangle_free_edges(skel)
    safe_idx = {tuple(sorted((skel.index_of(a), skel.index_of(b)))) for a, b in safe}

    new_labels: list = []
    new_index: dict[int, int] = {}
    for i in range(skel.n):
        r = rep.get(i, i)
        if r == i:
            new_index[i] = len(new_labels)
            new_labels.append(skel.labels[i])
    weights = {skel.labels[c[0]]: len(c) for c in cysts_idx}

    new_edges: list[tuple] = []
    seen: set[tuple[int, int]] = set()
    for i, j in skel.edges:
        ri, rj = rep.get(i, i), rep.get(j, j)
        if ri == rj:
            if (i, j) in safe_idx:
                raise ContractionNotTreeError(
                    f"edge ({skel.labels[i]!r}, {skel.labels[j]!r}) collapses into a self loop"
                )
            continue  # internal cyst edge
        key = (ri, rj) if ri < rj else (rj, ri)
        if key in seen:
            raise ContractionNotTreeError(
                f"parallel edges between contracted vertices "
                f"{skel.labels[key[0]]!r} and {skel.labels[key[1]]!r}"
            )
        seen.add(key)
        new_edges.append((skel.labels[ri], skel.labels[rj]))

    try:
        contracted = validate_skeleton(
            new_edges,
            require_tree=True,
            vertices=new_labels,
            weights={v: weights.get(v, 1) for v in new_labels},
        )
    except NotATreeError as exc:
        raise ContractionNotTreeError(str(exc)) from exc

    vertex_map = {skel.labels[i]: skel.labels[rep.get(i, i)] for i in range(skel.n)}
    return ChordalDecomposition(
        triangle_free=tuple(sorted(safe, key=lambda e: (str(e[0]), str(e[1])))),
        cysts=tuple(skel.labels_of(c) for c in cysts_idx),
        contracted=contracted,
        vertex_map=vertex_map,
    )


def count_triangles(skel: Skeleton) -> int:
    nbr = [set(a) for a in skel.adj]
    count = 0
    for i, j in skel.edges:
        count += sum(1 for w in nbr[i] & nbr[j] if w > j and w > i)
    return count


def verify_chordal_moral_inputs(skel: Skeleton) -> dict:
    """Diagnostics for how tree-like the input is; never raises."""
    triangles = count_triangles(skel)
    try:
        dec = contract(skel)
        is_tree, contracted_n, n_cysts = True, dec.contracted.n, len(dec.cysts)
    except ContractionNotTreeError:
        is_tree, contracted_n, n_cysts = False, None, len(find_cysts(skel))
    return {
        "n": skel.n,
        "edges": len(skel.edges),
        "triangles": triangles,
        "triangle_ratio": triangles / skel.n,
        "cysts": n_cysts,
        "contraction_is_tree": is_tree,
        "contracted_n": contracted_n,
    }


def allocate_budget(sizes: Sequence[int], total: int) -> list[int]:
    """Largest-remainder apportionment of ``total`` across components.

    Quotas are total*size_i/sum(sizes); remainder ties go to the larger
    component first, then to the lower component id.  Exact arithmetic, so
    ties are canonical.
    """
    if total < 0:
        raise ValueError("budget must be non-negative")
    if any(s <= 0 for s in sizes):
        raise ValueError("component sizes must be positive")
    if not sizes:
        return []
    s = sum(sizes)
    quotas = [Fraction(total * size, s) for size in sizes]
    alloc = [int(q) for q in quotas]
    leftover = total - sum(alloc)
    order = sorted(
        range(len(sizes)),
        key=lambda i: (-(quotas[i] - alloc[i]), -sizes[i], i),
    )
    for i in order[:leftover]:
        alloc[i] += 1
    return alloc
