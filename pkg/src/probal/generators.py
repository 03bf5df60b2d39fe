"""Seeded random-tree generators and exhaustive tree enumeration.

All randomness flows through numpy's PCG64 keyed by SeedSequence, with
per-instance streams derived as SeedSequence([seed, index]).  The generator
identity is part of the reproducibility contract: the same spec always
yields byte-identical edge lists.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import GenerationStalledError
from .graphs import Skeleton, validate_skeleton
from .priors import RootPrior, degree_prior, uniform_prior


@dataclass(frozen=True)
class GenSpec:
    model: str  # "ba" | "gw"
    n: int
    max_degree: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.model not in ("ba", "gw"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.model == "gw" and (self.max_degree is None or self.max_degree < 2):
            raise ValueError("gw model needs max_degree >= 2")


def ba_tree(n: int, seed: int) -> Skeleton:
    """Preferential-attachment tree: each arrival connects to one existing
    vertex drawn proportionally to its current degree."""
    if n < 2:
        raise ValueError("n must be at least 2")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed)]))
    edges = [(0, 1)]
    endpoints = [0, 1]  # one entry per edge endpoint, so sampling is degree-weighted
    for v in range(2, n):
        target = endpoints[int(rng.integers(0, len(endpoints)))]
        edges.append((target, v))
        endpoints.append(target)
        endpoints.append(v)
    return validate_skeleton(edges, require_tree=True)


def gw_tree(n: int, max_degree: int, seed: int, restart_cap: int = 1000) -> Skeleton:
    """Bounded-degree branching tree grown breadth-first.

    The root draws its child count uniformly from 1..max_degree, every other
    vertex from 0..max_degree-1 (so no degree ever exceeds max_degree).
    Growth stops at n vertices; extinction before n restarts with a derived
    sub-seed, up to ``restart_cap`` attempts.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if max_degree < 2:
        raise ValueError("max_degree must be at least 2")
    for attempt in range(restart_cap):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), attempt]))
        edges: list[tuple[int, int]] = []
        queue = [0]
        head = 0
        next_id = 1
        while head < len(queue) and next_id < n:
            u = queue[head]
            head += 1
            if u == 0:
                k = int(rng.integers(1, max_degree + 1))
            else:
                k = int(rng.integers(0, max_degree))
            for _ in range(k):
                if next_id >= n:
                    break
                edges.append((u, next_id))
                queue.append(next_id)
                next_id += 1
        if next_id >= n:
            return validate_skeleton(edges, require_tree=True)
    raise GenerationStalledError(
        f"branching process died {restart_cap} times before reaching {n} vertices"
    )


def instance_seeds(seed: int, count: int) -> list[int]:
    """Deterministic per-instance seeds derived from one master seed."""
    ss = np.random.SeedSequence([int(seed)])
    return [int(s) for s in ss.generate_state(count, dtype=np.uint64)]


def instance_batch(spec: GenSpec, count: int, prior_kind: str = "uniform"):
    """List of (tree, prior) pairs, a pure function of (spec, count, kind)."""
    if count < 1:
        raise ValueError("count must be at least 1")
    out = []
    for s in instance_seeds(spec.seed, count):
        if spec.model == "ba":
            tree = ba_tree(spec.n, s)
        else:
            tree = gw_tree(spec.n, spec.max_degree, s)
        prior = _prior(tree, prior_kind)
        out.append((tree, prior))
    return out


def _prior(tree: Skeleton, kind: str) -> RootPrior:
    if kind == "uniform":
        return uniform_prior(tree)
    if kind == "degree":
        return degree_prior(tree)
    raise ValueError(f"unknown prior kind {kind!r}")


def prufer_tree(seq, n: int | None = None) -> Skeleton:
    """Decode a Pruefer sequence over 0..n-1 into its labelled tree."""
    seq = list(seq)
    if n is None:
        n = len(seq) + 2
    if n == 1:
        return validate_skeleton([], vertices=[0])
    if n == 2:
        return validate_skeleton([(0, 1)])
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((u, v))
    return validate_skeleton(edges, require_tree=True)


def enumerate_trees(n: int):
    """Every labelled tree on vertices 0..n-1 (n^(n-2) of them), lazily."""
    if n <= 2:
        yield prufer_tree([], n)
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield prufer_tree(seq, n)
