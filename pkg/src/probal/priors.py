"""Priors over the location of the root, and segment renormalization."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    AllZeroSegmentError,
    FileFormatError,
    MissingVertexError,
    NonPositiveMassError,
    NotNormalizedError,
    SingleVertexError,
)
from .graphs import Skeleton

NORMALIZATION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class RootPrior:
    """Strictly positive probability over root locations, index-aligned."""

    skeleton: Skeleton
    masses: np.ndarray = field(repr=False)
    kind: str = "explicit"

    def mass_of(self, label) -> float:
        return float(self.masses[self.skeleton.index_of(label)])

    def as_mapping(self) -> dict:
        return {v: float(m) for v, m in zip(self.skeleton.labels, self.masses)}


def uniform_prior(skel: Skeleton) -> RootPrior:
    """Weight-proportional masses; plain 1/n on unit-weight skeletons.

    A supernode of weight w stands for w candidate root locations, so on
    contracted trees the uniform prior gives it w times the unit mass.
    """
    w = np.asarray(skel.weights, dtype=float)
    return RootPrior(skeleton=skel, masses=w / w.sum(), kind="uniform")


def degree_prior(skel: Skeleton) -> RootPrior:
    """Mass deg(v) / (2(n-1)); defined for trees with at least two vertices."""
    if skel.n < 2:
        raise SingleVertexError("degree prior needs at least two vertices")
    deg = np.array([len(a) for a in skel.adj], dtype=float)
    return RootPrior(skeleton=skel, masses=deg / (2.0 * (skel.n - 1)), kind="degree")


def explicit_prior(skel: Skeleton, table: Mapping) -> RootPrior:
    masses = np.empty(skel.n, dtype=float)
    for i, v in enumerate(skel.labels):
        if v not in table:
            raise MissingVertexError(f"prior table is missing vertex {v!r}")
        masses[i] = float(table[v])
    if np.any(masses <= 0.0):
        bad = skel.labels[int(np.argmin(masses))]
        raise NonPositiveMassError(f"prior mass for vertex {bad!r} is not strictly positive")
    total = float(masses.sum())
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NotNormalizedError(f"prior masses sum to {total!r}, expected 1")
    return RootPrior(skeleton=skel, masses=masses, kind="explicit")


@dataclass(frozen=True, eq=False)
class SegmentMeasure:
    """Per-vertex masses on a segment, renormalized with some vertices zeroed."""

    vertices: tuple  # labels, ascending index order
    masses: tuple  # normalized, aligned with ``vertices``
    zeroed: frozenset

    def as_mapping(self) -> dict:
        return dict(zip(self.vertices, self.masses))


def normalize_segment(prior, segment: Iterable, zeroed: Iterable = ()) -> SegmentMeasure:
    """Renormalize masses over ``segment`` with ``zeroed`` vertices forced to 0.

    ``prior`` may be a RootPrior or any label->mass mapping (so the output's
    mapping can be fed back in; the operation is idempotent).
    """
    if isinstance(prior, RootPrior):
        skel = prior.skeleton
        seg_idx = sorted(skel.indices_of(segment))
        seg_labels = [skel.labels[i] for i in seg_idx]
        raw = {skel.labels[i]: float(prior.masses[i]) for i in seg_idx}
    else:
        seg_labels = list(segment)
        raw = {v: float(prior[v]) for v in seg_labels}
    zeroed = frozenset(zeroed)
    seg_set = set(seg_labels)
    if not zeroed <= seg_set:
        raise ValueError("zeroed vertices must lie inside the segment")
    total = sum(raw[v] for v in seg_labels if v not in zeroed)
    if total <= 0.0:
        raise AllZeroSegmentError("every vertex of the segment has zero mass")
    masses = tuple(0.0 if v in zeroed else raw[v] / total for v in seg_labels)
    return SegmentMeasure(vertices=tuple(seg_labels), masses=masses, zeroed=zeroed)


def read_prior_file(path) -> dict:
    """One ``label probability`` pair per line; '#' lines are comments."""
    table: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            tokens = stripped.split()
            if len(tokens) != 2:
                raise FileFormatError(f"{path}:{lineno}: expected 'label probability'")
            try:
                table[tokens[0]] = float(tokens[1])
            except ValueError:
                raise FileFormatError(f"{path}:{lineno}: bad probability {tokens[1]!r}") from None
    return table
