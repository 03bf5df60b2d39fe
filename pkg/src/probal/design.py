"""ProBal: probability-balanced separator search for intervention design.

The designer keeps a pool of segments (connected subtrees of the input with
the masses of already-chosen separators zeroed).  Each round it takes the
heaviest segment, scores every vertex by how evenly its lobes can be split
into two wings under the segment-renormalized prior, intervenes on the most
balanced vertex, and splits the segment in two along that vertex's wings.
Child segments that are stars centred on the separator, or whose vertices
have all been chosen already, are fully resolved and leave the pool.

Everything is deterministic: ties are broken toward lower unbalancedness,
then non-leaf vertices, then the smallest vertex index; segment selection
prefers larger mass, then more vertices, then the lexicographically
smallest vertex tuple.  Mass comparisons are rounded at 1e-12 so float
noise cannot flip a decision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import AllZeroSegmentError, NotATreeError, RoundCapExceededError
from .graphs import Skeleton, _components_idx
from .priors import RootPrior, uniform_prior

MASS_TOL_DIGITS = 12
# Exhaustive wing search is affordable up to this many lobes; beyond it the
# sorted-prefix construction still guarantees both wings stay under 2/3 for
# any separator vertex.
EXHAUSTIVE_LOBE_LIMIT = 20


def _r12(x: float) -> float:
    return round(x, MASS_TOL_DIGITS)


@dataclass(frozen=True)
class Segment:
    """Connected subtree of the master tree, with separator masses zeroed."""

    vertices: tuple  # labels, ascending index order
    zeroed: frozenset  # labels
    mass: float  # raw (un-renormalized) prior mass of the un-zeroed vertices


@dataclass(frozen=True)
class WingPartition:
    vertex: object
    wing1: tuple  # labels
    wing2: tuple
    wing1_mass: float  # in segment-renormalized units
    wing2_mass: float
    unbalancedness: float
    max_lobe_mass: float


@dataclass(frozen=True)
class TraceRound:
    segment_size: int
    segment_mass: float
    segment_min: object
    separator: object
    unbalancedness: float
    wing1: tuple
    wing2: tuple
    wing1_mass: float
    wing2_mass: float
    max_lobe_mass: float
    consumed_budget: bool
    children: tuple  # (size, "kept" | "star" | "covered") per child

    def to_dict(self) -> dict:
        return {
            "segment_size": self.segment_size,
            "segment_mass": self.segment_mass,
            "segment_min": str(self.segment_min),
            "separator": str(self.separator),
            "unbalancedness": self.unbalancedness,
            "wing1": [str(v) for v in self.wing1],
            "wing2": [str(v) for v in self.wing2],
            "wing1_mass": self.wing1_mass,
            "wing2_mass": self.wing2_mass,
            "max_lobe_mass": self.max_lobe_mass,
            "consumed_budget": self.consumed_budget,
            "children": [list(c) for c in self.children],
        }


@dataclass(frozen=True)
class DesignTrace:
    mode: str
    budget: int
    interventions: tuple
    rounds: tuple

    @property
    def r(self) -> int:
        return len(self.rounds)

    def to_dict(self, include_rounds: bool = True) -> dict:
        out = {
            "mode": self.mode,
            "budget": self.budget,
            "interventions": [str(v) for v in self.interventions],
            "rounds": self.r,
        }
        if include_rounds:
            out["round_log"] = [t.to_dict() for t in self.rounds]
        return out


# ---------------------------------------------------------------------------
# Wing partitioning
# ---------------------------------------------------------------------------


def _split_exhaustive(masses: Sequence[float]):
    """Best bipartition of lobe masses, minimizing |mass(W1) - mass(W2)|.

    Ties prefer the heavier wing1, then more lobes in wing1 (so a lone lobe
    lands in wing1 and wing2 is the empty one), then the smallest subset
    bitmask; the result is a deterministic function of the mass list.
    """
    k = len(masses)
    total = float(sum(masses))
    if k <= 10:
        best_key = None
        best_mask = 0
        for mask in range(1 << k):
            m1 = 0.0
            mm = mask
            i = 0
            while mm:
                if mm & 1:
                    m1 += masses[i]
                mm >>= 1
                i += 1
            key = (_r12(abs(total - 2.0 * m1)), -_r12(m1), -mask.bit_count(), mask)
            if best_key is None or key < best_key:
                best_key = key
                best_mask = mask
        mask = best_mask
    else:
        sums = np.zeros(1)
        for m in masses:
            sums = np.concatenate([sums, sums + m])
        diffs = np.round(np.abs(total - 2.0 * sums), MASS_TOL_DIGITS)
        cand = np.flatnonzero(diffs == diffs.min())
        w1 = np.round(sums[cand], MASS_TOL_DIGITS)
        cand = cand[w1 == w1.max()]
        counts = np.array([int(c).bit_count() for c in cand])
        cand = cand[counts == counts.max()]
        mask = int(cand.min())
    w1_idx = tuple(i for i in range(k) if (mask >> i) & 1)
    w2_idx = tuple(i for i in range(k) if not (mask >> i) & 1)
    return w1_idx, w2_idx


def _split_prefix(masses: Sequence[float]):
    """Sorted-prefix construction for very high degrees.

    Sort lobes ascending, take the longest prefix of total at most 2/3; if
    the suffix also fits under 2/3 that is the split, otherwise the first
    lobe past the prefix goes alone into one wing.
    """
    order = sorted(range(len(masses)), key=lambda i: (masses[i], i))
    prefix = 0.0
    j = -1
    for pos, i in enumerate(order):
        if prefix + masses[i] <= 2.0 / 3.0 + 1e-12:
            prefix += masses[i]
            j = pos
        else:
            break
    if j == len(order) - 1:
        return tuple(sorted(order)), ()
    suffix = sum(masses[i] for i in order[j + 1:])
    if suffix <= 2.0 / 3.0 + 1e-12:
        return tuple(sorted(order[: j + 1])), tuple(sorted(order[j + 1:]))
    lone = order[j + 1]
    rest = tuple(sorted(i for i in range(len(masses)) if i != lone))
    return (lone,), rest


def partition_lobes(masses: Sequence[float]):
    """Split lobe masses into two wings, as balanced as possible.

    Returns (wing1 indices, wing2 indices).  Exhaustive below
    EXHAUSTIVE_LOBE_LIMIT lobes, constructive above.
    """
    if len(masses) <= EXHAUSTIVE_LOBE_LIMIT:
        return _split_exhaustive(masses)
    return _split_prefix(masses)


def _split_diff(masses: Sequence[float]) -> float:
    """|mass(W1) - mass(W2)| for the partition partition_lobes would pick."""
    w1, w2 = partition_lobes(masses)
    m1 = sum(masses[i] for i in w1)
    m2 = sum(masses[i] for i in w2)
    return abs(m1 - m2)


# ---------------------------------------------------------------------------
# Separator search within one segment
# ---------------------------------------------------------------------------


class _Seg:
    __slots__ = ("members", "vset", "zeroed", "mass")

    def __init__(self, members, vset, zeroed, mass):
        self.members = members  # sorted tuple of indices
        self.vset = vset  # frozenset of indices
        self.zeroed = zeroed  # frozenset of indices
        self.mass = mass  # raw prior mass of un-zeroed members


class _SepChoice:
    __slots__ = (
        "x", "s", "w1set", "w2set", "w1m", "w2m", "max_lobe", "w1_members", "w2_members",
    )


def _find_sep_idx(adj, masses, seg: _Seg) -> _SepChoice:
    members = seg.members
    vset = seg.vset
    zeroed = seg.zeroed

    raw = {v: (0.0 if v in zeroed else float(masses[v])) for v in members}
    total = sum(raw.values())
    if total <= 0.0:
        raise AllZeroSegmentError("segment carries no probability mass")
    pbar = {v: raw[v] / total for v in members}

    nbrs = {v: [u for u in adj[v] if u in vset] for v in members}

    root = members[0]
    parent = {root: -1}
    order = [root]
    head = 0
    while head < len(order):
        v = order[head]
        head += 1
        for u in nbrs[v]:
            if u not in parent:
                parent[u] = v
                order.append(u)

    subtree = dict(pbar)
    for k in range(len(order) - 1, 0, -1):
        v = order[k]
        subtree[parent[v]] += subtree[v]

    best_key = None
    best_x = root
    for x in members:
        lobe_masses = [subtree[u] for u in nbrs[x] if parent[u] == x]
        if x != root:
            lobe_masses.append(1.0 - subtree[x])
        s = _split_diff(lobe_masses) / 2.0
        leaf = len(nbrs[x]) <= 1
        # A vertex with a lobe above 1/2 is not a separator; an
        # already-zeroed vertex can otherwise win on raw unbalancedness with
        # a heavy lobe, which breaks the 2/3 division guarantee.  A
        # separator always exists, so rank separator-ness first, then lower
        # unbalancedness, then non-leaf vertices, then the smallest index.
        over_half = max(lobe_masses, default=0.0) > 0.5 + 1e-12
        key = (over_half, _r12(s), leaf, x)
        if best_key is None or key < best_key:
            best_key = key
            best_x = x

    x = best_x
    choice = _SepChoice()
    choice.x = x
    # Lobes as vertex sets, in ascending-minimum order, then the actual wings.
    lobe_lists = _segment_components(nbrs, members, x)
    lobe_masses = [sum(pbar[v] for v in lobe) for lobe in lobe_lists]
    w1_idx, w2_idx = partition_lobes(lobe_masses)
    w1_members = sorted(v for i in w1_idx for v in lobe_lists[i])
    w2_members = sorted(v for i in w2_idx for v in lobe_lists[i])
    choice.w1_members = w1_members
    choice.w2_members = w2_members
    choice.w1set = set(w1_members)
    choice.w2set = set(w2_members)
    choice.w1m = sum(lobe_masses[i] for i in w1_idx)
    choice.w2m = sum(lobe_masses[i] for i in w2_idx)
    choice.s = abs(choice.w1m - choice.w2m) / 2.0
    choice.max_lobe = max(lobe_masses, default=0.0)
    return choice


def _segment_components(nbrs, members, removed) -> list[list[int]]:
    seen = {removed}
    comps: list[list[int]] = []
    for start in members:
        if start in seen:
            continue
        seen.add(start)
        comp = [start]
        head = 0
        while head < len(comp):
            v = comp[head]
            head += 1
            for u in nbrs[v]:
                if u not in seen:
                    seen.add(u)
                    comp.append(u)
        comp.sort()
        comps.append(comp)
    comps.sort(key=lambda c: c[0])
    return comps


# ---------------------------------------------------------------------------
# Public single-step operations
# ---------------------------------------------------------------------------


def make_segment(skel: Skeleton, prior: RootPrior, vertices: Iterable, zeroed: Iterable = ()) -> Segment:
    idx = sorted(skel.indices_of(vertices))
    zr = frozenset(skel.indices_of(zeroed))
    vset = frozenset(idx)
    if not zr <= vset:
        raise ValueError("zeroed vertices must lie inside the segment")
    sub_adj = {v: [u for u in skel.adj[v] if u in vset] for v in idx}
    if idx and len(_segment_components(sub_adj, idx, -1)) != 1:
        raise NotATreeError("segment does not induce a connected subtree")
    mass = sum(float(prior.masses[v]) for v in idx if v not in zr)
    return Segment(
        vertices=skel.labels_of(idx),
        zeroed=frozenset(skel.labels[v] for v in zr),
        mass=mass,
    )


def find_separator(skel: Skeleton, prior: RootPrior, segment, zeroed: Iterable = ()) -> WingPartition:
    """Score every vertex of the segment and return the best wing partition.

    ``segment`` is a Segment or an iterable of vertex labels.
    """
    if isinstance(segment, Segment):
        vertices, zeroed = segment.vertices, segment.zeroed
    else:
        vertices = tuple(segment)
    seg = _seg_from_labels(skel, prior, vertices, zeroed)
    choice = _find_sep_idx(skel.adj, prior.masses, seg)
    return WingPartition(
        vertex=skel.labels[choice.x],
        wing1=skel.labels_of(choice.w1_members),
        wing2=skel.labels_of(choice.w2_members),
        wing1_mass=choice.w1m,
        wing2_mass=choice.w2m,
        unbalancedness=choice.s,
        max_lobe_mass=choice.max_lobe,
    )


def divide(skel: Skeleton, prior: RootPrior, segment: Segment, wing: WingPartition):
    """Split a segment along a wing partition; the separator stays in both
    children with its mass zeroed."""
    members = set(skel.indices_of(segment.vertices))
    zeroed = set(skel.indices_of(segment.zeroed))
    x = skel.index_of(wing.vertex)
    w1 = set(skel.indices_of(wing.wing1))
    w2 = set(skel.indices_of(wing.wing2))
    out = []
    for cm in (members - w2, members - w1):
        zr = (zeroed | {x}) & cm
        mass = sum(float(prior.masses[v]) for v in cm if v not in zr)
        out.append(
            Segment(
                vertices=skel.labels_of(sorted(cm)),
                zeroed=frozenset(skel.labels[v] for v in zr),
                mass=mass,
            )
        )
    return out[0], out[1]


def _seg_from_labels(skel, prior, vertices, zeroed) -> _Seg:
    idx = sorted(skel.indices_of(vertices))
    zr = frozenset(skel.indices_of(zeroed))
    mass = sum(float(prior.masses[v]) for v in idx if v not in zr)
    return _Seg(tuple(idx), frozenset(idx), zr, mass)


# ---------------------------------------------------------------------------
# The full designer
# ---------------------------------------------------------------------------


def probal(skel: Skeleton, prior: RootPrior, budget: int, mode: str = "bayes"):
    """Design up to ``budget`` interventions; returns (vertices, trace).

    Fewer than ``budget`` vertices come back when the segment pool empties
    first, i.e. when everything is already resolved.  A round whose best
    separator was chosen previously does not consume budget; the division
    still happens and the round is flagged in the trace.
    """
    if not skel.is_tree:
        raise NotATreeError("the designer runs on tree skeletons")
    if prior.skeleton is not skel and prior.skeleton.n != skel.n:
        raise ValueError("prior was built for a different skeleton")
    if budget < 0:
        raise ValueError("budget must be non-negative")

    adj = skel.adj
    masses = prior.masses
    n = skel.n
    round_cap = 2 * n

    all_members = tuple(range(n))
    segments: list[_Seg] = [
        _Seg(all_members, frozenset(all_members), frozenset(), float(masses.sum()))
    ]
    chosen: list[int] = []
    chosen_set: set[int] = set()
    rounds: list[TraceRound] = []

    while len(chosen) < budget and segments:
        if len(rounds) >= round_cap:
            raise RoundCapExceededError(
                f"designer exceeded {round_cap} rounds; algorithm state is broken"
            )
        best_i = 0
        best_key = None
        for i, sg in enumerate(segments):
            key = (-_r12(sg.mass), -len(sg.members), sg.members)
            if best_key is None or key < best_key:
                best_key = key
                best_i = i
        seg = segments.pop(best_i)

        choice = _find_sep_idx(adj, masses, seg)
        x = choice.x
        consumed = x not in chosen_set
        if consumed:
            chosen.append(x)
            chosen_set.add(x)

        children_info = []
        kept: list[_Seg] = []
        for wset in (choice.w2set, choice.w1set):  # child1 drops wing2, child2 drops wing1
            cm = sorted(v for v in seg.members if v not in wset)
            cset = frozenset(cm)
            zr = frozenset((set(seg.zeroed) | {x}) & cset)
            if all(v in chosen_set for v in cm):
                children_info.append((len(cm), "covered"))
                continue
            if _is_star_centered(adj, cset, x):
                children_info.append((len(cm), "star"))
                continue
            mass = sum(float(masses[v]) for v in cm if v not in zr)
            kept.append(_Seg(tuple(cm), cset, zr, mass))
            children_info.append((len(cm), "kept"))
        segments.extend(kept)

        rounds.append(
            TraceRound(
                segment_size=len(seg.members),
                segment_mass=seg.mass,
                segment_min=skel.labels[seg.members[0]],
                separator=skel.labels[x],
                unbalancedness=choice.s,
                wing1=skel.labels_of(choice.w1_members),
                wing2=skel.labels_of(choice.w2_members),
                wing1_mass=choice.w1m,
                wing2_mass=choice.w2m,
                max_lobe_mass=choice.max_lobe,
                consumed_budget=consumed,
                children=tuple(children_info),
            )
        )

    interventions = skel.labels_of(chosen)
    trace = DesignTrace(
        mode=mode, budget=budget, interventions=interventions, rounds=tuple(rounds)
    )
    return list(interventions), trace


def _is_star_centered(adj, cset, center) -> bool:
    # Every edge of the induced subtree must touch the center.
    for v in cset:
        if v == center:
            continue
        for u in adj[v]:
            if u in cset and u != center:
                return False
    return True


def probal_minimax(skel: Skeleton, budget: int):
    """Balance vertex counts instead of prior mass: identical to running the
    Bayesian designer under the (weight-proportional) uniform prior."""
    return probal(skel, uniform_prior(skel), budget, mode="minimax")


def probal_upper_bound(rounds: int, n: float) -> float:
    """Guaranteed surrogate-loss ceiling after a number of rounds:
    (2/3)^floor(log2(rounds+1)) * n.  ``n`` is the (weighted) tree order."""
    if rounds < 0:
        raise ValueError("rounds must be non-negative")
    k = (rounds + 1).bit_length() - 1
    return (2.0 / 3.0) ** k * n
