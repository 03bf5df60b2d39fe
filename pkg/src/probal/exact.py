"""Brute-force optimal designs, lower bounds, and approximation factors.

The enumerations here are oracles for testing the fast designer, not a
contribution of their own, so they stay dumb on purpose: walk every size-m
vertex subset in lexicographic order and keep the best.  Chunked evaluation
lets the walk fan out over workers; the merge is by (loss, subset) so the
winner never depends on chunk boundaries.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .design import probal, probal_minimax, probal_upper_bound
from .errors import (
    BudgetFractionTooLargeError,
    DegenerateBoundError,
    SearchSpaceTooLargeError,
)
from .graphs import Skeleton
from .loss import decompose, minimax_surrogate, surrogate_loss
from .priors import RootPrior, uniform_prior

DEFAULT_CAP = 10_000_000
_CHUNK = 8192
LOG2_TWO_THIRDS = math.log2(2.0 / 3.0)


def _cap() -> int:
    return int(os.environ.get("PROBAL_CAP", DEFAULT_CAP))


def _make_evaluator(skel: Skeleton, masses):
    """Closure computing (surrogate, max component) for one removed subset.

    Uses stamp-based visited marks so nothing is reallocated per subset.
    """
    adj = skel.adj
    weights = skel.weights
    n = skel.n
    stamp = [0] * n
    state = {"t": 0}

    def evaluate(subset):
        state["t"] += 1
        t = state["t"]
        for v in subset:
            stamp[v] = t
        lhat = 0.0
        biggest = 0
        stack = []
        for start in range(n):
            if stamp[start] == t:
                continue
            stamp[start] = t
            stack.append(start)
            size = 0
            mass = 0.0
            while stack:
                v = stack.pop()
                size += weights[v]
                mass += masses[v]
                for u in adj[v]:
                    if stamp[u] != t:
                        stamp[u] = t
                        stack.append(u)
            lhat += mass * size
            if size > biggest:
                biggest = size
        return lhat, biggest

    return evaluate


def _search(skel: Skeleton, masses, m: int, objective: str, cap, threads: int):
    n = skel.n
    if m < 0 or m > n:
        raise ValueError("budget must lie between 0 and n")
    total = math.comb(n, m)
    limit = cap if cap is not None else _cap()
    if total > limit:
        raise SearchSpaceTooLargeError(
            f"{total} candidate sets exceed the evaluation cap {limit}"
        )

    pick = 0 if objective == "bayes" else 1

    def best_of_chunk(chunk):
        evaluate = _make_evaluator(skel, masses)
        best = None
        for subset in chunk:
            val = evaluate(subset)[pick]
            key = (round(val, 12), subset)
            if best is None or key < best:
                best = key
        return best

    combos = itertools.combinations(range(n), m)
    chunks = []
    while True:
        chunk = list(itertools.islice(combos, _CHUNK))
        if not chunk:
            break
        chunks.append(chunk)
    if not chunks:
        chunks = [[()]] if m == 0 else []

    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(best_of_chunk, chunks))
    else:
        results = [best_of_chunk(c) for c in chunks]

    best = min(r for r in results if r is not None)
    value, subset = best
    return list(skel.labels_of(subset)), value


def brute_force_bayes(skel: Skeleton, prior: RootPrior, m: int, cap=None, threads: int = 1):
    """Lexicographically-smallest minimizer of the surrogate loss."""
    iv, value = _search(skel, [float(x) for x in prior.masses], m, "bayes", cap, threads)
    return iv, float(value)


def brute_force_minimax(skel: Skeleton, m: int, cap=None, threads: int = 1):
    """Lexicographically-smallest minimizer of the largest component size."""
    masses = [0.0] * skel.n
    iv, value = _search(skel, masses, m, "minimax", cap, threads)
    return iv, int(value)


def bayes_lower_bound(n: int, m: int, max_degree: int) -> float:
    """(n-m)^2 / (n (Delta m - 1)): floor under the uniform-prior surrogate.

    Rests on capping the component count at Delta*m - 1.  That cap (and so
    the bound) is only valid for m >= 2: removing a single vertex of degree
    d leaves d components, not d - 1.
    """
    if max_degree * m <= 1:
        raise DegenerateBoundError("max_degree * m must exceed 1")
    return (n - m) ** 2 / (n * (max_degree * m - 1))


def minimax_lower_bound(n: int, m: int, max_degree: int) -> float:
    """(n-m) / (Delta m - 1): floor under the largest remaining component.

    Same component-count cap as bayes_lower_bound, same m >= 2 caveat.
    """
    if max_degree * m <= 1:
        raise DegenerateBoundError("max_degree * m must exceed 1")
    return (n - m) / (max_degree * m - 1)


def approx_factor(m: int, rounds: int, max_degree: int, eps: float, mode: str = "bayes") -> float:
    """Guaranteed designer/optimal ratio:
    (3/2) min(m, r)^log2(2/3) (Delta m - 1) / (1 - eps)^e
    with e = 2 for the Bayesian uniform objective and e = 1 for minimax.
    """
    if eps >= 1.0:
        raise BudgetFractionTooLargeError("budget fraction eps must be below 1")
    if eps < 0.0:
        raise ValueError("eps must be non-negative")
    if m < 1 or rounds < 1:
        raise ValueError("m and rounds must be at least 1")
    if mode not in ("bayes", "minimax"):
        raise ValueError(f"unknown mode {mode!r}")
    exponent = 2 if mode == "bayes" else 1
    base = 1.5 * min(m, rounds) ** LOG2_TWO_THIRDS * (max_degree * m - 1)
    return base / (1.0 - eps) ** exponent


@dataclass(frozen=True)
class StudyRow:
    instance: int
    n: int
    max_degree: int
    m: int
    mode: str
    designed: tuple
    designed_loss: float
    rounds: int
    optimal: tuple
    optimal_loss: float
    ratio: float
    eps: float
    factor: float | None  # None when m >= n or Delta*m <= 1
    within: bool | None


@dataclass(frozen=True)
class StudyReport:
    rows: tuple

    @property
    def mean_ratio(self) -> float:
        finite = [r.ratio for r in self.rows if math.isfinite(r.ratio)]
        return sum(finite) / len(finite) if finite else 1.0

    @property
    def max_ratio(self) -> float:
        return max((r.ratio for r in self.rows), default=1.0)

    @property
    def violations(self) -> tuple:
        return tuple(r for r in self.rows if r.within is False)

    @property
    def all_within(self) -> bool:
        return not self.violations


def approx_ratio_study(instances, m_values, modes=("bayes", "minimax"), cap=None) -> StudyReport:
    """Designed-vs-optimal losses across instances, with the guaranteed factor.

    ``instances`` is an iterable of (skeleton, prior) pairs; minimax mode
    ignores the prior.  Rows where both losses are zero report ratio 1 by
    convention.  The factor is omitted (None) where its preconditions fail
    (budget fraction at or above one, or Delta*m <= 1).
    """
    rows: list[StudyRow] = []
    for idx, (skel, prior) in enumerate(instances):
        for m in m_values:
            if m > skel.n:
                continue
            for mode in modes:
                if mode == "bayes":
                    iv, trace = probal(skel, prior, m)
                    designed_loss = surrogate_loss(skel, prior, iv)
                    opt, opt_loss = brute_force_bayes(skel, prior, m, cap=cap)
                else:
                    iv, trace = probal_minimax(skel, m)
                    designed_loss = float(minimax_surrogate(decompose(skel, iv)))
                    opt, opt_loss = brute_force_minimax(skel, m)
                    opt_loss = float(opt_loss)
                if opt_loss <= 0.0:
                    ratio = 1.0 if designed_loss <= 1e-12 else math.inf
                else:
                    ratio = designed_loss / opt_loss
                eps = m / skel.n
                factor = None
                within = None
                if eps < 1.0 and skel.max_degree * m > 1 and trace.r >= 1:
                    factor = approx_factor(m, trace.r, skel.max_degree, eps, mode)
                    within = ratio <= factor + 1e-9
                rows.append(
                    StudyRow(
                        instance=idx,
                        n=skel.n,
                        max_degree=skel.max_degree,
                        m=m,
                        mode=mode,
                        designed=tuple(iv),
                        designed_loss=designed_loss,
                        rounds=trace.r,
                        optimal=tuple(opt),
                        optimal_loss=opt_loss,
                        ratio=ratio,
                        eps=eps,
                        factor=factor,
                        within=within,
                    )
                )
    return StudyReport(rows=tuple(rows))
