"""Experiment harness: CSV sweeps, the GRN budget curve, and wall-time scaling.

Sweeps run their (n, replicate) cells in a worker pool and sort the rows by
(n, m, seed, algorithm) before emission, so thread count never changes the
output.  Wall-time columns are measured on a monotonic clock and excluded
from any golden comparison.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .chordal import allocate_budget, contract
from .design import probal, probal_minimax, probal_upper_bound
from .errors import ContractionNotTreeError, ProbalError
from .exact import (
    bayes_lower_bound,
    brute_force_bayes,
    brute_force_minimax,
    minimax_lower_bound,
)
from .generators import ba_tree, gw_tree
from .graphs import Skeleton, components, read_edge_list, validate_skeleton
from .loss import decompose, minimax_surrogate, surrogate_loss
from .priors import degree_prior, uniform_prior

ALGORITHMS = ("probal", "probal-minimax", "optimal-bayes", "optimal-minimax")
CSV_COLUMNS = (
    "model",
    "prior",
    "n",
    "m",
    "seed",
    "rep",
    "algorithm",
    "loss",
    "rounds",
    "upper_bound",
    "lower_bound",
    "wall_time_s",
    "error",
)


@dataclass(frozen=True)
class SweepSpec:
    model: str = "gw"
    prior: str = "uniform"
    n_values: tuple = (20,)
    m_values: tuple = (3,)
    replicates: int = 1
    seed: int = 0
    algorithms: tuple = ("probal",)
    max_degree: int = 4
    cap: int | None = None

    def __post_init__(self):
        bad = [a for a in self.algorithms if a not in ALGORITHMS]
        if bad:
            raise ValueError(f"unknown algorithms: {bad}")


def _instance_seed(base: int, n: int, rep: int) -> int:
    return int(np.random.SeedSequence([int(base), int(n), int(rep)]).generate_state(1)[0])


def _make_tree(spec: SweepSpec, n: int, seed: int) -> Skeleton:
    if spec.model == "ba":
        return ba_tree(n, seed)
    if spec.model == "gw":
        return gw_tree(n, spec.max_degree, seed)
    raise ValueError(f"unknown model {spec.model!r}")


def _cell_rows(spec: SweepSpec, n: int, rep: int) -> list[dict]:
    seed = _instance_seed(spec.seed, n, rep)
    tree = _make_tree(spec, n, seed)
    prior = uniform_prior(tree) if spec.prior == "uniform" else degree_prior(tree)
    rows = []
    for m in spec.m_values:
        for algorithm in spec.algorithms:
            row = {
                "model": spec.model,
                "prior": spec.prior,
                "n": n,
                "m": m,
                "seed": seed,
                "rep": rep,
                "algorithm": algorithm,
                "loss": "",
                "rounds": "",
                "upper_bound": "",
                "lower_bound": "",
                "wall_time_s": "",
                "error": "",
            }
            start = time.perf_counter()
            try:
                if algorithm == "probal":
                    iv, trace = probal(tree, prior, m)
                    row["loss"] = repr(surrogate_loss(tree, prior, iv))
                    row["rounds"] = trace.r
                    if trace.r >= 1:
                        row["upper_bound"] = repr(probal_upper_bound(trace.r, tree.total_weight))
                elif algorithm == "probal-minimax":
                    iv, trace = probal_minimax(tree, m)
                    row["loss"] = repr(float(minimax_surrogate(decompose(tree, iv))))
                    row["rounds"] = trace.r
                    if trace.r >= 1:
                        row["upper_bound"] = repr(probal_upper_bound(trace.r, tree.total_weight))
                elif algorithm == "optimal-bayes":
                    iv, loss = brute_force_bayes(tree, prior, m, cap=spec.cap)
                    row["loss"] = repr(loss)
                    if spec.prior == "uniform" and tree.max_degree * m > 1:
                        row["lower_bound"] = repr(bayes_lower_bound(tree.n, m, tree.max_degree))
                else:
                    iv, loss = brute_force_minimax(tree, m, cap=spec.cap)
                    row["loss"] = repr(float(loss))
                    if tree.max_degree * m > 1:
                        row["lower_bound"] = repr(minimax_lower_bound(tree.n, m, tree.max_degree))
            except ProbalError as exc:
                row["error"] = type(exc).__name__
            row["wall_time_s"] = repr(time.perf_counter() - start)
            rows.append(row)
    return rows


def run_sweep(spec: SweepSpec, threads: int = 1) -> list[dict]:
    cells = [(n, rep) for n in spec.n_values for rep in range(spec.replicates)]
    if threads > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda c: _cell_rows(spec, *c), cells))
    else:
        chunks = [_cell_rows(spec, n, rep) for n, rep in cells]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r["n"], r["m"], r["seed"], r["algorithm"]))
    return rows


def rows_to_csv(rows, fh=None) -> str:
    buf = fh if fh is not None else io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue() if fh is None else ""


# ---------------------------------------------------------------------------
# GRN budget curve
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GrnPoint:
    budget: int
    allocation: tuple
    surrogate: float
    normalized: float


@dataclass(frozen=True)
class GrnReport:
    points: tuple
    component_sizes: tuple
    skipped: tuple  # (component min label, size, reason)
    dropped_self_loops: int
    merged_duplicate_edges: int
    total_vertices: int

    def to_rows(self) -> list[dict]:
        return [
            {
                "budget": p.budget,
                "surrogate": repr(p.surrogate),
                "normalized": repr(p.normalized),
                "allocation": "|".join(str(a) for a in p.allocation),
            }
            for p in self.points
        ]


def grn_pipeline(path, budgets, prior_kind: str = "degree") -> GrnReport:
    """Per-component contraction, proportional budget split, and design.

    The edge list may be directed; it is symmetrized (duplicates merged,
    self loops dropped).  Components whose contraction is not a tree are
    skipped with a diagnostic rather than aborting the run.  The normalized
    loss divides the summed surrogate by the total vertex count, so a zero
    budget reads 1.0 by construction.
    """
    pairs = read_edge_list(path)
    seen = set()
    sym_edges = []
    self_loops = 0
    duplicates = 0
    for a, b in pairs:
        if a == b:
            self_loops += 1
            continue
        key = (a, b) if a <= b else (b, a)
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)
        sym_edges.append(key)
    skel = validate_skeleton(sym_edges)

    prepared = []  # (contracted skeleton, prior, original size)
    skipped = []
    for comp in components(skel):
        comp_set = set(comp)
        sub_edges = [
            (skel.labels[i], skel.labels[j])
            for i, j in skel.edges
            if skel.labels[i] in comp_set
        ]
        sub = validate_skeleton(sub_edges, vertices=comp)
        try:
            dec = contract(sub)
        except ContractionNotTreeError as exc:
            skipped.append((comp[0], len(comp), str(exc)))
            continue
        tree = dec.contracted
        if prior_kind == "degree" and tree.n >= 2:
            prior = degree_prior(tree)
        else:
            prior = uniform_prior(tree)
        prepared.append((tree, prior, len(comp)))

    sizes = [size for _, _, size in prepared]
    total_vertices = sum(sizes)
    points = []
    for budget in budgets:
        alloc = allocate_budget(sizes, budget) if sizes else []
        total = 0.0
        for (tree, prior, _), m in zip(prepared, alloc):
            iv, _ = probal(tree, prior, m)
            total += surrogate_loss(tree, prior, iv)
        normalized = total / total_vertices if total_vertices else 0.0
        points.append(
            GrnPoint(budget=budget, allocation=tuple(alloc), surrogate=total, normalized=normalized)
        )
    return GrnReport(
        points=tuple(points),
        component_sizes=tuple(sizes),
        skipped=tuple(skipped),
        dropped_self_loops=self_loops,
        merged_duplicate_edges=duplicates,
        total_vertices=total_vertices,
    )


# ---------------------------------------------------------------------------
# Wall-time scaling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalingReport:
    rows: tuple  # (n, seconds)
    slope: float | None
    budget: int

    def to_rows(self) -> list[dict]:
        return [{"n": n, "seconds": repr(s)} for n, s in self.rows]


def scaling_bench(n_values, m: int = 10, max_degree: int = 4, seed: int = 0, repeats: int = 3) -> ScalingReport:
    """Median design wall time per tree order, plus the log-log slope."""
    rows = []
    for n in n_values:
        tree = gw_tree(n, max_degree, _instance_seed(seed, n, 0))
        prior = uniform_prior(tree)
        times = []
        for _ in range(repeats):
            start = time.perf_counter()
            probal(tree, prior, m)
            times.append(time.perf_counter() - start)
        times.sort()
        rows.append((n, times[len(times) // 2]))
    slope = None
    if len(rows) >= 2:
        xs = np.log([float(n) for n, _ in rows])
        ys = np.log([max(t, 1e-9) for _, t in rows])
        slope = float(np.polyfit(xs, ys, 1)[0])
    return ScalingReport(rows=tuple(rows), slope=slope, budget=m)
