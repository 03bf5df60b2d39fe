"""Command-line front end.

Subcommands: design, optimal, eval, gen, bench, grn.  Exit codes: 0 on
success, 1 on input errors, 2 on internal invariant violations.  The
environment variables PROBAL_THREADS and PROBAL_CAP override the default
worker count and the brute-force evaluation cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .chordal import contract
from .design import probal, probal_minimax, probal_upper_bound
from .errors import ProbalError, RoundCapExceededError
from .exact import (
    DEFAULT_CAP,
    bayes_lower_bound,
    brute_force_bayes,
    brute_force_minimax,
    minimax_lower_bound,
)
from .errors import DegenerateBoundError
from .generators import ba_tree, gw_tree, instance_seeds
from .graphs import components, skeleton_from_edge_list, write_edge_list
from .loss import decompose, loss_report, minimax_surrogate, surrogate_loss
from .priors import degree_prior, explicit_prior, read_prior_file, uniform_prior
from .sweep import SweepSpec, grn_pipeline, rows_to_csv, run_sweep, scaling_bench


def _default_threads() -> int:
    return int(os.environ.get("PROBAL_THREADS", "1"))


def _default_cap() -> int:
    return int(os.environ.get("PROBAL_CAP", str(DEFAULT_CAP)))


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="master random seed")
    parser.add_argument(
        "--threads",
        type=int,
        default=_default_threads(),
        help="worker threads (default from PROBAL_THREADS, else 1)",
    )
    parser.add_argument("--out", default="-", help="output path, '-' for stdout")


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _emit_json(obj, out: str) -> None:
    _emit(json.dumps(obj, indent=2, sort_keys=True) + "\n", out)


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok != ""]


def _load_single_component(path):
    skel = skeleton_from_edge_list(path)
    comps = components(skel)
    if len(comps) > 1:
        raise ProbalError(
            f"{path} has {len(comps)} connected components; use the 'grn' subcommand"
        )
    return skel


def _prior_for(spec: str, tree, dec):
    """Build the requested prior on the contracted tree.

    File priors name original vertices; each supernode receives the summed
    mass of its members.
    """
    if spec == "uniform":
        return uniform_prior(tree)
    if spec == "degree":
        return degree_prior(tree)
    if spec.startswith("file:"):
        table = read_prior_file(spec[5:])
        merged: dict = {}
        for orig, contracted in dec.vertex_map.items():
            key = str(orig)
            if key not in table:
                from .errors import MissingVertexError

                raise MissingVertexError(f"prior file is missing vertex {key!r}")
            merged[contracted] = merged.get(contracted, 0.0) + table[key]
        return explicit_prior(tree, merged)
    raise ProbalError(f"unknown prior {spec!r}; expected uniform|degree|file:<path>")


def _design_payload(args, dec, iv, trace, prior):
    tree = dec.contracted
    payload = {
        "mode": args.mode,
        "budget": args.budget,
        "n_original": len(dec.vertex_map),
        "n_contracted": tree.n,
        "cysts": len(dec.cysts),
        "interventions": [str(v) for v in iv],
        "interventions_expanded": [str(v) for v in dec.expand(iv)],
        "rounds": trace.r,
        "surrogate_loss": surrogate_loss(tree, prior, iv),
        "minimax_loss": minimax_surrogate(decompose(tree, iv)),
        "upper_bound": probal_upper_bound(trace.r, tree.total_weight) if trace.r >= 1 else None,
    }
    if getattr(args, "trace", False):
        payload["trace"] = trace.to_dict()["round_log"]
    if getattr(args, "decomposition", False):
        payload["decomposition"] = dec.report()
    return payload


def _cmd_design(args) -> int:
    skel = _load_single_component(args.graph)
    dec = contract(skel)
    tree = dec.contracted
    prior = _prior_for(args.prior, tree, dec)
    if args.mode == "bayes":
        iv, trace = probal(tree, prior, args.budget)
    else:
        iv, trace = probal_minimax(tree, args.budget)
    _emit_json(_design_payload(args, dec, iv, trace, prior), args.out)
    return 0


def _cmd_optimal(args) -> int:
    skel = _load_single_component(args.graph)
    dec = contract(skel)
    tree = dec.contracted
    prior = _prior_for(args.prior, tree, dec)
    if args.mode == "bayes":
        iv, loss = brute_force_bayes(tree, prior, args.budget, cap=args.cap, threads=args.threads)
    else:
        iv, loss = brute_force_minimax(tree, args.budget, cap=args.cap, threads=args.threads)
        loss = float(loss)
    payload = {
        "mode": args.mode,
        "budget": args.budget,
        "n_original": len(dec.vertex_map),
        "n_contracted": tree.n,
        "cysts": len(dec.cysts),
        "interventions": [str(v) for v in iv],
        "interventions_expanded": [str(v) for v in dec.expand(iv)],
        "loss": loss,
        "lower_bound": None,
    }
    try:
        if args.mode == "bayes" and prior.kind == "uniform":
            payload["lower_bound"] = bayes_lower_bound(tree.n, args.budget, tree.max_degree)
        elif args.mode == "minimax":
            payload["lower_bound"] = minimax_lower_bound(tree.n, args.budget, tree.max_degree)
    except DegenerateBoundError:
        pass
    if getattr(args, "decomposition", False):
        payload["decomposition"] = dec.report()
    _emit_json(payload, args.out)
    return 0


def _cmd_eval(args) -> int:
    skel = _load_single_component(args.graph)
    dec = contract(skel)
    tree = dec.contracted
    prior = _prior_for(args.prior, tree, dec)
    requested = [tok for tok in args.interventions.split(",") if tok] if args.interventions else []
    mapped = []
    for v in requested:
        cv = dec.vertex_map.get(v)
        if cv is None:
            from .errors import UnknownVertexError

            raise UnknownVertexError(f"unknown vertex {v!r}")
        if cv not in mapped:
            mapped.append(cv)
    root = None
    if args.root is not None:
        root = dec.vertex_map.get(args.root)
        if root is None:
            from .errors import UnknownVertexError

            raise UnknownVertexError(f"unknown root {args.root!r}")
    payload = loss_report(tree, prior, mapped, root=root, oracle=args.oracle)
    payload["requested_interventions"] = requested
    if getattr(args, "decomposition", False):
        payload["decomposition"] = dec.report()
    _emit_json(payload, args.out)
    return 0


def _cmd_gen(args) -> int:
    out_dir = Path(args.out if args.out != "-" else ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    seeds = instance_seeds(args.seed, args.count)
    files = []
    for i, s in enumerate(seeds):
        if args.model == "ba":
            tree = ba_tree(args.n, s)
        else:
            tree = gw_tree(args.n, args.max_degree, s)
        name = f"{args.model}_n{args.n}_{i:04d}.edges"
        write_edge_list(tree, out_dir / name)
        files.append({"file": name, "seed": s})
    manifest = {
        "model": args.model,
        "n": args.n,
        "max_degree": args.max_degree if args.model == "gw" else None,
        "seed": args.seed,
        "count": args.count,
        "generator": "numpy PCG64, per-instance SeedSequence([seed]).generate_state",
        "files": files,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return 0


def _cmd_bench(args) -> int:
    if args.scaling:
        report = scaling_bench(
            _int_list(args.n), m=args.m_single, max_degree=args.max_degree, seed=args.seed
        )
        lines = ["n,seconds"]
        lines += [f"{n},{s!r}" for n, s in report.rows]
        _emit("\n".join(lines) + "\n", args.out)
        print(f"log-log slope: {report.slope}", file=sys.stderr)
        return 0
    spec = SweepSpec(
        model=args.model,
        prior=args.prior,
        n_values=tuple(_int_list(args.n)),
        m_values=tuple(_int_list(args.m)),
        replicates=args.reps,
        seed=args.seed,
        algorithms=tuple(args.algorithms.split(",")),
        max_degree=args.max_degree,
        cap=args.cap,
    )
    rows = run_sweep(spec, threads=args.threads)
    _emit(rows_to_csv(rows), args.out)
    return 0


def _cmd_grn(args) -> int:
    budgets = _int_list(args.budgets)
    report = grn_pipeline(args.graph, budgets, prior_kind=args.prior)
    lines = ["budget,surrogate,normalized,allocation"]
    for row in report.to_rows():
        lines.append(f"{row['budget']},{row['surrogate']},{row['normalized']},{row['allocation']}")
    _emit("\n".join(lines) + "\n", args.out)
    diag = {
        "components": list(report.component_sizes),
        "skipped": [list(s) for s in report.skipped],
        "dropped_self_loops": report.dropped_self_loops,
        "merged_duplicate_edges": report.merged_duplicate_edges,
    }
    print(json.dumps(diag, sort_keys=True), file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="probal",
        description=(
            "Budget-constrained single-vertex intervention design on tree-like "
            "causal skeletons. PROBAL_THREADS and PROBAL_CAP override the "
            "default thread count and brute-force cap."
        ),
    )
    parser.add_argument("--version", action="version", version=f"probal {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="run the separator-based designer")
    p.add_argument("--graph", required=True, help="edge-list file")
    p.add_argument("--prior", default="uniform", help="uniform|degree|file:<path>")
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--mode", choices=("bayes", "minimax"), default="bayes")
    p.add_argument("--trace", action="store_true", help="include the per-round log")
    p.add_argument("--decomposition", action="store_true", help="include the contraction report")
    _add_common(p)
    p.set_defaults(func=_cmd_design)

    p = sub.add_parser("optimal", help="brute-force optimal design")
    p.add_argument("--graph", required=True)
    p.add_argument("--prior", default="uniform")
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--mode", choices=("bayes", "minimax"), default="bayes")
    p.add_argument("--cap", type=int, default=_default_cap(),
                   help="evaluation cap (default from PROBAL_CAP)")
    p.add_argument("--decomposition", action="store_true")
    _add_common(p)
    p.set_defaults(func=_cmd_optimal)

    p = sub.add_parser("eval", help="evaluate an intervention set")
    p.add_argument("--graph", required=True)
    p.add_argument("--prior", default="uniform")
    p.add_argument("--interventions", default="", help="comma-separated labels")
    p.add_argument("--root", default=None, help="true root for the oracle")
    p.add_argument("--oracle", action="store_true", help="add consistent-root oracle output")
    p.add_argument("--decomposition", action="store_true")
    _add_common(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("gen", help="generate random tree instances")
    p.add_argument("--model", choices=("ba", "gw"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--count", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("bench", help="CSV sweeps and wall-time scaling")
    p.add_argument("--model", choices=("ba", "gw"), default="gw")
    p.add_argument("--prior", choices=("uniform", "degree"), default="uniform")
    p.add_argument("--n", default="20", help="comma-separated tree orders")
    p.add_argument("--m", default="3", help="comma-separated budgets")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--algorithms", default="probal",
                   help="comma-separated subset of probal,probal-minimax,optimal-bayes,optimal-minimax")
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--cap", type=int, default=_default_cap())
    p.add_argument("--scaling", action="store_true", help="measure wall time instead of losses")
    p.add_argument("--m-single", type=int, default=10, help="budget for --scaling runs")
    _add_common(p)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("grn", help="per-component budget curve on a (directed) edge list")
    p.add_argument("--graph", required=True)
    p.add_argument("--budgets", default="0,1,2,3,4,5,6,7,8,9,10")
    p.add_argument("--prior", choices=("uniform", "degree"), default="degree")
    _add_common(p)
    p.set_defaults(func=_cmd_grn)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RoundCapExceededError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    except ProbalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
