#!/usr/bin/env python3
"""Loss-vs-order and loss-vs-budget sweeps, designer against brute force.

Produces one CSV per (model, prior) cell in the chosen output directory:
a sweep over tree order at fixed budget, and a sweep over budget at fixed
order.  Plot the CSVs with any external tool.
"""

import argparse
from pathlib import Path

from probal.sweep import SweepSpec, rows_to_csv, run_sweep


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="sweeps", help="output directory")
    ap.add_argument("--reps", type=int, default=100, help="instances per cell")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    algorithms = ("probal", "probal-minimax", "optimal-bayes", "optimal-minimax")

    for model in ("ba", "gw"):
        for prior in ("uniform", "degree"):
            by_n = SweepSpec(
                model=model,
                prior=prior,
                n_values=(10, 15, 20, 25, 30, 35, 40),
                m_values=(3,),
                replicates=args.reps,
                seed=args.seed,
                algorithms=algorithms,
            )
            path = out / f"loss_vs_n_{model}_{prior}.csv"
            path.write_text(rows_to_csv(run_sweep(by_n, threads=args.threads)))
            print(f"wrote {path}")

            by_m = SweepSpec(
                model=model,
                prior=prior,
                n_values=(20,),
                m_values=(1, 2, 3, 4, 5, 6, 7, 8),
                replicates=args.reps,
                seed=args.seed,
                algorithms=algorithms,
            )
            path = out / f"loss_vs_m_{model}_{prior}.csv"
            path.write_text(rows_to_csv(run_sweep(by_m, threads=args.threads)))
            print(f"wrote {path}")


if __name__ == "__main__":
    main()
