#!/usr/bin/env python3
"""Regenerate data/synthetic_scale_free_1500.edges (fixed seed, so the file
is byte-stable across runs)."""

from pathlib import Path

from probal import ba_tree, write_edge_list

OUT = Path(__file__).resolve().parent.parent / "data" / "synthetic_scale_free_1500.edges"

if __name__ == "__main__":
    tree = ba_tree(1500, 1729)
    OUT.parent.mkdir(exist_ok=True)
    write_edge_list(tree, OUT)
    print(f"wrote {OUT} (n={tree.n}, max degree={tree.max_degree})")
