"""Level counts of triangle-free graphs with bounded independence number,
and the order-12 lemma checks.

    python3 scripts/graph_lemmas.py [--n 13] [--amax 4]
"""

import argparse

from distclass.config import GraphConfig
from distclass.graphs import check_lemma12, find_disjoint_odd_cycles, generate_triangle_free_alpha_le


def run(cfg: GraphConfig) -> None:
    gs = list(generate_triangle_free_alpha_le(
        cfg.n, cfg.amax, cfg.budget,
        progress=lambda k, c, s: print(f"order {k:2d}: {c:4d} graphs  {s:6.2f}s")))
    if cfg.n == 12:
        for g in gs:
            rep = check_lemma12(g)
            print(g.to_graph6(), sorted(g.degrees()), rep.holds, find_disjoint_odd_cycles(g))


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=13)
    ap.add_argument("--amax", type=int, default=4)
    a = ap.parse_args()
    run(GraphConfig(n=a.n, amax=a.amax))
