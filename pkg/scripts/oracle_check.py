"""Compare the case-based candidate solver with the grid-scan oracle.

    python3 scripts/oracle_check.py [--seeds 1,4,17 | all]
"""

import argparse
import time

import numpy as np

from distclass.candidates import candi
from distclass.catalog import build_entry
from distclass.oracle import compare, scan

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", default="1,4,17")
    ap.add_argument("--resolution", type=float, default=0.01)
    a = ap.parse_args()
    ids = range(1, 27) if a.seeds == "all" else [int(s) for s in a.seeds.split(",")]
    for i in ids:
        e = build_entry(i)
        t0 = time.perf_counter()
        res = scan(e.points.array, e.distances, a.resolution)
        ours = np.array([c.array for c in candi(e)]).reshape(-1, 3)
        missing, extra = compare(ours, res.points)
        print(f"Y={i:2d}: solver {len(ours):3d}, oracle {len(res.points):3d}, missing {len(missing)}, "
              f"extra {len(extra)}, {res.cells_refined} cells refined, {time.perf_counter() - t0:.1f}s")
