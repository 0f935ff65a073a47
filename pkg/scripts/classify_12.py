"""Full classification at size 12 with per-seed statistics.

    python3 scripts/classify_12.py [--target 12] [--jobs 4]
"""

import argparse
import json

from distclass.config import ClassifyConfig
from distclass.search import classify


def run(cfg: ClassifyConfig) -> None:
    cert = classify(cfg.target, cfg.seeds, jobs=cfg.jobs, budget=cfg.budget)
    print(f"{'seed':>4} {'cands':>5} {'edges':>5} {'maximal':>7} {'max':>3}  ico")
    for sid, st in sorted(cert.per_seed.items()):
        print(f"{sid:>4} {st.get('candidates', '-'):>5} {st.get('edges', '-'):>5} "
              f"{st.get('maximal_sets', '-'):>7} {st['max_size']:>3}  {st['icosahedron_found']}")
    p = cert.pentagon
    if p is not None:
        print(f"pentagon: irreducible max {p.outcome.max_size_reached}, any {p.max_size_any}, "
              f"type(2) on dodecahedron {p.type2_on_dodecahedron}, "
              f"8-subsets {p.dodecahedron_8subsets} with >= {p.dodecahedron_8subsets_min_k} distances, "
              f"type(1) reducible {p.type1_reducible}")
    print(json.dumps(cert.to_json(), indent=1))


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--target", type=int, default=12)
    ap.add_argument("--jobs", type=int, default=1)
    a = ap.parse_args()
    run(ClassifyConfig(target=a.target, jobs=a.jobs))
