"""Regenerate the seed catalog and the candidate table, and diff against the print.

    python3 scripts/reproduce_tables.py [--out DIR]
"""

import argparse
import sys

from distclass.cli import main

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/tables")
    args = ap.parse_args()
    code = main(["catalog", "--out", args.out])
    code = code or main(["candi", "--all", "--diff-paper", "--out", args.out])
    sys.exit(code)
