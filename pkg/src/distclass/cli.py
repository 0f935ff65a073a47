"""Command-line entry point: ``distclass {catalog,candi,graphs,classify}``.

Every command writes its reports plus a ``manifest.json`` into the output
directory (``--out``, else $DISTCLASS_OUT, else ./distclass_out). Exit codes:
0 success, 2 validation failure, 3 budget exceeded, 4 internal error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
import traceback
from dataclasses import asdict
from pathlib import Path

from . import __version__, schemas
from .candidates import CoplanarSeed, candi, filter_by_diameter, group_by_nd
from .catalog import (
    ValidationFailed,
    build_entry,
    entry_from_json,
    printed_d,
)
from .config import CandiConfig, CatalogConfig, ClassifyConfig, GraphConfig, RunManifest, default_out
from .geometry import EPS, GeometryError
from .graphs import (
    BudgetExceeded,
    check_lemma12,
    find_disjoint_odd_cycles,
    generate_triangle_free_alpha_le,
    sampled_check,
)

OK, VALIDATION, BUDGET, INTERNAL = 0, 2, 3, 4
TIMING_KEYS = ("runtime_ms",)


def fmt(x: float) -> str:
    return f"{x:.9g}"


class Writer:
    """Collects output files, validates them, and records digests."""

    def __init__(self, out: Path):
        self.out = out
        self.digests: dict[str, str] = {}

    def json(self, name: str, obj, schema=None) -> None:
        if schema is not None:
            schemas.validate(obj, schema)
        text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
        self._write(name, text, _strip_timing(obj))

    def csv(self, name: str, header, rows) -> None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        self._write(name, buf.getvalue(), None)

    def _write(self, name: str, text: str, digest_obj) -> None:
        path = self.out / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        # timing fields are excluded so identical parameters give identical digests
        basis = text if digest_obj is None else json.dumps(digest_obj, sort_keys=True)
        self.digests[name] = hashlib.sha256(basis.encode()).hexdigest()


def _strip_timing(obj):
    if isinstance(obj, dict):
        return {k: _strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [_strip_timing(v) for v in obj]
    return obj


def _seed_list(value: str | None, default) -> tuple[int, ...] | None:
    if value is None or value == "all":
        return default
    return tuple(int(x) for x in value.split(","))


# --- commands -----------------------------------------------------------------


def cmd_catalog(cfg: CatalogConfig, w: Writer, log) -> tuple[int, dict]:
    failures = []
    entries = {}
    for i in cfg.entries:
        try:
            entries[i] = build_entry(i)
        except ValidationFailed as exc:
            failures.append({"id": exc.entry_id, "error": str(exc)})
    if cfg.override:
        for obj in json.loads(Path(cfg.override).read_text()):
            i = int(obj.get("id", -1))
            try:
                entries[i] = entry_from_json(obj)
            except (ValidationFailed, GeometryError, KeyError, TypeError, ValueError) as exc:
                entries.pop(i, None)
                failures.append({"id": i, "error": f"{type(exc).__name__}: {exc}"})
    ids = [i for i in cfg.entries if i in entries]
    rows = []
    for i in ids:
        e = entries[i]
        ref = printed_d(i)
        rows.append([i, fmt(e.d), fmt(ref), fmt(abs(e.d - ref))])
    w.json("catalog.json", [entries[i].to_json() for i in ids], schemas.CATALOG)
    w.csv("catalog_validation.csv", ["id", "d_computed", "d_paper", "diff"], rows)
    for f in failures:
        log(f"entry {f['id']}: FAILED {f['error']}")
    log(f"{len(ids)} entries validated, {len(failures)} failed")
    return (VALIDATION if failures else OK), {"validated": len(ids), "failures": failures}


def _candi_one(args):
    seed_id, eps = args
    e = build_entry(seed_id)
    return seed_id, group_by_nd(filter_by_diameter(candi(e, eps), e, eps))


def cmd_candi(cfg: CandiConfig, w: Writer, log) -> tuple[int, dict]:
    if 27 in cfg.seeds:
        try:
            candi(build_entry(27))
        except CoplanarSeed as exc:
            log(f"{exc}: run `distclass classify --seed 27` for the pentagon case")
            return VALIDATION, {"error": "coplanar seed 27"}
    work = [(i, cfg.eps) for i in cfg.seeds]
    if cfg.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(cfg.jobs) as ex:
            results = list(ex.map(_candi_one, work))
    else:
        results = [_candi_one(a) for a in work]
    rows = []
    summary = {}
    for seed_id, groups in results:
        obj = {"seed": seed_id,
               "groups": [{"nd": g.nd, "points": [list(m.point) for m in g.members]} for g in groups]}
        w.json(f"candidates/seed_{seed_id:02d}.json", obj, schemas.CANDIDATES)
        rows += [[seed_id, fmt(g.nd), len(g)] for g in groups]
        summary[seed_id] = [[round(g.nd, 9), len(g)] for g in groups]
        desc = ", ".join(f"{len(g)} at {g.nd:.4f}" for g in groups) or "empty after diameter filter"
        log(f"Y={seed_id:2d}: {len(groups)} groups: {desc}")
    w.csv("table2.csv", ["Y", "group_nd", "count"], rows)
    outcome = {"groups": summary}
    if cfg.diff_paper:
        from .table2 import diff_all, format_report

        diffs = diff_all(list(cfg.seeds))
        report = [{"seed": r.seed, "strict_match": r.strict_match, "orbit_match": r.orbit_match,
                   "computed": r.computed, "printed": r.printed,
                   "discrepancies": [d.to_json() for d in r.discrepancies]} for r in diffs]
        w.json("table2_diff.json", report, schemas.TABLE2_DIFF)
        log(format_report(diffs))
        unexplained = [d for r in diffs for d in r.discrepancies if d.kind == "unexplained"]
        outcome["unexplained"] = len(unexplained)
        if unexplained:
            return VALIDATION, outcome
    return OK, outcome


def cmd_graphs(cfg: GraphConfig, w: Writer, log) -> tuple[int, dict]:
    def check(g):
        ok12 = check_lemma12(g).holds if g.n == 12 else True
        return ok12 and find_disjoint_odd_cycles(g) is not None

    t0 = time.perf_counter()
    try:
        graphs = list(generate_triangle_free_alpha_le(
            cfg.n, cfg.amax, cfg.budget,
            progress=lambda k, c, s: log(f"order {k}: {c} graphs ({s:.1f}s)")))
    except BudgetExceeded as exc:
        log(f"{exc}; falling back to a sampled check of {cfg.sample_branches} branches")
        rep = sampled_check(cfg.n, cfg.amax, check, cfg.sample_branches, cfg.sample_seed)
        ledger = {"n": cfg.n, "amax": cfg.amax, "exhaustive": False, "sampled": True,
                  "count": rep.reached, "passed": rep.passed, "branches": rep.branches,
                  "graphs": [{"graph6": g, "pass": False} for g in rep.failures],
                  "partial_level": exc.level}
        w.json(f"graphs_n{cfg.n}_a{cfg.amax}.json", ledger, schemas.GRAPH_LEDGER)
        return BUDGET, {"exhaustive": False, "sampled_reached": rep.reached, "sampled_passed": rep.passed}
    recs = []
    for g in graphs:
        rec = {"graph6": g.to_graph6(), "degrees": sorted(g.degrees())}
        if g.n == 12:
            rep = check_lemma12(g)
            rec["lemma12"] = rep.holds
        pair = find_disjoint_odd_cycles(g)
        rec["disjoint_odd_cycles"] = [list(c) for c in pair] if pair else None
        rec["pass"] = rec.get("lemma12", True) and (pair is not None or g.n < 10)
        recs.append(rec)
    passed = sum(r["pass"] for r in recs)
    ledger = {"n": cfg.n, "amax": cfg.amax, "exhaustive": True, "count": len(recs),
              "passed": passed, "graphs": recs}
    w.json(f"graphs_n{cfg.n}_a{cfg.amax}.json", ledger, schemas.GRAPH_LEDGER)
    log(f"n={cfg.n} alpha<={cfg.amax}: {len(recs)} graphs, {passed} pass "
        f"({time.perf_counter() - t0:.1f}s)")
    return (OK if passed == len(recs) else VALIDATION), {"count": len(recs), "passed": passed}


def cmd_classify(cfg: ClassifyConfig, w: Writer, log) -> tuple[int, dict]:
    from .search import classify, pentagon_case

    if cfg.seeds == (27,):
        rep = pentagon_case(cfg.target)
        obj = {
            "seed": 27,
            "max_size_irreducible": rep.outcome.max_size_reached,
            "max_size_any": rep.max_size_any,
            "witnesses": len(rep.outcome.witnesses),
            "type2_on_dodecahedron": rep.type2_on_dodecahedron,
            "dodecahedron_8subsets": rep.dodecahedron_8subsets,
            "dodecahedron_8subsets_min_distances": rep.dodecahedron_8subsets_min_k,
            "type1_reducible": rep.type1_reducible,
            "axis_pairs_too_far": rep.axis_pairs_too_far,
            "icosahedron_found": rep.outcome.icosahedron_found,
        }
        w.json("pentagon.json", obj)
        for k, v in obj.items():
            log(f"{k}: {v}")
        ok = (rep.type2_on_dodecahedron and rep.type1_reducible
              and rep.dodecahedron_8subsets_min_k >= 4 and not rep.outcome.witnesses)
        return (OK if ok else VALIDATION), obj
    try:
        cert = classify(cfg.target, cfg.seeds, jobs=cfg.jobs, budget=cfg.budget)
    except BudgetExceeded as exc:
        log(f"{exc}; no certificate written")
        return BUDGET, {"seeds_done": exc.partial}
    obj = cert.to_json()
    w.json("certificate.json", obj, schemas.CERTIFICATE)
    w.json("per_seed.json", {str(k): v for k, v in sorted(cert.per_seed.items())})
    if cert.classes:
        names = ", ".join("regular icosahedron" if c["is_icosahedron"] else "unidentified"
                          for c in cert.classes)
        head = f"{len(cert.classes)} similarity class at size {cfg.target}: {names}"
    else:
        head = f"no similarity class at size {cfg.target}"
    tail = "no size-13 set" if cert.max_size < 13 else f"SIZE {cert.max_size} REACHED"
    log(f"{head}; {tail}")
    return OK, {"classes": len(cert.classes), "max_size": cert.max_size}


# --- plumbing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="distclass", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=None, help="output directory")
    common.add_argument("--eps", type=float, default=EPS, help="distance equality tolerance")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--budget", type=float, default=None, help="seconds")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", parents=[common], help="build and validate the 27 seeds")
    c.add_argument("--entry", type=int, action="append", help="restrict to this id (repeatable)")
    c.add_argument("--override", help="JSON file of entries replacing the built-in ones")

    c = sub.add_parser("candi", parents=[common], help="single-point extensions of the seeds")
    c.add_argument("--seed", default=None, help="id, comma list, or 'all'")
    c.add_argument("--all", action="store_true", help="all noncoplanar seeds")
    c.add_argument("--diff-paper", action="store_true", help="diff against the printed table")

    c = sub.add_parser("graphs", parents=[common], help="triangle-free graph lemmas")
    c.add_argument("--n", type=int, default=12)
    c.add_argument("--amax", type=int, default=4)
    c.add_argument("--sample-branches", type=int, default=10**6)

    c = sub.add_parser("classify", parents=[common], help="classify maximal three-distance sets")
    c.add_argument("--seed", default=None, help="id, comma list, or 'all'; 27 is the pentagon case")
    c.add_argument("--target", type=int, default=12)
    return p


def make_config(args):
    if args.command == "catalog":
        ids = tuple(args.entry) if args.entry else tuple(range(1, 28))
        return CatalogConfig(args.eps, ids, args.override)
    if args.command == "candi":
        seeds = _seed_list(None if args.all else args.seed, tuple(range(1, 27)))
        return CandiConfig(args.eps, seeds, args.diff_paper, args.jobs)
    if args.command == "graphs":
        budget = args.budget if args.budget is not None else GraphConfig.budget
        return GraphConfig(args.n, args.amax, budget, args.sample_branches)
    return ClassifyConfig(args.target, _seed_list(args.seed, None), args.jobs, args.budget)


COMMANDS = {"catalog": cmd_catalog, "candi": cmd_candi, "graphs": cmd_graphs, "classify": cmd_classify}


def main(argv=None, log=None) -> int:
    args = build_parser().parse_args(argv)
    log = log or (lambda s: print(s, flush=True))
    out = args.out or default_out()
    cfg = make_config(args)
    w = Writer(out)
    manifest = RunManifest(args.command, _jsonable(asdict(cfg)), __version__)
    t0 = time.perf_counter()
    try:
        code, outcome = COMMANDS[args.command](cfg, w, log)
    except (ValidationFailed, GeometryError) as exc:
        code, outcome = VALIDATION, {"error": str(exc)}
        log(f"validation failure: {exc}")
    except Exception as exc:  # noqa: BLE001 - reported, then mapped to the internal-error code
        code, outcome = INTERNAL, {"error": f"{type(exc).__name__}: {exc}"}
        log(traceback.format_exc())
    manifest.wall_clock_s = round(time.perf_counter() - t0, 3)
    manifest.outcome = {"exit_code": code, **_jsonable(outcome)}
    manifest.digests = dict(sorted(w.digests.items()))
    out.mkdir(parents=True, exist_ok=True)
    obj = manifest.to_json()
    schemas.validate(obj, schemas.MANIFEST)
    (out / "manifest.json").write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")
    return code


def _jsonable(obj):
    return json.loads(json.dumps(obj, default=str))


if __name__ == "__main__":
    sys.exit(main())
