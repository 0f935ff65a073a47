"""Regenerated candidate table and its diff against the printed transcription.

The printed table gives coordinates to about five significant figures, lists
some rows by orbit representatives only, and contains a number of typos. The
diff therefore works at the level of symmetry orbits of the seed and sorts
every mismatch into a kind that can be checked by machine:

* ``nd_typo``: the point matches a candidate but the printed nd is off;
* ``coordinate_typo``: two of three coordinates match a candidate, the third not;
* ``spurious``: no candidate anywhere near, and the point itself fails the
  three-distance condition even at printed precision;
* ``omitted``: a computed candidate orbit with no printed representative;
* ``unexplained``: a printed point that is a genuine candidate at printed
  precision yet matches nothing computed. This would be a solver bug.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .candidates import Candidate, candi, classify_point, filter_by_diameter, group_by_nd
from .catalog import build_entry
from .geometry import symmetries

COORD_TOL = 2e-3
ND_MATCH_TOL = 1e-3
PRINTED_EPS = 2e-3  # distance tolerance when rechecking a printed point
EMPTY_ROWS = (6, 7, 12, 18, 23)
KINDS = ("nd_typo", "coordinate_typo", "spurious", "omitted", "unexplained")


@lru_cache(maxsize=1)
def _transcription() -> dict:
    text = resources.files("distclass").joinpath("data/table2_transcription.json").read_text()
    return json.loads(text)


def printed_rows() -> dict[int, list[dict]]:
    """Printed groups per seed id: [{"nd": float, "points": [[x, y, z], ...]}, ...]."""
    return {int(k): v for k, v in _transcription()["rows"].items()}


def printed_groups(seed_id: int) -> list[tuple[float, int]]:
    return [(g["nd"], len(g["points"])) for g in printed_rows().get(seed_id, [])]


@dataclass
class Discrepancy:
    seed: int
    kind: str
    printed_point: list | None
    printed_nd: float | None
    computed_point: list | None = None
    computed_nd: float | None = None
    detail: str = ""

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in
                ("seed", "kind", "printed_point", "printed_nd", "computed_point", "computed_nd", "detail")}


@dataclass
class RowDiff:
    seed: int
    computed: list[tuple[float, int]]
    printed: list[tuple[float, int]]
    expanded: list[tuple[float, int]]  # printed points expanded to full orbits, after corrections
    discrepancies: list[Discrepancy] = field(default_factory=list)

    @property
    def strict_match(self) -> bool:
        """Counts and nd agree with the printed row as is."""
        return _groups_equal(self.computed, self.printed)

    @property
    def orbit_match(self) -> bool:
        """Counts and nd agree once printed points are expanded to orbits and typos corrected."""
        return _groups_equal(self.computed, self.expanded)

    def kinds(self) -> set[str]:
        return {d.kind for d in self.discrepancies}


def _groups_equal(a, b) -> bool:
    return len(a) == len(b) and all(
        na == nb and abs(va - vb) <= ND_MATCH_TOL for (va, na), (vb, nb) in zip(a, b)
    )


def _orbits(points: np.ndarray, syms) -> list[int]:
    """Orbit label per point under the seed's symmetries."""
    label = [-1] * len(points)
    k = 0
    for i in range(len(points)):
        if label[i] >= 0:
            continue
        for rot, t in syms:
            img = points[i] @ rot + t
            d = np.linalg.norm(points - img, axis=1)
            j = int(d.argmin())
            if d[j] < 1e-6:
                label[j] = k
        k += 1
    return label


def _nearest(p: np.ndarray, images: np.ndarray) -> tuple[int, float]:
    """Index and max-coordinate deviation of the candidate image closest to ``p``."""
    dev = np.abs(images - p).max(axis=1)
    j = int(dev.argmin())
    return j, float(dev[j])


def diff_row(seed_id: int) -> RowDiff:
    entry = build_entry(seed_id)
    seed = entry.points.array
    cands: list[Candidate] = filter_by_diameter(candi(entry), entry)
    computed = [(g.nd, len(g)) for g in group_by_nd(cands)]
    printed = printed_groups(seed_id)
    row = RowDiff(seed_id, computed, printed, [])
    if not cands and not printed:
        return row

    pts = np.array([c.array for c in cands]).reshape(-1, 3)
    nds = np.array([c.nd for c in cands])
    syms = symmetries(seed)
    orbit = _orbits(pts, syms)
    # every symmetry image of every candidate, with the candidate it came from
    images = np.array([p @ rot + t for rot, t in syms for p in pts]).reshape(-1, 3)
    source = [i for _ in syms for i in range(len(pts))]

    covered: set[int] = set()
    leftover = []
    flat = [(g["nd"], np.array(p, dtype=float)) for g in printed_rows().get(seed_id, []) for p in g["points"]]

    def is_candidate(p):
        c = classify_point(p, seed, entry.distances, PRINTED_EPS)
        return c is not None and c.nd >= entry.diameter - PRINTED_EPS

    def two_match(p, nd, need_nd, fresh_only):
        close = np.abs(images - p) <= COORD_TOL
        two = [j for j in np.flatnonzero(close.sum(axis=1) == 2)
               if (not need_nd or abs(nds[source[j]] - nd) <= ND_MATCH_TOL)
               and (not fresh_only or orbit[source[j]] not in covered)]
        if not two:
            return None
        # prefer agreeing nd, then uncovered orbits, then the smallest deviation
        return min(two, key=lambda j: (abs(nds[source[j]] - nd) > ND_MATCH_TOL,
                                       orbit[source[j]] in covered,
                                       float(np.abs(images[j] - p).max())))

    def coordinate_typo(p, nd, j):
        i = source[j]
        axis = int(np.flatnonzero(np.abs(images[j] - p) > COORD_TOL)[0])
        detail = f"coordinate {'xyz'[axis]}: printed {p[axis]} vs {images[j][axis]:.5f}"
        if abs(nds[i] - nd) > ND_MATCH_TOL:
            detail += f"; nd printed {nd} vs {nds[i]:.5f}"
        if orbit[i] in covered:
            detail += "; duplicates a matched orbit"
        covered.add(orbit[i])
        row.discrepancies.append(Discrepancy(
            seed_id, "coordinate_typo", p.tolist(), nd, images[j].tolist(), float(nds[i]), detail))

    # pass 1: coordinates and nd both match
    for nd, p in flat:
        j, dev = _nearest(p, images)
        if dev <= COORD_TOL and abs(nds[source[j]] - nd) <= ND_MATCH_TOL:
            covered.add(orbit[source[j]])
        else:
            leftover.append((nd, p))

    # pass 2: one coordinate off but nd right, onto an orbit nothing else claims;
    # otherwise coordinates right but nd off
    still = []
    for nd, p in leftover:
        j, dev = _nearest(p, images)
        exact = dev <= COORD_TOL
        # a printed point repeating an already matched one is read as a coordinate
        # typo when an unclaimed orbit agrees with it in nd
        if not exact or orbit[source[j]] in covered or not is_candidate(p):
            k = two_match(p, nd, need_nd=True, fresh_only=True)
            if k is not None and (not exact or orbit[source[j]] in covered):
                coordinate_typo(p, nd, k)
                continue
        if exact:
            i = source[j]
            covered.add(orbit[i])
            row.discrepancies.append(Discrepancy(
                seed_id, "nd_typo", p.tolist(), nd, pts[i].tolist(), float(nds[i]),
                f"printed nd {nd} vs computed {nds[i]:.5f}"))
            continue
        still.append((nd, p))

    # pass 3: one coordinate off, whatever the nd
    leftover, still = still, []
    for nd, p in leftover:
        j = None if is_candidate(p) else two_match(p, nd, need_nd=False, fresh_only=False)
        if j is not None:
            coordinate_typo(p, nd, j)
        else:
            still.append((nd, p))

    # pass 4: anything left is either not a candidate at all, or something we missed
    for nd, p in still:
        ok = is_candidate(p)
        kind = "unexplained" if ok else "spurious"
        detail = ("printed point satisfies the condition but matches no computed candidate" if ok
                  else "printed point does not extend the seed to three distances")
        row.discrepancies.append(Discrepancy(seed_id, kind, p.tolist(), nd, None, None, detail))

    # pass 5: computed orbits never printed
    for k in sorted(set(orbit) - covered):
        members = [i for i in range(len(pts)) if orbit[i] == k]
        for i in members:
            c = cands[i]
            recheck = classify_point(c.array, seed, entry.distances)
            detail = f"type {c.type_count}, orbit of {len(members)}"
            if recheck is None:
                detail += "; FAILS recheck"
            row.discrepancies.append(Discrepancy(
                seed_id, "omitted", None, None, pts[i].tolist(), float(nds[i]), detail))

    expanded_idx = [i for i in range(len(pts)) if orbit[i] in covered]
    row.expanded = [(g.nd, len(g)) for g in group_by_nd([cands[i] for i in expanded_idx])]
    return row


def diff_all(seed_ids=None) -> list[RowDiff]:
    if seed_ids is None:
        seed_ids = [i for i in range(1, 27)]
    return [diff_row(i) for i in seed_ids]


def format_report(rows: list[RowDiff]) -> str:
    lines = []
    for r in rows:
        state = "exact" if r.strict_match else ("orbit" if r.orbit_match else "differs")
        lines.append(f"Y={r.seed:2d} {state:7s} computed={_fmt(r.computed)} printed={_fmt(r.printed)}")
        for d in r.discrepancies:
            where = d.printed_point if d.printed_point is not None else d.computed_point
            lines.append(f"    {d.kind:15s} {_pt(where)}  {d.detail}")
    return "\n".join(lines)


def _fmt(groups) -> str:
    return "[" + ", ".join(f"{v:.4f}x{n}" for v, n in groups) + "]"


def _pt(p) -> str:
    return "(" + ", ".join(f"{x:.5f}" for x in p) + ")"
