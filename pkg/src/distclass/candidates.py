"""Single-point extensions of a five-point two-distance set.

For a seed Y with distances {1, d}, every point P with Y + {P} at most
three-distance falls in one of three families, by how many seed points
see P at a new distance:

* at most two new: three seed points are at distance 1 or d from P, so P
  is a trilateration solution;
* three or four new: P is on the circumaxis of three seed points and at
  distance 1 or d from a fourth;
* five new: P is the circumcenter of Y.

All three families are solved exhaustively and filtered against the full
five-point condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np

from .catalog import CatalogEntry
from .geometry import (
    DEDUP_TOL,
    EPS,
    ND_TOL,
    CollinearCenters,
    GeometryError,
    Point,
    cluster_values,
    equidistant_locus,
    line_sphere,
    trilaterate,
)


class CoplanarSeed(GeometryError):
    """The planar seed (the regular pentagon) has infinitely many extensions."""


class AmbiguousGrouping(GeometryError):
    pass


@dataclass(frozen=True)
class Candidate:
    point: Point
    old_mask: int
    assigned: tuple  # per seed point: 1.0 or d if old, None if new
    nd: float
    type_count: int
    tangent_flag: bool = False

    @property
    def array(self) -> np.ndarray:
        return self.point.as_array()

    @property
    def new_indices(self) -> tuple[int, ...]:
        return tuple(i for i, a in enumerate(self.assigned) if a is None)


@dataclass(frozen=True)
class NDGroup:
    nd: float
    members: tuple[Candidate, ...]

    def __len__(self):
        return len(self.members)


def classify_point(p, seed: np.ndarray, dists: tuple[float, float], eps: float = EPS,
                   tangent: bool = False) -> Candidate | None:
    """Candidate record for ``p`` if seed + {p} has at most three distances."""
    p = np.asarray(list(p), dtype=float)
    r = np.linalg.norm(seed - p, axis=1)
    if r.min() <= DEDUP_TOL:
        return None
    assigned = []
    new = []
    for ri in r:
        label = next((a for a in dists if abs(ri - a) <= eps), None)
        assigned.append(label)
        if label is None:
            new.append(float(ri))
    if new and max(new) - min(new) > eps:
        return None
    mask = sum(1 << i for i, a in enumerate(assigned) if a is not None)
    nd = float(np.mean(new)) if new else max(dists)
    return Candidate(Point.of(p), mask, tuple(assigned), nd, len(new), tangent)


def _dedupe(raw: list[Candidate]) -> list[Candidate]:
    raw = sorted(raw, key=lambda c: tuple(c.point))
    out: list[Candidate] = []
    for c in raw:
        for k, o in enumerate(out):
            if np.linalg.norm(o.array - c.array) <= DEDUP_TOL:
                if c.tangent_flag and not o.tangent_flag:
                    out[k] = Candidate(o.point, o.old_mask, o.assigned, o.nd, o.type_count, True)
                break
        else:
            out.append(c)
    return out


def candi_for_points(seed: np.ndarray, dists: tuple[float, float], eps: float = EPS) -> list[Candidate]:
    """Every point extending ``seed`` (five noncoplanar points) to at most three distances."""
    seed = np.asarray(seed, dtype=float)
    n = len(seed)
    raw: list[Candidate] = []

    def keep(p, tangent=False):
        c = classify_point(p, seed, dists, eps, tangent)
        if c is not None:
            raw.append(c)

    # at most two new distances: trilaterate from three old points
    for tri in combinations(range(n), 3):
        for radii in product(dists, repeat=3):
            try:
                sols = trilaterate(seed[tri[0]], radii[0], seed[tri[1]], radii[1],
                                   seed[tri[2]], radii[2], eps)
            except CollinearCenters:
                continue
            for p in sols:
                keep(p, sols.tangent)

    # three or four new: circumaxis of three new points meets a sphere around an old one
    for tri in combinations(range(n), 3):
        try:
            axis = equidistant_locus(seed[list(tri)], eps)
        except GeometryError:
            continue
        for q in set(range(n)) - set(tri):
            for rad in dists:
                sols = line_sphere(axis.point, axis.direction, seed[q], rad, eps)
                for p in sols:
                    keep(p, sols.tangent)

    # five new: the circumcenter
    loc = equidistant_locus(seed, eps)
    if loc.kind == "point":
        keep(loc.point)
    return _dedupe(raw)


def candi(entry: CatalogEntry, eps: float = EPS) -> list[Candidate]:
    if entry.planar:
        raise CoplanarSeed(f"entry {entry.id} is planar; use the pentagon case")
    return candi_for_points(entry.points.array, entry.distances, eps)


def filter_by_diameter(cands, entry: CatalogEntry, eps: float = EPS) -> list[Candidate]:
    """Keep candidates whose new distance is at least the seed diameter."""
    return [c for c in cands if c.nd >= entry.diameter - eps]


def group_by_nd(cands, tol: float = ND_TOL) -> list[NDGroup]:
    cands = list(cands)
    if not cands:
        return []
    groups = cluster_values([c.nd for c in cands], tol)
    bounds = [(g[0], g[-1]) for g in groups]
    for (_, hi), (lo, _) in zip(bounds, bounds[1:]):
        if lo - hi <= 10 * tol:
            raise AmbiguousGrouping(f"ND clusters at {hi:.9g} and {lo:.9g} nearly touch")
    out = []
    for lo, hi in bounds:
        members = sorted((c for c in cands if lo <= c.nd <= hi), key=lambda c: tuple(c.point))
        out.append(NDGroup(float(np.mean([c.nd for c in members])), tuple(members)))
    return out
