"""Extension of seeds to maximal three-distance sets, and the 12-point certificate.

A 12-point three-distance set X in R^3 contains a five-point two-distance set
Y with D(Y) < D(X). Every point of X outside Y then extends Y to at most three
distances, and its new distance is either D(Y) (no new distance at all) or the
common value D(X). So X - Y is a clique among the seed's candidates whose
pairwise distances stay inside {1, d, D(X)}. Enumerating all such cliques for
all 26 noncoplanar seeds, plus a separate treatment of the regular pentagon,
classifies the 12-point sets.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations, permutations

import numpy as np

from .candidates import Candidate, candi, candi_for_points, classify_point, filter_by_diameter
from .catalog import TAU, CatalogEntry, build_entry, catalog_all, reference_icosahedron
from .geometry import (
    EPS,
    ND_TOL,
    Configuration,
    distance_profile,
    distance_values,
    pairwise_distances,
    similar,
)
from .graphs import BudgetExceeded, diameter_graph, independence_number


@dataclass
class CompatibilityGraph:
    seed: CatalogEntry
    candidates: list[Candidate]
    adj: list[int]  # neighbour bitsets

    def degree(self, i: int) -> int:
        return bin(self.adj[i]).count("1")

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)


@dataclass
class SearchOutcome:
    seed_id: int
    max_size_reached: int
    witnesses: list[Configuration] = field(default_factory=list)
    icosahedron_found: bool = False
    stats: dict = field(default_factory=dict)


def _third_ok(dists: tuple[float, float], vals, eps: float = EPS) -> bool:
    """At most one value outside the seed's distances, and it exceeds the seed diameter."""
    extra = [v for v in vals if min(abs(v - a) for a in dists) > eps]
    if not extra:
        return True
    return max(extra) - min(extra) <= eps and min(extra) > max(dists) + eps


def _nd_prefilter(a: Candidate, b: Candidate, diameter: float) -> bool:
    # two points only fit together if one adds no distance or both add the same one
    return (abs(a.nd - diameter) <= EPS or abs(b.nd - diameter) <= EPS
            or abs(a.nd - b.nd) <= ND_TOL)


def _compat_matrix(seed: np.ndarray, dists, cands: list[Candidate], eps: float = EPS) -> list[int]:
    n = len(cands)
    adj = [0] * n
    diameter = max(dists)
    for i, j in combinations(range(n), 2):
        if not _nd_prefilter(cands[i], cands[j], diameter):
            continue
        seven = np.vstack([seed, cands[i].array, cands[j].array])
        vals = distance_values(seven, eps)
        if len(vals) <= 3 and _third_ok(dists, vals, eps):
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return adj


def build_compat(entry: CatalogEntry, cands: list[Candidate] | None = None) -> CompatibilityGraph:
    """Pairwise compatibility among the seed's diameter-filtered candidates."""
    if cands is None:
        cands = filter_by_diameter(candi(entry), entry)
    cands = list(cands)
    return CompatibilityGraph(entry, cands, _compat_matrix(entry.points.array, entry.distances, cands))


def _search_order(cands: list[Candidate], adj: list[int]) -> list[int]:
    deg = [bin(a).count("1") for a in adj]
    return sorted(range(len(cands)), key=lambda i: (-deg[i], cands[i].nd, tuple(cands[i].point)))


def enumerate_maximal(seed: np.ndarray, dists, cands: list[Candidate], adj: list[int],
                      min_extra: int = 0, eps: float = EPS, stats: dict | None = None,
                      order: list[int] | None = None):
    """All maximal extensions of ``seed`` by compatible candidates.

    Yields (indices, third_distance) for every maximal set S of candidates such
    that seed + S has at most three distances, the third one (if any) larger
    than the seed diameter. Only sets with at least ``min_extra`` members are
    yielded. Standard Bron-Kerbosch recursion on a hereditary family: the
    compatibility graph prunes, the running third distance decides. ``order``
    overrides the default candidate order (descending degree, then nd, then
    coordinates); the output set does not depend on it.
    """
    pts = np.array([c.array for c in cands]).reshape(-1, 3)
    dm = pairwise_distances(pts) if len(cands) else np.zeros((0, 0))
    if order is None:
        order = _search_order(cands, adj)
    rank = {v: k for k, v in enumerate(order)}
    base = tuple(dists)
    diameter = max(dists)
    if stats is None:
        stats = {}
    stats["nodes"] = 0

    def fits(v: int, members: list[int], third):
        t = third
        for u in members:
            x = dm[u, v]
            if min(abs(x - a) for a in base) <= eps:
                continue
            if t is None:
                if x <= diameter + eps:
                    return False, third
                t = x
            elif abs(x - t) > eps:
                return False, third
        nd_v = cands[v].nd
        if abs(nd_v - diameter) > eps:
            if t is None:
                t = nd_v
            elif abs(nd_v - t) > ND_TOL:
                return False, third
        return True, t

    def rec(members: list[int], third, p: list[int], x: list[int]):
        stats["nodes"] += 1
        if not p and not x:
            if len(members) >= min_extra:
                yield list(members), third
            return
        if len(members) + len(p) < min_extra:
            return
        p = list(p)
        while p:
            v = p.pop(0)
            ok, t = fits(v, members, third)
            if ok:
                members.append(v)
                bits = adj[v]
                np_ = [w for w in p if bits >> w & 1 and fits(w, members, t)[0]]
                nx = [w for w in x if bits >> w & 1 and fits(w, members, t)[0]]
                yield from rec(members, t, np_, nx)
                members.pop()
            x.append(v)

    yield from rec([], None, sorted(range(len(cands)), key=rank.get), [])


def extend_to_max(g: CompatibilityGraph, target: int = 12) -> SearchOutcome:
    """Exhaustive clique search over ``g``; records maximal sets of size >= target."""
    t0 = time.perf_counter()
    seed = g.seed.points.array
    ico = reference_icosahedron()
    best = len(seed)
    witnesses = []
    found = False
    n_max = 0
    counters: dict = {}
    for members, _ in enumerate_maximal(seed, g.seed.distances, g.candidates, g.adj, stats=counters):
        n_max += 1
        size = len(seed) + len(members)
        arr = np.vstack([seed] + [g.candidates[i].array for i in members])
        conf = Configuration.from_array(arr)
        if distance_profile(conf).k > 3:
            raise AssertionError(f"seed {g.seed.id}: invalid extension slipped through")
        best = max(best, size)
        if size >= target:
            witnesses.append(conf)
            if size == 12 and similar(conf, ico):
                found = True
    stats = {
        "candidates": len(g.candidates),
        "edges": sum(bin(a).count("1") for a in g.adj) // 2,
        "maximal_sets": n_max,
        "nodes": counters["nodes"],
        "runtime_ms": (time.perf_counter() - t0) * 1e3,
    }
    return SearchOutcome(g.seed.id, best, witnesses, found, stats)


# --- the regular pentagon -------------------------------------------------


def dodecahedron(edge: float = 1.0) -> np.ndarray:
    """Vertices of a regular dodecahedron centred at the origin."""
    phi = TAU
    pts = [(x, y, z) for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)]
    for a in (-1, 1):
        for b in (-1, 1):
            pts += [(0, a / phi, b * phi), (a / phi, b * phi, 0), (b * phi, 0, a / phi)]
    return np.array(pts, dtype=float) * edge * phi / 2


def _pentagon_faces(vertices: np.ndarray) -> list[tuple[int, ...]]:
    dm = pairwise_distances(vertices)
    edge = dm[dm > 1e-9].min()
    faces = set()
    for five in combinations(range(len(vertices)), 5):
        sub = dm[np.ix_(five, five)]
        if (np.abs(sub - edge) < 1e-9).sum() == 10:
            faces.add(five)
    return sorted(faces)


def dodecahedra_on(pentagon: np.ndarray) -> list[np.ndarray]:
    """The two regular dodecahedra (one per side) having ``pentagon`` as a face."""
    from .geometry import orthogonal_procrustes

    verts = dodecahedron()
    face = list(_pentagon_faces(verts)[0])
    out = []
    dm_p = pairwise_distances(pentagon)
    dm_f = pairwise_distances(verts[face])
    # face indices are not in cyclic order, so try every labelling
    for perm in map(list, permutations(range(5))):
        if np.abs(dm_f[np.ix_(perm, perm)] - dm_p).max() > 1e-9:
            continue
        rot, t = orthogonal_procrustes(verts[[face[i] for i in perm]], pentagon)
        out.append(verts @ rot + t)
    # reflections give the two sides; keep distinct ones
    uniq: list[np.ndarray] = []
    for d in out:
        if not any(_same_set(d, u) for u in uniq):
            uniq.append(d)
    return uniq


def _same_set(a: np.ndarray, b: np.ndarray, tol: float = 1e-7) -> bool:
    return len(a) == len(b) and all(np.linalg.norm(b - p, axis=1).min() < tol for p in a)


def _is_vertex(p: np.ndarray, verts: np.ndarray, tol: float = 1e-7) -> bool:
    return bool(np.linalg.norm(verts - p, axis=1).min() < tol)


def contains_noncoplanar_two_distance(arr: np.ndarray, below: float, eps: float = EPS) -> bool:
    """Does ``arr`` contain a noncoplanar five-point two-distance set of diameter < ``below``?"""
    for five in combinations(range(len(arr)), 5):
        sub = arr[list(five)]
        vals = distance_values(sub, eps)
        if len(vals) != 2 or vals[-1] >= below - eps:
            continue
        if np.linalg.svd(sub - sub.mean(0), compute_uv=False)[-1] > 1e-9:
            return True
    return False


@dataclass
class PentagonReport:
    outcome: SearchOutcome
    type2_on_dodecahedron: bool
    dodecahedron_8subsets: int
    dodecahedron_8subsets_min_k: int
    type1_reducible: bool
    max_size_any: int
    axis_pairs_too_far: bool


def pentagon_points() -> np.ndarray:
    return build_entry(27).points.array


def _cyclic_index(r5: np.ndarray) -> list[int]:
    ang = np.arctan2(r5[:, 1] - r5[:, 1].mean(), r5[:, 0] - r5[:, 0].mean())
    return list(np.argsort(ang))


def type_points(r5: np.ndarray, which: int) -> list[np.ndarray]:
    """Off-axis points with the two distance patterns that reach the pentagon.

    ``which=1``: PQ_{i-1}=PQ_i=1, PQ_{i-2}=PQ_{i+1}=tau, PQ_{i+2} new.
    ``which=2``: PQ_i=1, PQ_{i-1}=PQ_{i+1}=tau, PQ_{i-2}=PQ_{i+2} new.
    """
    from .geometry import trilaterate

    q = r5[_cyclic_index(r5)]
    out = []
    for i in range(5):
        if which == 1:
            sols = trilaterate(q[(i - 1) % 5], 1.0, q[i], 1.0, q[(i + 1) % 5], TAU)
            ok = lambda p: abs(np.linalg.norm(p - q[(i - 2) % 5]) - TAU) < 1e-9
        else:
            sols = trilaterate(q[(i - 1) % 5], TAU, q[i], 1.0, q[(i + 1) % 5], TAU)
            ok = lambda p: abs(np.linalg.norm(p - q[(i - 2) % 5]) - np.linalg.norm(p - q[(i + 2) % 5])) < 1e-9
        out += [p.as_array() for p in sols if ok(p.as_array())]
    return out


def pentagon_case(target: int = 12) -> PentagonReport:
    """Extensions of the regular pentagon R5 with a new, larger diameter.

    The points of such an X lie either on the axis L of R5 or among the
    finitely many off-axis candidates of R5. Only one axis point at the new
    distance fits (two would be farther apart than it), so for each possible
    third distance the pool is finite and the same clique enumeration as for
    the other seeds applies. A set counts as handled by the noncoplanar seeds
    when it contains a noncoplanar five-point two-distance subset of smaller
    diameter; the outcome's witnesses are the sets that do not.
    """
    t0 = time.perf_counter()
    r5 = pentagon_points()
    dists = (1.0, TAU)
    center = r5.mean(0)
    normal = np.cross(r5[1] - r5[0], r5[2] - r5[0])
    normal /= np.linalg.norm(normal)
    rad = np.linalg.norm(r5[0] - center)
    off_axis = [c for c in candi_for_points(r5, dists)
                if np.linalg.norm(np.cross(c.array - center, normal)) > 1e-7]
    axis_fixed = [c for c in candi_for_points(r5, dists)
                  if np.linalg.norm(np.cross(c.array - center, normal)) <= 1e-7]
    pool_base = [c for c in off_axis + axis_fixed if c.nd >= TAU - EPS]

    thirds = sorted({round(c.nd, 9) for c in pool_base if c.nd > TAU + EPS})
    wild = [c for c in pool_base if abs(c.nd - TAU) <= EPS]
    for a, b in combinations(wild, 2):
        x = float(np.linalg.norm(a.array - b.array))
        if x > TAU + EPS:
            thirds.append(round(x, 9))
    thirds = sorted(set(thirds))

    # two opposite axis points at distance t from R5 are 2*sqrt(t^2 - r^2) > t apart for t > tau
    axis_pairs_too_far = all(2 * np.sqrt(t * t - rad * rad) > t + 1e-9 for t in thirds) if thirds else True

    seen: list[np.ndarray] = []
    witnesses, best_any, best_irreducible = [], 5, 5
    nodes = 0
    for t in thirds:
        h = np.sqrt(t * t - rad * rad)
        axis_new = [classify_point(center + s * h * normal, r5, dists) for s in (1, -1)]
        pool = wild + [c for c in pool_base if abs(c.nd - t) <= ND_TOL] + [c for c in axis_new if c]
        pool = _unique(pool)
        adj = _compat_matrix(r5, dists, pool)
        counters: dict = {}
        for members, _ in enumerate_maximal(r5, dists, pool, adj, stats=counters):
            arr = np.vstack([r5] + [pool[i].array for i in members])
            if any(_same_set(arr, s) for s in seen):
                continue
            seen.append(arr)
            vals = distance_values(arr)
            if len(vals) <= 2:
                continue
            best_any = max(best_any, len(arr))
            if contains_noncoplanar_two_distance(arr, vals[-1]):
                continue
            best_irreducible = max(best_irreducible, len(arr))
            if len(arr) >= target:
                witnesses.append(Configuration.from_array(arr))
        nodes += counters["nodes"]

    # the hand argument's ingredients, checked directly
    t2 = type_points(r5, 2)
    dodecas = dodecahedra_on(r5)
    on_dodeca = bool(t2) and all(any(_is_vertex(p, d) for d in dodecas) for p in t2)
    n_sub, min_k = 0, 99
    for d in dodecas:
        ring = [p for p in t2 if _is_vertex(p, d)]
        for three in combinations(range(len(ring)), 3):
            arr = np.vstack([r5] + [ring[i] for i in three])
            n_sub += 1
            min_k = min(min_k, len(distance_values(arr)))
    t1 = type_points(r5, 1)
    t1_reducible = bool(t1) and all(
        contains_noncoplanar_two_distance(np.vstack([r5, p]), np.inf) for p in t1
    )
    outcome = SearchOutcome(
        27, best_irreducible, witnesses, False,
        {"thirds": len(thirds), "nodes": nodes, "runtime_ms": (time.perf_counter() - t0) * 1e3},
    )
    return PentagonReport(outcome, on_dodeca, n_sub, min_k, t1_reducible, best_any, axis_pairs_too_far)


def _unique(cands: list[Candidate]) -> list[Candidate]:
    out: list[Candidate] = []
    for c in cands:
        if not any(np.linalg.norm(c.array - o.array) < 1e-7 for o in out):
            out.append(c)
    return out


# --- certificate ----------------------------------------------------------


@dataclass
class ClassificationCertificate:
    classes: list[dict]
    max_size: int
    target: int
    per_seed: dict
    pentagon: PentagonReport | None
    runtime_ms: float

    def to_json(self) -> dict:
        return {
            "classes": [
                {"size": c["size"], "representative": c["representative"], "seeds": c["seeds"],
                 "is_icosahedron": c["is_icosahedron"]}
                for c in self.classes
            ],
            "max_size": self.max_size,
            "target": self.target,
            "runtime_ms": round(self.runtime_ms, 3),
        }


def canonical_points(conf: Configuration) -> list[list[float]]:
    """Centroid at 0, unit minimum distance, principal axes aligned, rows sorted."""
    arr = conf.normalized().array
    _, _, vt = np.linalg.svd(arr, full_matrices=False)
    rot = vt.T
    out = arr @ rot
    # fix axis signs by third moments so the result does not depend on SVD sign choices
    for k in range(3):
        m3 = (out[:, k] ** 3).sum()
        if m3 < -1e-9 or (abs(m3) <= 1e-9 and out[np.argmax(np.abs(out[:, k])), k] < 0):
            out[:, k] *= -1
    out = np.round(out, 9) + 0.0
    return sorted(out.tolist())


def classify(target: int = 12, seeds=None, include_pentagon: bool = True, jobs: int = 1,
             budget: float | None = None) -> ClassificationCertificate:
    """Run every seed, merge witnesses of size ``target`` into similarity classes.

    Raises BudgetExceeded (and produces no certificate) if ``budget`` seconds
    pass before every seed is done.
    """
    t0 = time.perf_counter()
    entries = [e for e in catalog_all() if not e.planar]
    if seeds is not None:
        entries = [e for e in entries if e.id in set(seeds)]
    work = [(e.id, target) for e in entries]
    outcomes = []

    def collect(results):
        for out in results:
            outcomes.append(out)
            if budget is not None and time.perf_counter() - t0 > budget:
                raise BudgetExceeded(f"budget of {budget}s exhausted after {len(outcomes)} seeds",
                                     partial=[o.seed_id for o in outcomes])

    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(jobs) as ex:
            collect(ex.map(_run_seed, work))
    else:
        collect(map(_run_seed, work))
    pent = pentagon_case(target) if include_pentagon and (seeds is None or 27 in set(seeds)) else None
    if pent is not None:
        outcomes.append(pent.outcome)

    ico = reference_icosahedron()
    classes: list[dict] = []
    for out in outcomes:
        for w in out.witnesses:
            if len(w) != target:
                continue
            for cl in classes:
                if similar(cl["conf"], w):
                    if out.seed_id not in cl["seeds"]:
                        cl["seeds"].append(out.seed_id)
                    break
            else:
                classes.append({"conf": w, "size": len(w), "seeds": [out.seed_id],
                                "representative": canonical_points(w),
                                "is_icosahedron": len(w) == 12 and similar(w, ico)})
    for cl in classes:
        cl["seeds"].sort()
    max_size = max(o.max_size_reached for o in outcomes) if outcomes else 5
    per_seed = {o.seed_id: {"max_size": o.max_size_reached, "witnesses": len(o.witnesses),
                            "icosahedron_found": o.icosahedron_found, **o.stats} for o in outcomes}
    return ClassificationCertificate(classes, max_size, target, per_seed, pent,
                                     (time.perf_counter() - t0) * 1e3)


def _run_seed(args) -> SearchOutcome:
    entry_id, target = args
    return extend_to_max(build_compat(build_entry(entry_id)), target)


def witness_checks(conf: Configuration) -> dict:
    """Diameter-graph independence and a catalog 5-subset, for one witness."""
    alpha = independence_number(diameter_graph(conf))
    arr = conf.array
    entries = catalog_all(check_similarity=False)
    has_seed = False
    for five in combinations(range(len(arr)), 5):
        sub = Configuration.from_array(arr[list(five)])
        if distance_profile(sub).k == 2 and any(similar(sub, e.points) for e in entries):
            has_seed = True
            break
    return {"alpha": alpha, "contains_catalog_subset": has_seed}
