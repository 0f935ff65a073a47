"""Point configurations in R^3 and the low-level solvers built on them.

Everything here works in double precision with an explicit tolerance policy:
configurations are compared after scaling so the minimum pairwise distance
is 1, and two distances count as equal when they differ by at most ``eps``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

EPS = 1e-9
DEDUP_TOL = 1e-7
ND_TOL = 1e-6
SIMILARITY_TOL = 1e-6


class GeometryError(ValueError):
    pass


class DegenerateInput(GeometryError):
    """Distance clustering is ambiguous at the requested tolerance."""


class CollinearCenters(GeometryError):
    pass


class CollinearInput(GeometryError):
    pass


@dataclass(frozen=True)
class Point:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.z)):
            raise GeometryError(f"non-finite coordinate in {self!r}")

    @classmethod
    def of(cls, p: Iterable[float]) -> "Point":
        x, y, z = (float(v) for v in p)
        return cls(x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def __iter__(self):
        return iter((self.x, self.y, self.z))


@dataclass(frozen=True)
class Configuration:
    points: tuple[Point, ...]
    eps: float = EPS

    def __post_init__(self):
        pts = tuple(p if isinstance(p, Point) else Point.of(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if not self.eps > 0:
            raise GeometryError("eps must be positive")
        if len(pts) >= 2:
            dm = pairwise_distances(self.array)
            iu = np.triu_indices(len(pts), 1)
            if dm[iu].min() <= self.eps:
                raise GeometryError("configuration has coincident points")

    @classmethod
    def from_array(cls, arr, eps: float = EPS) -> "Configuration":
        arr = np.asarray(arr, dtype=float).reshape(-1, 3)
        return cls(tuple(Point.of(row) for row in arr), eps)

    @cached_property
    def array(self) -> np.ndarray:
        arr = np.array([[p.x, p.y, p.z] for p in self.points], dtype=float)
        arr.setflags(write=False)
        return arr.reshape(-1, 3)

    def __len__(self):
        return len(self.points)

    def min_distance(self) -> float:
        dm = pairwise_distances(self.array)
        return float(dm[np.triu_indices(len(self), 1)].min())

    def normalized(self) -> "Configuration":
        """Same shape, centroid at the origin and minimum distance 1."""
        arr = self.array - self.array.mean(axis=0)
        return Configuration.from_array(arr / self.min_distance(), self.eps)

    def to_json(self) -> dict:
        return {"points": [[p.x, p.y, p.z] for p in self.points], "eps": self.eps}

    @classmethod
    def from_json(cls, obj) -> "Configuration":
        if isinstance(obj, (str, bytes)):
            obj = json.loads(obj)
        return cls.from_array(obj["points"], float(obj.get("eps", EPS)))


@dataclass(frozen=True)
class DistanceProfile:
    values: tuple[float, ...]
    multiplicities: tuple[int, ...]

    @property
    def diameter(self) -> float:
        return self.values[-1]

    @property
    def k(self) -> int:
        return len(self.values)


def pairwise_distances(arr: np.ndarray) -> np.ndarray:
    diff = arr[:, None, :] - arr[None, :, :]
    return np.sqrt((diff**2).sum(axis=-1))


def cluster_values(values: Sequence[float], tol: float) -> list[list[float]]:
    """Single-linkage clustering of reals: neighbours closer than ``tol`` merge."""
    vals = sorted(values)
    if not vals:
        return []
    groups = [[vals[0]]]
    for v in vals[1:]:
        if v - groups[-1][-1] <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return groups


def distance_profile(c: Configuration, normalize: bool = True) -> DistanceProfile:
    """Clustered distinct distances of ``c``.

    Clustering always happens at unit minimum distance. With
    ``normalize=False`` the reported values are scaled back to the
    configuration's own units (catalog entries are stored that way).
    """
    n = len(c)
    if n < 2:
        return DistanceProfile((), ())
    dm = pairwise_distances(c.array)
    dists = dm[np.triu_indices(n, 1)]
    scale = dists.min()
    groups = cluster_values(dists / scale, c.eps)
    for g in groups:
        if g[-1] - g[0] > 10 * c.eps:
            raise DegenerateInput(
                f"distance cluster spans {g[-1] - g[0]:.3g} > 10*eps at {g[0]:.12g}"
            )
    unit = 1.0 if normalize else scale
    values = tuple(float(np.mean(g)) * unit for g in groups)
    return DistanceProfile(values, tuple(len(g) for g in groups))


def is_k_distance_set(c: Configuration, k: int) -> bool:
    return distance_profile(c).k == k


def distance_values(arr: np.ndarray, eps: float = EPS) -> list[float]:
    """Distinct distances of a raw point array, no normalization."""
    n = len(arr)
    if n < 2:
        return []
    dm = pairwise_distances(arr)
    return [float(np.mean(g)) for g in cluster_values(dm[np.triu_indices(n, 1)], eps)]


# --- similarity -----------------------------------------------------------


def _affine_basis_order(arr: np.ndarray, tol: float) -> list[int]:
    """Point order whose prefix spans the affine hull as fast as possible."""
    n = len(arr)
    order = [0]
    basis: list[np.ndarray] = []
    for i in range(1, n):
        if len(basis) == 3:
            break
        v = arr[i] - arr[0]
        for b in basis:
            v = v - (v @ b) * b
        if np.linalg.norm(v) > tol:
            basis.append(v / np.linalg.norm(v))
            order.append(i)
    order += [i for i in range(n) if i not in order]
    return order


def orthogonal_procrustes(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthogonal ``R`` and shift ``t`` minimizing |a @ R + t - b|; reflections allowed."""
    ca, cb = a.mean(axis=0), b.mean(axis=0)
    u, _, vt = np.linalg.svd((a - ca).T @ (b - cb))
    rot = u @ vt
    return rot, cb - ca @ rot


def symmetries(arr: np.ndarray, tol: float = 1e-7) -> list[tuple[np.ndarray, np.ndarray]]:
    """Isometries (rot, t) with ``arr @ rot + t`` a relabelling of ``arr``.

    Brute force over permutations, so meant for small sets such as the seeds.
    The identity comes first.
    """
    from itertools import permutations

    arr = np.asarray(arr, dtype=float)
    dm = pairwise_distances(arr)
    out = []
    for perm in permutations(range(len(arr))):
        perm = list(perm)
        if np.abs(dm[np.ix_(perm, perm)] - dm).max() > tol:
            continue
        rot, t = orthogonal_procrustes(arr, arr[perm])
        if np.abs(arr @ rot + t - arr[perm]).max() <= tol:
            out.append((rot, t))
    return out


def similar(a: Configuration, b: Configuration, tol: float = SIMILARITY_TOL) -> bool:
    """True if some similarity transformation maps ``a`` onto ``b``.

    Both sides are scaled to unit minimum distance. A point correspondence
    is searched by backtracking with pairwise-distance pruning; every full
    correspondence is then checked with an orthogonal least-squares fit.
    """
    if len(a) != len(b):
        return False
    if len(a) <= 1:
        return True
    pa = a.normalized().array
    pb = b.normalized().array
    da, db = pairwise_distances(pa), pairwise_distances(pb)
    n = len(pa)
    iu = np.triu_indices(n, 1)
    diam = max(da[iu].max(), db[iu].max())
    thr = tol * diam
    if np.abs(np.sort(da[iu]) - np.sort(db[iu])).max() > thr:
        return False
    if np.abs(np.sort(da, axis=1).sum(0) - np.sort(db, axis=1).sum(0)).max() > n * thr:
        return False

    order = _affine_basis_order(pa, 1e-6)
    # candidate images per point, by sorted distance row
    rows_a = np.sort(da, axis=1)
    rows_b = np.sort(db, axis=1)
    options = [
        [j for j in range(n) if np.abs(rows_a[i] - rows_b[j]).max() <= thr] for i in range(n)
    ]
    mapping = [-1] * n
    used = [False] * n

    def aligned() -> bool:
        src = pa[order]
        dst = pb[[mapping[i] for i in order]]
        rot, t = orthogonal_procrustes(src, dst)
        return float(np.abs(src @ rot + t - dst).max()) < thr

    def extend(depth: int) -> bool:
        if depth == n:
            return aligned()
        i = order[depth]
        for j in options[i]:
            if used[j]:
                continue
            if any(abs(da[i, order[k]] - db[j, mapping[order[k]]]) > thr for k in range(depth)):
                continue
            mapping[i], used[j] = j, True
            if extend(depth + 1):
                return True
            mapping[i], used[j] = -1, False
        return False

    return extend(0)


# --- solvers --------------------------------------------------------------


class Solutions(list):
    """Solver output: a list of points plus a tangency flag."""

    def __init__(self, points=(), tangent: bool = False):
        super().__init__(points)
        self.tangent = tangent


def _newton_spheres(p: np.ndarray, centers: np.ndarray, radii: np.ndarray) -> np.ndarray:
    """One Newton step on |p - c_i|^2 = r_i^2 (square systems only)."""
    jac = 2.0 * (p - centers)
    f = ((p - centers) ** 2).sum(axis=1) - radii**2
    try:
        step = np.linalg.solve(jac, f)
    except np.linalg.LinAlgError:
        return p
    q = p - step
    old = np.abs(np.linalg.norm(p - centers, axis=1) - radii).max()
    new = np.abs(np.linalg.norm(q - centers, axis=1) - radii).max()
    return q if new <= old else p


def trilaterate(c1, r1: float, c2, r2: float, c3, r3: float, eps: float = EPS) -> Solutions:
    """Points at distances r1, r2, r3 from three noncollinear centers.

    Returns 0, 1 or 2 points. A discriminant within ``eps`` of zero is a
    tangency and yields a single point with ``tangent`` set.
    """
    p1, p2, p3 = (np.asarray(c, dtype=float) for c in (c1, c2, c3))
    area = 0.5 * np.linalg.norm(np.cross(p2 - p1, p3 - p1))
    if area <= eps:
        raise CollinearCenters(f"triangle area {area:.3g}")
    dist12 = np.linalg.norm(p2 - p1)
    ex = (p2 - p1) / dist12
    i = ex @ (p3 - p1)
    ey = p3 - p1 - i * ex
    j = np.linalg.norm(ey)
    ey /= j
    ez = np.cross(ex, ey)
    x = (r1**2 - r2**2 + dist12**2) / (2 * dist12)
    y = (r1**2 - r3**2 + i**2 + j**2) / (2 * j) - i * x / j
    z2 = r1**2 - x**2 - y**2
    centers = np.array([p1, p2, p3])
    radii = np.array([r1, r2, r3], dtype=float)
    base = p1 + x * ex + y * ey
    if abs(z2) <= eps:
        pts, tangent = [base], True
    elif z2 < 0:
        return Solutions()
    else:
        z = math.sqrt(z2)
        pts = [_newton_spheres(base + z * ez, centers, radii), _newton_spheres(base - z * ez, centers, radii)]
        tangent = False
    if not tangent:
        pts = [p for p in pts if np.abs(np.linalg.norm(p - centers, axis=1) - radii).max() <= eps]
    return Solutions([Point.of(p) for p in pts], tangent)


@dataclass(frozen=True)
class Locus:
    """Set of points equidistant from a finite point set."""

    kind: str  # "line", "point" or "empty"
    point: np.ndarray | None = field(default=None, compare=False)
    direction: np.ndarray | None = field(default=None, compare=False)

    def sample(self, ts: Iterable[float]) -> np.ndarray:
        if self.kind != "line":
            raise GeometryError(f"cannot sample a {self.kind} locus")
        return np.array([self.point + t * self.direction for t in ts])


def circumcenter_3(p1: np.ndarray, p2: np.ndarray, p3: np.ndarray, eps: float = EPS):
    """Circumcenter and unit normal of a noncollinear triangle."""
    a, b = p2 - p1, p3 - p1
    n = np.cross(a, b)
    nn = n @ n
    if math.sqrt(nn) * 0.5 <= eps:
        raise CollinearInput("three collinear points have no circumcircle")
    center = p1 + (np.cross(n, a) * (b @ b) + np.cross(b, n) * (a @ a)) / (2 * nn)
    return center, n / math.sqrt(nn)


def equidistant_locus(pts, eps: float = EPS) -> Locus:
    arr = np.asarray([list(p) for p in pts], dtype=float)
    if not 3 <= len(arr) <= 5:
        raise GeometryError("equidistant_locus takes 3 to 5 points")
    tri = None
    for i, j, k in combinations(range(len(arr)), 3):
        if 0.5 * np.linalg.norm(np.cross(arr[j] - arr[i], arr[k] - arr[i])) > eps:
            tri = (i, j, k)
            break
    if tri is None or (len(arr) == 3 and tri != (0, 1, 2)):
        raise CollinearInput("points are collinear")
    center, normal = circumcenter_3(*arr[list(tri)], eps=eps)
    if len(arr) == 3:
        return Locus("line", center, normal)
    heights = (arr - center) @ normal
    if np.abs(heights).max() <= eps:
        radius = np.linalg.norm(arr[tri[0]] - center)
        if np.abs(np.linalg.norm(arr - center, axis=1) - radius).max() <= eps:
            return Locus("line", center, normal)
        return Locus("empty")
    # sphere through the points: 2 (p_i - p_0) . c = |p_i|^2 - |p_0|^2
    m = 2 * (arr[1:] - arr[0])
    rhs = (arr[1:] ** 2).sum(1) - arr[0] @ arr[0]
    c, *_ = np.linalg.lstsq(m, rhs, rcond=None)
    r = np.linalg.norm(arr - c, axis=1)
    if r.max() - r.min() <= eps:
        return Locus("point", c)
    return Locus("empty")


def line_sphere(point: np.ndarray, direction: np.ndarray, center: np.ndarray, radius: float,
                eps: float = EPS) -> Solutions:
    """Intersection of a line with a sphere, tangency reported as one point."""
    u = direction / np.linalg.norm(direction)
    w = point - center
    b = u @ w
    disc = b * b - (w @ w - radius**2)
    if abs(disc) <= eps:
        return Solutions([Point.of(point - b * u)], tangent=True)
    if disc < 0:
        return Solutions()
    s = math.sqrt(disc)
    return Solutions([Point.of(point + (-b + s) * u), Point.of(point + (-b - s) * u)])
