"""Independent check of candi(): adaptive grid scan plus Newton refinement.

For a point P let r_i = |P - Y_i| and

    h(P) = min over t in {r_j} of max_i min(|r_i - 1|, |r_i - d|, |r_i - t|).

h vanishes exactly on the candidates (t plays the new distance), and h is
2-Lipschitz, so a cell with h(centre) > 2 * half-diagonal holds no candidate.
Every candidate lies within d of some seed point or at the circumcenter, so a
box around the seed grown by d (and stretched to the circumcenter) contains
them all. The box is subdivided, pruned by the Lipschitz bound, down to the
target resolution; each surviving cell is refined by least squares on the
distance labels read off at its centre.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.optimize import least_squares

from .geometry import DEDUP_TOL, equidistant_locus

LIPSCHITZ = 2.0
MERGE_RADIUS = 1e-3


@dataclass
class OracleResult:
    points: np.ndarray
    cells_refined: int
    levels: int


def residual(p: np.ndarray, seed: np.ndarray, dists) -> np.ndarray:
    """h at each row of ``p``."""
    r = np.linalg.norm(p[:, None, :] - seed[None, :, :], axis=2)  # (m, n)
    old = np.min(np.abs(r[:, :, None] - np.asarray(dists)[None, None, :]), axis=2)
    best = np.full(len(p), np.inf)
    for j in range(seed.shape[0]):
        t = r[:, j:j + 1]
        dev = np.minimum(old, np.abs(r - t)).max(axis=1)
        best = np.minimum(best, dev)
    return best


def _labels(p: np.ndarray, seed: np.ndarray, dists):
    """Distance label per seed point (an old value, or None for new) at ``p``."""
    r = np.linalg.norm(seed - p, axis=1)
    old = np.min(np.abs(r[:, None] - np.asarray(dists)[None, :]), axis=1)
    best, labels = np.inf, None
    for j in range(len(seed)):
        new = np.abs(r - r[j]) < old
        dev = np.where(new, np.abs(r - r[j]), old).max()
        if dev < best:
            best = dev
            labels = [None if new[i] else dists[int(np.argmin(np.abs(r[i] - np.asarray(dists))))]
                      for i in range(len(seed))]
    return labels


def _refine(p0: np.ndarray, seed: np.ndarray, dists, labels):
    new = [i for i, a in enumerate(labels) if a is None]

    def f(x):
        r = np.linalg.norm(seed - x, axis=1)
        out = [r[i] - a for i, a in enumerate(labels) if a is not None]
        out += [r[i] - r[new[0]] for i in new[1:]]
        return np.array(out)

    sol = least_squares(f, p0, xtol=1e-15, ftol=1e-15, gtol=1e-15, method="lm")
    return sol.x


def scan(seed, dists, resolution: float = 0.01, accept: float = 1e-8) -> OracleResult:
    """All points P with seed + {P} at most three-distance, found without case analysis."""
    seed = np.asarray(seed, dtype=float)
    dists = tuple(dists)
    lo = seed.min(0) - max(dists)
    hi = seed.max(0) + max(dists)
    loc = equidistant_locus(seed)
    if loc.kind == "point":
        lo = np.minimum(lo, loc.point - 0.1)
        hi = np.maximum(hi, loc.point + 0.1)
    size = float((hi - lo).max())
    centers = (lo + size / 2)[None, :]
    half = size / 2
    levels = 0
    offsets = np.array(list(product((-1, 1), repeat=3)), dtype=float)
    while True:
        h = residual(centers, seed, dists)
        # a little slack over the Lipschitz bound absorbs rounding
        centers = centers[h <= LIPSCHITZ * half * np.sqrt(3) * (1 + 1e-9) + 1e-12]
        if 2 * half <= resolution or len(centers) == 0:
            break
        half /= 2
        centers = (centers[:, None, :] + offsets[None, :, :] * half).reshape(-1, 3)
        levels += 1

    hits: list[tuple[float, np.ndarray]] = []
    for c in centers:
        labels = _labels(c, seed, dists)
        x = _refine(c, seed, dists, labels)
        if np.abs(x - c).max() > 4 * half:
            continue  # converged to something outside the cell; its own cell will find it
        res = residual(x[None, :], seed, dists)[0]
        if res > accept or np.linalg.norm(seed - x, axis=1).min() <= DEDUP_TOL:
            continue
        hits.append((res, x))

    # near a tangent solution the residual is quadratic in the displacement, so
    # neighbouring cells stop at slightly different places; keep the best of each cluster
    found: list[np.ndarray] = []
    for _, x in sorted(hits, key=lambda h: h[0]):
        if not any(np.linalg.norm(x - q) <= MERGE_RADIUS for q in found):
            found.append(x)
    pts = np.array(sorted(map(tuple, found))).reshape(-1, 3)
    return OracleResult(pts, len(centers), levels)


def compare(computed: np.ndarray, oracle: np.ndarray, tol: float = 1e-6):
    """(missing from computed, extra in computed) with respect to the oracle."""
    computed = np.asarray(computed).reshape(-1, 3)
    oracle = np.asarray(oracle).reshape(-1, 3)

    def unmatched(a, b):
        if len(b) == 0:
            return a
        return np.array([p for p in a if np.linalg.norm(b - p, axis=1).min() > tol]).reshape(-1, 3)

    return unmatched(oracle, computed), unmatched(computed, oracle)
