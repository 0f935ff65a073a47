"""The 27 five-point two-distance sets in R^3 and their algebraic constants."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .geometry import EPS, Configuration, GeometryError, distance_profile, similar

SQ2, SQ3, SQ5, SQ6 = (math.sqrt(v) for v in (2, 3, 5, 6))
TAU = (1 + SQ5) / 2


class UnknownConstant(KeyError):
    pass


class ValidationFailed(GeometryError):
    def __init__(self, entry_id: int, message: str):
        super().__init__(f"entry {entry_id}: {message}")
        self.entry_id = entry_id


# cubic coefficients (highest degree first) and the printed decimal of each root
_CUBIC_ROOTS = {
    "a5": ((-4, 16, -8, 1), 0.35637),
    "a6": ((-4, 16, -8, 1), 3.4396),
    "a7": ((4, -8, -4, 3), 2.2934),
    "a8": ((4, -8, -4, 3), 0.44365),
    "a12": ((4, -9, -4, 4), 0.52482),
    "a13": ((4, -9, -4, 4), 2.4903),
}

_CLOSED_FORMS: dict[str, Callable[[], float]] = {
    "tau": lambda: TAU,
    "a1": lambda: 1 / (2 * math.tan(math.pi / 5)),
    "a2": lambda: TAU / (2 * math.tan(3 * math.pi / 5)),
    "a3": lambda: (17 + math.sqrt(161)) / 16,
    "a4": lambda: (17 - math.sqrt(161)) / 16,
    "a9": lambda: math.sqrt(7) - SQ3,
    "a10": lambda: (13 - math.sqrt(105)) / 8,
    "a11": lambda: (13 + math.sqrt(105)) / 8,
}

CONSTANT_NAMES = ("tau",) + tuple(f"a{i}" for i in range(1, 14))


def cubic_root(coeffs, approx: float, width: float = 1e-3) -> float:
    """Root of a cubic bracketed around a printed decimal, Newton-polished."""
    poly = np.poly1d(coeffs)
    dpoly = poly.deriv()
    lo, hi = approx - width, approx + width
    if poly(lo) * poly(hi) > 0:
        raise ValueError(f"no sign change of {coeffs} around {approx}")
    x = brentq(poly, lo, hi, xtol=1e-15)
    for _ in range(3):
        step = poly(x) / dpoly(x)
        if step == 0:
            break
        x -= step
    return float(x)


@lru_cache(maxsize=None)
def constant(name: str) -> float:
    """Numeric value of tau or a1..a13."""
    key = name.replace("_", "").lower()
    if key in ("τ", "t"):
        key = "tau"
    if key in _CLOSED_FORMS:
        return _CLOSED_FORMS[key]()
    if key in _CUBIC_ROOTS:
        coeffs, approx = _CUBIC_ROOTS[key]
        return cubic_root(coeffs, approx)
    raise UnknownConstant(name)


def cubic_residual(name: str) -> float:
    coeffs, _ = _CUBIC_ROOTS[name]
    return abs(float(np.polyval(coeffs, constant(name))))


def printed_constant(name: str) -> float | None:
    """The truncated decimal the table footnote prints, for cubic roots only."""
    entry = _CUBIC_ROOTS.get(name)
    return entry[1] if entry else None


# --- table rows -----------------------------------------------------------

_TRI = [(-0.5, 0.0, 0.0), (0.5, 0.0, 0.0), (0.0, SQ3 / 2, 0.0)]
_SQUARE = [(-0.5, -0.5, 0.0), (-0.5, 0.5, 0.0), (0.5, -0.5, 0.0), (0.5, 0.5, 0.0)]


def _rows_13_16(a: float, sign: float, shift: bool):
    # rows 13/14/25/26 use (2 - a), rows 15/16 use a alone
    yoff = (2 - a) / SQ3 if shift else a / SQ3
    zsq = (-a * a + 4 * a - 1) / 3 if shift else (-a * a + 3 * a) / 3
    return _TRI + [(0, SQ3 / 6, math.sqrt(a - 1 / 3)), (0, SQ3 / 2 - yoff, sign * math.sqrt(zsq))]


def _row(entry_id: int):
    """(points, d, names of the constants used) for one table row."""
    c = constant
    if entry_id == 1:
        return _TRI + [(0, SQ3 / 6, SQ6 / 3), (0, SQ3 / 6, -SQ6 / 3)], 2 * SQ6 / 3, ()
    if entry_id == 2:
        return _TRI + [(0, -SQ2 / 2, 0.5), (0, -SQ2 / 2, -0.5)], math.sqrt((3 + SQ6) / 2), ()
    if entry_id == 3:
        return _TRI + [(0, SQ2 / 2, 0.5), (0, SQ2 / 2, -0.5)], math.sqrt((3 - SQ6) / 2), ()
    if entry_id == 4:
        return _SQUARE + [(0, 0, SQ2 / 2)], SQ2, ()
    if entry_id == 5:
        return _TRI + [(0, SQ3 / 6, SQ6 / 3), (0, SQ3 / 6, SQ6 / 3 + 1)], math.sqrt(2 * (3 + SQ6) / 3), ()
    if entry_id == 6:
        return _TRI + [(0, SQ3 / 6, SQ6 / 3), (0, SQ3 / 6, SQ6 / 3 - 1)], math.sqrt(2 * (3 - SQ6) / 3), ()
    if entry_id == 7:
        return _TRI + [(0, SQ3 / 6, 1 / 3), (0, SQ3 / 6, -1 / 3)], 2 / 3, ()
    if entry_id in (8, 9):
        a1, a2, tau = c("a1"), c("a2"), c("tau")
        h = math.sqrt(0.75 - a1 * a1) if entry_id == 8 else math.sqrt(tau * tau - 0.25 - a1 * a1)
        pts = [(a1, 0.5, 0), (a1, -0.5, 0), (a2, tau / 2, 0), (a2, -tau / 2, 0), (0, 0, h)]
        return pts, tau, ("tau", "a1", "a2")
    if entry_id in (10, 11):
        name = "a3" if entry_id == 10 else "a4"
        a = c(name)
        sgn = 1 if entry_id == 10 else -1
        pts = [(-0.5, 0, 0), (0.5, 0, 0), (0, math.sqrt(a - 0.25), 0),
               (0, sgn * math.sqrt(3 - a) / 2, math.sqrt(a) / 2),
               (0, sgn * math.sqrt(3 - a) / 2, -math.sqrt(a) / 2)]
        return pts, math.sqrt(a), (name,)
    if entry_id == 12:
        # the printed fifth point drops a closing parenthesis; z = 1/(2 sqrt 6)
        return _TRI + [(0, SQ3 / 6, SQ6 / 3), (0, SQ3 / 6, 1 / (2 * SQ6))], math.sqrt(3 / 8), ()
    if entry_id in (13, 14, 25, 26):
        name = {13: "a5", 14: "a6", 25: "a12", 26: "a13"}[entry_id]
        sign = -1 if entry_id in (13, 25) else 1
        return _rows_13_16(c(name), sign, shift=True), math.sqrt(c(name)), (name,)
    if entry_id in (15, 16):
        name = "a7" if entry_id == 15 else "a8"
        sign = 1 if entry_id == 15 else -1
        return _rows_13_16(c(name), sign, shift=False), math.sqrt(c(name)), (name,)
    if entry_id == 17:
        return _TRI + [(0, SQ3 / 6, 0.5), (0, SQ3 / 6, -0.5)], math.sqrt(7 / 12), ()
    if entry_id == 18:
        pts = [(0, 0, 0), (-0.5, -SQ3 / 2, 0), (0.5, -SQ3 / 2, 0), (0, SQ3 / 2, 0.5), (0, SQ3 / 2, -0.5)]
        return pts, math.sqrt(7 / 2), ()
    if entry_id == 19:
        return _SQUARE + [(0, 0, SQ6 / 2)], SQ2, ()
    if entry_id == 20:
        return [(-0.5, 0, 0), (0.5, 0, 0), (-0.5, 0, 1), (0.5, 0, 1), (0, SQ3 / 2, 0)], SQ2, ()
    if entry_id == 21:
        a9 = c("a9")
        h = math.sqrt(1 - a9 * a9)
        pts = _TRI + [((SQ3 * a9 - 1) / 2, a9 / 2, h), ((-SQ3 * a9 + 1) / 2, a9 / 2, -h)]
        return pts, math.sqrt(5 - math.sqrt(21)), ("a9",)
    if entry_id in (22, 23):
        name = "a10" if entry_id == 22 else "a11"
        a = c(name)
        y = SQ3 / 2 + (-1 if entry_id == 22 else 1) * math.sqrt(1 - a / 4)
        pts = _TRI + [(0, y, math.sqrt(a) / 2), (0, y, -math.sqrt(a) / 2)]
        return pts, math.sqrt(a), (name,)
    if entry_id == 24:
        tau = c("tau")
        y = (2 * tau + 1) / (2 * SQ3 * tau)
        pts = [(-tau / 2, 0, 0), (tau / 2, 0, 0), (0, SQ3 * tau / 2, 0),
               (-0.5, y, 1 / SQ3), (0.5, y, 1 / SQ3)]
        return pts, tau, ("tau",)
    if entry_id == 27:
        # printed on the unit circle (side 1.1756); rescaled to unit side so 1 is a distance
        r = 1 / (2 * math.sin(math.pi / 5))
        pts = [(r * math.cos(2 * math.pi * j / 5), r * math.sin(2 * math.pi * j / 5), 0) for j in range(5)]
        return pts, TAU, ("tau",)
    raise KeyError(f"no catalog entry {entry_id}")


# The d column evaluated from the printed footnote decimals (cubic rows only).
def printed_d(entry_id: int) -> float:
    _, d, names = _row(entry_id)
    cubic = [n for n in names if n in _CUBIC_ROOTS]
    if cubic:
        return math.sqrt(printed_constant(cubic[0]))
    return d


@dataclass(frozen=True)
class CatalogEntry:
    id: int
    points: Configuration
    second_distance: float
    constants: dict

    @property
    def d(self) -> float:
        return self.second_distance

    @property
    def diameter(self) -> float:
        return max(1.0, self.second_distance)

    @property
    def distances(self) -> tuple[float, float]:
        return (1.0, self.second_distance)

    @property
    def planar(self) -> bool:
        arr = self.points.array
        return bool(np.linalg.svd(arr - arr.mean(0), compute_uv=False)[-1] < 1e-9)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "points": self.points.to_json()["points"],
            "d": self.second_distance,
            "constants": dict(self.constants),
        }


def validate_points(entry_id: int, pts, d: float, eps: float = EPS) -> Configuration:
    conf = Configuration.from_array(pts, eps)
    prof = distance_profile(conf, normalize=False)
    if prof.k != 2:
        raise ValidationFailed(entry_id, "expected two distances, got " + ", ".join(f"{v:.9g}" for v in prof.values))
    lo, hi = prof.values
    want_lo, want_hi = sorted((1.0, d))
    if abs(want_lo - lo) > 1e-9 or abs(want_hi - hi) > 1e-9:
        raise ValidationFailed(entry_id, f"distances {lo:.12g}, {hi:.12g} differ from 1, {d:.12g}")
    return conf


@lru_cache(maxsize=None)
def build_entry(entry_id: int) -> CatalogEntry:
    if not 1 <= entry_id <= 27:
        raise KeyError(f"no catalog entry {entry_id}")
    pts, d, names = _row(entry_id)
    conf = validate_points(entry_id, pts, d)
    return CatalogEntry(entry_id, conf, d, {n: constant(n) for n in names})


def catalog_all(check_similarity: bool = True) -> list[CatalogEntry]:
    entries = [build_entry(i) for i in range(1, 28)]
    if check_similarity:
        for i, a in enumerate(entries):
            for b in entries[i + 1:]:
                if similar(a.points, b.points):
                    raise ValidationFailed(b.id, f"similar to entry {a.id}")
    return entries


def entry_from_json(obj: dict) -> CatalogEntry:
    """Rebuild an entry from its export form, re-validating the points."""
    conf = validate_points(int(obj["id"]), obj["points"], float(obj["d"]))
    return CatalogEntry(int(obj["id"]), conf, float(obj["d"]), dict(obj.get("constants", {})))


def export_catalog(entries) -> str:
    return json.dumps([e.to_json() for e in entries], indent=1)


def reference_icosahedron() -> Configuration:
    """Regular icosahedron with unit edge."""
    pts = []
    for s1 in (-1, 1):
        for s2 in (-1, 1):
            pts += [(0, s1, s2 * TAU), (s1, s2 * TAU, 0), (s2 * TAU, 0, s1)]
    return Configuration.from_array(np.array(pts, dtype=float) / 2)
