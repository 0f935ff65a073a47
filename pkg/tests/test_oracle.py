import numpy as np
import pytest

from distclass.candidates import candi
from distclass.catalog import build_entry
from distclass.oracle import compare, residual, scan


def test_residual_vanishes_on_candidates():
    e = build_entry(4)
    pts = np.array([c.array for c in candi(e)])
    assert residual(pts, e.points.array, e.distances).max() < 1e-9


def test_residual_is_two_lipschitz(rng):
    e = build_entry(9)
    a = rng.normal(size=(200, 3)) * 2
    b = a + rng.normal(size=(200, 3)) * 0.05
    ha = residual(a, e.points.array, e.distances)
    hb = residual(b, e.points.array, e.distances)
    assert np.all(np.abs(ha - hb) <= 2 * np.linalg.norm(a - b, axis=1) + 1e-12)


def test_compare():
    a = np.array([[0.0, 0, 0], [1, 0, 0]])
    b = np.array([[0.0, 0, 1e-8], [2, 0, 0]])
    missing, extra = compare(a, b)
    assert missing.tolist() == [[2, 0, 0]] and extra.tolist() == [[1, 0, 0]]


@pytest.mark.parametrize("entry_id", [9, 24])
def test_oracle_agrees_on_seeds_with_tangent_candidates(entry_id):
    e = build_entry(entry_id)
    res = scan(e.points.array, e.distances)
    missing, extra = compare(np.array([c.array for c in candi(e)]), res.points)
    assert len(missing) == 0 and len(extra) == 0
