import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from distclass.catalog import (
    CONSTANT_NAMES,
    TAU,
    UnknownConstant,
    ValidationFailed,
    build_entry,
    catalog_all,
    constant,
    cubic_residual,
    entry_from_json,
    export_catalog,
    printed_constant,
    printed_d,
    reference_icosahedron,
)
from distclass.geometry import Configuration, distance_profile, is_k_distance_set, similar

S2, S3, S6, S21 = math.sqrt(2), math.sqrt(3), math.sqrt(6), math.sqrt(21)

# the table's d column, as closed forms where it gives one
CLOSED_D = {
    1: 2 * S6 / 3,
    2: math.sqrt((3 + S6) / 2),
    3: math.sqrt((3 - S6) / 2),
    4: S2,
    5: math.sqrt(2 * (3 + S6) / 3),
    6: math.sqrt(2 * (3 - S6) / 3),
    7: 2 / 3,
    8: TAU,
    9: TAU,
    10: math.sqrt((17 + math.sqrt(161)) / 16),
    11: math.sqrt((17 - math.sqrt(161)) / 16),
    12: math.sqrt(3 / 8),
    17: math.sqrt(7 / 12),
    18: math.sqrt(7 / 2),
    19: S2,
    20: S2,
    21: math.sqrt(5 - S21),
    22: math.sqrt((13 - math.sqrt(105)) / 8),
    23: math.sqrt((13 + math.sqrt(105)) / 8),
    24: TAU,
    27: TAU,
}
CUBIC_D = {13: "a5", 14: "a6", 15: "a7", 16: "a8", 25: "a12", 26: "a13"}


def test_tau():
    assert TAU == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-15)
    assert constant("tau") == TAU


@pytest.mark.parametrize("name", ["a5", "a6", "a7", "a8", "a12", "a13"])
def test_cubic_roots_refined(name):
    assert cubic_residual(name) < 1e-12
    assert abs(constant(name) - printed_constant(name)) < 1e-4


def test_a1_a2_closed_forms():
    # a1 and a2 are the x-coordinates of the regular pentagon with unit side
    assert constant("a1") == pytest.approx(1 / (2 * math.tan(math.pi / 5)))
    assert constant("a1") ** 2 + 1 / 4 == pytest.approx(constant("a2") ** 2 + TAU**2 / 4)


def test_unknown_constant():
    with pytest.raises(UnknownConstant):
        constant("a14")
    assert len(CONSTANT_NAMES) == 14


@pytest.mark.parametrize("entry_id", range(1, 28))
def test_entry_is_two_distance_with_table_d(entry_id):
    e = build_entry(entry_id)
    prof = distance_profile(e.points, normalize=False)
    assert prof.k == 2
    assert prof.values == pytest.approx(sorted((1.0, e.d)), abs=1e-9)
    if entry_id in CLOSED_D:
        assert abs(e.d - CLOSED_D[entry_id]) < 1e-9
    else:
        assert abs(e.d - math.sqrt(constant(CUBIC_D[entry_id]))) < 1e-12
        assert abs(e.d - printed_d(entry_id)) < 1e-4


def test_only_the_pentagon_is_planar():
    assert [e.id for e in catalog_all() if e.planar] == [27]


def test_entries_pairwise_dissimilar():
    # catalog_all raises if any two entries are similar
    assert len(catalog_all(check_similarity=True)) == 27


def test_rows_8_and_9_share_base_pentagon():
    a, b = build_entry(8).points.array, build_entry(9).points.array
    assert np.allclose(a[:4], b[:4])
    assert a[4, 2] < b[4, 2]


def test_export_roundtrip():
    text = export_catalog(catalog_all(check_similarity=False))
    back = [entry_from_json(o) for o in json.loads(text)]
    assert [e.id for e in back] == list(range(1, 28))
    assert all(similar(e.points, build_entry(e.id).points) for e in back)


def test_corrupted_entry_is_named():
    obj = build_entry(5).to_json()
    obj["points"][0][0] += 0.01
    with pytest.raises(ValidationFailed) as info:
        entry_from_json(obj)
    assert info.value.entry_id == 5


def test_reference_icosahedron():
    ico = reference_icosahedron()
    prof = distance_profile(ico)
    assert len(ico) == 12 and prof.k == 3
    assert prof.values == pytest.approx((1.0, TAU, math.sqrt(TAU + 2)))


@settings(max_examples=100)
@given(st.integers(1, 27), st.integers(0, 2**32 - 1), st.floats(0.1, 10))
def test_profile_isometry_and_scale_invariant(entry_id, seed, scale):
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    arr = build_entry(entry_id).points.array
    moved = Configuration.from_array(scale * arr @ q + rng.normal(size=3))
    a = distance_profile(build_entry(entry_id).points)
    b = distance_profile(moved)
    assert a.multiplicities == b.multiplicities
    assert np.allclose(a.values, b.values, atol=1e-9)
    assert is_k_distance_set(moved, 2)
