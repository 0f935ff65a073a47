import pytest

from distclass.candidates import classify_point
from distclass.catalog import build_entry
from distclass.table2 import EMPTY_ROWS, diff_all, diff_row, format_report, printed_groups, printed_rows


@pytest.fixture(scope="module")
def rows():
    return {r.seed: r for r in diff_all()}


def test_transcription_covers_the_printed_rows():
    assert sorted(printed_rows()) == sorted(set(range(1, 27)) - set(EMPTY_ROWS))


def test_no_unexplained_points(rows):
    assert not [d for r in rows.values() for d in r.discrepancies if d.kind == "unexplained"]


@pytest.mark.parametrize("seed", [1, 2, 5, 10, 11, 14, 15, 16, 17, 22, 26])
def test_clean_rows_match_exactly(rows, seed):
    assert rows[seed].strict_match and not rows[seed].discrepancies


@pytest.mark.parametrize("seed", EMPTY_ROWS)
def test_missing_rows_are_empty(rows, seed):
    assert rows[seed].computed == [] and printed_groups(seed) == []


def test_known_typos_are_reported(rows):
    def details(seed, kind):
        return [d for d in rows[seed].discrepancies if d.kind == kind]

    assert any(d.printed_point[2] == -8.6603 for d in details(19, "coordinate_typo"))
    assert any(d.printed_point[1] == 46709 for d in details(24, "coordinate_typo"))
    assert len(details(13, "nd_typo")) == 3
    assert details(21, "spurious") and details(8, "spurious")


def test_omitted_points_are_genuine(rows):
    for r in rows.values():
        seed = build_entry(r.seed)
        for d in r.discrepancies:
            if d.kind != "omitted":
                continue
            c = classify_point(d.computed_point, seed.points.array, seed.distances)
            assert c is not None and c.nd >= seed.diameter - 1e-9
            assert "FAILS" not in d.detail


def test_corrected_rows_match_up_to_orbits(rows):
    for seed, r in rows.items():
        if not r.kinds() & {"omitted", "spurious", "unexplained"}:
            assert r.orbit_match, seed


def test_spurious_points_fail_at_printed_precision(rows):
    for r in rows.values():
        seed = build_entry(r.seed)
        for d in r.discrepancies:
            if d.kind == "spurious":
                assert classify_point(d.printed_point, seed.points.array, seed.distances, 2e-3) is None


def test_report_mentions_every_row(rows):
    text = format_report(list(rows.values()))
    assert all(f"Y={s:2d}" in text for s in rows)


def test_single_row():
    r = diff_row(2)
    assert [n for _, n in r.computed] == [4, 1]
    assert [v for v, _ in r.computed] == pytest.approx([1.72474487, 2.43916], abs=1e-3)
