import csv
import json

import pytest

from distclass.catalog import build_entry
from distclass.cli import main


def run(tmp_path, *argv):
    lines = []
    code = main(list(argv) + ["--out", str(tmp_path)], log=lines.append)
    return code, "\n".join(lines)


def test_catalog(tmp_path):
    code, _ = run(tmp_path, "catalog")
    assert code == 0
    rows = list(csv.DictReader(open(tmp_path / "catalog_validation.csv")))
    assert len(rows) == 27
    assert all(float(r["diff"]) < 1e-4 for r in rows)
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert set(manifest["digests"]) == {"catalog.json", "catalog_validation.csv"}


def test_catalog_single_entry(tmp_path):
    code, _ = run(tmp_path, "catalog", "--entry", "4")
    rows = list(csv.DictReader(open(tmp_path / "catalog_validation.csv")))
    assert code == 0 and [r["id"] for r in rows] == ["4"]


def test_catalog_override_names_bad_entry(tmp_path):
    bad = build_entry(5).to_json()
    bad["points"][0][0] += 0.01
    path = tmp_path / "bad.json"
    path.write_text(json.dumps([bad]))
    code, log = run(tmp_path, "catalog", "--override", str(path))
    assert code == 2 and "entry 5" in log


def test_candi_seed_1(tmp_path):
    code, _ = run(tmp_path, "candi", "--seed", "1")
    obj = json.loads((tmp_path / "candidates" / "seed_01.json").read_text())
    assert code == 0 and len(obj["groups"]) == 1
    assert len(obj["groups"][0]["points"]) == 6
    assert obj["groups"][0]["nd"] == pytest.approx(1.6667, abs=1e-3)


def test_candi_seed_6_is_empty(tmp_path):
    code, log = run(tmp_path, "candi", "--seed", "6")
    obj = json.loads((tmp_path / "candidates" / "seed_06.json").read_text())
    assert code == 0 and obj["groups"] == [] and "empty" in log


def test_candi_pentagon_points_to_classify(tmp_path):
    code, log = run(tmp_path, "candi", "--seed", "27")
    assert code == 2 and "classify --seed 27" in log


def test_candi_diff_paper(tmp_path):
    code, log = run(tmp_path, "candi", "--all", "--diff-paper")
    assert code == 0
    assert "coordinate_typo" in log and "-8.66030" in log
    rows = list(csv.reader(open(tmp_path / "table2.csv")))
    assert rows[0] == ["Y", "group_nd", "count"]
    # nine significant digits
    assert all(len(r[1].replace(".", "").lstrip("0")) <= 9 for r in rows[1:])
    diff = json.loads((tmp_path / "table2_diff.json").read_text())
    assert len(diff) == 26


def test_graphs(tmp_path):
    code, log = run(tmp_path, "graphs", "--n", "6", "--amax", "2")
    assert code == 0 and "0 graphs" in log
    code, _ = run(tmp_path, "graphs", "--n", "12", "--amax", "4")
    ledger = json.loads((tmp_path / "graphs_n12_a4.json").read_text())
    assert code == 0 and ledger["exhaustive"] and ledger["count"] == ledger["passed"] == 12


def test_graphs_budget_falls_back_to_flagged_sample(tmp_path):
    code, _ = run(tmp_path, "graphs", "--budget", "0", "--sample-branches", "5")
    ledger = json.loads((tmp_path / "graphs_n12_a4.json").read_text())
    assert code == 3 and ledger["sampled"] and not ledger["exhaustive"]


def test_classify(tmp_path):
    code, log = run(tmp_path, "classify")
    cert = json.loads((tmp_path / "certificate.json").read_text())
    assert code == 0 and cert["max_size"] == 12 and len(cert["classes"]) == 1
    assert cert["classes"][0]["seeds"] == [8, 9, 24]
    assert "1 similarity class at size 12: regular icosahedron; no size-13 set" in log


def test_classify_target_13(tmp_path):
    code, _ = run(tmp_path, "classify", "--target", "13")
    cert = json.loads((tmp_path / "certificate.json").read_text())
    assert code == 0 and cert["classes"] == []


def test_classify_pentagon_only(tmp_path):
    code, _ = run(tmp_path, "classify", "--seed", "27")
    assert code == 0
    assert (tmp_path / "pentagon.json").exists() and not (tmp_path / "certificate.json").exists()


def test_classify_budget(tmp_path):
    code, _ = run(tmp_path, "classify", "--budget", "0")
    assert code == 3 and not (tmp_path / "certificate.json").exists()


def test_reruns_have_identical_digests(tmp_path):
    digests = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        assert main(["classify", "--out", str(out)], log=lambda s: None) == 0
        digests.append(json.loads((out / "manifest.json").read_text())["digests"])
    assert digests[0] == digests[1]


def test_env_var_sets_output(tmp_path, monkeypatch):
    monkeypatch.setenv("DISTCLASS_OUT", str(tmp_path / "env"))
    assert main(["catalog", "--entry", "1"], log=lambda s: None) == 0
    assert (tmp_path / "env" / "catalog.json").exists()


def test_internal_error_code(tmp_path, monkeypatch):
    import distclass.cli as cli

    def boom(*a):
        raise RuntimeError("boom")

    monkeypatch.setitem(cli.COMMANDS, "catalog", boom)
    code, _ = run(tmp_path, "catalog")
    assert code == 4
