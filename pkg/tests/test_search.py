import random
from itertools import combinations

import numpy as np
import pytest

from distclass.catalog import TAU, build_entry, reference_icosahedron
from distclass.geometry import Configuration, distance_profile, similar
from distclass.search import (
    build_compat,
    canonical_points,
    classify,
    dodecahedra_on,
    enumerate_maximal,
    extend_to_max,
    pentagon_case,
    pentagon_points,
    type_points,
    witness_checks,
)

from conftest import random_isometry


@pytest.fixture(scope="module")
def certificate():
    return classify()


def test_entry_1_compatibility():
    g = build_compat(build_entry(1))
    assert len(g.candidates) == 6
    nd = g.candidates[0].nd
    allowed = (1.0, build_entry(1).d, nd)
    for i, j in combinations(range(6), 2):
        x = np.linalg.norm(g.candidates[i].array - g.candidates[j].array)
        fits = min(abs(x - a) for a in allowed) < 1e-9
        assert g.has_edge(i, j) == fits


@pytest.mark.parametrize("entry_id", [4, 9, 19, 20])
def test_compat_graph_is_simple_and_respects_nd_groups(entry_id):
    g = build_compat(build_entry(entry_id))
    diam = g.seed.diameter
    for i, a in enumerate(g.candidates):
        assert not g.has_edge(i, i)
        for j, b in enumerate(g.candidates):
            assert g.has_edge(i, j) == g.has_edge(j, i)
            if g.has_edge(i, j):
                assert (abs(a.nd - diam) < 1e-9 or abs(b.nd - diam) < 1e-9
                        or abs(a.nd - b.nd) < 1e-6)


def test_empty_seed_stays_at_five():
    out = extend_to_max(build_compat(build_entry(6)))
    assert out.max_size_reached == 5 and not out.witnesses


def test_icosahedron_seeds(certificate):
    reached = {k for k, v in certificate.per_seed.items() if v["icosahedron_found"]}
    assert reached == {8, 9, 24}


def test_no_seed_reaches_13(certificate):
    assert all(v["max_size"] <= 12 for v in certificate.per_seed.values())
    assert certificate.max_size == 12


def test_single_class_is_the_icosahedron(certificate):
    assert len(certificate.classes) == 1
    cl = certificate.classes[0]
    assert cl["size"] == 12 and cl["is_icosahedron"]
    assert similar(Configuration.from_array(cl["representative"]), reference_icosahedron())


def test_target_13_is_empty():
    cert = classify(target=13, include_pentagon=False)
    assert cert.classes == [] and cert.max_size == 12


@pytest.mark.parametrize("entry_id", [8, 9, 24])
def test_witnesses_are_sound_and_certified(entry_id):
    out = extend_to_max(build_compat(build_entry(entry_id)))
    assert out.witnesses
    for w in out.witnesses:
        strict = Configuration.from_array(w.array, eps=1e-10)
        assert distance_profile(strict).k <= 3
        checks = witness_checks(w)
        assert checks["alpha"] >= 5
        assert checks["contains_catalog_subset"]


@pytest.mark.parametrize("entry_id", [4, 8, 19, 20, 24])
def test_maximal_sets_do_not_depend_on_order(entry_id):
    g = build_compat(build_entry(entry_id))
    seed = g.seed.points.array

    def run(order):
        out = set()
        for members, _ in enumerate_maximal(seed, g.seed.distances, g.candidates, g.adj, order=order):
            out.add(frozenset(members))
        return out

    base = run(None)
    rnd = random.Random(entry_id)
    for _ in range(3):
        order = list(range(len(g.candidates)))
        rnd.shuffle(order)
        assert run(order) == base


def test_canonical_points_invariant(rng):
    ico = reference_icosahedron()
    q, t, _ = random_isometry(rng)
    moved = Configuration.from_array(3.0 * ico.array @ q + t)
    a, b = np.array(canonical_points(ico)), np.array(canonical_points(moved))
    # sign and ordering conventions may differ for symmetric sets; the shape may not
    assert similar(Configuration.from_array(a), Configuration.from_array(b))
    assert np.allclose(sorted(np.linalg.norm(a, axis=1)), sorted(np.linalg.norm(b, axis=1)))


# --- pentagon -------------------------------------------------------------------


def test_type2_points_lie_on_a_dodecahedron():
    r5 = pentagon_points()
    dodecas = dodecahedra_on(r5)
    assert len(dodecas) == 2
    for p in type_points(r5, 2):
        assert any(np.linalg.norm(d - p, axis=1).min() < 1e-7 for d in dodecas)


def test_pentagon_report():
    rep = pentagon_case()
    assert rep.type2_on_dodecahedron
    assert rep.dodecahedron_8subsets > 0 and rep.dodecahedron_8subsets_min_k >= 4
    assert rep.type1_reducible
    assert rep.axis_pairs_too_far
    assert not rep.outcome.icosahedron_found
    assert rep.outcome.max_size_reached < 12 and not rep.outcome.witnesses
    # the icosahedron does contain a pentagon, but also smaller noncoplanar seeds
    assert rep.max_size_any == 12


def test_type1_points_pattern():
    r5 = pentagon_points()
    t1 = type_points(r5, 1)
    assert t1
    for p in t1:
        d = np.sort(np.linalg.norm(r5 - p, axis=1))
        assert np.allclose(d[:2], 1) and np.allclose(d[2:4], TAU)
