import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmvar import kernels
from cmvar.distances import cayley_from_configuration, realizability
from cmvar.errors import DomainError, InputError
from cmvar.polygons import (
    collinear_witness,
    is_admissible,
    octic_scale,
    octic_value,
    polygon_edges,
    polygon_linkage,
    polygon_space_dimension,
    standardize,
    torus_point,
    unoriented_gram,
    wall_report,
    wall_report_bruteforce,
)
from cmvar.rigidity import enumerate_realizations, linkage_section


def test_standardize_examples():
    assert np.allclose(standardize([1, 1, 1, 1]), [0.25] * 4)
    assert np.allclose(standardize([2, 1, 1]), [0.5, 0.25, 0.25])
    with pytest.raises(InputError):
        standardize([0, 1, 1])
    with pytest.raises(InputError):
        standardize([1, 1])


def test_admissible_examples():
    assert is_admissible([0.25] * 4)
    assert not is_admissible([0.6, 0.2, 0.2])
    assert is_admissible([0.5, 0.25, 0.25])


def test_wall_examples():
    rep = wall_report([0.25] * 4)
    assert rep.on_wall
    assert (1, 1, -1, -1) in rep.witnesses
    assert rep.witness_count == 3

    rep = wall_report([0.3, 0.3, 0.2, 0.2])
    assert rep.on_wall
    assert (1, -1, 1, -1) in rep.witnesses

    rep = wall_report([0.35, 0.25, 0.22, 0.18])
    assert not rep.on_wall and rep.witnesses == []
    # smallest signed sum: 0.35 - 0.25 + 0.22 - 0.18 = 0.14 vs 0.35 - 0.25 - 0.22 + 0.18 = 0.06
    assert math.isclose(rep.distance_to_nearest_wall, 0.06, abs_tol=1e-12)


def test_degenerate_half_edge_witness():
    q = standardize([2, 1, 1])
    rep = wall_report(q)
    assert (1, -1, -1) in rep.witnesses


def test_wall_scan_size_limit():
    with pytest.raises(DomainError):
        wall_report(np.ones(31) / 31)


def test_wall_scan_matches_bruteforce(rng):
    for _ in range(200):
        n = int(rng.integers(3, 12))
        q = rng.integers(1, 6, size=n).astype(float)
        a = wall_report(q, tol=1e-9)
        b = wall_report_bruteforce(q, tol=1e-9)
        assert a.on_wall == b.on_wall
        assert a.witnesses == b.witnesses
        assert math.isclose(a.distance_to_nearest_wall, b.distance_to_nearest_wall, abs_tol=1e-12)


def test_wall_scan_backends_agree(rng):
    backs = kernels.backends()
    for _ in range(50):
        q = sorted(rng.integers(1, 9, size=int(rng.integers(3, 16))).astype(float), reverse=True)
        results = [mod.wall_scan(q, 1e-9, 50) for mod in backs.values()]
        for r in results[1:]:
            assert r[0] == results[0][0] and r[1] == results[0][1]
            assert sorted(r[2]) == sorted(results[0][2])


def test_witness_cap():
    rep = wall_report(np.ones(12), max_witnesses=5)
    assert len(rep.witnesses) == 5
    assert rep.witness_count == math.comb(12, 6) // 2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 9), min_size=3, max_size=10), st.randoms(use_true_random=False))
def test_wall_invariant_under_permutation(vals, rnd):
    q = np.array(vals, dtype=float)
    perm = list(range(len(q)))
    rnd.shuffle(perm)
    a = wall_report(q)
    b = wall_report(q[perm])
    assert a.on_wall == b.on_wall
    assert a.witness_count == b.witness_count
    assert math.isclose(a.distance_to_nearest_wall, b.distance_to_nearest_wall, abs_tol=1e-12)
    for eps in a.witnesses:
        assert abs(np.dot(eps, q)) <= 1e-9
        assert abs(np.dot(-np.array(eps), q)) <= 1e-9
        assert eps[0] == 1


def test_polygon_linkage_assembly():
    q = [0.4, 0.3, 0.2, 0.1]
    spec = polygon_linkage(q)
    assert spec.edges == ((1, 2), (2, 3), (3, 4), (1, 4))
    assert np.allclose([spec.sigma[e] for e in spec.edges], np.square(q))
    assert polygon_edges(3) == [(1, 2), (2, 3), (1, 3)]


def test_polygon_section_codim():
    assert linkage_section(polygon_linkage(standardize([5, 4, 3, 2, 1]))).codim == 4


def test_half_edge_linkage():
    q = standardize([2, 1, 1])
    spec = polygon_linkage(q)
    assert math.isclose(spec.sigma[(1, 2)], 0.25)


def test_polygon_space_dimension():
    assert [polygon_space_dimension(n) for n in (3, 4, 6)] == [0, 1, 3]
    with pytest.raises(DomainError):
        polygon_space_dimension(2)


def test_four_bar_not_isolated():
    q = standardize([0.31, 0.27, 0.23, 0.19])
    res = enumerate_realizations(polygon_linkage(q), seed=0, budget=40, require_laman=False)
    assert any("rank" in w for w in res.warnings)
    assert any("not Laman" in w for w in res.warnings)


def test_collinear_witness_on_walls(rng):
    cases = [[0.25] * 4, [0.3, 0.3, 0.2, 0.2], [0.5, 0.25, 0.25], [1, 2, 3, 4, 2]]
    for q in cases:
        q = standardize(q)
        rep = wall_report(q)
        assert rep.on_wall
        for eps in rep.witnesses:
            cfg = collinear_witness(q, eps)
            s = cayley_from_configuration(cfg)
            for k, (i, j) in enumerate(polygon_edges(len(q))):
                assert math.isclose(s[i, j], q[k] ** 2, rel_tol=1e-9, abs_tol=1e-15)
            r = realizability(s)
            assert r.realizable and r.min_rank == 1


def test_collinear_witness_input_checks():
    with pytest.raises(InputError):
        collinear_witness([0.5, 0.25, 0.25], [1, 0, 1])


def test_octic_example_point():
    assert octic_value(2, 0, 1, 0, 1) == 0
    assert octic_value(1, 1, 1, 1, 0.5) != 0


def test_torus_point_examples():
    assert np.allclose(torus_point(0.5, 0, 0, 0), (1.5, 0, 1, 0))
    with pytest.raises(DomainError):
        torus_point(1.5, 0, 0, 0)
    with pytest.raises(DomainError):
        torus_point(0.0, 0, 0, 0)


def test_torus_point_radii(rng):
    for _ in range(100):
        r = float(rng.uniform(0.05, 0.95))
        th, p1, p2 = rng.uniform(0, 2 * np.pi, 3)
        a, b, c, d = torus_point(r, th, p1, p2)
        assert math.isclose(a * a + b * b, (1 + r * math.cos(th)) ** 2, rel_tol=1e-12)
        assert math.isclose(c * c + d * d, (1 + r * math.sin(th)) ** 2, rel_tol=1e-12)


@pytest.mark.parametrize("r", [0.1, 0.5, 0.9])
def test_octic_vanishes_on_torus(r, rng):
    for _ in range(300):
        th, p1, p2 = rng.uniform(0, 2 * np.pi, 3)
        pt = torus_point(r, th, p1, p2)
        assert abs(octic_value(*pt, r)) <= 1e-9 * octic_scale(*pt)


def test_octic_nonzero_off_torus(rng):
    for _ in range(50):
        pt = rng.normal(size=4) * 3
        assert abs(octic_value(*pt, 0.5)) > 1e-6


def test_unoriented_gram():
    A = np.array([[1.0, 2.0], [0.0, 3.0]])
    S = unoriented_gram(A)
    assert np.array_equal(S, S.T)
    assert np.allclose(S, [[1, 1], [1, 3]])
    H = np.array([[1, 1j], [-1j, 2]])
    assert np.allclose(unoriented_gram(H), unoriented_gram(H).T)
