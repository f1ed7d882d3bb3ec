import itertools
import json

import numpy as np
import pytest

from cmvar import kernels
from cmvar.distances import Configuration, cayley_from_configuration, realizability, CayleyVector
from cmvar.errors import AllZeroSigma, DomainError, InputError, NotLaman, SolverBudgetExceeded
from cmvar.rigidity import (
    LinkageSpec,
    distance_jacobian,
    enumerate_realizations,
    is_laman,
    is_laman_exhaustive,
    linkage_section,
    realization_bound,
    rigidity_jacobian_rank,
)
from cmvar.varieties import degree_cm2

TRIANGLE = [(1, 2), (1, 3), (2, 3)]
K4 = list(itertools.combinations(range(1, 5), 2))
TWO_TRIANGLES = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)]


def spec_from_points(points, edges):
    P = np.asarray(points, dtype=float)
    sigma = {e: float(np.sum((P[e[0] - 1] - P[e[1] - 1]) ** 2)) for e in edges}
    return LinkageSpec(len(P), tuple(edges), sigma)


def circle_intersections(a, ra2, b, rb2):
    d = np.linalg.norm(b - a)
    x = (ra2 - rb2 + d * d) / (2 * d)
    h2 = ra2 - x * x
    if h2 < 0:
        return []
    h = np.sqrt(h2)
    ex = (b - a) / d
    ey = np.array([-ex[1], ex[0]])
    return [a + x * ex + h * ey, a + x * ex - h * ey]


def two_triangle_flips(sigma):
    """All realizations of the two-triangle linkage, built by circle intersections."""
    p1 = np.zeros(2)
    p2 = np.array([np.sqrt(sigma[(1, 2)]), 0.0])
    p3 = circle_intersections(p1, sigma[(1, 3)], p2, sigma[(2, 3)])[0]
    if p3[1] < 0:
        p3 = p3 * [1, -1]
    return [np.array([p1, p2, p3, p4]) for p4 in circle_intersections(p2, sigma[(2, 4)], p3, sigma[(3, 4)])]


def test_laman_examples():
    assert is_laman(3, TRIANGLE).laman
    res = is_laman(4, K4)
    assert not res.laman and res.reason == "edge count 6 != 5"
    assert is_laman(4, TWO_TRIANGLES).laman
    assert is_laman_exhaustive(4, TWO_TRIANGLES).laman


def test_laman_witness_is_overbraced():
    # K4 plus a pendant vertex: 7 = 2*5-3 edges, but {1,2,3,4} spans 6 > 5
    edges = K4 + [(4, 5)]
    res = is_laman(5, edges)
    assert not res.laman
    w = set(res.witness)
    inside = sum(1 for i, j in edges if i in w and j in w)
    assert inside > 2 * len(w) - 3


def test_laman_rejects_bad_edges():
    with pytest.raises(InputError):
        is_laman(3, [(1, 1), (1, 2), (2, 3)])
    with pytest.raises(InputError):
        is_laman(3, [(1, 2), (2, 1), (2, 3)])
    with pytest.raises(InputError):
        is_laman(3, [(1, 2), (1, 3), (2, 4)])


@pytest.mark.parametrize("n", range(2, 7))
def test_pebble_game_matches_exhaustive_all_graphs(n, backend):
    all_pairs = list(itertools.combinations(range(n), 2))
    for edges in itertools.combinations(all_pairs, 2 * n - 3):
        ok, _, reach = backend.pebble_game(n, list(edges))
        assert ok == (backend.sparsity_violation(n, list(edges)) < 0)
        if not ok:
            inside = sum(1 for i, j in edges if i in reach and j in reach)
            assert inside > 2 * len(reach) - 3


def test_pebble_game_matches_exhaustive_n7_random(rng):
    all_pairs = list(itertools.combinations(range(1, 8), 2))
    for _ in range(300):
        idx = rng.choice(len(all_pairs), size=11, replace=False)
        edges = [all_pairs[k] for k in idx]
        assert is_laman(7, edges).laman == is_laman_exhaustive(7, edges).laman


def test_kernel_backends_agree(rng):
    backs = kernels.backends()
    all_pairs = list(itertools.combinations(range(8), 2))
    for _ in range(200):
        m = int(rng.integers(0, 14))
        idx = rng.choice(len(all_pairs), size=m, replace=False)
        edges = [all_pairs[k] for k in idx]
        results = {name: mod.pebble_game(8, edges) for name, mod in backs.items()}
        first = next(iter(results.values()))
        for r in results.values():
            assert bool(r[0]) == bool(first[0]) and r[1] == first[1] and list(r[2]) == list(first[2])


def test_linkage_spec_validation():
    with pytest.raises(DomainError):
        LinkageSpec(4, ((1, 2), (3, 4)), {(1, 2): 1.0, (3, 4): 1.0})
    with pytest.raises(AllZeroSigma):
        LinkageSpec(3, tuple(TRIANGLE), {e: 0.0 for e in TRIANGLE})
    with pytest.raises(InputError):
        LinkageSpec(3, tuple(TRIANGLE), {(1, 2): 1.0, (1, 3): -1.0, (2, 3): 1.0})
    with pytest.raises(InputError):
        LinkageSpec(3, tuple(TRIANGLE), {(1, 2): 1.0, (1, 3): 1.0})


def test_linkage_spec_json_round_trip():
    spec = LinkageSpec(4, tuple(TWO_TRIANGLES), {e: 1.0 + k for k, e in enumerate(TWO_TRIANGLES)})
    doc = json.loads(json.dumps(spec.to_json()))
    back = LinkageSpec.from_json(doc)
    assert back.edges == spec.edges and back.sigma == spec.sigma


def test_section_triangle():
    sec = linkage_section(LinkageSpec(3, tuple(TRIANGLE), {e: 1.0 for e in TRIANGLE}))
    assert sec.codim == 2
    M = sec.matrix()
    assert np.allclose(M, [[1, -1, 0], [0, 1, -1]])
    assert np.allclose(sec.residuals([5, 5, 5]), 0)


def test_section_zero_edge():
    sigma = {(1, 2): 0.0, (1, 3): 1.0, (2, 3): 1.0}
    sec = linkage_section(LinkageSpec(3, tuple(TRIANGLE), sigma))
    assert sec.codim == 2
    M = sec.matrix()
    assert np.linalg.matrix_rank(M) == 2
    # s12 = 0 and s13 = s23
    assert np.allclose(sec.residuals([0, 1, 1]), 0)
    assert not np.allclose(sec.residuals([1, 1, 1]), 0)


def test_section_polygon_chain():
    from cmvar.polygons import polygon_linkage

    sec = linkage_section(polygon_linkage([0.3, 0.25, 0.2, 0.15, 0.1]))
    assert sec.codim == 4
    assert len(sec.equations) == 4
    assert np.linalg.matrix_rank(sec.matrix()) == 4


def test_section_rank_random(rng):
    for _ in range(50):
        n = int(rng.integers(3, 8))
        all_pairs = list(itertools.combinations(range(1, n + 1), 2))
        path = [(k, k + 1) for k in range(1, n)]
        extra = [p for p in all_pairs if p not in path]
        chosen = path + [extra[k] for k in rng.choice(len(extra), size=int(rng.integers(0, len(extra) + 1)), replace=False)]
        spec = LinkageSpec(n, tuple(chosen), {e: float(rng.uniform(0.1, 3)) for e in chosen})
        sec = linkage_section(spec)
        assert np.linalg.matrix_rank(sec.matrix()) == len(chosen) - 1 == sec.codim


def test_realization_bound_values():
    assert realization_bound(3) == 1
    assert realization_bound(4) == 3
    assert realization_bound(6) == 35
    for n in range(3, 25):
        assert realization_bound(n) == degree_cm2(n)


def test_jacobian_rank_examples():
    tri = Configuration.from_points([[0, 0], [1, 0], [0.3, 0.9]])
    assert rigidity_jacobian_rank(tri) == 3
    col = Configuration.from_points([[0, 0], [1, 0], [2, 0]])
    assert rigidity_jacobian_rank(col) == 2
    gen = Configuration.from_points(np.random.default_rng(5).normal(size=(5, 2)))
    assert rigidity_jacobian_rank(gen) == 7


def test_jacobian_matches_finite_differences(rng):
    P = rng.normal(size=(4, 2))
    P[0] = 0
    J = distance_jacobian(P)
    h = 1e-6
    base = cayley_from_configuration(Configuration.from_points(P)).s
    for col in range(J.shape[1]):
        Q = P.copy().ravel()
        Q[2 + col] += h
        moved = cayley_from_configuration(Configuration.from_points(Q.reshape(4, 2))).s
        assert np.allclose((moved - base) / h, J[:, col], atol=1e-4)


def test_enumerate_triangle():
    res = enumerate_realizations(LinkageSpec(3, tuple(TRIANGLE), {e: 1.0 for e in TRIANGLE}), seed=1)
    assert res.count == 1 and res.bound == 1
    assert not res.lower_bound_only
    P = res.representatives[0].points
    assert np.allclose(P[1], [1, 0], atol=1e-9)
    assert P[2, 1] > 0


def test_enumerate_violated_triangle_inequality():
    spec = LinkageSpec(3, tuple(TRIANGLE), {(1, 2): 1.0, (1, 3): 1.0, (2, 3): 9.0})
    res = enumerate_realizations(spec, seed=0)
    assert res.count == 0
    assert not realizability(CayleyVector(3, [1, 1, 9])).realizable


def test_enumerate_two_triangles_against_flip_construction():
    sigma = {(1, 2): 1.0, (1, 3): 1.3, (2, 3): 0.9, (2, 4): 1.1, (3, 4): 0.7}
    spec = LinkageSpec(4, tuple(TWO_TRIANGLES), sigma)
    res = enumerate_realizations(spec, seed=3)
    assert res.count == 2 and res.bound == 3
    assert res.max_residual(spec) <= 1e-8
    expected = two_triangle_flips(sigma)
    assert len(expected) == 2
    for P in expected:
        assert any(np.allclose(P, R.points, atol=1e-6) for R in res.representatives)


def test_enumerate_generic_five_points(rng):
    P = rng.normal(size=(5, 2))
    edges = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)]
    spec = spec_from_points(P, edges)
    res = enumerate_realizations(spec, seed=0)
    assert 1 <= res.count <= res.bound == 10
    assert res.max_residual(spec) <= 1e-8
    for R in res.representatives:
        assert rigidity_jacobian_rank(R) == 7
    again = enumerate_realizations(spec, seed=99)
    assert again.count == res.count
    assert not res.warnings


def test_enumerate_deterministic_across_workers(rng):
    spec = spec_from_points(rng.normal(size=(4, 2)), TWO_TRIANGLES)
    a = enumerate_realizations(spec, seed=5, workers=1).to_json()
    b = enumerate_realizations(spec, seed=5, workers=4).to_json()
    assert json.dumps(a) == json.dumps(b)


def test_enumerate_requires_laman():
    edges = [(1, 2), (2, 3), (3, 4), (1, 4)]
    spec = LinkageSpec(4, tuple(edges), {e: 1.0 for e in edges})
    with pytest.raises(NotLaman):
        enumerate_realizations(spec)


def test_enumerate_max_n():
    n = 8
    edges = [(1, 2)] + [(i, j) for j in range(3, n + 1) for i in (j - 2, j - 1)]
    spec = LinkageSpec(n, tuple(edges), {e: 1.0 for e in edges})
    with pytest.raises(DomainError):
        enumerate_realizations(spec)


def test_enumerate_budget_exhaustion_is_reported():
    sigma = {(1, 2): 1.0, (1, 3): 1.3, (2, 3): 0.9, (2, 4): 1.1, (3, 4): 0.7}
    spec = LinkageSpec(4, tuple(TWO_TRIANGLES), sigma)
    with pytest.raises(SolverBudgetExceeded) as info:
        enumerate_realizations(spec, seed=3, budget=1, strict=True)
    partial = info.value.partial
    assert partial.lower_bound_only and partial.count == 1
    relaxed = enumerate_realizations(spec, seed=3, budget=1)
    assert relaxed.count == 1 and not relaxed.solver_stats.saturated
