import numpy as np
import pytest

from cmvar.algebras import hyper_hermitian_gram, hermitian_gram
from cmvar.distances import CayleyVector, cayley_from_gram, gram_from_cayley, realizability
from cmvar.errors import DomainError, InputError, SelfAdjointnessViolation
from cmvar.lorentz import (
    Region,
    cone_classify,
    hyperbolic_distance,
    lorentz_L,
    lorentz_hermitian,
    lorentz_matrix,
    lorentz_quaternionic,
    realistic_by_cone,
    symmetric_basis,
)


def rank_k_psd(rng, m, k):
    X = rng.normal(size=(m, k))
    return X @ X.T


def random_orthogonal(rng, m):
    Q, R = np.linalg.qr(rng.normal(size=(m, m)))
    return Q * np.sign(np.diag(R))


@pytest.mark.parametrize("n", range(2, 9))
def test_identity_value(n):
    m = n - 1
    I = np.eye(m)
    assert np.isclose(lorentz_L(I, I), m - m * m)
    assert np.isclose(lorentz_hermitian(I, I), m - m * m)
    assert np.isclose(lorentz_quaternionic(I, I), m - m * m)


def test_traceless_positive():
    A = np.diag([1.0, -1.0])
    assert np.isclose(lorentz_L(A, A), 2.0)


def test_rank_one_on_light_cone(rng):
    for _ in range(20):
        A = rank_k_psd(rng, 4, 1)
        assert abs(lorentz_L(A, A)) <= 1e-9 * np.sum(A * A)


def test_size_mismatch():
    with pytest.raises(InputError):
        lorentz_L(np.eye(2), np.eye(3))


def test_symmetric_and_orthogonally_invariant(rng):
    for _ in range(50):
        m = int(rng.integers(2, 7))
        A = rng.normal(size=(m, m))
        A = A + A.T
        B = rng.normal(size=(m, m))
        B = B + B.T
        T = random_orthogonal(rng, m)
        assert np.isclose(lorentz_L(A, B), lorentz_L(B, A))
        tol = 1e-9 * np.linalg.norm(A) * np.linalg.norm(B)
        assert abs(lorentz_L(T @ A @ T.T, T @ B @ T.T) - lorentz_L(A, B)) <= tol


def test_two_by_two_polarization(rng):
    # on 2x2 forms L(A, A) = -2 det A, so L(A, B) polarizes the determinant
    for _ in range(20):
        A = rng.normal(size=(2, 2))
        A = A + A.T
        B = rng.normal(size=(2, 2))
        B = B + B.T
        det = np.linalg.det
        assert np.isclose(lorentz_L(A, B), -(det(A + B) - det(A) - det(B)))


def test_hermitian_restricts_to_real(rng):
    A = rank_k_psd(rng, 4, 3)
    B = rng.normal(size=(4, 4))
    B = B + B.T
    assert abs(lorentz_hermitian(A, B) - lorentz_L(A, B)) <= 1e-12 * max(1.0, abs(lorentz_L(A, B)))


def test_hermitian_rank_one(rng):
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    A = np.outer(z, z.conj())
    assert abs(lorentz_hermitian(A, A)) <= 1e-9 * np.sum(np.abs(A) ** 2)


def test_hermitian_requires_self_adjoint():
    with pytest.raises(SelfAdjointnessViolation):
        lorentz_hermitian(np.array([[1, 1j], [1j, 1]]), np.eye(2))


def test_quaternionic_rank_one(rng):
    pts = rng.normal(size=(5, 1, 4))
    pts[0] = 0
    A = hyper_hermitian_gram(pts)
    scale = np.sum(A * A)
    assert abs(lorentz_quaternionic(A, A)) <= 1e-9 * scale


def test_quaternionic_negative_on_higher_rank(rng):
    A = hyper_hermitian_gram(rng.normal(size=(5, 2, 4)))
    assert lorentz_quaternionic(A, A) < 0


def test_restriction_tower(rng):
    for _ in range(50):
        A = rng.normal(size=(4, 4))
        A = A + A.T
        B = rng.normal(size=(4, 4))
        B = B + B.T
        ref = lorentz_L(A, B)
        tol = 1e-12 * max(1.0, abs(ref))
        assert abs(lorentz_hermitian(A, B) - ref) <= tol
        assert abs(lorentz_quaternionic(A, B) - ref) <= tol


def test_quaternionic_complex_restriction(rng):
    pts = rng.normal(size=(5, 2)) + 1j * rng.normal(size=(5, 2))
    H = hermitian_gram(pts)
    Q = np.zeros(H.shape + (4,))
    Q[..., 0] = H.real
    Q[..., 1] = H.imag
    assert np.isclose(lorentz_quaternionic(Q, Q), lorentz_hermitian(H, H), rtol=1e-12)


def test_cone_examples():
    tri = np.array([[1.0, 0.3], [0.3, 0.8]])
    rep = cone_classify(tri)
    assert rep.region is Region.NEGATIVE_CONE and not rep.is_extremal_candidate
    col = np.outer([1.0, 2.0, -1.0], [1.0, 2.0, -1.0])
    rep = cone_classify(col)
    assert rep.region is Region.LIGHT_CONE and rep.is_extremal_candidate
    rep = cone_classify(np.diag([1.0, -1.0]))
    assert rep.region is Region.POSITIVE_REGION
    assert rep.to_json()["region"] == "PositiveRegion"


def test_cone_rejects_asymmetric():
    with pytest.raises(InputError):
        cone_classify(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_psd_forms_nonpositive(rng):
    for _ in range(300):
        m = int(rng.integers(2, 7))
        k = int(rng.integers(1, m + 1))
        A = rank_k_psd(rng, m, k)
        rep = cone_classify(A)
        if k == 1:
            assert rep.region is Region.LIGHT_CONE
        else:
            assert rep.region is Region.NEGATIVE_CONE


@pytest.mark.parametrize("n", range(3, 9))
def test_single_negative_direction(n):
    w = np.linalg.eigvalsh(lorentz_matrix(n))
    assert np.sum(w < -1e-9) == 1
    assert np.sum(w > 1e-9) == len(w) - 1


def test_symmetric_basis_orthonormal():
    B = symmetric_basis(4)
    G = np.array([[np.sum(a * b) for b in B] for a in B])
    assert np.allclose(G, np.eye(len(B)))


def test_hyperbolic_distance_diagonal_oracle():
    for t in (0.0, 0.3, 1.0, 2.5):
        B = np.diag([np.exp(t), np.exp(-t)])
        assert np.isclose(hyperbolic_distance(np.eye(2), B), t, atol=1e-7)


def test_hyperbolic_distance_scale_free(rng):
    A = rank_k_psd(rng, 3, 3)
    B = rank_k_psd(rng, 3, 3)
    d = hyperbolic_distance(A, B)
    assert np.isclose(hyperbolic_distance(3.0 * A, 0.2 * B), d)
    assert np.isclose(hyperbolic_distance(B, A), d)


def test_hyperbolic_distance_requires_negative_cone():
    with pytest.raises(DomainError):
        hyperbolic_distance(np.eye(2), np.diag([1.0, -1.0]))


def test_cone_matches_psd_on_rank_two_points(rng):
    # realistic (PSD rank 2) and fake (indefinite rank 2) points for n = 4, 5
    checked = {True: 0, False: 0}
    for _ in range(400):
        n = int(rng.choice([4, 5]))
        X = rng.normal(size=(n - 1, 2))
        # a small negative second eigenvalue keeps squared distances nonnegative
        signs = np.diag([1.0, rng.choice([1.0, -rng.uniform(0.01, 0.3)])])
        A = X @ signs @ X.T
        s = cayley_from_gram(A)
        if not s.is_nonnegative or s.is_zero:
            continue
        s = CayleyVector(n, s.s)
        psd = realizability(s).realizable
        assert psd == realistic_by_cone(gram_from_cayley(s))
        checked[psd] += 1
    assert checked[True] > 20 and checked[False] > 20
