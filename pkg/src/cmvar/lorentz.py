"""Lorentzian forms on symmetric, Hermitian and hyper-Hermitian Gram forms.

``L(A, B) = Tr(AB) - Tr(A) Tr(B)`` is negative on multiples of the identity
and positive on traceless forms. Positive semi-definite Gram forms sit in
the closed negative cone, with the rank-one ones (collinear
configurations) on the light cone ``L(A, A) = 0``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .algebras import is_self_adjoint_quat, quat_matrix_to_complex
from .distances import DEFAULT_TOL, numerical_rank
from .errors import DomainError, InputError, SelfAdjointnessViolation


class Region(str, enum.Enum):
    NEGATIVE_CONE = "NegativeCone"
    LIGHT_CONE = "LightCone"
    POSITIVE_REGION = "PositiveRegion"


def _same_square(A, B):
    if A.ndim < 2 or A.shape[0] != A.shape[1] or A.shape != B.shape:
        raise InputError(f"forms must be square and of equal size, got {A.shape} and {B.shape}")


def lorentz_L(A, B) -> float:
    """``Tr(AB) - Tr(A) Tr(B)`` for real symmetric forms."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    _same_square(A, B)
    return float(np.einsum("ij,ji->", A, B) - np.trace(A) * np.trace(B))


def lorentz_hermitian(A, B, tol: float = DEFAULT_TOL) -> float:
    """``Tr(A B*) - Tr(A) Tr(B*)`` on Hermitian forms (real-valued there)."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    _same_square(A, B)
    for M in (A, B):
        scale = max(1.0, float(np.abs(M).max(initial=0.0)))
        if np.any(np.abs(M - M.conj().T) > tol * scale):
            raise SelfAdjointnessViolation("Hermitian Lorentz form needs self-adjoint inputs")
    Bs = B.conj().T
    value = np.einsum("ij,ji->", A, Bs) - np.trace(A) * np.trace(Bs)
    return float(value.real)


def lorentz_quaternionic(A, B, tol: float = DEFAULT_TOL) -> float:
    """``Re Tr((AB + BA)/2) - Tr(A) Tr(B)`` on hyper-Hermitian forms.

    Inputs are ``(m, m, 4)`` quaternion arrays, or real symmetric ``(m, m)``
    arrays (embedded as real quaternions). Traces are taken through the
    complex representation, where the real part of a quaternionic trace is
    half the complex trace.
    """
    A = _as_quat_matrix(A)
    B = _as_quat_matrix(B)
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise InputError("forms must be square and of equal size")
    for M in (A, B):
        if not is_self_adjoint_quat(M, tol):
            raise SelfAdjointnessViolation("quaternionic Lorentz form needs self-adjoint inputs")
    CA = quat_matrix_to_complex(A)
    CB = quat_matrix_to_complex(B)
    sym = 0.25 * (np.einsum("ij,ji->", CA, CB) + np.einsum("ij,ji->", CB, CA))
    return float(sym.real - 0.25 * (np.trace(CA).real * np.trace(CB).real))


def _as_quat_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim == 2:
        out = np.zeros(M.shape + (4,))
        out[..., 0] = M
        return out
    if M.ndim == 3 and M.shape[-1] == 4:
        return M
    raise InputError("expected an (m, m) real or (m, m, 4) quaternion matrix")


@dataclass(frozen=True)
class LorentzReport:
    value: float
    region: Region
    is_extremal_candidate: bool

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "region": self.region.value,
            "is_extremal_candidate": self.is_extremal_candidate,
        }


def cone_classify(A, tol: float = DEFAULT_TOL) -> LorentzReport:
    """Sign region of ``L(A, A)`` relative to ``tol * |A|_F^2``; extremal when rank <= 1."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError("expected a square symmetric matrix")
    scale = max(float(np.abs(A).max(initial=0.0)), 1e-300)
    if np.any(np.abs(A - A.T) > tol * scale):
        raise InputError("expected a symmetric matrix")
    value = lorentz_L(A, A)
    thresh = tol * float(np.sum(A * A))
    if value < -thresh:
        region = Region.NEGATIVE_CONE
    elif value > thresh:
        region = Region.POSITIVE_REGION
    else:
        region = Region.LIGHT_CONE
    rank = numerical_rank(np.linalg.eigvalsh(A), tol)
    return LorentzReport(value, region, rank <= 1)


def symmetric_basis(m: int) -> list[np.ndarray]:
    """Orthonormal basis (Frobenius) of real symmetric m x m matrices."""
    basis = []
    for i in range(m):
        E = np.zeros((m, m))
        E[i, i] = 1.0
        basis.append(E)
    r = 1.0 / math.sqrt(2.0)
    for i in range(m):
        for j in range(i + 1, m):
            E = np.zeros((m, m))
            E[i, j] = E[j, i] = r
            basis.append(E)
    return basis


def lorentz_matrix(n: int) -> np.ndarray:
    """Gram matrix of ``L`` on the orthonormal symmetric basis for ``n`` points."""
    if n < 2:
        raise DomainError("need n >= 2")
    basis = symmetric_basis(n - 1)
    k = len(basis)
    G = np.empty((k, k))
    for a in range(k):
        for b in range(a, k):
            G[a, b] = G[b, a] = lorentz_L(basis[a], basis[b])
    return G


def hyperbolic_distance(A, B) -> float:
    """Distance between two negative-cone forms in the hyperboloid model.

    ``cosh(dist) = -L(A, B) / sqrt(L(A, A) L(B, B))``, which is scale-free,
    so no explicit normalization to ``L = -1`` is needed.
    """
    la = lorentz_L(A, A)
    lb = lorentz_L(B, B)
    if la >= 0 or lb >= 0:
        raise DomainError("both forms must lie strictly inside the negative cone")
    c = -lorentz_L(A, B) / math.sqrt(la * lb)
    if c < 0:
        raise DomainError("forms lie in opposite halves of the negative cone")
    return math.acosh(max(1.0, c))


def realistic_by_cone(A, tol: float = DEFAULT_TOL) -> bool:
    """Cone test for rank <= 2 forms: realistic iff in the closed negative cone.

    Sign is fixed so that the trace is non-negative (projective point).
    """
    A = np.asarray(A, dtype=float)
    if np.trace(A) < 0:
        A = -A
    return cone_classify(A, tol).region is not Region.POSITIVE_REGION
