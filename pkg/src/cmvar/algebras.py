"""Quaternion and octonion arithmetic and the Gram constructions over C and H.

Quaternion matrices are stored as real arrays of shape ``(..., 4)`` holding
``(a, b, c, d)`` for ``a + bi + cj + dk``. The identification ``H = C^2``
is ``x = u + j v`` with ``u = a + bi`` and ``v = c - di``; left
multiplication by ``x`` is then the complex block ``[[u, -conj(v)], [v,
conj(u)]]``. Everything downstream (complex representation, the
``sigma`` map, quaternionic rank) goes through :func:`quat_to_complex_block`
and :func:`quat_matrix_to_complex`.

Scalar classes accept any real number type, so
:class:`fractions.Fraction` components give exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distances import DEFAULT_TOL, numerical_rank
from .errors import DegenerateConfiguration, InputError, OddRankAnomaly, SelfAdjointnessViolation


@dataclass(frozen=True)
class Quaternion:
    a: float = 0
    b: float = 0
    c: float = 0
    d: float = 0

    def __add__(self, other):
        other = _as_quat(other)
        return Quaternion(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_quat(other)
        return Quaternion(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self):
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        return quat_mul(self, _as_quat(other))

    def __rmul__(self, other):
        return quat_mul(_as_quat(other), self)

    def conj(self) -> "Quaternion":
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm2(self):
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    def components(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def isclose(self, other, tol: float = 1e-12) -> bool:
        other = _as_quat(other)
        return all(abs(x - y) <= tol for x, y in zip(self.components(), other.components()))

    def to_json(self) -> list:
        return [float(x) for x in self.components()]

    @classmethod
    def from_json(cls, doc) -> "Quaternion":
        if len(doc) != 4:
            raise InputError("a quaternion is a list [a, b, c, d]")
        return cls(*(float(x) for x in doc))


def _as_quat(x) -> Quaternion:
    if isinstance(x, Quaternion):
        return x
    if isinstance(x, (int, float)) or hasattr(x, "denominator"):
        return Quaternion(x, 0, 0, 0)
    raise TypeError(f"cannot interpret {x!r} as a quaternion")


def quat_mul(x: Quaternion, y: Quaternion) -> Quaternion:
    """Hamilton product with ``i^2 = j^2 = k^2 = ijk = -1``."""
    a1, b1, c1, d1 = x.components()
    a2, b2, c2, d2 = y.components()
    return Quaternion(
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def quat_to_complex_block(x: Quaternion) -> np.ndarray:
    """2x2 complex matrix of left multiplication by ``x`` in the basis (1, j)."""
    u = complex(x.a, x.b)
    v = complex(x.c, -x.d)
    return np.array([[u, -v.conjugate()], [v, u.conjugate()]])


def _uv(Q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    Q = np.asarray(Q, dtype=float)
    return Q[..., 0] + 1j * Q[..., 1], Q[..., 2] - 1j * Q[..., 3]


def quat_matrix_to_complex(Q) -> np.ndarray:
    """Replace each quaternion entry of an ``(m, k, 4)`` array by its 2x2 block."""
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 3 or Q.shape[-1] != 4:
        raise InputError("quaternion matrix must have shape (m, k, 4)")
    u, v = _uv(Q)
    m, k = u.shape
    out = np.empty((2 * m, 2 * k), dtype=complex)
    out[0::2, 0::2] = u
    out[0::2, 1::2] = -v.conj()
    out[1::2, 0::2] = v
    out[1::2, 1::2] = u.conj()
    return out


def quat_matmul(X, Y) -> np.ndarray:
    """Product of quaternion matrices of shapes ``(m, k, 4)`` and ``(k, l, 4)``."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    a1, b1, c1, d1 = (X[..., t][:, :, None] for t in range(4))
    a2, b2, c2, d2 = (Y[..., t][None, :, :] for t in range(4))
    out = np.stack(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ],
        axis=-1,
    )
    return out.sum(axis=1)


def quat_adjoint(X) -> np.ndarray:
    """Conjugate transpose of a quaternion matrix."""
    X = np.asarray(X, dtype=float)
    out = np.swapaxes(X, 0, 1).copy()
    out[..., 1:] *= -1
    return out


@dataclass(frozen=True)
class Octonion:
    """``x1 + x2 e`` with quaternion halves (Cayley-Dickson doubling)."""

    x1: Quaternion = Quaternion()
    x2: Quaternion = Quaternion()

    def __add__(self, other):
        return Octonion(self.x1 + other.x1, self.x2 + other.x2)

    def __sub__(self, other):
        return Octonion(self.x1 - other.x1, self.x2 - other.x2)

    def __neg__(self):
        return Octonion(-self.x1, -self.x2)

    def __mul__(self, other):
        if not isinstance(other, Octonion):
            other = Octonion(_as_quat(other))
        return oct_mul(self, other)

    def __rmul__(self, other):
        return oct_mul(Octonion(_as_quat(other)), self)

    def conj(self) -> "Octonion":
        return Octonion(self.x1.conj(), -self.x2)

    def norm2(self):
        return self.x1.norm2() + self.x2.norm2()

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    @property
    def real(self):
        return self.x1.a

    def components(self) -> tuple:
        return self.x1.components() + self.x2.components()

    def isclose(self, other, tol: float = 1e-12) -> bool:
        return all(abs(p - q) <= tol for p, q in zip(self.components(), other.components()))

    def to_json(self) -> list:
        return [self.x1.to_json(), self.x2.to_json()]

    @classmethod
    def from_json(cls, doc) -> "Octonion":
        if len(doc) != 2:
            raise InputError("an octonion is a pair of quaternions [[a,b,c,d],[a',b',c',d']]")
        return cls(Quaternion.from_json(doc[0]), Quaternion.from_json(doc[1]))

    @classmethod
    def real_number(cls, value) -> "Octonion":
        return cls(Quaternion(value))


E = Octonion(Quaternion(), Quaternion(1))


def oct_mul(x: Octonion, y: Octonion) -> Octonion:
    """``(x1 y1 - y2* x2) + (x2 y1* + y2 x1) e``."""
    return Octonion(
        x.x1 * y.x1 - y.x2.conj() * x.x2,
        x.x2 * y.x1.conj() + y.x2 * x.x1,
    )


def associator(x: Octonion, y: Octonion, z: Octonion) -> Octonion:
    """``(xy)z - x(yz)``."""
    return oct_mul(oct_mul(x, y), z) - oct_mul(x, oct_mul(y, z))


def _distinct_points(P: np.ndarray):
    flat = P.reshape(P.shape[0], -1)
    if P.shape[0] < 2:
        raise InputError("need at least two points")
    if np.all(flat == flat[0]):
        raise DegenerateConfiguration("all points coincide")


def hermitian_gram(points) -> np.ndarray:
    """Hermitian Gram matrix ``alpha_ij = <p_i - p_1, p_j - p_1>``, ``<z,w> = sum z_k conj(w_k)``.

    ``points`` is an ``(n, d)`` complex array (or ``(n,)`` for d = 1).
    """
    P = np.asarray(points, dtype=complex)
    if P.ndim == 1:
        P = P[:, None]
    if P.ndim != 2:
        raise InputError("points must be an (n, d) complex array")
    _distinct_points(P)
    X = P[1:] - P[0]
    return X @ X.conj().T


def hyper_hermitian_gram(points) -> np.ndarray:
    """Quaternionic Gram matrix ``a_ij = sum_k p_ik p_jk*`` after moving point 1 to 0.

    ``points`` has shape ``(n, d, 4)`` (or ``(n, 4)`` for d = 1); the result
    has shape ``(n-1, n-1, 4)``. This factor order makes the matrix
    self-adjoint and positive semi-definite of quaternionic rank at most d,
    and agrees with :func:`hermitian_gram` on complex inputs.
    """
    P = np.asarray(points, dtype=float)
    if P.ndim == 2:
        P = P[:, None, :]
    if P.ndim != 3 or P.shape[-1] != 4:
        raise InputError("quaternionic points must have shape (n, d, 4)")
    _distinct_points(P)
    X = P[1:] - P[0]
    return quat_matmul(X, quat_adjoint(X))


def is_self_adjoint_quat(A, tol: float = DEFAULT_TOL) -> bool:
    A = np.asarray(A, dtype=float)
    scale = max(1.0, float(np.abs(A).max(initial=0.0)))
    return bool(np.all(np.abs(A - quat_adjoint(A)) <= tol * scale))


def quaternionic_rank(A, tol: float = DEFAULT_TOL) -> int:
    """Half the complex rank of the 2m x 2m representation."""
    s = np.linalg.svd(quat_matrix_to_complex(A), compute_uv=False)
    return numerical_rank(s, tol) // 2


def sigma_map(A, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Apply ``(u, v) -> (conj(v), -conj(u))`` entrywise and expand to a complex skew matrix.

    On quaternions this is right multiplication by ``j^-1``, so the block of
    ``sigma(x)`` is ``block(x) @ [[0, 1], [-1, 0]] = [[conj(v), u], [-conj(u), v]]``
    and the complex rank is twice the quaternionic rank. The ``2m x 2m``
    result is assembled so that ``M^T = -M`` holds exactly (lower blocks are
    written as negated transposes of upper ones).
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 3 or A.shape[0] != A.shape[1] or A.shape[-1] != 4:
        raise InputError("expected a square quaternion matrix of shape (m, m, 4)")
    if not is_self_adjoint_quat(A, tol):
        raise SelfAdjointnessViolation("sigma map needs a hyper-Hermitian matrix")
    u, v = _uv(A)
    m = A.shape[0]
    M = np.zeros((2 * m, 2 * m), dtype=complex)
    for i in range(m):
        # diagonal entries are real: block [[0, a], [-a, 0]]
        a = A[i, i, 0]
        M[2 * i, 2 * i + 1] = a
        M[2 * i + 1, 2 * i] = -a
        for j in range(i + 1, m):
            blk = np.array([[v[i, j].conjugate(), u[i, j]], [-u[i, j].conjugate(), v[i, j]]])
            M[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = blk
            M[2 * j : 2 * j + 2, 2 * i : 2 * i + 2] = -blk.T
    return M


def pfaffian_rank(M, tol: float = DEFAULT_TOL) -> int:
    """Even numerical rank of a complex skew-symmetric matrix.

    Raises :class:`OddRankAnomaly` when the singular values fail to come in
    equal pairs, which cannot happen for a skew-symmetric input.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InputError("expected a square matrix")
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    top = s[0]
    pair_tol = max(tol, 1e-8) * top
    k = s.size - (s.size % 2)
    if np.any(np.abs(s[0:k:2] - s[1:k:2]) > pair_tol) or (s.size % 2 and s[-1] > pair_tol):
        raise OddRankAnomaly("singular values do not pair up; input is not skew-symmetric")
    r = numerical_rank(s, tol)
    return 2 * round(r / 2)


def is_quaternionic_real(M, tol: float = DEFAULT_TOL) -> bool:
    """Is ``M`` fixed by the anti-holomorphic involution on skew forms?

    The involution acts on each 2x2 block by a half-turn, a sign change on
    the anti-diagonal and complex conjugation; its fixed skew forms are
    exactly the images of hyper-Hermitian matrices under ``sigma``.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        return False
    scale = max(1.0, float(np.abs(M).max(initial=0.0)))
    if np.any(np.abs(M + M.T) > tol * scale):
        return False
    a = M[0::2, 0::2]
    b = M[0::2, 1::2]
    c = M[1::2, 0::2]
    d = M[1::2, 1::2]
    return bool(np.all(np.abs(a - d.conj()) <= tol * scale) and np.all(np.abs(b + c.conj()) <= tol * scale))


def oct_herm_det2(alpha, beta, x: Octonion):
    """Determinant ``alpha beta - x conj(x)`` of a 2x2 octonionic-Hermitian matrix."""
    return alpha * beta - x.norm2()


def oct_hermitian(alpha, beta, gamma, x: Octonion, y: Octonion, z: Octonion) -> list[list[Octonion]]:
    """Assemble ``[[alpha, z, y], [z~, beta, x], [y~, x~, gamma]]``."""
    r = Octonion.real_number
    return [
        [r(alpha), z, y],
        [z.conj(), r(beta), x],
        [y.conj(), x.conj(), r(gamma)],
    ]


def _oct_matmul(X, Y):
    n = len(X)
    zero = Octonion()
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = zero
            for k in range(n):
                acc = acc + oct_mul(X[i][k], Y[k][j])
            row.append(acc)
        out.append(row)
    return out


def _real_trace(X):
    return sum(X[i][i].real for i in range(len(X)))


def _check_oct_hermitian(A, tol):
    if len(A) != 3 or any(len(row) != 3 for row in A):
        raise InputError("expected a 3x3 octonion matrix")
    for i in range(3):
        diag = A[i][i]
        if any(abs(t) > tol for t in diag.components()[1:]):
            raise SelfAdjointnessViolation("diagonal entries must be real")
        for j in range(i + 1, 3):
            if not A[i][j].conj().isclose(A[j][i], tol):
                raise SelfAdjointnessViolation(f"entry ({j},{i}) is not the conjugate of ({i},{j})")


def oct_herm_det3(A, tol: float = DEFAULT_TOL):
    """Cubic norm of a 3x3 octonionic-Hermitian matrix via Jordan-product traces.

    ``det = Tr(A^3)/3 - Tr(A) Tr(A^2)/2 + Tr(A)^3/6`` with ``A^2 = A.A`` and
    ``A^3 = (A A^2 + A^2 A)/2``. Exact when the entries are fractions.
    """
    _check_oct_hermitian(A, tol)
    A2 = _oct_matmul(A, A)
    L = _oct_matmul(A, A2)
    R = _oct_matmul(A2, A)
    t1 = _real_trace(A)
    t2 = _real_trace(A2)
    t3 = (_real_trace(L) + _real_trace(R)) / 2
    return t3 / 3 - t1 * t2 / 2 + t1**3 / 6
