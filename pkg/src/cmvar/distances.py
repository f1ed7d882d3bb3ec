"""Cayley (squared distance) and Gram coordinates for real point configurations.

Conventions
-----------
Points are labelled ``1..n``. Cayley coordinates ``s_ij`` (``i < j``) are
stored in lexicographic pair order. Gram coordinates use point 1 as the
origin: ``a_ij = <p_i - p_1, p_j - p_1>`` for ``2 <= i, j <= n``, held in an
``(n-1) x (n-1)`` array whose row 0 corresponds to point 2.

Arrays of :class:`fractions.Fraction` (object dtype) are accepted by the
coordinate transforms, which then run in exact arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateConfiguration,
    IdentityViolation,
    InputError,
    NotRealizable,
    RankExceedsTarget,
)

DEFAULT_TOL = 1e-9


def pairs(n: int) -> list[tuple[int, int]]:
    """All 1-based pairs ``(i, j)`` with ``i < j``, in storage order."""
    return list(itertools.combinations(range(1, n + 1), 2))


def pair_index(i: int, j: int, n: int) -> int:
    """Position of pair ``{i, j}`` (1-based, any order) in storage order."""
    if i == j:
        raise InputError(f"pair ({i},{j}) is not a distinct pair")
    if i > j:
        i, j = j, i
    if not (1 <= i and j <= n):
        raise InputError(f"pair ({i},{j}) out of range for n={n}")
    # pairs starting with 1..i-1 come first
    before = (i - 1) * n - (i - 1) * i // 2
    return before + (j - i - 1)


def n_from_pair_count(m: int) -> int:
    n = int(round((1 + math.sqrt(1 + 8 * m)) / 2))
    if n * (n - 1) // 2 != m or n < 2:
        raise InputError(f"{m} is not a binomial coefficient C(n,2) with n >= 2")
    return n


def numerical_rank(values: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    """Count of ``|values|`` above ``tol`` times the largest magnitude."""
    mags = np.abs(np.asarray(values, dtype=float))
    if mags.size == 0:
        return 0
    top = mags.max()
    if top == 0.0:
        return 0
    return int(np.count_nonzero(mags > tol * top))


@dataclass(frozen=True, eq=False)
class Configuration:
    """``n`` labelled points in ``R^dim`` (``points`` has shape ``(n, dim)``)."""

    dim: int
    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2:
            raise InputError("points must be a list of coordinate vectors")
        if self.dim < 1 or pts.shape[1] != self.dim:
            raise InputError(f"points must have dimension {self.dim}, got {pts.shape[1]}")
        if pts.shape[0] < 2:
            raise InputError("a configuration needs at least two points")
        if not np.all(np.isfinite(pts)):
            raise InputError("coordinates must be finite")
        if np.all(pts == pts[0]):
            raise DegenerateConfiguration("all points coincide")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @classmethod
    def from_points(cls, points) -> "Configuration":
        pts = np.array(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        return cls(pts.shape[1], pts)

    def to_json(self) -> dict:
        return {"dim": self.dim, "points": self.points.tolist()}

    @classmethod
    def from_json(cls, doc: dict) -> "Configuration":
        try:
            dim, points = int(doc["dim"]), doc["points"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad configuration document: {exc}") from exc
        try:
            return cls(dim, points)
        except (TypeError, ValueError) as exc:
            if isinstance(exc, (InputError, DegenerateConfiguration)):
                raise
            raise InputError(f"bad configuration document: {exc}") from exc


class CayleyVector:
    """The ``C(n,2)`` squared distances of ``n`` points.

    Construction validates non-negativity and rejects the all-zero vector.
    Points of the real Cayley-Menger variety that do not come from a
    configuration (for example images of indefinite Gram forms) can still be
    represented through :meth:`unchecked`; check :attr:`is_zero` and
    :attr:`is_nonnegative` on such vectors.
    """

    __slots__ = ("n", "s")

    def __init__(self, n: int, s: Sequence):
        self._set(n, s)
        if not self.is_nonnegative:
            raise InputError("squared distances must be non-negative")
        if self.is_zero:
            raise DegenerateConfiguration("all squared distances vanish")

    def _set(self, n, s):
        arr = np.asarray(s)
        if arr.dtype != object:
            arr = arr.astype(float)
        arr = arr.reshape(-1)
        if n < 2 or arr.shape[0] != n * (n - 1) // 2:
            raise InputError(f"expected {n * (n - 1) // 2} entries for n={n}, got {arr.shape[0]}")
        arr.setflags(write=False)
        self.n = n
        self.s = arr

    @classmethod
    def unchecked(cls, n: int, s: Sequence) -> "CayleyVector":
        obj = cls.__new__(cls)
        obj._set(n, s)
        return obj

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.s)

    @property
    def is_nonnegative(self) -> bool:
        return all(v >= 0 for v in self.s)

    @property
    def is_exact(self) -> bool:
        return self.s.dtype == object

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        if i == j:
            return 0
        return self.s[pair_index(i, j, self.n)]

    def __repr__(self):
        return f"CayleyVector(n={self.n}, s={self.s.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, CayleyVector):
            return NotImplemented
        return self.n == other.n and all(a == b for a, b in zip(self.s, other.s))

    def allclose(self, other: "CayleyVector", rtol: float = 1e-9, atol: float = 0.0) -> bool:
        return self.n == other.n and np.allclose(
            np.asarray(self.s, float), np.asarray(other.s, float), rtol=rtol, atol=atol
        )

    def distance_matrix(self) -> np.ndarray:
        """Symmetric ``n x n`` matrix of squared distances (zero diagonal)."""
        dtype = object if self.is_exact else float
        D = np.zeros((self.n, self.n), dtype=dtype)
        if self.is_exact:
            D[:] = Fraction(0)
        for (i, j), v in zip(pairs(self.n), self.s):
            D[i - 1, j - 1] = D[j - 1, i - 1] = v
        return D

    def scaled(self, factor) -> "CayleyVector":
        return CayleyVector(self.n, self.s * factor)

    def to_dict(self) -> dict:
        out = {}
        for (i, j), v in zip(pairs(self.n), self.s):
            out[f"{i},{j}"] = _json_number(v)
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "s": self.to_dict()}

    @classmethod
    def from_json(cls, doc: dict) -> "CayleyVector":
        try:
            n = int(doc["n"])
            raw = doc["s"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad Cayley vector document: {exc}") from exc
        if isinstance(raw, list):
            return cls(n, raw)
        values = [None] * (n * (n - 1) // 2)
        for key, v in raw.items():
            try:
                i, j = (int(t) for t in key.split(","))
            except ValueError as exc:
                raise InputError(f"bad pair key {key!r}") from exc
            if i >= j:
                raise InputError(f"pair key {key!r} must have i < j")
            values[pair_index(i, j, n)] = float(v)
        if any(v is None for v in values):
            raise InputError("Cayley vector document is missing pairs")
        return cls(n, values)


def _json_number(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else float(v)
    v = float(v)
    return int(v) if v.is_integer() and abs(v) < 2**53 else v


def cayley_from_configuration(cfg: Configuration) -> CayleyVector:
    """Squared Euclidean distances ``s_ij = |p_i - p_j|^2``."""
    p = cfg.points
    iu, ju = np.triu_indices(cfg.n, k=1)
    diff = p[iu] - p[ju]
    return CayleyVector(cfg.n, np.einsum("ij,ij->i", diff, diff))


def gram_from_configuration(cfg: Configuration) -> np.ndarray:
    """Gram matrix ``<p_i - p_1, p_j - p_1>`` computed directly from coordinates."""
    P = cfg.points[1:] - cfg.points[0]
    return P @ P.T


def gram_from_cayley(s: CayleyVector) -> np.ndarray:
    """Cosine-theorem transform ``a_ij = (s_1i + s_1j - s_ij) / 2``."""
    D = s.distance_matrix()
    d1 = D[0, 1:]
    return (d1[:, None] + d1[None, :] - D[1:, 1:]) / 2


def cayley_from_gram(a) -> CayleyVector:
    """Inverse transform: ``s_1i = a_ii`` and ``s_ij = a_ii + a_jj - 2 a_ij``.

    The result is not validated; an all-zero Gram form maps to the all-zero
    vector (the excluded all-coincident class), flagged by ``is_zero``.
    """
    A = np.asarray(a)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError("Gram form must be a square matrix")
    if not _is_symmetric(A):
        raise InputError("Gram form must be symmetric")
    m = A.shape[0]
    n = m + 1
    diag = [A[k, k] for k in range(m)]
    out = []
    for i, j in pairs(n):
        if i == 1:
            out.append(diag[j - 2])
        else:
            out.append(diag[i - 2] + diag[j - 2] - 2 * A[i - 2, j - 2])
    arr = np.array(out, dtype=object if A.dtype == object else float)
    return CayleyVector.unchecked(n, arr)


def _is_symmetric(A: np.ndarray) -> bool:
    if A.dtype == object:
        return all(A[i, j] == A[j, i] for i in range(A.shape[0]) for j in range(i))
    return np.allclose(A, A.T, rtol=1e-12, atol=1e-12 * max(1.0, float(np.abs(A).max(initial=0))))


def cayley_matrix(s: CayleyVector) -> np.ndarray:
    """Bordered ``(n+1) x (n+1)`` matrix: zero diagonal, unit border, ``s_ij`` elsewhere."""
    if s.is_zero:
        raise DegenerateConfiguration("all squared distances vanish")
    D = s.distance_matrix()
    S = np.zeros((s.n + 1, s.n + 1), dtype=D.dtype)
    if D.dtype == object:
        S[:] = Fraction(0)
    S[0, 1:] = 1
    S[1:, 0] = 1
    S[1:, 1:] = D
    return S


@dataclass(frozen=True)
class RankDetReport:
    rank_S: int
    rank_A: int
    det_S: float | Fraction
    det_A: float | Fraction


def _exact_rank_det(M) -> tuple[int, Fraction]:
    """Rank and determinant by Gaussian elimination over the rationals."""
    rows = [[Fraction(x) for x in row] for row in M]
    n = len(rows)
    cols = len(rows[0]) if rows else 0
    det = Fraction(1)
    rank = 0
    r = 0
    for c in range(cols):
        piv = next((k for k in range(r, n) if rows[k][c] != 0), None)
        if piv is None:
            det = Fraction(0)
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            det = -det
        pv = rows[r][c]
        det *= pv
        for k in range(r + 1, n):
            f = rows[k][c] / pv
            if f:
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        r += 1
        rank += 1
        if r == n:
            break
    if rank < min(n, cols):
        det = Fraction(0)
    return rank, det


def rank_det_check(s: CayleyVector, tol: float = DEFAULT_TOL, exact: bool = False) -> RankDetReport:
    """Verify ``rk S = 2 + rk A`` and ``det S = (-1)^n 2^(n-1) det A``.

    With ``exact=True`` the entries are converted to fractions (floats
    convert exactly) and both identities must hold with zero tolerance.
    Raises :class:`IdentityViolation` when an identity fails.
    """
    if tol <= 0 and not exact:
        raise InputError("tol must be positive")
    n = s.n
    sign = -1 if n % 2 else 1
    factor = sign * 2 ** (n - 1)
    if exact:
        sx = CayleyVector.unchecked(n, np.array([Fraction(v) for v in s.s], dtype=object))
        S = cayley_matrix(sx)
        A = gram_from_cayley(sx)
        rank_S, det_S = _exact_rank_det(S.tolist())
        rank_A, det_A = _exact_rank_det(A.tolist())
        if rank_S != rank_A + 2 or det_S != factor * det_A:
            raise IdentityViolation(
                f"exact identity failed: rank_S={rank_S}, rank_A={rank_A}, det_S={det_S}, det_A={det_A}"
            )
        return RankDetReport(rank_S, rank_A, det_S, det_A)

    S = cayley_matrix(s)
    A = gram_from_cayley(s)
    rank_S = numerical_rank(np.linalg.eigvalsh(S), tol)
    rank_A = numerical_rank(np.linalg.eigvalsh(A), tol)
    det_S = float(np.linalg.det(S))
    det_A = float(np.linalg.det(A))
    if rank_S != rank_A + 2:
        raise IdentityViolation(f"rank identity failed: rank_S={rank_S}, rank_A={rank_A}")
    if abs(det_S - factor * det_A) > tol * max(1.0, abs(det_S)):
        raise IdentityViolation(f"determinant identity failed: det_S={det_S!r}, det_A={det_A!r}")
    return RankDetReport(rank_S, rank_A, det_S, det_A)


@dataclass(frozen=True)
class RealizabilityReport:
    """Outcome of the PSD test on the Gram form.

    ``eigenvalues`` are sorted in decreasing order. ``certificate`` is the
    embedding dimension when realizable, otherwise the position (in
    ``eigenvalues``) of the most negative eigenvalue; ``certificate_kind``
    says which.
    """

    realizable: bool
    min_rank: int | None
    eigenvalues: tuple[float, ...]
    certificate: int
    certificate_kind: str

    def to_json(self) -> dict:
        return {
            "realizable": self.realizable,
            "min_rank": self.min_rank,
            "eigenvalues": list(self.eigenvalues),
            "certificate": self.certificate,
            "certificate_kind": self.certificate_kind,
        }


def _sorted_eigh(A: np.ndarray):
    w, V = np.linalg.eigh(np.asarray(A, dtype=float))
    order = np.argsort(w)[::-1]
    return w[order], V[:, order]


def realizability(s: CayleyVector, tol: float = DEFAULT_TOL) -> RealizabilityReport:
    """Is ``s`` the squared-distance vector of some real configuration?"""
    if s.is_zero:
        raise DegenerateConfiguration("all squared distances vanish")
    w, _ = _sorted_eigh(gram_from_cayley(s))
    scale = float(np.abs(w).max())
    floor = -tol * scale
    if w[-1] >= floor:
        r = numerical_rank(w, tol)
        return RealizabilityReport(True, r, tuple(w.tolist()), r, "embedding_dimension")
    return RealizabilityReport(False, None, tuple(w.tolist()), int(len(w) - 1), "negative_eigenvalue_index")


def embed(s: CayleyVector, d: int, tol: float = DEFAULT_TOL) -> Configuration:
    """Recover a configuration in ``R^d`` with squared distances ``s``.

    Diagonalizes the Gram form, keeps the ``d`` largest eigenpairs and
    returns ``p_1 = 0`` followed by the columns of ``D^(1/2) T``.
    Negative eigenvalues within tolerance are clamped to zero.
    """
    if d < 1:
        raise InputError("target dimension must be positive")
    rep = realizability(s, tol)
    if not rep.realizable:
        raise NotRealizable(
            f"Gram form has negative eigenvalue {rep.eigenvalues[rep.certificate]!r}"
        )
    if rep.min_rank > d:
        raise RankExceedsTarget(f"configuration needs dimension {rep.min_rank} > {d}")
    w, V = _sorted_eigh(gram_from_cayley(s))
    m = len(w)
    k = min(d, m)
    root = np.sqrt(np.clip(w[:k], 0.0, None))
    P = root[:, None] * V[:, :k].T  # k x (n-1)
    pts = np.zeros((s.n, d))
    pts[1:, :k] = P.T
    return Configuration(d, pts)


def relabel(s: CayleyVector, perm: Sequence[int]) -> CayleyVector:
    """Relabel points: new point ``k`` is old point ``perm[k-1]`` (1-based labels)."""
    perm = list(perm)
    if sorted(perm) != list(range(1, s.n + 1)):
        raise InputError("perm must be a permutation of 1..n")
    vals = [s[perm[i - 1], perm[j - 1]] for i, j in pairs(s.n)]
    arr = np.array(vals, dtype=object if s.is_exact else float)
    return CayleyVector(s.n, arr)
