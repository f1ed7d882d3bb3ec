"""Planar polygon linkages: admissibility, walls and the octic torus.

Edge-length vectors hold lengths ``q_i`` (not squared). Edge ``i`` joins
vertex ``i`` to ``i+1`` and edge ``n`` closes the cycle back to vertex 1.
Squaring to ``sigma`` happens only in :func:`polygon_linkage`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .distances import DEFAULT_TOL, Configuration
from .errors import DomainError, InputError
from .rigidity import LinkageSpec

MAX_WALL_N = 30


def _as_lengths(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.ndim != 1 or q.size < 3:
        raise InputError("an edge-length vector needs at least three entries")
    if not np.all(np.isfinite(q)):
        raise InputError("edge lengths must be finite")
    return q


def standardize(q) -> np.ndarray:
    """Scale positive lengths to sum 1."""
    q = _as_lengths(q)
    if np.any(q <= 0):
        raise InputError("edge lengths must be positive")
    return q / q.sum()


def is_admissible(q, tol: float = DEFAULT_TOL) -> bool:
    """Closed polygon inequality: no edge exceeds half the perimeter."""
    q = _as_lengths(q)
    return bool(q.max() <= 0.5 * q.sum() * (1 + tol))


@dataclass(frozen=True)
class WallReport:
    on_wall: bool
    witnesses: list[tuple[int, ...]]
    witness_count: int
    distance_to_nearest_wall: float

    def to_json(self) -> dict:
        return {
            "on_wall": self.on_wall,
            "witnesses": [list(w) for w in self.witnesses],
            "witness_count": self.witness_count,
            "distance_to_nearest_wall": self.distance_to_nearest_wall,
        }


def wall_report(q, tol: float = DEFAULT_TOL, max_witnesses: int = 1000) -> WallReport:
    """Exhaustive branch-and-bound search for ``sum eps_i q_i = 0``.

    Sign vectors are taken up to global sign and normalized so that
    ``eps_1 = +1``. At most ``max_witnesses`` are listed; ``witness_count``
    is the total.
    """
    q = _as_lengths(q)
    n = q.size
    if n > MAX_WALL_N:
        raise DomainError(f"wall scan is limited to n <= {MAX_WALL_N}")
    order = np.argsort(-q, kind="stable")
    qs = [float(x) for x in q[order]]
    best, count, masks = kernels.wall_scan(qs, float(tol), int(max_witnesses))
    witnesses = []
    for mask in masks:
        eps = [0] * n
        for pos, orig in enumerate(order):
            eps[orig] = -1 if (mask >> pos) & 1 else 1
        if eps[0] < 0:
            eps = [-e for e in eps]
        witnesses.append(tuple(eps))
    witnesses.sort(reverse=True)
    return WallReport(count > 0, witnesses, int(count), float(best))


def wall_report_bruteforce(q, tol: float = DEFAULT_TOL) -> WallReport:
    """Reference scan over all ``2^(n-1)`` sign classes (small n only)."""
    q = _as_lengths(q)
    n = q.size
    if n > 20:
        raise DomainError("brute-force wall scan is limited to n <= 20")
    best = math.inf
    witnesses = []
    for mask in range(1 << (n - 1)):
        eps = (1,) + tuple(-1 if (mask >> k) & 1 else 1 for k in range(n - 1))
        val = abs(float(np.dot(eps, q)))
        best = min(best, val)
        if val <= tol:
            witnesses.append(eps)
    witnesses.sort(reverse=True)
    return WallReport(bool(witnesses), witnesses, len(witnesses), best)


def polygon_edges(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(1, n)] + [(1, n)]


def polygon_linkage(q) -> LinkageSpec:
    """Cycle ``1-2-...-n-1`` with squared lengths ``q_i^2``."""
    q = _as_lengths(q)
    n = q.size
    edges = polygon_edges(n)
    sigma = {e: float(qi) ** 2 for e, qi in zip(edges, q)}
    return LinkageSpec(n, tuple(edges), sigma)


def polygon_space_dimension(n: int) -> int:
    """Dimension of the polygon space for wall-avoiding ``q``."""
    if n < 3:
        raise DomainError("need n >= 3")
    return n - 3


def collinear_witness(q, eps) -> Configuration:
    """Collinear polygon with signed steps ``eps_i q_i`` along the x-axis.

    Closes up exactly when ``sum eps_i q_i = 0``.
    """
    q = _as_lengths(q)
    eps = np.asarray(eps, dtype=float)
    if eps.shape != q.shape or not np.all(np.abs(eps) == 1):
        raise InputError("eps must be a +-1 vector matching q")
    x = np.concatenate([[0.0], np.cumsum(eps * q)[:-1]])
    return Configuration(2, np.column_stack([x, np.zeros_like(x)]))


def octic_value(a, b, c, d, r) -> float:
    """Left minus right side of the octic vanishing on the embedded 3-torus."""
    rho = a * a + b * b + c * c + d * d
    bracket = rho * rho - 2 * r * r * rho + (2 - r * r) ** 2
    return bracket * bracket - 64 * (a * a + b * b) * (c * c + d * d)


def octic_scale(a, b, c, d) -> float:
    """Natural magnitude ``max(1, |(a,b,c,d)|)^8`` for relative checks."""
    return max(1.0, a * a + b * b + c * c + d * d) ** 4


def torus_point(r, theta, phi1, phi2) -> tuple[float, float, float, float]:
    """Point ``(lam cos phi1, lam sin phi1, mu cos phi2, mu sin phi2)`` on the torus.

    ``lam = 1 + r cos theta`` and ``mu = 1 + r sin theta``.
    """
    if not 0 < r < 1:
        raise DomainError("torus radius must lie in (0, 1)")
    lam = 1 + r * math.cos(theta)
    mu = 1 + r * math.sin(theta)
    return (lam * math.cos(phi1), lam * math.sin(phi1), mu * math.cos(phi2), mu * math.sin(phi2))


def unoriented_gram(A) -> np.ndarray:
    """Symmetric part ``(A + A^T)/2``; forgets the orientation of a planar Gram form."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError("expected a square matrix")
    return 0.5 * (A + A.T)
