"""Planar linkages: Laman graphs, linkage sections, rigidity ranks, realizations.

Vertices are labelled ``1..n``; edges are unordered pairs stored as
``(i, j)`` with ``i < j`` and keep the order in which they were given (the
linkage-section chain follows that order).
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .distances import Configuration, numerical_rank, pair_index, pairs
from .errors import AllZeroSigma, DomainError, InputError, NotLaman, SolverBudgetExceeded
from .varieties import degree_cm2

log = logging.getLogger(__name__)

Edge = tuple[int, int]


def _norm_edge(e) -> Edge:
    i, j = (int(t) for t in e)
    if i == j:
        raise InputError(f"loop edge {e!r}")
    return (i, j) if i < j else (j, i)


def _normalize_edges(n: int, edges: Iterable) -> tuple[Edge, ...]:
    out = []
    seen = set()
    for e in edges:
        ij = _norm_edge(e)
        if not (1 <= ij[0] and ij[1] <= n):
            raise InputError(f"edge {ij} out of range for n={n}")
        if ij in seen:
            raise InputError(f"duplicate edge {ij}")
        seen.add(ij)
        out.append(ij)
    return tuple(out)


def is_connected(n: int, edges: Iterable[Edge]) -> bool:
    adj = {v: [] for v in range(1, n + 1)}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = {1}
    stack = [1]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


@dataclass(frozen=True)
class LinkageSpec:
    """Connected graph on ``n`` vertices with squared bar lengths ``sigma``."""

    n: int
    edges: tuple[Edge, ...]
    sigma: Mapping[Edge, float]

    def __post_init__(self):
        if self.n < 2:
            raise InputError("a linkage needs at least two vertices")
        edges = _normalize_edges(self.n, self.edges)
        sig = {}
        for key, v in dict(self.sigma).items():
            sig[_norm_edge(key)] = float(v)
        missing = [e for e in edges if e not in sig]
        if missing:
            raise InputError(f"missing squared lengths for edges {missing}")
        extra = [e for e in sig if e not in set(edges)]
        if extra:
            raise InputError(f"squared lengths given for non-edges {extra}")
        if any(v < 0 or not math.isfinite(v) for v in sig.values()):
            raise InputError("squared lengths must be finite and non-negative")
        if not is_connected(self.n, edges):
            raise DomainError("linkage graph must be connected")
        if all(sig[e] == 0 for e in edges):
            raise AllZeroSigma("all squared lengths vanish; no configuration realizes the linkage")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "sigma", {e: sig[e] for e in edges})

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "edges": [list(e) for e in self.edges],
            "sigma": {f"{i},{j}": v for (i, j), v in self.sigma.items()},
        }

    @classmethod
    def from_json(cls, doc: dict) -> "LinkageSpec":
        try:
            n = int(doc["n"])
            edges = [tuple(e) for e in doc["edges"]]
            raw = doc.get("sigma")
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad linkage document: {exc}") from exc
        if raw is None:
            raise InputError("linkage document needs a 'sigma' map")
        sigma = {}
        for key, v in raw.items():
            try:
                sigma[tuple(int(t) for t in key.split(","))] = float(v)
            except ValueError as exc:
                raise InputError(f"bad edge key {key!r}") from exc
        return cls(n, tuple(edges), sigma)


@dataclass(frozen=True)
class LamanResult:
    laman: bool
    reason: str
    witness: tuple[int, ...] | None = None

    def __bool__(self):
        return self.laman

    def to_json(self) -> dict:
        out = {"laman": self.laman, "reason": self.reason}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out


def _edges_inside(vertices: Iterable[int], edges: Iterable[Edge]) -> int:
    vs = set(vertices)
    return sum(1 for i, j in edges if i in vs and j in vs)


def is_laman(n: int, edges: Iterable) -> LamanResult:
    """Laman test by the (2,3)-pebble game.

    On failure the result carries either the edge-count discrepancy or a
    vertex subset spanning more than ``2k - 3`` edges.
    """
    edges = _normalize_edges(n, edges)
    if n < 2:
        raise InputError("need n >= 2")
    if len(edges) != 2 * n - 3:
        return LamanResult(False, f"edge count {len(edges)} != {2 * n - 3}")
    ok, _, reach = kernels.pebble_game(n, [(i - 1, j - 1) for i, j in edges])
    if ok:
        return LamanResult(True, "ok")
    witness = tuple(v + 1 for v in reach)
    k = len(witness)
    return LamanResult(
        False,
        f"vertices {list(witness)} span {_edges_inside(witness, edges)} > {2 * k - 3} edges",
        witness,
    )


def is_laman_exhaustive(n: int, edges: Iterable) -> LamanResult:
    """Reference oracle: check every vertex subset (only for n <= 20)."""
    edges = _normalize_edges(n, edges)
    if n > 20:
        raise DomainError("exhaustive subset scan is limited to n <= 20")
    if len(edges) != 2 * n - 3:
        return LamanResult(False, f"edge count {len(edges)} != {2 * n - 3}")
    mask = kernels.sparsity_violation(n, [(i - 1, j - 1) for i, j in edges])
    if mask < 0:
        return LamanResult(True, "ok")
    witness = tuple(v + 1 for v in range(n) if mask >> v & 1)
    k = len(witness)
    return LamanResult(
        False,
        f"vertices {list(witness)} span {_edges_inside(witness, edges)} > {2 * k - 3} edges",
        witness,
    )


@dataclass(frozen=True)
class LinkageSection:
    """Linear equations ``sigma_kl s_ij - sigma_ij s_kl = 0`` in Cayley coordinates.

    ``equations`` holds the pairs ``((i, j), (k, l))``; ``codim`` is
    ``|edges| - 1``.
    """

    n: int
    equations: tuple[tuple[Edge, Edge], ...]
    sigma: Mapping[Edge, float]
    codim: int

    def matrix(self) -> np.ndarray:
        """Coefficient rows over the ``C(n,2)`` Cayley coordinates."""
        rows = np.zeros((len(self.equations), self.n * (self.n - 1) // 2))
        for r, (e, f) in enumerate(self.equations):
            rows[r, pair_index(*e, self.n)] += self.sigma[f]
            rows[r, pair_index(*f, self.n)] -= self.sigma[e]
        return rows

    def residuals(self, s) -> np.ndarray:
        return self.matrix() @ np.asarray(getattr(s, "s", s), dtype=float)

    def to_json(self) -> dict:
        return {
            "codim": self.codim,
            "equations": [
                {"lhs": list(e), "rhs": list(f), "text": f"{self.sigma[f]!r}*s{e[0]}{e[1]} - {self.sigma[e]!r}*s{f[0]}{f[1]} = 0"}
                for e, f in self.equations
            ],
        }


def linkage_section(spec: LinkageSpec) -> LinkageSection:
    """Chain of ``|edges| - 1`` proportionality equations.

    Consecutive positive-length edges (in edge order) are paired; each
    zero-length edge is paired with the first positive edge, which turns
    its equation into ``s_ij = 0``.
    """
    positive = [e for e in spec.edges if spec.sigma[e] > 0]
    if not positive:
        raise AllZeroSigma("all squared lengths vanish")
    ref = positive[0]
    eqs = [(a, b) for a, b in zip(positive, positive[1:])]
    eqs += [(e, ref) for e in spec.edges if spec.sigma[e] == 0]
    return LinkageSection(spec.n, tuple(eqs), dict(spec.sigma), len(spec.edges) - 1)


def realization_bound(n: int) -> int:
    """Upper bound ``C(2n-4, n-2)/2`` on realizations of a generic planar Laman linkage."""
    return degree_cm2(n)


def distance_jacobian(points: np.ndarray, edges: Iterable[Edge] | None = None) -> np.ndarray:
    """Jacobian of squared distances (rows: pairs or given edges) w.r.t. points 2..n."""
    P = np.asarray(points, dtype=float)
    n, d = P.shape
    rows = list(edges) if edges is not None else pairs(n)
    J = np.zeros((len(rows), n * d))
    for r, (i, j) in enumerate(rows):
        diff = 2.0 * (P[i - 1] - P[j - 1])
        J[r, (i - 1) * d : i * d] = diff
        J[r, (j - 1) * d : j * d] = -diff
    return J[:, d:]


def rigidity_jacobian_rank(cfg: Configuration, tol: float = 1e-9) -> int:
    """Numerical rank of the squared-distance map with point 1 pinned at the origin.

    Generic planar configurations give ``2n - 3``; collinear ones ``n - 1``.
    """
    P = cfg.points - cfg.points[0]
    s = np.linalg.svd(distance_jacobian(P), compute_uv=False)
    return numerical_rank(s, tol)


@dataclass
class SolverStats:
    attempts: int = 0
    converged: int = 0
    deduplicated: int = 0
    last_new_attempt: int = -1
    saturated: bool = True

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class RealizationSet:
    """Congruence classes of realizations (reflections identified).

    Each representative has ``p_1 = 0``, the first point away from the
    origin on the positive x-axis and the first point off that axis in the
    upper half-plane.
    """

    representatives: list[Configuration]
    count: int
    bound: int
    solver_stats: SolverStats
    lower_bound_only: bool
    warnings: list[str] = field(default_factory=list)

    def max_residual(self, spec: LinkageSpec) -> float:
        worst = 0.0
        for cfg in self.representatives:
            for (i, j), sig in spec.sigma.items():
                d = cfg.points[i - 1] - cfg.points[j - 1]
                worst = max(worst, abs(float(d @ d) - sig) / max(1.0, sig))
        return worst

    def to_json(self) -> dict:
        return {
            "count": self.count,
            "bound": str(self.bound),
            "lower_bound_only": self.lower_bound_only,
            "congruence": "O(2): rotations, translations and reflections identified",
            "representatives": [c.points.tolist() for c in self.representatives],
            "solver_stats": self.solver_stats.to_json(),
            "warnings": list(self.warnings),
        }


def _canonicalize(P: np.ndarray, eps: float) -> np.ndarray:
    P = P - P[0]
    radii = np.hypot(P[:, 0], P[:, 1])
    idx = np.flatnonzero(radii > eps)
    if idx.size:
        k = idx[0]
        c, s = P[k] / radii[k]
        R = np.array([[c, s], [-s, c]])
        P = P @ R.T
    off = np.flatnonzero(np.abs(P[:, 1]) > eps)
    if off.size and P[off[0], 1] < 0:
        P[:, 1] = -P[:, 1]
    P[np.abs(P) < eps * 1e-3] = 0.0
    return P


def _newton(x0, idx_i, idx_j, sigma, scale, residual_tol, max_iter):
    """Damped Gauss-Newton on free coordinates of points 2..n (point 1 fixed at 0)."""
    n_free = x0.size // 2
    x = x0.copy()

    def resid(xv):
        P = np.vstack([np.zeros(2), xv.reshape(n_free, 2)])
        diff = P[idx_i] - P[idx_j]
        return np.einsum("ij,ij->i", diff, diff) - sigma, P, diff

    r, P, diff = resid(x)
    norm = np.linalg.norm(r / scale)
    for _ in range(max_iter):
        if np.max(np.abs(r) / scale) <= residual_tol:
            return x, True
        J = np.zeros((len(sigma), 2 * (n_free + 1)))
        rows = np.arange(len(sigma))
        J[rows, 2 * idx_i] = 2 * diff[:, 0]
        J[rows, 2 * idx_i + 1] = 2 * diff[:, 1]
        J[rows, 2 * idx_j] -= 2 * diff[:, 0]
        J[rows, 2 * idx_j + 1] -= 2 * diff[:, 1]
        J = J[:, 2:]
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        t = 1.0
        while t > 1e-6:
            xn = x + t * step
            rn, Pn, dn = resid(xn)
            nn = np.linalg.norm(rn / scale)
            if nn < norm:
                break
            t *= 0.5
        else:
            return x, False
        x, r, P, diff, norm = xn, rn, Pn, dn, nn
    return x, bool(np.max(np.abs(r) / scale) <= residual_tol)


def _thread_count(workers):
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("CMVAR_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def enumerate_realizations(
    spec: LinkageSpec,
    seed: int = 0,
    budget: int | None = None,
    dedup_tol: float = 1e-5,
    residual_tol: float = 1e-10,
    max_n: int = 7,
    max_iter: int = 100,
    workers: int | None = None,
    require_laman: bool = True,
    strict: bool = False,
    jacobian_tol: float = 1e-9,
) -> RealizationSet:
    """Multi-start Newton search for planar realizations of a linkage.

    Starts are drawn from ``numpy.random.default_rng(seed)`` before any
    solving, and converged solutions are canonicalized, sorted and then
    deduplicated, so the result depends only on ``(spec, seed, budget)``
    and not on ``workers``. Completeness cannot be certified: unless the
    count reaches the bound, ``lower_bound_only`` is set. When the last new
    class appeared in the second half of the budget the search is reported
    as unsaturated; with ``strict=True`` that raises
    :class:`SolverBudgetExceeded` carrying the partial result.
    """
    n = spec.n
    if n > max_n:
        raise DomainError(f"n={n} exceeds the configured maximum {max_n}")
    laman = is_laman(n, spec.edges)
    if require_laman and not laman:
        raise NotLaman(laman.reason)
    bound = realization_bound(n) if n >= 3 else 1
    if budget is None:
        budget = 200 * bound
    if budget < 1:
        raise InputError("budget must be positive")

    idx_i = np.array([i - 1 for i, _ in spec.edges])
    idx_j = np.array([j - 1 for _, j in spec.edges])
    sigma = np.array([spec.sigma[e] for e in spec.edges])
    scale = np.maximum(1.0, sigma)
    box = math.sqrt(max(sigma.max(), 1e-12)) * max(1.0, n / 2)

    rng = np.random.default_rng(seed)
    starts = rng.uniform(-box, box, size=(budget, 2 * (n - 1)))

    def solve(x0):
        return _newton(x0, idx_i, idx_j, sigma, scale, residual_tol, max_iter)

    nthreads = _thread_count(workers)
    if nthreads > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            results = list(pool.map(solve, starts))
    else:
        results = [solve(x0) for x0 in starts]

    stats = SolverStats(attempts=budget)
    eps = dedup_tol * 1e-2 * max(1.0, box)
    solutions = []
    for attempt, (x, ok) in enumerate(results):
        if not ok:
            continue
        stats.converged += 1
        P = np.vstack([np.zeros(2), x.reshape(n - 1, 2)])
        solutions.append((attempt, _canonicalize(P, eps)))

    # deterministic order: canonical coordinates, then attempt index
    solutions.sort(key=lambda t: (tuple(np.round(t[1].ravel(), 12)), t[0]))
    reps: list[np.ndarray] = []
    first_seen: list[int] = []
    for attempt, P in solutions:
        for k, Q in enumerate(reps):
            if np.max(np.abs(P - Q)) < dedup_tol * max(1.0, box):
                first_seen[k] = min(first_seen[k], attempt)
                break
        else:
            reps.append(P)
            first_seen.append(attempt)

    stats.deduplicated = len(reps)
    stats.last_new_attempt = max(first_seen) if first_seen else -1
    stats.saturated = stats.last_new_attempt < budget // 2

    warnings = []
    full_rank = 2 * n - 3
    for P in reps:
        J = distance_jacobian(P, spec.edges)
        r = numerical_rank(np.linalg.svd(J, compute_uv=False), jacobian_tol)
        if r < full_rank:
            warnings.append(
                f"rigidity matrix has rank {r} < {full_rank} at a realization: "
                "solutions are not isolated or sigma is not generic"
            )
            break
    if not laman:
        warnings.append(f"graph is not Laman ({laman.reason}); realization count is not meaningful")
    count = len(reps)
    if laman and count > bound:
        warnings.append(f"found {count} classes, more than the generic bound {bound}: sigma is not generic")

    result = RealizationSet(
        representatives=[Configuration(2, P) for P in reps],
        count=count,
        bound=bound,
        solver_stats=stats,
        lower_bound_only=count < bound,
        warnings=warnings,
    )
    for w in warnings:
        log.warning(w)
    if strict and result.lower_bound_only and not stats.saturated:
        raise SolverBudgetExceeded(
            f"budget of {budget} starts exhausted while new realizations were still appearing",
            partial=result,
        )
    return result
