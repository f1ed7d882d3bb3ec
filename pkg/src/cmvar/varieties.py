"""Closed-form invariants of the rank-stratified varieties G_K^{d,n}.

Family ``R`` is the Cayley-Menger (symmetric determinantal) family, ``C``
the general determinantal family of Hermitian Gram matrices, ``H`` the
skew-symmetric (Pfaffian) family coming from hyper-Hermitian Gram
matrices, and ``O`` the octonionic enclave, which only exists for a handful
of ``(d, n)``.

Every formula is evaluated in exact integer/rational arithmetic.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import DomainError, InputError, NonIntegerProduct, UnsupportedFamily


class Family(str, enum.Enum):
    R = "R"
    C = "C"
    H = "H"
    O = "O"


OCTONIONIC_CASES = frozenset({(1, 3), (2, 3), (1, 4), (2, 4), (3, 4)})
OCTONIONIC_AMBIENT = {3: 9, 4: 26}


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero for negative or out-of-range arguments."""
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


@dataclass(frozen=True)
class VarietyId:
    family: Family
    d: int
    n: int

    def __post_init__(self):
        try:
            object.__setattr__(self, "family", Family(self.family))
        except ValueError as exc:
            raise InputError(f"unknown family {self.family!r}") from exc
        if self.n < 2:
            raise DomainError("need n >= 2")
        if not 1 <= self.d <= self.n - 1:
            raise DomainError(f"rank bound d={self.d} must lie in 1..{self.n - 1}")
        if self.family is Family.O and (self.d, self.n) not in OCTONIONIC_CASES:
            raise DomainError(f"octonionic varieties exist only for (d,n) in {sorted(OCTONIONIC_CASES)}")

    def to_json(self) -> dict:
        return {"family": self.family.value, "d": self.d, "n": self.n}


def _exact_int(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise NonIntegerProduct(f"{what} evaluated to non-integer {value}")
    return int(value)


def dimension(v: VarietyId) -> int:
    """Complex dimension of G_K^{d,n}."""
    d, n = v.d, v.n
    if v.family is Family.R:
        return d * (n - 1) - binom(d, 2) - 1
    if v.family is Family.C:
        return 2 * d * (n - 1) - d * d - 1
    if v.family is Family.H:
        return 4 * d * (n - 1) - d * (2 * d + 1) - 1
    raise UnsupportedFamily("dimensions of octonionic varieties are not provided")


def ambient_dimension(v: VarietyId) -> int:
    """Dimension k(n) of the projective space containing G_K^{d,n}."""
    n = v.n
    if v.family is Family.R:
        return binom(n, 2) - 1
    if v.family is Family.C:
        return (n - 1) ** 2 - 1
    if v.family is Family.H:
        return binom(2 * n - 2, 2) - 1
    return OCTONIONIC_AMBIENT[n]


def _cm_degree(d: int, n: int) -> Fraction:
    out = Fraction(1)
    for k in range(0, n - d - 1):
        out *= Fraction(binom(n - 1 + k, n - d - 1 - k), binom(2 * k + 1, k))
    return out


def _hermitian_degree(d: int, n: int) -> Fraction:
    out = Fraction(1)
    for k in range(0, n - d - 1):
        out *= Fraction(binom(n - 1 + k, d), binom(d + k, k))
    return out


def pfaffian_degree_both(d: int, n: int) -> tuple[Fraction, Fraction]:
    """Both product expressions for the degree of PG^{d,n}.

    The first is the binomial product with the ``2^(2n-2d-3)`` prefactor,
    the second the double product over ``1 <= i <= j <= 2n-2d-3``.
    They are evaluated independently so callers can compare them.
    """
    if not 1 <= d <= n - 2:
        raise DomainError(f"need 1 <= d <= n-2, got d={d}, n={n}")
    m = 2 * n - 2 * d - 3
    first = Fraction(1, 2**m)
    for i in range(0, 2 * n - 2 * d - 3):
        first *= Fraction(binom(2 * n - 2 + i, 2 * d + 2 * i + 1), binom(2 * i + 1, i))
    second = Fraction(1)
    for i in range(1, m + 1):
        for j in range(i, m + 1):
            second *= Fraction(2 * d + i + j, i + j)
    return first, second


def degree(v: VarietyId) -> int:
    """Degree of G_K^{d,n} (1 when d = n-1: the ambient space itself)."""
    if v.family is Family.O:
        raise UnsupportedFamily("no degree formula for octonionic varieties")
    if v.d == v.n - 1:
        return 1
    if v.family is Family.R:
        value = _cm_degree(v.d, v.n)
    elif v.family is Family.C:
        value = _hermitian_degree(v.d, v.n)
    else:
        value = pfaffian_degree_both(v.d, v.n)[0]
    return _exact_int(value, f"degree{tuple(v.to_json().values())}")


def degree_cm2(n: int) -> int:
    """Degree of the planar Cayley-Menger variety: ``C(2n-4, n-2) / 2``."""
    if n < 3:
        raise DomainError("need n >= 3")
    return _exact_int(Fraction(binom(2 * n - 4, n - 2), 2), "degree_cm2")


def sectional_genus(n: int) -> Fraction:
    """Genus of a generic curve section of CM^{2,n}: ``1 + (n-4)/4 C(2n-4, n-2)``."""
    if n < 4:
        raise DomainError("sectional genus is defined for n >= 4")
    g = 1 + Fraction(n - 4, 4) * binom(2 * n - 4, n - 2)
    _exact_int(g, "sectional_genus")
    return g


def dual(v: VarietyId) -> VarietyId:
    """Projective dual: same family and n, rank bound ``n - d - 1``."""
    if v.d == v.n - 1:
        raise DomainError("the ambient space has no dual variety in this family")
    return VarietyId(v.family, v.n - v.d - 1, v.n)


@dataclass(frozen=True)
class VarietyInvariants:
    ambient_dim: int
    dim: int | None
    degree: int | None
    sectional_genus: Fraction | None
    dual_d: int | None
    singular_locus_d: int

    def to_json(self) -> dict:
        genus = self.sectional_genus
        return {
            "dim": self.dim,
            "ambient": self.ambient_dim,
            "degree": None if self.degree is None else str(self.degree),
            "genus": None if genus is None else int(genus),
            "dual_d": self.dual_d,
        }


def invariants(v: VarietyId) -> VarietyInvariants:
    """Collect every invariant available for ``v``."""
    octo = v.family is Family.O
    genus = sectional_genus(v.n) if (v.family is Family.R and v.d == 2 and v.n >= 4) else None
    return VarietyInvariants(
        ambient_dim=ambient_dimension(v),
        dim=None if octo else dimension(v),
        degree=None if octo else degree(v),
        sectional_genus=genus,
        dual_d=v.n - v.d - 1 if v.d <= v.n - 2 else None,
        singular_locus_d=v.d - 1,
    )


class Source(str, enum.Enum):
    GRAM = "gram"
    CAYLEY = "cayley"


@dataclass(frozen=True)
class MinorSystem:
    """Index sets of the square submatrices whose determinants cut out a variety.

    Each minor is ``(rows, cols)`` with 0-based positions in the Gram matrix
    (row 0 is point 2) or in the bordered Cayley matrix (row 0 is the border).
    """

    variety: VarietyId
    source: Source
    size: int
    matrix_size: int

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        subsets = list(itertools.combinations(range(self.matrix_size), self.size))
        for rows in subsets:
            for cols in subsets:
                yield rows, cols

    def __len__(self) -> int:
        return binom(self.matrix_size, self.size) ** 2

    @property
    def minors(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        return list(self)

    def evaluate(self, M, tol: float = 1e-9) -> tuple[bool, float]:
        """Largest absolute minor of ``M`` and whether all are within ``tol * max(1, |M|^size)``."""
        M = np.asarray(M, dtype=float)
        if M.shape != (self.matrix_size, self.matrix_size):
            raise InputError(f"expected a {self.matrix_size}x{self.matrix_size} matrix, got {M.shape}")
        worst = 0.0
        for rows, cols in self:
            worst = max(worst, abs(float(np.linalg.det(M[np.ix_(rows, cols)]))))
        scale = max(1.0, float(np.abs(M).max(initial=0.0))) ** self.size
        return worst <= tol * scale, worst


def defining_minors(v: VarietyId, source: Source | str = Source.GRAM) -> MinorSystem:
    """(d+1)-minors of the Gram matrix, or (d+3)-minors of the Cayley matrix."""
    source = Source(source)
    if v.family is not Family.R:
        raise UnsupportedFamily("defining minors are generated only for the real family")
    if v.d > v.n - 2:
        raise DomainError("the ambient space has no defining minors")
    if source is Source.GRAM:
        return MinorSystem(v, source, v.d + 1, v.n - 1)
    return MinorSystem(v, source, v.d + 3, v.n + 1)
