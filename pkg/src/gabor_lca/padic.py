"""Exact p-adic arithmetic on rationals: valuations, absolute values,
GL_n(Z_p) membership and local modular factors of rational matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

RationalLike = Union[int, str, Fraction]

#: Primality is certified by deterministic trial division; larger candidates
#: are rejected outright (desk scale).
PRIME_BOUND = 1 << 20


class NotPrimeError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


def certify_prime(p: int) -> int:
    p = int(p)
    if p >= PRIME_BOUND:
        raise NotPrimeError(f"{p} exceeds the certification bound {PRIME_BOUND}")
    if p < 2:
        raise NotPrimeError(f"{p} is not prime")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise NotPrimeError(f"{p} is not prime ({d} divides it)")
        d += 1
    return p


@dataclass(frozen=True)
class Place:
    """Infinite place or a finite place carrying a certified prime."""

    prime: int | None

    def __post_init__(self):
        if self.prime is not None:
            object.__setattr__(self, "prime", certify_prime(self.prime))

    @classmethod
    def infinite(cls) -> "Place":
        return cls(None)

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(p)

    @property
    def is_finite(self) -> bool:
        return self.prime is not None

    def __str__(self) -> str:
        return "infinity" if self.prime is None else f"p={self.prime}"


def _multiplicity(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("multiplicity of p in 0 is undefined")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def valuation(q: RationalLike, p: int) -> int | float:
    """The unique k with q = p^k * (a/b), p dividing neither a nor b; +inf at 0."""
    p = certify_prime(p)
    q = Fraction(q)
    if q == 0:
        return math.inf
    return _multiplicity(q.numerator, p) - _multiplicity(q.denominator, p)


def padic_abs(q: RationalLike, p: int) -> Fraction:
    """|q|_p = p^(-valuation) as an exact rational; |0|_p = 0."""
    v = valuation(q, p)
    if v == math.inf:
        return Fraction(0)
    return Fraction(1, p ** v) if v >= 0 else Fraction(p ** (-v))


@dataclass(frozen=True)
class PadicScalar:
    """An exact rational viewed inside Q_p for a fixed finite place."""

    value: Fraction
    prime: int

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        object.__setattr__(self, "prime", certify_prime(self.prime))

    def valuation(self) -> int | float:
        return valuation(self.value, self.prime)

    def abs_value(self) -> Fraction:
        return padic_abs(self.value, self.prime)

    def is_integral(self) -> bool:
        return self.valuation() >= 0


@dataclass(frozen=True, eq=True)
class RationalMatrix:
    """Dense matrix of exact rationals with the handful of operations needed
    for automorphism and lattice computations."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.entries)
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("matrix rows must be nonempty and of equal length")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(v) for v in row) for row in rows))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, n: int, value: RationalLike) -> "RationalMatrix":
        v = Fraction(value)
        return cls.from_rows([[v if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def n_rows(self) -> int:
        return len(self.entries)

    @property
    def n_cols(self) -> int:
        return len(self.entries[0])

    @property
    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.n_cols != other.n_rows:
            raise ValueError("matrix dimensions do not match")
        rows = []
        for i in range(self.n_rows):
            row = []
            for j in range(other.n_cols):
                row.append(sum((self.entries[i][k] * other.entries[k][j]
                                for k in range(self.n_cols)), Fraction(0)))
            rows.append(tuple(row))
        return RationalMatrix(tuple(rows))

    def apply(self, vector: Sequence[RationalLike]) -> tuple[Fraction, ...]:
        vec = [Fraction(v) for v in vector]
        if len(vec) != self.n_cols:
            raise ValueError("vector length does not match")
        return tuple(sum((self.entries[i][k] * vec[k] for k in range(self.n_cols)),
                         Fraction(0)) for i in range(self.n_rows))

    @cached_property
    def det(self) -> Fraction:
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        n = self.n_rows
        m = [list(row) for row in self.entries]
        det = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                m[col], m[pivot] = m[pivot], m[col]
                det = -det
            det *= m[col][col]
            inv = 1 / m[col][col]
            for r in range(col + 1, n):
                factor = m[r][col] * inv
                if factor == 0:
                    continue
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
        return det

    def inverse(self) -> "RationalMatrix":
        if not self.is_square:
            raise ValueError("inverse of a non-square matrix")
        n = self.n_rows
        m = [list(row) + [Fraction(int(i == j)) for j in range(n)]
             for i, row in enumerate(self.entries)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
            if pivot is None:
                raise SingularMatrixError("matrix is singular")
            m[col], m[pivot] = m[pivot], m[col]
            inv = 1 / m[col][col]
            m[col] = [v * inv for v in m[col]]
            for r in range(n):
                if r == col or m[r][col] == 0:
                    continue
                factor = m[r][col]
                m[r] = [a - factor * b for a, b in zip(m[r], m[col])]
        return RationalMatrix.from_rows([row[n:] for row in m])

    def solve(self, vector: Sequence[RationalLike]) -> tuple[Fraction, ...]:
        return self.inverse().apply(vector)

    def __str__(self) -> str:
        return "[" + ", ".join(
            "[" + ", ".join(str(v) for v in row) + "]" for row in self.entries) + "]"


def in_gl_n_zp(A: RationalMatrix, p: int) -> bool:
    """Entries p-integral and the determinant a p-adic unit."""
    p = certify_prime(p)
    if not A.is_square:
        raise ValueError("GL_n membership needs a square matrix")
    if A.det == 0:
        raise SingularMatrixError("matrix is singular")
    for row in A.entries:
        for v in row:
            if v != 0 and valuation(v, p) < 0:
                return False
    return valuation(A.det, p) == 0


def local_modular(A: RationalMatrix, place: Place) -> Fraction:
    """Haar-scaling factor of the automorphism A of F^n at the given place:
    |det A|_v, the Euclidean absolute value at the infinite place."""
    if not A.is_square:
        raise ValueError("modular factor needs a square matrix")
    d = A.det
    if d == 0:
        raise SingularMatrixError("matrix is singular")
    if place.is_finite:
        return padic_abs(d, place.prime)
    return abs(d)
