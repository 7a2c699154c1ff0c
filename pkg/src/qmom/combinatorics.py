"""Exact integer combinatorics for the U(N) building blocks.

Everything here returns Python ``int`` (arbitrary precision); rational
quantities elsewhere in the package use :class:`fractions.Fraction`.
Out-of-range lower indices give 0 instead of raising, so summation bounds
can be over-extended safely.
"""
from __future__ import annotations

import enum
from math import comb

from .errors import ValidationError

__all__ = [
    "Statistics",
    "binomial",
    "binomial_signed",
    "lambda_f",
    "lambda_b",
    "lambda_nu",
    "dim_irrep_f",
    "dim_irrep_b",
    "dim_irrep",
    "space_dimension",
]


class Statistics(str, enum.Enum):
    FERMION = "fermion"
    BOSON = "boson"

    @classmethod
    def parse(cls, value: "str | Statistics") -> "Statistics":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise ValidationError(
                f"unknown statistics {value!r}; expected 'fermion' or 'boson'"
            ) from None


def binomial(n: int, r: int) -> int:
    """C(n, r) for non-negative n; 0 when r > n or r < 0 or n < 0."""
    if r < 0 or n < 0 or r > n:
        return 0
    return comb(n, r)


def binomial_signed(n: int, r: int) -> int:
    """Generalized binomial a(a-1)...(a-r+1)/r! valid for any integer upper index.

    For negative ``n`` this equals ``(-1)**r * C(r - n - 1, r)``.
    """
    if r < 0:
        return 0
    if n >= 0:
        return binomial(n, r)
    return (-1) ** r * comb(r - n - 1, r)


def lambda_f(N: int, m: int, r: int, nu: int) -> int:
    """Fermionic Lambda^nu(N, m, r) = C(m-nu, r) C(N-m+r-nu, r)."""
    return binomial(m - nu, r) * binomial(N - m + r - nu, r)


def lambda_b(N: int, m: int, r: int, nu: int) -> int:
    """Bosonic Lambda_B^nu(N, m, r) = C(m-nu, r) C(N+m+nu-1, r)."""
    return binomial(m - nu, r) * binomial(N + m + nu - 1, r)


def dim_irrep_f(N: int, nu: int) -> int:
    """d(N:nu) = C(N,nu)^2 - C(N,nu-1)^2."""
    if nu < 0:
        return 0
    return binomial(N, nu) ** 2 - binomial(N, nu - 1) ** 2


def dim_irrep_b(N: int, nu: int) -> int:
    """d_B(N:nu) = C(N+nu-1,nu)^2 - C(N+nu-2,nu-1)^2."""
    if nu < 0:
        return 0
    if nu == 0:
        return 1
    return binomial(N + nu - 1, nu) ** 2 - binomial(N + nu - 2, nu - 1) ** 2


def lambda_nu(stats: Statistics, N: int, m: int, r: int, nu: int) -> int:
    if Statistics.parse(stats) is Statistics.FERMION:
        return lambda_f(N, m, r, nu)
    return lambda_b(N, m, r, nu)


def dim_irrep(stats: Statistics, N: int, nu: int) -> int:
    if Statistics.parse(stats) is Statistics.FERMION:
        return dim_irrep_f(N, nu)
    return dim_irrep_b(N, nu)


def space_dimension(stats: Statistics, N: int, m: int) -> int:
    """Dimension of the m-particle space over N single-particle states."""
    stats = Statistics.parse(stats)
    if m < 0 or N < 0:
        raise ValidationError(f"need N >= 0 and m >= 0, got N={N}, m={m}")
    if stats is Statistics.FERMION:
        if m > N:
            raise ValidationError(f"cannot place {m} fermions in {N} states")
        return comb(N, m)
    if N < 1:
        # only the vacuum survives with no orbitals
        return 1 if m == 0 else 0
    return comb(N + m - 1, m)

