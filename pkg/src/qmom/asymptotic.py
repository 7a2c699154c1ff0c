"""Dilute-limit (N -> infinity, m/N -> 0, k fixed) moment formulas, fermions only.

The formulas are pure binomial products evaluated at the given finite
(N, m); the combination into q and mu6 is the same as in :mod:`qmom.finite`.
"""
from __future__ import annotations

from fractions import Fraction

from .combinatorics import Statistics, binomial
from .errors import ValidationError
from .finite import MomentReport, _assemble, _mu2, _Pieces, _y_asym
from .model import InteractionSpec, SystemSpec, YTermPolicy

__all__ = [
    "mu2_asym",
    "z_asym",
    "x_asym",
    "y_asym",
    "u_coeff_sq_asym",
    "q_asym",
    "mu6_asym",
    "asymptotic_report",
]


def _lam0_asym(N: int, m: int, r: int) -> int:
    if r < 0:
        return 0
    return binomial(m, r) * binomial(N, r)


def z_asym(N: int, m: int, k1: int, k2: int) -> int:
    if min(k1, k2) < 0:
        return 0
    return binomial(m - k2, k1) * binomial(m, k2) * binomial(N, k1) * binomial(N, k2)


def x_asym(N: int, m: int, k1: int, k2: int, k3: int) -> int:
    if min(k1, k2, k3) < 0:
        return 0
    return (
        binomial(m - k2, k1)
        * binomial(m - k2, k3)
        * binomial(m, k2)
        * binomial(N, k1)
        * binomial(N, k2)
        * binomial(N, k3)
    )


def y_asym(N: int, m: int, k1: int, k2: int, k3: int) -> int:
    return _y_asym(N, m, k1, k2, k3)


def u_coeff_sq_asym(m: int, k1: int, k2: int) -> Fraction:
    """|U(f_m k1 f_m k2; f_m k1+k2)|^2 = C(m-k2, k1) / C(m, k1) in the dilute limit."""
    if min(m, k1, k2) < 0 or k1 + k2 > m:
        raise ValidationError(f"need 0 <= k1, k2 and k1 + k2 <= m, got m={m}, k1={k1}, k2={k2}")
    return Fraction(binomial(m - k2, k1), binomial(m, k1))


def _pieces(sys: SystemSpec, policy: YTermPolicy) -> _Pieces:
    if sys.stats is not Statistics.FERMION:
        raise ValidationError("asymptotic formulas are available for fermions only")

    if policy is YTermPolicy.EXACT_TRACE:
        raise ValidationError("exact_trace Y is a finite-N policy")

    def y(N, m, a, b, c):
        return 0 if policy is YTermPolicy.DROP else _y_asym(N, m, a, b, c)

    return _Pieces(mu2_channel=_lam0_asym, z=z_asym, x=x_asym, y=y)


def mu2_asym(sys: SystemSpec, inter: InteractionSpec) -> Fraction:
    return _mu2(sys, inter, _pieces(sys, YTermPolicy.DROP))


def _run(sys, inter, policy, breakdown):
    policy = YTermPolicy.ASYMPTOTIC_U if policy is None else YTermPolicy.parse(policy)
    return _assemble(sys, inter, _pieces(sys, policy), policy, "asymptotic", with_breakdown=breakdown)


def q_asym(sys: SystemSpec, inter: InteractionSpec) -> float:
    return float(_run(sys, inter, None, False)[1])


def mu6_asym(sys: SystemSpec, inter: InteractionSpec, policy=None) -> float:
    return float(_run(sys, inter, policy, False)[2])


def asymptotic_report(sys: SystemSpec, inter: InteractionSpec, policy=None) -> MomentReport:
    return _run(sys, inter, policy, True)[3]
