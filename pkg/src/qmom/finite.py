"""Exact finite-(N1, N2) moments of the two-species k-body embedded GUE.

All sums are carried out in :class:`fractions.Fraction`; floats appear only
in :class:`MomentReport`.  The fourth- and sixth-moment correlators factor
over species, so each is a product of one single-space function per species:

* ``Z(N, m, k1, k2)``     = <A B A B>
* ``X(N, m, k1, k2, k3)`` = <A B A C B C>
* ``Y(N, m, k1, k2, k3)`` = <A B C A B C>

where A, B, C are independent unit-variance embedded GUEs of body rank
k1, k2, k3 on the m-particle space.
"""
from __future__ import annotations

from dataclasses import dataclass, field, asdict
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .combinatorics import (
    Statistics,
    binomial,
    dim_irrep,
    lambda_nu,
    space_dimension,
)
from .errors import DegenerateEnsembleError, ValidationError
from .model import InteractionSpec, SystemSpec, YTermPolicy
from .qnormal import mu6_of_q

__all__ = [
    "MomentReport",
    "lambda0",
    "mu2_finite",
    "z_correlator",
    "x_correlator",
    "y_correlator",
    "q_finite",
    "q_finite_exact",
    "mu6_finite",
    "mu6_finite_exact",
    "moment_report",
]


@dataclass
class MomentReport:
    """Second moment, q and the sixth moment for one (system, interaction) pair.

    ``mu2`` is the trace-normalized second moment <H^2>; ``mu4`` and the two
    sixth moments are reduced (divided by mu2^2 and mu2^3).
    """

    mu2: float
    q: float
    mu4: float
    mu6_formula: float
    mu6_qnormal: float
    y_policy: str
    mode: str = "finite"
    term_breakdown: dict = field(default_factory=dict)

    @property
    def rel_diff(self) -> float:
        return abs(self.mu6_formula - self.mu6_qnormal) / self.mu6_qnormal

    def to_dict(self) -> dict:
        out = asdict(self)
        out["rel_diff"] = self.rel_diff
        return out


# ---------------------------------------------------------------------------
# single-space pieces


def lambda0(stats: Statistics, N: int, m: int, r: int) -> int:
    """<H^2> on the m-particle space for a unit-variance r-body embedded GUE."""
    if r < 0:
        return 0
    return lambda_nu(stats, N, m, r, 0)


def _check_space(stats, N, m):
    stats = Statistics.parse(stats)
    space_dimension(stats, N, m)  # raises on an impossible space
    return stats


@lru_cache(maxsize=None)
def _z(stats: Statistics, N: int, m: int, k1: int, k2: int) -> Fraction:
    if min(k1, k2) < 0:
        return Fraction(0)
    total = 0
    for nu in range(0, min(k1, m - k2) + 1):
        total += (
            lambda_nu(stats, N, m, m - k1, nu)
            * lambda_nu(stats, N, m, k2, nu)
            * dim_irrep(stats, N, nu)
        )
    return Fraction(total, space_dimension(stats, N, m))


@lru_cache(maxsize=None)
def _x(stats: Statistics, N: int, m: int, k1: int, k2: int, k3: int) -> Fraction:
    if min(k1, k2, k3) < 0:
        return Fraction(0)
    total = 0
    for nu in range(0, min(m - k1, k2, m - k3) + 1):
        total += (
            lambda_nu(stats, N, m, k1, nu)
            * lambda_nu(stats, N, m, m - k2, nu)
            * lambda_nu(stats, N, m, k3, nu)
            * dim_irrep(stats, N, nu)
        )
    return Fraction(total, space_dimension(stats, N, m))


def _y_asym(N: int, m: int, k1: int, k2: int, k3: int) -> int:
    if min(k1, k2, k3) < 0:
        return 0
    return (
        binomial(m - k2 - k3, k1)
        * binomial(m - k3, k2)
        * binomial(m, k3)
        * binomial(N, k1)
        * binomial(N, k2)
        * binomial(N, k3)
    )


def z_correlator(stats, N: int, m: int, k1: int, k2: int) -> Fraction:
    """<A(k1) B(k2) A(k1) B(k2)> on the m-particle space (exact)."""
    stats = _check_space(stats, N, m)
    return _z(stats, N, m, k1, k2)


def x_correlator(stats, N: int, m: int, k1: int, k2: int, k3: int) -> Fraction:
    """<A(k1) B(k2) A(k1) C(k3) B(k2) C(k3)> on the m-particle space (exact)."""
    stats = _check_space(stats, N, m)
    return _x(stats, N, m, k1, k2, k3)


def y_correlator(stats, N: int, m: int, k1: int, k2: int, k3: int,
                 policy=YTermPolicy.ASYMPTOTIC_U) -> Fraction:
    """<A B C A B C> under a substitution policy.

    The finite-N expression needs SU(N) Racah coefficients that have no
    closed form, so ``ASYMPTOTIC_U`` (and ``ASYMPTOTIC_REDUCED``) use the
    dilute-limit binomial product, fermions only, and ``DROP`` returns 0.
    ``EXACT_TRACE`` contracts explicit operators and is limited to small spaces.
    """
    stats = _check_space(stats, N, m)
    policy = YTermPolicy.parse(policy)
    if policy is YTermPolicy.DROP:
        return Fraction(0)
    if policy is YTermPolicy.EXACT_TRACE:
        return _y_exact_trace(stats, N, m, k1, k2, k3)
    if stats is not Statistics.FERMION:
        raise ValidationError("the asymptotic Y term is defined for fermions only")
    return Fraction(_y_asym(N, m, k1, k2, k3))


# ---------------------------------------------------------------------------
# two-species assembly


@dataclass
class _Pieces:
    """Single-space evaluators plugged into the two-species sums."""

    mu2_channel: Callable[[int, int, int], Fraction]  # (species, N, m, r) via closure
    z: Callable
    x: Callable
    y: Callable


def _finite_pieces(stats: Statistics, policy: YTermPolicy) -> _Pieces:
    if policy in _FERMION_ONLY and stats is not Statistics.FERMION:
        raise ValidationError(
            f"Y-term policy {policy.value!r} relies on fermionic dilute-limit formulas; "
            "use 'drop' or 'exact_trace' for bosons"
        )

    if policy is YTermPolicy.ASYMPTOTIC_U:
        def y(N, m, a, b, c):
            return _y_asym(N, m, a, b, c)
    elif policy is YTermPolicy.EXACT_TRACE:
        def y(N, m, a, b, c):
            return _y_exact_trace(stats, N, m, a, b, c)
    else:
        # DROP, and ASYMPTOTIC_REDUCED which adds its Y part separately
        def y(N, m, a, b, c):
            return 0

    return _Pieces(
        mu2_channel=lambda N, m, r: lambda0(stats, N, m, r),
        z=lambda N, m, a, b: _z(stats, N, m, a, b),
        x=lambda N, m, a, b, c: _x(stats, N, m, a, b, c),
        y=y,
    )


_FERMION_ONLY = (YTermPolicy.ASYMPTOTIC_U, YTermPolicy.ASYMPTOTIC_REDUCED)


@lru_cache(maxsize=None)
def _y_exact_trace(stats, N, m, a, b, c) -> Fraction:
    if min(a, b, c) < 0 or max(a, b, c) > m:
        return Fraction(0)
    from .simulator import exact_trace_correlator

    value = exact_trace_correlator(stats, N, m, "ABCABC", {"A": a, "B": b, "C": c})
    return Fraction(value)


def _mu2(sys: SystemSpec, inter: InteractionSpec, pieces: _Pieces) -> Fraction:
    (N1, m1), (N2, m2) = sys.species
    total = Fraction(0)
    for (i, j), v2 in inter.variances().items():
        total += v2 * pieces.mu2_channel(N1, m1, i) * pieces.mu2_channel(N2, m2, j)
    if total == 0:
        raise DegenerateEnsembleError(
            f"no k={inter.k} interaction channel with positive variance acts on "
            f"(m1, m2) = ({sys.m1}, {sys.m2}); mu2 = 0"
        )
    return total


def _assemble(sys, inter, pieces, policy, mode, with_breakdown=True):
    """Exact mu2, q and mu6 plus an optional float breakdown of every term."""
    (N1, m1), (N2, m2) = sys.species
    var = inter.variances()
    splits = inter.splits()
    mu2 = _mu2(sys, inter, pieces)

    mu2_terms = {}
    for (i, j) in splits:
        mu2_terms[(i, j)] = var[(i, j)] * pieces.mu2_channel(N1, m1, i) * pieces.mu2_channel(N2, m2, j)

    z_terms = {}
    for (i, j) in splits:
        for (p, q) in splits:
            w = var[(i, j)] * var[(p, q)]
            z_terms[(i, j, p, q)] = w * pieces.z(N1, m1, i, p) * pieces.z(N2, m2, j, q) if w else Fraction(0)
    q_exact = sum(z_terms.values(), Fraction(0)) / mu2**2

    x_terms, y_terms = {}, {}
    for (i, j) in splits:
        for (p, q) in splits:
            for (r, s) in splits:
                w = var[(i, j)] * var[(p, q)] * var[(r, s)]
                if not w:
                    x_terms[(i, j, p, q, r, s)] = y_terms[(i, j, p, q, r, s)] = Fraction(0)
                    continue
                x_terms[(i, j, p, q, r, s)] = w * pieces.x(N1, m1, i, p, r) * pieces.x(N2, m2, j, q, s)
                y_terms[(i, j, p, q, r, s)] = w * pieces.y(N1, m1, i, p, r) * pieces.y(N2, m2, j, q, s)
    cube = mu2**3
    x_part = 3 * sum(x_terms.values(), Fraction(0)) / cube
    y_part = sum(y_terms.values(), Fraction(0)) / cube
    if policy is YTermPolicy.ASYMPTOTIC_REDUCED:
        y_part = _reduced_asymptotic_y(sys, inter)
    mu6_exact = 5 + 6 * q_exact + x_part + y_part

    breakdown = {}
    if with_breakdown:
        def fmt(key):
            return ",".join(str(v) for v in key)

        breakdown = {
            "mu2": {fmt(k): float(v) for k, v in mu2_terms.items()},
            "q": {fmt(k): float(v / mu2**2) for k, v in z_terms.items()},
            "mu6_x": {fmt(k): float(3 * v / cube) for k, v in x_terms.items()},
            "mu6_y": {fmt(k): float(v / cube) for k, v in y_terms.items()},
            "mu6_totals": {
                "semicircle": 5.0,
                "abab": float(6 * q_exact),
                "abacbc": float(x_part),
                "abcabc": float(y_part),
            },
        }
    q = float(q_exact)
    report = MomentReport(
        mu2=float(mu2),
        q=q,
        mu4=float(2 + q_exact),
        mu6_formula=float(mu6_exact),
        mu6_qnormal=mu6_of_q(q),
        y_policy=policy.value,
        mode=mode,
        term_breakdown=breakdown,
    )
    return mu2, q_exact, mu6_exact, report


def _reduced_asymptotic_y(sys, inter) -> Fraction:
    """sum Y_asym Y_asym / mu2_asym^3: the ABCABC share of mu6 in the dilute limit."""
    (N1, m1), (N2, m2) = sys.species
    var = inter.variances()

    def lam(N, m, r):
        return binomial(m, r) * binomial(N, r) if r >= 0 else 0

    mu2 = sum((v * lam(N1, m1, i) * lam(N2, m2, j) for (i, j), v in var.items()), Fraction(0))
    if mu2 == 0:
        raise DegenerateEnsembleError("dilute-limit mu2 vanishes")
    total = Fraction(0)
    for (i, j) in inter.splits():
        for (p, q) in inter.splits():
            for (r, s) in inter.splits():
                w = var[(i, j)] * var[(p, q)] * var[(r, s)]
                if w:
                    total += w * _y_asym(N1, m1, i, p, r) * _y_asym(N2, m2, j, q, s)
    return total / mu2**3


def _resolve_policy(sys, policy):
    if policy is None:
        return YTermPolicy.default_for(sys.stats)
    return YTermPolicy.parse(policy)


def mu2_finite(sys: SystemSpec, inter: InteractionSpec) -> Fraction:
    """Exact <H^2> = sum_{i+j=k} v2(i,j) Lambda^0(N1,m1,i) Lambda^0(N2,m2,j)."""
    return _mu2(sys, inter, _finite_pieces(sys.stats, YTermPolicy.DROP))


def q_finite_exact(sys: SystemSpec, inter: InteractionSpec) -> Fraction:
    pieces = _finite_pieces(sys.stats, YTermPolicy.DROP)
    mu2 = _mu2(sys, inter, pieces)
    (N1, m1), (N2, m2) = sys.species
    var = inter.variances()
    num = Fraction(0)
    for (i, j) in inter.splits():
        for (p, q) in inter.splits():
            num += var[(i, j)] * var[(p, q)] * pieces.z(N1, m1, i, p) * pieces.z(N2, m2, j, q)
    return num / mu2**2


def q_finite(sys: SystemSpec, inter: InteractionSpec) -> float:
    """q = <ABAB> / <H^2>^2, i.e. mu4 - 2."""
    return float(q_finite_exact(sys, inter))


def mu6_finite_exact(sys: SystemSpec, inter: InteractionSpec, policy=None) -> Fraction:
    policy = _resolve_policy(sys, policy)
    _, _, mu6, _ = _assemble(sys, inter, _finite_pieces(sys.stats, policy), policy, "finite",
                             with_breakdown=False)
    return mu6


def mu6_finite(sys: SystemSpec, inter: InteractionSpec, policy=None) -> float:
    """Reduced sixth moment 5 + 6q + 3 sum XX / mu2^3 + sum YY / mu2^3."""
    return float(mu6_finite_exact(sys, inter, policy))


def moment_report(sys: SystemSpec, inter: InteractionSpec, policy=None) -> MomentReport:
    policy = _resolve_policy(sys, policy)
    _, _, _, report = _assemble(sys, inter, _finite_pieces(sys.stats, policy), policy, "finite")
    return report
