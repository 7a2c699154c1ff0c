"""q-numbers, q-Hermite polynomials and the q-normal density.

The q-normal interpolates between the semicircle (q = 0, support (-2, 2))
and the standard Gaussian (q = 1).  For 0 < q < 1 the density is

    f(x|q) = sqrt(1-q) P(q) / (2 pi sqrt(4 - (1-q) x^2)) * prod_k [(1+q^k)^2 - (1-q) q^k x^2]

with P(q) = prod_k (1 - q^(k+1)), supported on |x| < 2/sqrt(1-q).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, special

from .errors import QmomError, ValidationError

__all__ = [
    "GAUSSIAN_SWITCH",
    "QuadratureError",
    "SupportInterval",
    "q_number",
    "q_factorial",
    "q_hermite",
    "qnormal_pdf",
    "support",
    "mu4_of_q",
    "mu6_of_q",
    "integrate_against_pdf",
    "qnormal_cdf",
]

# below this distance from q = 1 the density is replaced by the Gaussian
GAUSSIAN_SWITCH = 1e-6
_PRODUCT_CUTOFF = 1e-16


class QuadratureError(QmomError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""


@dataclass(frozen=True)
class SupportInterval:
    lower: float
    upper: float

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.upper)

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        return (x > self.lower) & (x < self.upper)


def _check_q(q: float) -> float:
    q = float(q)
    if not 0.0 <= q <= 1.0 or math.isnan(q):
        raise ValidationError(f"q must lie in [0, 1], got {q}")
    return q


def q_number(n: int, q: float) -> float:
    """[n]_q = 1 + q + ... + q^(n-1), summed directly so that q = 1 is safe."""
    if n < 0:
        raise ValidationError(f"n must be non-negative, got {n}")
    total = 0.0
    term = 1.0
    for _ in range(n):
        total += term
        term *= q
    return total


def q_factorial(n: int, q: float) -> float:
    out = 1.0
    for j in range(1, n + 1):
        out *= q_number(j, q)
    return out


def q_hermite(n: int, x, q: float):
    """q-Hermite polynomial He_n(x|q) by the three-term recursion.

    x He_n = He_{n+1} + [n]_q He_{n-1},  He_0 = 1,  He_{-1} = 0.
    Scalars and arrays both work.
    """
    if n < 0:
        raise ValidationError(f"n must be non-negative, got {n}")
    x = np.asarray(x, dtype=float)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for j in range(n):
        prev, cur = cur, x * cur - q_number(j, q) * prev
    if cur.ndim == 0:
        return float(cur)
    return cur


def support(q: float) -> SupportInterval:
    q = _check_q(q)
    if q >= 1.0:
        return SupportInterval(-math.inf, math.inf)
    edge = 2.0 / math.sqrt(1.0 - q)
    return SupportInterval(-edge, edge)


def _n_factors(q: float) -> int:
    # smallest K with q**(K+1) < cutoff
    if q == 0.0:
        return 1
    return max(1, int(math.ceil(math.log(_PRODUCT_CUTOFF) / math.log(q))))


def _log_core(x: np.ndarray, q: float) -> np.ndarray:
    """log of P(q) * prod_k [(1+q^k)^2 - (1-q) q^k x^2] for |x| inside the support."""
    K = _n_factors(q)
    qk = q ** np.arange(K + 1, dtype=float)
    if q == 0.0:
        qk = np.array([1.0, 0.0])
    log_p = np.sum(np.log1p(-qk[1:]))
    x2 = np.square(x)[..., None]
    terms = (1.0 + qk) ** 2 - (1.0 - q) * qk * x2
    with np.errstate(divide="ignore", invalid="ignore"):
        return log_p + np.sum(np.log(terms), axis=-1)


def _gaussian(x):
    return np.exp(-0.5 * np.square(x)) / math.sqrt(2.0 * math.pi)


def qnormal_pdf(x, q: float):
    """Density of the standardized q-normal distribution; exactly 0 off support."""
    q = _check_q(q)
    xa = np.asarray(x, dtype=float)
    if 1.0 - q < GAUSSIAN_SWITCH:
        out = _gaussian(xa)
    elif q == 0.0:
        out = np.where(np.abs(xa) < 2.0, np.sqrt(np.clip(4.0 - xa * xa, 0.0, None)), 0.0)
        out = out / (2.0 * math.pi)
    else:
        inside = support(q).contains(xa)
        xi = np.where(inside, xa, 0.0)
        radial = np.sqrt(4.0 - (1.0 - q) * xi * xi)
        log_f = 0.5 * math.log1p(-q) - math.log(2.0 * math.pi) - np.log(radial)
        out = np.where(inside, np.exp(log_f + _log_core(xi, q)), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def mu4_of_q(q: float) -> float:
    return 2.0 + q


def mu6_of_q(q: float) -> float:
    return 5.0 + 6.0 * q + 3.0 * q * q + q ** 3


def integrate_against_pdf(
    f: Callable[[float], float],
    q: float,
    tolerance: float = 1e-10,
    limit: int = 500,
) -> float:
    """Integrate f(x) f_qN(x|q) over the support.

    For q < 1 the substitution x = (2/sqrt(1-q)) sin(theta) cancels the
    inverse-square-root factor at the endpoints, leaving a smooth integrand
    on (-pi/2, pi/2).  For q at (or numerically at) 1 the Gaussian is
    integrated over a window whose neglected tail is far below tolerance.
    """
    q = _check_q(q)
    if tolerance <= 0:
        raise ValidationError("tolerance must be positive")

    if 1.0 - q < GAUSSIAN_SWITCH:
        half = max(12.0, -special.ndtri(tolerance * 1e-6) + 4.0)

        def integrand(x):
            return f(x) * _gaussian(x)

        a, b = -half, half
        points = [0.0]
    else:
        edge = 2.0 / math.sqrt(1.0 - q)

        def integrand(theta):
            x = edge * math.sin(theta)
            if q == 0.0:
                core = 4.0 * math.cos(theta) ** 2
            else:
                core = math.exp(float(_log_core(np.asarray(x), q)))
            return f(x) * core / (2.0 * math.pi)

        a, b = -0.5 * math.pi, 0.5 * math.pi
        points = [0.0]

    value, err, info = _quad(integrand, a, b, tolerance, limit, points)
    return value


def _quad(func, a, b, tolerance, limit, points):
    result = integrate.quad(
        func, a, b, epsabs=tolerance, epsrel=0.0, limit=limit, points=points,
        full_output=True,
    )
    value, err, info = result[0], result[1], result[2]
    if len(result) > 3 or err > tolerance:
        raise QuadratureError(
            f"quadrature did not converge on [{a}, {b}]: value={value!r}, "
            f"estimated error={err:.3e} > tolerance={tolerance:.1e}, "
            f"evaluations={info.get('neval')}"
        )
    return value, err, info


def qnormal_cdf(x, q: float, tolerance: float = 1e-12):
    """Cumulative distribution of the q-normal at the point(s) x."""
    q = _check_q(q)
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if 1.0 - q < GAUSSIAN_SWITCH:
        out = special.ndtr(xa)
    else:
        edge = 2.0 / math.sqrt(1.0 - q)

        def density_theta(theta):
            if q == 0.0:
                return 4.0 * math.cos(theta) ** 2 / (2.0 * math.pi)
            x_ = edge * math.sin(theta)
            return math.exp(float(_log_core(np.asarray(x_), q))) / (2.0 * math.pi)

        out = np.empty_like(xa)
        for n, value in enumerate(xa):
            if value <= -edge:
                out[n] = 0.0
            elif value >= edge:
                out[n] = 1.0
            else:
                theta = math.asin(value / edge)
                half, _, _ = _quad(density_theta, 0.0, theta, tolerance, 200, None)
                out[n] = min(1.0, max(0.0, 0.5 + half))
    if np.ndim(x) == 0:
        return float(out[0])
    return out
