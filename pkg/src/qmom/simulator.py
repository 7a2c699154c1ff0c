"""Monte Carlo oracle: explicit construction of the two-species embedded GUE.

A member of the ensemble is

    H = sum_{i+j=k} sum V_{alpha a : beta b}(i, j) [A+_alpha(i) A_beta(i)] (x) [A+_a(j) A_b(j)]

with independent GUE blocks V(i, j) of variance v2(i, j).  The operators
``A+_alpha(t) A_beta(t)`` are stored per species as one sparse "transfer"
matrix ``P`` of shape ``(d*d, D*D)``: row ``g' * d + g`` and column
``alpha * D + beta`` hold <g'| A+_alpha A_beta |g>, where d is the m-particle
and D the t-particle dimension.  Assembling a member is then two products
``P1 @ W @ P2.T`` with ``W`` the rearranged GUE block.

Fermion phases: configurations are ascending orbital tuples,
``A+_alpha = a+_{alpha_1} ... a+_{alpha_t}`` with alpha ascending, and
``A_beta`` is its adjoint.  Boson operators are normalized so that
``A+_alpha |0>`` is a unit vector, i.e.
``A_beta |n> = prod_i sqrt(C(n_i, b_i)) |n - b>``.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .combinatorics import Statistics, binomial, space_dimension
from .errors import DimensionCapError, QmomError, ValidationError
from .finite import moment_report
from .model import InteractionSpec, SystemSpec, YTermPolicy
from .qnormal import qnormal_cdf

__all__ = [
    "DEFAULT_DIM_CAP",
    "ManyBodyBasis",
    "TransitionOperatorSet",
    "EnsembleConfig",
    "EmpiricalMoments",
    "dim_cap",
    "enumerate_basis",
    "transition_operators",
    "sample_gue",
    "sample_member",
    "ensemble_moments",
    "compare_with_theory",
    "histogram_csv",
    "exact_trace_correlator",
]

DEFAULT_DIM_CAP = 20000
# dense GUE block elements allowed when assembling a member
_BLOCK_CAP = 40_000_000


def dim_cap(override: Optional[int] = None) -> int:
    if override is not None:
        return int(override)
    env = os.environ.get("QMOM_DIM_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"QMOM_DIM_CAP must be an integer, got {env!r}") from None
    return DEFAULT_DIM_CAP


# ---------------------------------------------------------------------------
# basis and operators


@dataclass(frozen=True)
class ManyBodyBasis:
    """m-particle configurations over N orbitals.

    Fermion configurations are ascending orbital tuples in lexicographic
    order.  Boson configurations are occupation vectors ordered like the
    sorted multisets they encode, e.g. N=2, m=3 gives (3,0), (2,1), (1,2), (0,3).
    """

    stats: Statistics
    N: int
    m: int
    configs: tuple
    index: dict = field(repr=False, compare=False)

    def __len__(self):
        return len(self.configs)

    @property
    def dim(self) -> int:
        return len(self.configs)


def enumerate_basis(stats, N: int, m: int, cap: Optional[int] = None) -> ManyBodyBasis:
    stats = Statistics.parse(stats)
    dim = space_dimension(stats, N, m)
    limit = dim_cap(cap)
    if dim > limit:
        raise DimensionCapError(dim, limit)
    return _enumerate_basis(stats, N, m)


@lru_cache(maxsize=64)
def _enumerate_basis(stats: Statistics, N: int, m: int) -> ManyBodyBasis:
    if stats is Statistics.FERMION:
        configs = tuple(itertools.combinations(range(N), m))
    else:
        configs = []
        for multiset in itertools.combinations_with_replacement(range(N), m):
            occ = [0] * N
            for orb in multiset:
                occ[orb] += 1
            configs.append(tuple(occ))
        configs = tuple(configs)
    return ManyBodyBasis(stats, N, m, configs, {c: n for n, c in enumerate(configs)})


def _fermion_annihilate(state: tuple, beta: tuple):
    """A_beta |state> as (sign, remaining) or None."""
    occupied = list(state)
    sign = 1
    # a_{beta_1} acts first
    for orb in beta:
        try:
            pos = occupied.index(orb)
        except ValueError:
            return None
        if pos % 2:
            sign = -sign
        del occupied[pos]
    return sign, tuple(occupied)


def _fermion_create(state: tuple, alpha: tuple):
    occupied = list(state)
    sign = 1
    # a+_{alpha_t} acts first
    for orb in reversed(alpha):
        if orb in occupied:
            return None
        pos = sum(1 for o in occupied if o < orb)
        if pos % 2:
            sign = -sign
        occupied.insert(pos, orb)
    return sign, tuple(occupied)


@dataclass
class TransitionOperatorSet:
    """All A+_alpha(t) A_beta(t) on one m-particle space, packed as a sparse transfer matrix."""

    basis: ManyBodyBasis
    t: int
    small: ManyBodyBasis
    transfer: sp.csr_matrix  # (d*d, D*D)

    def matrix(self, alpha: int, beta: int) -> sp.csr_matrix:
        """Sparse d x d matrix of A+_alpha A_beta (alpha, beta are t-basis indices)."""
        d, D = self.basis.dim, self.small.dim
        col = self.transfer[:, alpha * D + beta].toarray().reshape(d, d)
        return sp.csr_matrix(col)

    def swapped(self) -> sp.csr_matrix:
        """Transfer matrix with columns permuted (alpha, beta) -> (beta, alpha)."""
        D = self.small.dim
        perm = np.arange(D * D).reshape(D, D).T.ravel()
        return self.transfer.tocsc()[:, perm].tocsr()


def transition_operators(basis: ManyBodyBasis, t: int) -> TransitionOperatorSet:
    if not 0 <= t <= basis.m:
        raise ValidationError(f"operator rank t={t} must satisfy 0 <= t <= m={basis.m}")
    return _transition_operators(basis.stats, basis.N, basis.m, t)


@lru_cache(maxsize=64)
def _transition_operators(stats, N, m, t) -> TransitionOperatorSet:
    basis = _enumerate_basis(stats, N, m)
    small = _enumerate_basis(stats, N, t)
    d, D = basis.dim, small.dim
    rows, cols, vals = [], [], []
    if stats is Statistics.FERMION:
        for g, gamma in enumerate(basis.configs):
            for beta_cfg in itertools.combinations(gamma, t):
                beta = small.index[beta_cfg]
                sign_b, rest = _fermion_annihilate(gamma, beta_cfg)
                free = [o for o in range(N) if o not in rest]
                for alpha_cfg in itertools.combinations(free, t):
                    sign_a, new = _fermion_create(rest, alpha_cfg)
                    alpha = small.index[alpha_cfg]
                    rows.append(basis.index[new] * d + g)
                    cols.append(alpha * D + beta)
                    vals.append(float(sign_a * sign_b))
    else:
        for g, occ in enumerate(basis.configs):
            for b, beta_occ in enumerate(small.configs):
                if any(bi > ni for bi, ni in zip(beta_occ, occ)):
                    continue
                weight_b = 1
                for ni, bi in zip(occ, beta_occ):
                    weight_b *= binomial(ni, bi)
                rest = tuple(ni - bi for ni, bi in zip(occ, beta_occ))
                for a, alpha_occ in enumerate(small.configs):
                    new = tuple(ri + ai for ri, ai in zip(rest, alpha_occ))
                    weight_a = 1
                    for ri, ai in zip(rest, alpha_occ):
                        weight_a *= binomial(ri + ai, ai)
                    rows.append(basis.index[new] * d + g)
                    cols.append(a * D + b)
                    vals.append(math.sqrt(weight_a * weight_b))
    transfer = sp.csr_matrix((vals, (rows, cols)), shape=(d * d, D * D))
    return TransitionOperatorSet(basis, t, small, transfer)


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class EnsembleConfig:
    sys: SystemSpec
    inter: InteractionSpec
    members: int
    master_seed: int = 0
    bins: int = 60
    dim_cap: Optional[int] = None
    workers: int = 1

    def __post_init__(self):
        if int(self.members) != self.members or self.members < 2:
            raise ValidationError(f"members must be an integer >= 2, got {self.members!r}")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValidationError(f"seed must fit in 64 unsigned bits, got {self.master_seed}")
        if self.bins < 1:
            raise ValidationError("bins must be >= 1")
        if self.workers < 1:
            raise ValidationError("workers must be >= 1")

    @property
    def dim(self) -> int:
        s = self.sys
        return space_dimension(s.stats, s.N1, s.m1) * space_dimension(s.stats, s.N2, s.m2)


def _block_rng(master_seed: int, member: int, i: int, j: int) -> np.random.Generator:
    # counter-based stream keyed by (seed, member, split); entries are drawn in a fixed order
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(member), int(i), int(j)))
    return np.random.Generator(np.random.Philox(seq))


def sample_gue(dim: int, variance: float, rng: np.random.Generator) -> np.ndarray:
    """GUE matrix with E[V_ab V_cd] = variance * delta_ad delta_bc."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    v = 0.5 * (z + z.conj().T)
    return math.sqrt(variance) * v


def _check_dim(config: EnsembleConfig) -> int:
    dim = config.dim
    limit = dim_cap(config.dim_cap)
    if dim > limit:
        raise DimensionCapError(dim, limit)
    return dim


def _species_ops(stats, N, m, t):
    return _transition_operators(stats, N, m, t)


def sample_member(config: EnsembleConfig, member_index: int) -> np.ndarray:
    """Dense Hermitian H of one ensemble member on the (m1, m2) product basis.

    The composite index is ``g1 * d2 + g2``.
    """
    _check_dim(config)
    s = config.sys
    d1 = space_dimension(s.stats, s.N1, s.m1)
    d2 = space_dimension(s.stats, s.N2, s.m2)
    H = np.zeros((d1 * d2, d1 * d2), dtype=complex)
    for (i, j), v2 in config.inter.variances().items():
        if v2 == 0 or i > s.m1 or j > s.m2:
            continue
        ops1 = _species_ops(s.stats, s.N1, s.m1, i)
        ops2 = _species_ops(s.stats, s.N2, s.m2, j)
        D1, D2 = ops1.small.dim, ops2.small.dim
        if (D1 * D2) ** 2 > _BLOCK_CAP:
            raise DimensionCapError((D1 * D2) ** 2, _BLOCK_CAP, what=f"V({i},{j}) block element")
        V = sample_gue(D1 * D2, float(v2), _block_rng(config.master_seed, member_index, i, j))
        W = V.reshape(D1, D2, D1, D2).transpose(0, 2, 1, 3).reshape(D1 * D1, D2 * D2)
        M = ops1.transfer @ W                        # (d1*d1, D2*D2)
        M = (ops2.transfer @ M.T).T                  # (d1*d1, d2*d2)
        H += M.reshape(d1, d1, d2, d2).transpose(0, 2, 1, 3).reshape(d1 * d2, d1 * d2)
    return H


# ---------------------------------------------------------------------------
# ensemble statistics


@dataclass
class EmpiricalMoments:
    """Ensemble-averaged trace moments <H^p> = d^-1 sum lambda^p with standard errors.

    ``mu2_hat``, ``mu4_hat``, ``mu6_hat`` are raw (energy^p); ``q_hat`` and
    ``mu6_reduced_hat`` are the reduced ratios with jackknife errors.
    """

    members: int
    failed_members: int
    dim: int
    mu2_hat: float
    mu2_stderr: float
    mu4_hat: float
    mu4_stderr: float
    mu6_hat: float
    mu6_stderr: float
    q_hat: float
    q_stderr: float
    mu6_reduced_hat: float
    mu6_reduced_stderr: float
    odd_residuals: dict
    histogram: dict

    def to_dict(self) -> dict:
        return asdict(self)


def _member_power_sums(config: EnsembleConfig, member: int):
    H = sample_member(config, member)
    try:
        eig = np.linalg.eigvalsh(H)
    except np.linalg.LinAlgError:
        return member, None, None
    if not np.all(np.isfinite(eig)):
        return member, None, None
    powers = np.array([np.mean(eig**p) for p in range(1, 7)])
    return member, powers, eig


def _jackknife(values: np.ndarray, stat) -> tuple:
    """Statistic of the column means and its leave-one-out jackknife error."""
    n = len(values)
    total = values.sum(axis=0)
    full = stat(total / n)
    loo = np.array([stat((total - row) / (n - 1)) for row in values])
    err = math.sqrt((n - 1) / n * np.sum((loo - loo.mean()) ** 2))
    return float(full), err


def _histogram(x: np.ndarray, bins: int) -> dict:
    half = float(np.max(np.abs(x))) if x.size else 1.0
    half = math.nextafter(half, math.inf) if half > 0 else 1.0
    edges = np.linspace(-half, half, bins + 1)
    counts, _ = np.histogram(x, bins=edges)
    mass = counts / counts.sum()
    return {"bin_edges": edges.tolist(), "mass": mass.tolist()}


def ensemble_moments(config: EnsembleConfig, keep_eigenvalues: bool = False):
    """Sample every member, diagonalize, and reduce in member order."""
    dim = _check_dim(config)
    members = range(config.members)
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(lambda n: _member_power_sums(config, n), members))
    else:
        results = [_member_power_sums(config, n) for n in members]
    results.sort(key=lambda r: r[0])
    good = [r for r in results if r[1] is not None]
    failed = len(results) - len(good)
    if failed > 0.01 * config.members or len(good) < 2:
        raise QmomError(f"eigensolver failed for {failed} of {config.members} members")

    S = np.array([r[1] for r in good])  # (members, 6) power sums p = 1..6
    n = len(good)
    mean = S.mean(axis=0)
    stderr = S.std(axis=0, ddof=1) / math.sqrt(n)
    q_hat, q_err = _jackknife(S, lambda m: m[3] / m[1] ** 2 - 2.0)
    mu6r, mu6r_err = _jackknife(S, lambda m: m[5] / m[1] ** 3)

    eig = np.concatenate([r[2] for r in good])
    x = eig / math.sqrt(mean[1])
    result = EmpiricalMoments(
        members=n,
        failed_members=failed,
        dim=dim,
        mu2_hat=float(mean[1]),
        mu2_stderr=float(stderr[1]),
        mu4_hat=float(mean[3]),
        mu4_stderr=float(stderr[3]),
        mu6_hat=float(mean[5]),
        mu6_stderr=float(stderr[5]),
        q_hat=q_hat,
        q_stderr=q_err,
        mu6_reduced_hat=mu6r,
        mu6_reduced_stderr=mu6r_err,
        odd_residuals={
            f"mu{p}": {"value": float(mean[p - 1]), "stderr": float(stderr[p - 1])}
            for p in (1, 3, 5)
        },
        histogram=_histogram(x, config.bins),
    )
    if keep_eigenvalues:
        return result, x
    return result


def histogram_l1(histogram: dict, q: float) -> float:
    """L1 distance between binned masses and the q-normal probability of each bin.

    q-normal mass falling outside the histogram range counts as mismatch.
    """
    edges = np.asarray(histogram["bin_edges"], dtype=float)
    mass = np.asarray(histogram["mass"], dtype=float)
    cdf = qnormal_cdf(edges, q)
    expected = np.diff(cdf)
    outside = cdf[0] + (1.0 - cdf[-1])
    return float(np.sum(np.abs(mass - expected)) + outside)


def histogram_csv(histogram: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["bin_lo", "bin_hi", "mass"])
    edges = histogram["bin_edges"]
    for lo, hi, mass in zip(edges[:-1], edges[1:], histogram["mass"]):
        writer.writerow([repr(float(lo)), repr(float(hi)), repr(float(mass))])
    return buf.getvalue()


def compare_with_theory(config: EnsembleConfig, policy=None, empirical=None) -> dict:
    """Finite-N formulas against the Monte Carlo estimates.

    Returns a JSON-ready dict with z-scores, relative gaps and the L1
    distance of the standardized histogram to the q-normal at the formula q.
    """
    theory = moment_report(config.sys, config.inter, policy)
    emp = ensemble_moments(config) if empirical is None else empirical

    def row(th, hat, err):
        return {
            "theory": th,
            "empirical": hat,
            "stderr": err,
            "z_score": (hat - th) / err if err > 0 else (0.0 if hat == th else math.inf),
            "rel_gap": abs(hat - th) / abs(th) if th else math.inf,
        }

    return {
        "system": {
            "stats": config.sys.stats.value,
            "N1": config.sys.N1,
            "m1": config.sys.m1,
            "N2": config.sys.N2,
            "m2": config.sys.m2,
        },
        "interaction": _interaction_dict(config.inter),
        "members": config.members,
        "master_seed": int(config.master_seed),
        "y_policy": theory.y_policy,
        "mu2": row(theory.mu2, emp.mu2_hat, emp.mu2_stderr),
        "q": row(theory.q, emp.q_hat, emp.q_stderr),
        "mu6": row(theory.mu6_formula, emp.mu6_reduced_hat, emp.mu6_reduced_stderr),
        "mu6_qnormal": theory.mu6_qnormal,
        "histogram_l1": histogram_l1(emp.histogram, theory.q),
        "theory_report": theory.to_dict(),
        "empirical": emp.to_dict(),
    }


def _interaction_dict(inter: InteractionSpec) -> dict:
    scheme = inter.scheme
    out = {"k": inter.k, "scheme": scheme.name}
    out["variances"] = {f"{i},{j}": str(v) for (i, j), v in inter.variances().items()}
    return out


def to_json(obj) -> str:
    """Stable JSON text (sorted keys, fixed float repr)."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"


# ---------------------------------------------------------------------------
# exact single-space correlators by explicit traces (small spaces only)


@lru_cache(maxsize=32)
def _pair_tensor(stats, N, m, t) -> np.ndarray:
    """K[g1, g2, g3, g4] = E[A_{g1 g2} A_{g3 g4}] for a unit-variance t-body GUE."""
    ops = _transition_operators(stats, N, m, t)
    d = ops.basis.dim
    K = (ops.transfer @ ops.swapped().T).toarray()
    return K.reshape(d, d, d, d)


def exact_trace_correlator(stats, N: int, m: int, word: str, ranks: dict,
                           cap: int = 40) -> float:
    """Exact Wick average d^-1 E tr(...) of a word of paired operators.

    ``word`` is a string such as ``"ABAB"`` or ``"ABCABC"`` in which each
    letter occurs exactly twice; ``ranks`` maps each letter to the body rank
    of an independent unit-variance embedded GUE.  Cost grows like d^len(word),
    so this is restricted to spaces of dimension <= ``cap``.
    """
    stats = Statistics.parse(stats)
    d = space_dimension(stats, N, m)
    if d > cap:
        raise DimensionCapError(d, cap)
    letters = {}
    for pos, ch in enumerate(word):
        letters.setdefault(ch, []).append(pos)
    if any(len(p) != 2 for p in letters.values()):
        raise ValidationError(f"every letter must appear exactly twice in {word!r}")
    L = len(word)
    idx = "abcdefghijklmnopqrstuvwxyz"
    operands, subs = [], []
    for ch, (p1, p2) in letters.items():
        t = ranks[ch]
        if t > m:
            return 0.0
        operands.append(_pair_tensor(stats, N, m, t))
        subs.append(idx[p1] + idx[(p1 + 1) % L] + idx[p2] + idx[(p2 + 1) % L])
    expr = ",".join(subs) + "->"
    value = np.einsum(expr, *operands, optimize=True)
    return float(np.real(value)) / d
