"""Independent reference computations used by the tests.

Nothing here imports ``qmom``.  Operators are built densely from
creation/annihilation rules and contracted by explicit Wick pairing, and the
nu-sums are re-typed from scratch with plain integers.
"""
import itertools
import math
from fractions import Fraction

import numpy as np


# ---------------------------------------------------------------------------
# nu-sum oracle


def _c(n, r):
    return math.comb(n, r) if n >= 0 and 0 <= r <= n else 0


def lam(stats, N, m, r, nu):
    if stats == "fermion":
        return _c(m - nu, r) * _c(N - m + r - nu, r)
    return _c(m - nu, r) * _c(N + m + nu - 1, r)


def dnu(stats, N, nu):
    if stats == "fermion":
        prev = _c(N, nu - 1) ** 2 if nu else 0
        return _c(N, nu) ** 2 - prev
    prev = _c(N + nu - 2, nu - 1) ** 2 if nu else 0
    return _c(N + nu - 1, nu) ** 2 - prev


def dim(stats, N, m):
    return _c(N, m) if stats == "fermion" else _c(N + m - 1, m)


def z_sum(stats, N, m, k1, k2, nu_max=None):
    top = m if nu_max is None else nu_max
    s = sum(lam(stats, N, m, m - k1, nu) * lam(stats, N, m, k2, nu) * dnu(stats, N, nu)
            for nu in range(top + 1))
    return Fraction(s, dim(stats, N, m))


def x_sum(stats, N, m, k1, k2, k3, nu_max=None):
    top = m if nu_max is None else nu_max
    s = sum(lam(stats, N, m, k1, nu) * lam(stats, N, m, m - k2, nu)
            * lam(stats, N, m, k3, nu) * dnu(stats, N, nu)
            for nu in range(top + 1))
    return Fraction(s, dim(stats, N, m))


# ---------------------------------------------------------------------------
# dense second quantization


def fock_basis(stats, N, m):
    if stats == "fermion":
        return list(itertools.combinations(range(N), m))
    return list(itertools.combinations_with_replacement(range(N), m))


def _fermion_op(state, alpha, beta):
    """a+_{alpha} a_{beta} on a sorted tuple of occupied orbitals."""
    sign = 1
    occ = list(state)
    for b in beta:  # a_{b1} acts first
        if b not in occ:
            return None, 0
        sign *= (-1) ** occ.index(b)
        occ.remove(b)
    for a in reversed(alpha):  # a+_{a1} acts last
        if a in occ:
            return None, 0
        pos = sum(1 for o in occ if o < a)
        sign *= (-1) ** pos
        occ.insert(pos, a)
    return tuple(occ), sign


def _boson_op(state, alpha, beta):
    """Normalized |alpha><beta| pair operator on an occupation multiset."""
    n = [0] * (max(state + alpha + beta, default=0) + 1)
    for o in state:
        n[o] += 1
    amp = 1.0
    for b in beta:
        if n[b] == 0:
            return None, 0
        amp *= math.sqrt(n[b])
        n[b] -= 1
    for a in alpha:
        n[a] += 1
        amp *= math.sqrt(n[a])
    norm = 1.0
    for label in (alpha, beta):
        for count in np.unique(label, return_counts=True)[1]:
            norm *= math.sqrt(math.factorial(int(count)))
    new = tuple(sorted(i for i, c in enumerate(n) for _ in range(c)))
    return new, amp / norm


def pair_tensor(stats, N, m, t):
    """K[a, b, c, e] = sum_{alpha beta} <a|O_ab|b> <c|O_ba|e> for unit-variance t-body GUE."""
    states = fock_basis(stats, N, m)
    index = {s: n for n, s in enumerate(states)}
    small = fock_basis(stats, N, t)
    d = len(states)
    op = _fermion_op if stats == "fermion" else _boson_op
    mats = {}
    for alpha in small:
        for beta in small:
            M = np.zeros((d, d))
            for col, s in enumerate(states):
                new, amp = op(s, alpha, beta)
                if new is not None:
                    M[index[new], col] = amp
            mats[alpha, beta] = M
    K = np.zeros((d, d, d, d))
    for (alpha, beta), M in mats.items():
        K += np.einsum("ab,ce->abce", M, mats[beta, alpha])
    return K


def wick(stats, N, m, word, ranks):
    """d^-1 E tr(word) for independent unit-variance GUEs of the given ranks."""
    d = dim(stats, N, m)
    L = len(word)
    letters = "abcdefghijkl"
    subs, ops = [], []
    for ch in sorted(set(word)):
        p1, p2 = [n for n, c in enumerate(word) if c == ch]
        ops.append(pair_tensor(stats, N, m, ranks[ch]))
        subs.append(letters[p1] + letters[(p1 + 1) % L] + letters[p2] + letters[(p2 + 1) % L])
    return float(np.einsum(",".join(subs) + "->", *ops)) / d


# ---------------------------------------------------------------------------
# two-species sums written out directly


def splits(k):
    return [(i, k - i) for i in range(k + 1)]


def q_direct(stats, N1, m1, N2, m2, k, v2=lambda i, j: 1):
    mu2 = sum(v2(i, j) * lam(stats, N1, m1, i, 0) * lam(stats, N2, m2, j, 0)
              for i, j in splits(k))
    num = sum(v2(i, j) * v2(p, r) * z_sum(stats, N1, m1, i, p) * z_sum(stats, N2, m2, j, r)
              for i, j in splits(k) for p, r in splits(k))
    return Fraction(num) / Fraction(mu2) ** 2
