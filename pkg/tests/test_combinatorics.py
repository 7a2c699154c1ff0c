import math

import pytest
from hypothesis import given, strategies as st

from qmom.combinatorics import (
    Statistics,
    binomial,
    binomial_signed,
    dim_irrep,
    dim_irrep_b,
    dim_irrep_f,
    lambda_b,
    lambda_f,
    space_dimension,
)


@pytest.mark.parametrize("n, r, expected", [(5, 2, 10), (3, 5, 0), (6, 3, 20), (4, -1, 0)])
def test_binomial_values(n, r, expected):
    assert binomial(n, r) == expected


@pytest.mark.parametrize("n, r, expected", [(-4, 2, 10), (-1, 3, -1), (5, 2, 10)])
def test_binomial_signed_values(n, r, expected):
    assert binomial_signed(n, r) == expected


@given(st.integers(-30, 30), st.integers(0, 12))
def test_binomial_signed_falling_factorial(n, r):
    num = math.prod(n - i for i in range(r))
    assert binomial_signed(n, r) * math.factorial(r) == num


@pytest.mark.parametrize("args, expected", [((6, 3, 2, 0), 30), ((6, 3, 1, 1), 6), ((6, 3, 2, 3), 0)])
def test_lambda_f(args, expected):
    assert lambda_f(*args) == expected


# (4,3,1,1): C(2,1) * C(4+3+1-1, 1) = 14
@pytest.mark.parametrize("args, expected", [((4, 3, 2, 0), 45), ((4, 3, 1, 1), 14), ((4, 3, 2, 3), 0)])
def test_lambda_b(args, expected):
    assert lambda_b(*args) == expected


@pytest.mark.parametrize("nu, expected", [(0, 1), (1, 35), (2, 189)])
def test_dim_irrep_f(nu, expected):
    assert dim_irrep_f(6, nu) == expected


@pytest.mark.parametrize("nu, expected", [(0, 1), (1, 15), (2, 84)])
def test_dim_irrep_b(nu, expected):
    assert dim_irrep_b(4, nu) == expected


@pytest.mark.parametrize(
    "stats, N, m, expected", [("fermion", 6, 3, 20), ("boson", 4, 3, 20), ("fermion", 4, 0, 1)]
)
def test_space_dimension(stats, N, m, expected):
    assert space_dimension(stats, N, m) == expected


def test_space_dimension_rejects_overfilled_fermions():
    with pytest.raises(ValueError):
        space_dimension(Statistics.FERMION, 4, 5)


def test_stats_parse_accepts_strings_and_members():
    assert Statistics.parse("Boson") is Statistics.BOSON
    assert Statistics.parse(Statistics.FERMION) is Statistics.FERMION
    with pytest.raises(ValueError):
        Statistics.parse("anyon")


@given(st.integers(1, 30), st.integers(0, 10))
def test_irrep_dimensions_telescope(N, k):
    assert sum(dim_irrep_f(N, nu) for nu in range(k + 1)) == binomial(N, k) ** 2
    assert sum(dim_irrep_b(N, nu) for nu in range(k + 1)) == binomial(N + k - 1, k) ** 2


@given(st.integers(1, 20), st.data())
def test_negative_n_duality(N, data):
    m = data.draw(st.integers(0, 10))
    r = data.draw(st.integers(0, m))
    nu = data.draw(st.integers(0, m))
    # lambda_f evaluated with signed binomials at -N is lambda_b up to sign
    flipped = binomial_signed(m - nu, r) * binomial_signed(-N - m + r - nu, r)
    assert abs(flipped) == lambda_b(N, m, r, nu)
    d = binomial_signed(-N, nu) ** 2 - (binomial_signed(-N, nu - 1) ** 2 if nu else 0)
    assert abs(d) == dim_irrep_b(N, nu)


def test_dispatch_matches_direct_forms():
    assert dim_irrep("fermion", 7, 2) == dim_irrep_f(7, 2)
    assert dim_irrep("boson", 7, 2) == dim_irrep_b(7, 2)
