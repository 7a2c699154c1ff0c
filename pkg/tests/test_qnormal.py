import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qmom.errors import ValidationError
from qmom.qnormal import (
    QuadratureError,
    integrate_against_pdf,
    mu4_of_q,
    mu6_of_q,
    q_factorial,
    q_hermite,
    q_number,
    qnormal_cdf,
    qnormal_pdf,
    support,
)

Q_GRID = [round(0.1 * n, 1) for n in range(11)]


@pytest.mark.parametrize("n, q, expected", [(4, 1.0, 4), (3, 0.0, 1), (3, 0.5, 1.75)])
def test_q_number(n, q, expected):
    assert q_number(n, q) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("n, q, expected", [(0, 0.37, 1), (3, 1.0, 6), (3, 0.5, 2.625)])
def test_q_factorial(n, q, expected):
    assert q_factorial(n, q) == pytest.approx(expected, abs=1e-15)


def test_q_hermite_values():
    assert q_hermite(2, 2.0, 0.3) == pytest.approx(3.0)
    assert q_hermite(3, 2.0, 0.0) == pytest.approx(4.0)
    assert q_hermite(0, 7.3, 0.9) == 1.0


@given(st.floats(-3, 3), st.floats(0, 1))
def test_q_hermite_low_orders(x, q):
    assert q_hermite(2, x, q) == pytest.approx(x * x - 1, abs=1e-12)
    assert q_hermite(3, x, q) == pytest.approx(x**3 - (2 + q) * x, abs=1e-12)


def test_q_hermite_vectorized():
    x = np.linspace(-1, 1, 5)
    np.testing.assert_allclose(q_hermite(2, x, 0.4), x**2 - 1)


@pytest.mark.parametrize("x, q, expected", [(0.0, 0.0, 1 / math.pi), (0.0, 1.0, 1 / math.sqrt(2 * math.pi)),
                                            (2.5, 0.0, 0.0)])
def test_pdf_values(x, q, expected):
    assert qnormal_pdf(x, q) == pytest.approx(expected, abs=1e-12)


def test_support():
    assert (support(0.0).lower, support(0.0).upper) == (-2.0, 2.0)
    assert support(0.75).upper == pytest.approx(4.0)
    s = support(1.0)
    assert not s.bounded and s.upper == math.inf


@pytest.mark.parametrize("q", [-0.1, 1.5, float("nan")])
def test_q_out_of_range(q):
    with pytest.raises(ValidationError):
        qnormal_pdf(0.0, q)


@pytest.mark.parametrize("q, m4, m6", [(0.0, 2, 5), (1.0, 3, 15), (0.5, 2.5, 8.875)])
def test_moment_polynomials(q, m4, m6):
    assert mu4_of_q(q) == pytest.approx(m4)
    assert mu6_of_q(q) == pytest.approx(m6)


def test_semicircle_closed_form():
    x = np.linspace(-1.99, 1.99, 101)
    np.testing.assert_allclose(qnormal_pdf(x, 0.0), np.sqrt(4 - x**2) / (2 * math.pi), atol=1e-12)


def test_pdf_approaches_gaussian_near_one():
    x = np.linspace(-3, 3, 13)
    gauss = np.exp(-x**2 / 2) / math.sqrt(2 * math.pi)
    for eps, tol in ((1e-3, 2e-3), (1e-4, 2e-4)):
        assert np.max(np.abs(qnormal_pdf(x, 1 - eps) - gauss)) < tol


def test_pdf_continuous_across_gaussian_switch():
    x = np.linspace(-3, 3, 7)
    np.testing.assert_allclose(qnormal_pdf(x, 1 - 2e-6), qnormal_pdf(x, 1 - 5e-7), atol=1e-5)


@pytest.mark.parametrize("q", [0.0, 0.3, 0.6, 0.95])
def test_pdf_non_negative_and_symmetric(q):
    x = np.linspace(0.0, 3.9, 40)
    f = qnormal_pdf(x, q)
    assert np.all(f >= 0)
    np.testing.assert_array_equal(f, qnormal_pdf(-x, q))


def test_integration_examples():
    assert integrate_against_pdf(lambda x: np.ones_like(x), 0.3, 1e-8) == pytest.approx(1, abs=1e-8)
    assert integrate_against_pdf(lambda x: x, 0.7) == pytest.approx(0, abs=1e-10)
    assert integrate_against_pdf(lambda x: x**2, 0.6) == pytest.approx(1, abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.floats(0, 0.999))
def test_fourth_moment_property(q):
    assert integrate_against_pdf(lambda x: x**4, q) == pytest.approx(2 + q, rel=1e-6)


def test_cdf():
    assert qnormal_cdf(0.0, 0.4) == pytest.approx(0.5, abs=1e-10)
    assert qnormal_cdf(2.0, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert qnormal_cdf(1.0, 1.0) == pytest.approx(0.841344746, abs=1e-8)


def test_quadrature_failure_is_reported():
    with pytest.raises(QuadratureError):
        integrate_against_pdf(lambda x: math.cos(1e4 * x), 0.5, limit=3)
