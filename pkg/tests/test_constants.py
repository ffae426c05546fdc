"""Constants module: gamma, lambda_s, and the derived thresholds.

The quadrature oracle below predates the implementation: it evaluates the
Euler integral directly under the doubly-exponential substitution
t = exp(2 sinh u), where the trapezoid rule converges to ~2e-14 relative
error for x in (0, 20].  The frozen values in this file were produced by
it (step h = 0.01 on u in [-9, 6.2]).
"""

import math

import numpy as np
import pytest

from pseudopowers import DomainError, ThresholdTable, basis_threshold, gamma, lambda_s


def gamma_quadrature(x: float, h: float = 0.01, lo: float = -9.0, hi: float = 6.2) -> float:
    """Direct quadrature of the Euler integral; independent of the package."""
    u = np.arange(lo, hi, h)
    t = np.exp(2.0 * np.sinh(u))
    with np.errstate(over="ignore", under="ignore"):
        logf = x * 2.0 * np.sinh(u) - t
        f = np.where(logf < -700, 0.0, np.exp(logf)) * 2.0 * np.cosh(u)
    return float(np.sum(f) * h)


# frozen oracle outputs
GAMMA_HALF_ORACLE = 1.7724538509055539
GAMMA_THIRD_ORACLE = 2.6789385347078047
LAMBDA_3_ORACLE = 0.1186788237814625
THRESHOLD_2_ORACLE = 11.866063822122646
THRESHOLD_3_ORACLE = 11.048564286000762


def test_quadrature_oracle_self_check():
    assert abs(gamma_quadrature(1.0) - 1.0) < 1e-13
    assert abs(gamma_quadrature(4.0) - 6.0) < 6e-13
    assert abs(gamma_quadrature(0.5) - math.sqrt(math.pi)) < 1e-13


def test_gamma_integer_values():
    assert abs(gamma(1.0) - 1.0) < 1e-14
    assert abs(gamma(4.0) - 6.0) < 1e-13
    assert abs(gamma(7.0) - 720.0) < 1e-10


def test_gamma_half():
    assert abs(gamma(0.5) - 1.772453850905516) < 1e-12


def test_gamma_matches_quadrature_on_grid():
    xs = np.concatenate([np.linspace(0.02, 0.5, 25), np.linspace(0.5, 20.0, 79)])
    for x in xs:
        x = float(x)
        ref = gamma_quadrature(x)
        assert abs(gamma(x) - ref) <= 1e-12 * abs(ref), f"gamma({x}) off oracle"


def test_gamma_domain():
    for bad in (0.0, -1.0, -0.5, float("nan")):
        with pytest.raises(DomainError):
            gamma(bad)


def test_lambda2_equals_pi_over_8():
    assert abs(lambda_s(2) - math.pi / 8) < 1e-12


def test_lambda3_matches_oracle():
    assert abs(lambda_s(3) - LAMBDA_3_ORACLE) <= 1e-10 * LAMBDA_3_ORACLE
    live = gamma_quadrature(1.0 / 3.0) ** 3 / (27 * 6)
    assert abs(lambda_s(3) - live) <= 1e-10 * live


def test_lambda_decreasing_and_below_half():
    values = [lambda_s(s) for s in range(2, 11)]
    for v in values:
        assert 0.0 < v < 0.5
    for a, b in zip(values, values[1:]):
        assert b < a


def test_lambda_domain():
    for bad in (1, 0, -3):
        with pytest.raises(DomainError):
            lambda_s(bad)
    with pytest.raises(DomainError):
        basis_threshold(1)


def test_basis_threshold_values():
    assert abs(basis_threshold(2) - THRESHOLD_2_ORACLE) <= 1e-9 * THRESHOLD_2_ORACLE
    assert abs(basis_threshold(3) - THRESHOLD_3_ORACLE) <= 1e-9 * THRESHOLD_3_ORACLE


def test_basis_threshold_identity():
    for s in range(2, 11):
        lam = lambda_s(s)
        assert abs(basis_threshold(s) * lam * (1.0 - 2.0 * lam) - 1.0) < 1e-10


def test_basis_threshold_exceeds_inverse_lambda():
    for s in range(2, 11):
        assert basis_threshold(s) > 1.0 / lambda_s(s)


def test_threshold_table():
    for s in (2, 3, 5):
        table = ThresholdTable.for_s(s)
        assert 0.0 < table.lambda_s < 0.5
        assert abs(table.inv_lambda_s * table.lambda_s - 1.0) < 1e-12
        assert table.basis_threshold > table.inv_lambda_s
        assert 0.0 < table.sumset_density < 1.0
        d = table.as_dict()
        assert set(d) == {"s", "lambda_s", "inv_lambda_s", "basis_threshold", "sumset_density"}
