"""Weight-table invariants, worked examples, and closed-form oracles.

The Gamma-quotient closed forms are evaluated in extended precision with
mpmath and serve as the independent reference for the recurrences.
"""
import math

import mpmath
import numpy as np
import pytest

from fracpp.weights import caputo_coeffs, centered_weights, wsgd_weights

mpmath.mp.dps = 40


def centered_closed_form(beta: float, j: int) -> float:
    """g_j = (-1)^j Gamma(beta+1) / (Gamma(beta/2 - j + 1) Gamma(beta/2 + j + 1))."""
    b = mpmath.mpf(beta)
    val = (-1) ** j * mpmath.gamma(b + 1) / (
        mpmath.gamma(b / 2 - j + 1) * mpmath.gamma(b / 2 + j + 1)
    )
    return float(val)


def wsgd_closed_form(beta: float, j: int) -> float:
    """theta_j from the Gamma-quotient form of the shifted-difference weights."""
    b = mpmath.mpf(beta)
    c = 2 * mpmath.cos(b * mpmath.pi / 2)
    if j == 0:
        return float((2 - b - b**2) / c)
    if j == 1:
        return float(b * (b + 2) * (b - 1) / (4 * c))
    w_next = (
        mpmath.gamma(j + 1 - b - 1)
        / (mpmath.gamma(-b) * mpmath.gamma(j + 1))
        * (1 - (b / 2) * (b + 1) / (j + 1))
    )
    return float(w_next / c)


class TestCaputoCoeffs:
    def test_b0_is_one_for_any_alpha(self):
        assert caputo_coeffs(0.5, 1).values[0] == 1.0
        assert caputo_coeffs(0.123, 1).values[0] == 1.0

    def test_alpha_one_degenerates(self):
        assert caputo_coeffs(1.0, 4).values.tolist() == [1.0, 0.0, 0.0, 0.0]

    def test_b1_at_half(self):
        # direct evaluation of (n+1)^0.5 - n^0.5 at n = 1
        assert caputo_coeffs(0.5, 2).values[1] == pytest.approx(math.sqrt(2) - 1, abs=1e-15)

    @pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.7, 0.9, 0.99])
    def test_decreasing_with_lower_bound(self, alpha):
        b = caputo_coeffs(alpha, 10_000).values
        assert np.all(np.diff(b) < 0)
        k = np.arange(1, 10_001, dtype=float)
        assert np.all(b > (1 - alpha) * k ** (-alpha))

    def test_random_alpha_property_sweep(self):
        rng = np.random.default_rng(42)
        for alpha in rng.uniform(0.01, 0.999, size=25):
            b = caputo_coeffs(float(alpha), 1000).values
            assert b[0] == 1.0
            assert np.all(np.diff(b) < 0)
            k = np.arange(1, 1001, dtype=float)
            assert np.all(b > (1 - alpha) * k ** (-alpha))

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError, match=r"\(0, 1\]"):
            caputo_coeffs(0.0, 4)
        with pytest.raises(ValueError, match=r"\(0, 1\]"):
            caputo_coeffs(1.5, 4)
        with pytest.raises(ValueError):
            caputo_coeffs(0.5, 0)


class TestCenteredWeights:
    def test_classical_limit(self):
        g = centered_weights(2.0, 4).values
        assert g.tolist() == [2.0, -1.0, 0.0, 0.0]

    def test_g0_closed_form(self):
        g0 = centered_weights(1.5, 1).values[0]
        assert g0 == pytest.approx(1.57379, abs=5e-6)
        assert g0 == pytest.approx(centered_closed_form(1.5, 0), rel=1e-15)

    def test_recurrence_identity_exact(self):
        g = centered_weights(1.5, 3).values
        assert g[2] == (1 - 2.5 / 2.75) * g[1]

    def test_signs_and_decay(self):
        g = centered_weights(1.5, 200).values
        assert g[0] > 0
        assert np.all(g[1:] < 0)
        assert np.all(np.abs(g[2:]) < np.abs(g[1:-1]))

    @pytest.mark.parametrize("beta", [1.1, 1.5, 1.9])
    def test_matches_gamma_closed_form(self, beta):
        g = centered_weights(beta, 21).values
        for j in range(21):
            assert g[j] == pytest.approx(centered_closed_form(beta, j), rel=1e-12)

    def test_tail_sum_below_g0_every_truncation(self):
        g = centered_weights(1.5, 10_000).values
        partial = 2 * np.cumsum(np.abs(g[1:]))
        assert np.all(partial < g[0])

    def test_rejects_bad_order(self):
        with pytest.raises(ValueError, match=r"\(1, 2\]"):
            centered_weights(1.0, 4)
        with pytest.raises(ValueError, match=r"\(1, 2\]"):
            centered_weights(2.5, 4)


class TestWsgdWeights:
    def test_classical_limit(self):
        th = wsgd_weights(2.0, 4).values
        assert th.tolist() == [2.0, -1.0, 0.0, 0.0]

    def test_theta0_closed_form(self):
        th0 = wsgd_weights(1.5, 1).values[0]
        assert th0 == pytest.approx(1.23744, abs=5e-6)
        assert th0 == pytest.approx((-1.75) / (2 * math.cos(0.75 * math.pi)), rel=1e-15)

    def test_theta1_sign(self):
        th = wsgd_weights(1.1, 2).values
        assert th[1] == pytest.approx(1.1 * 3.1 * 0.1 / (8 * math.cos(0.55 * math.pi)), rel=1e-14)
        assert th[1] < 0

    @pytest.mark.parametrize("beta", [1.1, 1.5, 1.9])
    def test_matches_gamma_closed_form(self, beta):
        th = wsgd_weights(beta, 21).values
        for j in range(21):
            assert th[j] == pytest.approx(wsgd_closed_form(beta, j), rel=1e-12)

    def test_signs_and_decay(self):
        th = wsgd_weights(1.5, 200).values
        assert th[0] > 0
        assert np.all(th[1:] <= 0)
        assert abs(th[1]) > abs(th[2])
        assert np.all(np.abs(th[3:]) <= np.abs(th[2:-1]))

    def test_tail_sum_below_theta0_every_truncation(self):
        th = wsgd_weights(1.5, 10_000).values
        partial = 2 * np.cumsum(np.abs(th[1:]))
        assert np.all(partial < th[0])

    def test_rejects_bad_order(self):
        with pytest.raises(ValueError, match=r"\(1, 2\]"):
            wsgd_weights(0.9, 4)


def test_families_coincide_at_beta_two():
    g = centered_weights(2.0, 64).values
    th = wsgd_weights(2.0, 64).values
    assert np.array_equal(g, th)


def test_tables_are_cached_and_immutable():
    a = centered_weights(1.5, 32)
    b = centered_weights(1.5, 32)
    assert a is b
    with pytest.raises(ValueError):
        a.values[0] = 3.0
