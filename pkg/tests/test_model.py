"""Reaction terms: worked values, invariant-region bounds, monotonicity."""
import math

import numpy as np
import pytest

from fracpp.model import (
    BoundsConfig,
    ModelParams,
    mu_guard_thresholds,
    reaction_f1,
    reaction_f2,
)

BENCH = ModelParams()  # sigma=1, rho_q=1.1, gamma=0.05, kappa=1, delta=0.5


class TestReactionF1:
    def test_prey_cap_is_a_zero(self):
        assert reaction_f1(1.0, 0.0, BENCH) == 0.0

    def test_mixed_point_value(self):
        assert reaction_f1(0.5, 0.5, BENCH) == pytest.approx(-0.025, abs=1e-15)

    def test_zero_prey(self):
        assert reaction_f1(0.0, 0.7, BENCH) == 0.0

    def test_origin_convention(self):
        assert reaction_f1(0.0, 0.0, BENCH) == 0.0

    def test_vectorized(self):
        n = np.array([0.5, 1.0, 0.0])
        p = np.array([0.5, 0.0, 0.7])
        out = reaction_f1(n, p, BENCH)
        assert out == pytest.approx([-0.025, 0.0, 0.0], abs=1e-15)


class TestReactionF2:
    def test_mixed_point_value(self):
        assert reaction_f2(0.5, 0.5, BENCH) == pytest.approx(0.15, abs=1e-15)

    def test_zero_predator(self):
        assert reaction_f2(0.3, 0.0, BENCH) == 0.0

    def test_zero_prey_pure_mortality(self):
        assert reaction_f2(0.0, 1.0, BENCH) == pytest.approx(-0.275, abs=1e-15)

    def test_origin_convention(self):
        assert reaction_f2(0.0, 0.0, BENCH) == 0.0


class TestInvariantRegionBounds:
    def test_pointwise_bounds_on_the_box(self):
        rng = np.random.default_rng(11)
        l1 = 1.0 / BENCH.gamma + 1.0
        n = rng.uniform(1e-12, 1.0, size=100_000)
        p = rng.uniform(1e-12, l1, size=100_000)
        f1 = reaction_f1(n, p, BENCH)
        f2 = reaction_f2(n, p, BENCH)
        assert np.all(f1 >= -BENCH.rho_q * n - 1e-14)
        assert np.all(f1 <= n * (1 - n) + 1e-14)
        assert np.all(f1 <= 1 - n + 1e-14)
        assert np.all(f2 >= -BENCH.sigma * BENCH.delta * p - 1e-14)
        assert np.all(f2 <= BENCH.sigma * (1 - BENCH.gamma * p) + 1e-14)

    def test_quasi_monotone(self):
        # prey reaction non-increasing in the predator, predator reaction
        # non-decreasing in the prey
        rng = np.random.default_rng(12)
        for _ in range(2000):
            n = rng.uniform(1e-6, 1.0)
            p1, p2 = sorted(rng.uniform(0.0, 21.0, size=2))
            assert reaction_f1(n, p2, BENCH) <= reaction_f1(n, p1, BENCH) + 1e-14
            p = rng.uniform(1e-6, 21.0)
            n1, n2 = sorted(rng.uniform(0.0, 1.0, size=2))
            assert reaction_f2(n2, p, BENCH) >= reaction_f2(n1, p, BENCH) - 1e-14

    def test_finite_difference_slopes_bounded_away_from_origin(self):
        # empirical local Lipschitz exploration; no exact constant is
        # asserted, only that slopes stay finite and moderate
        rng = np.random.default_rng(13)
        worst = 0.0
        for _ in range(5000):
            n1, n2 = rng.uniform(0.05, 1.0, size=2)
            p1, p2 = rng.uniform(0.05, 21.0, size=2)
            df1 = abs(reaction_f1(n1, p1, BENCH) - reaction_f1(n2, p2, BENCH))
            df2 = abs(reaction_f2(n1, p1, BENCH) - reaction_f2(n2, p2, BENCH))
            denom = abs(n1 - n2) + abs(p1 - p2)
            if denom > 1e-9:
                worst = max(worst, df1 / denom, df2 / denom)
        assert np.isfinite(worst)
        assert worst < 50.0


class TestGuardThresholds:
    def test_benchmark_alpha_half(self):
        b1 = math.sqrt(2) - 1
        mu_n, mu_p = mu_guard_thresholds(BENCH, b1)
        assert mu_n == pytest.approx(0.532533, abs=1e-6)
        assert mu_p == 1.0  # (1-b1)/(sigma*delta) > 1, capped

    def test_vanishing_predation_pressure_caps_at_one(self):
        params = ModelParams(sigma=1e-9, delta=0.5, gamma=1e-10)
        assert mu_guard_thresholds(params, 0.5)[1] == 1.0

    def test_classical_alpha(self):
        mu_n, mu_p = mu_guard_thresholds(BENCH, 0.0)
        assert mu_n == pytest.approx(1.0 / 1.1, rel=1e-15)
        assert mu_p == 1.0


class TestParamValidation:
    def test_rejects_bad_orders(self):
        with pytest.raises(ValueError, match=r"\(0, 1\]"):
            ModelParams(alpha=1.2)
        with pytest.raises(ValueError, match=r"\(1, 2\]"):
            ModelParams(beta=2.3)

    def test_rejects_inverted_mortalities(self):
        with pytest.raises(ValueError, match="gamma"):
            ModelParams(gamma=0.9, delta=0.5)

    def test_rejects_nonpositive_diffusion(self):
        with pytest.raises(ValueError):
            ModelParams(d1=0.0)

    def test_bounds_default_cap(self):
        bounds = BoundsConfig.for_params(BENCH)
        assert bounds.p_upper == pytest.approx(21.0)
        assert bounds.n_upper == 1.0
        with pytest.raises(ValueError, match="cap"):
            BoundsConfig.for_params(BENCH, p_upper=10.0)
