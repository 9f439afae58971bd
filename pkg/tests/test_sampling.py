import math

import numpy as np
import pytest
from scipy import stats

from idconc import (CompoundPoisson, ConfigurationError, CustomDensity,
                    GammaLevy, IDVectorSpec, PoissonAtom,
                    SymmetricExponential, UniformJumps, empirical_tail,
                    estimate_l, estimate_modified_moments, estimate_moment,
                    estimate_norm_expectation, sample_marginal, sample_vector)
from idconc.numerics import Centering
from idconc.sampling import (analytic_l, collect_moments,
                             custom_approximation_diagnostics,
                             marginal_abs_moment, marginal_mean,
                             marginal_variance, tail_from_norms)

LAPLACE = SymmetricExponential(1.0)
ATOM = PoissonAtom(1.0, 1.0)
CP = CompoundPoisson(1.0, UniformJumps(0.0, 1.0))


class TestDeterminism:
    @pytest.mark.parametrize("m", [LAPLACE, ATOM, CP])
    def test_identical_seeds_identical_batches(self, m):
        a = sample_marginal(m, 0.7, 3000, 123)
        b = sample_marginal(m, 0.7, 3000, 123)
        assert np.array_equal(a.values, b.values)

    def test_prefix_stability_across_chunk_boundary(self):
        n_long = (1 << 16) + 500
        long = sample_vector(IDVectorSpec(2, LAPLACE), n_long, 9).values
        short = sample_vector(IDVectorSpec(2, LAPLACE), 1 << 16, 9).values
        assert np.array_equal(long[: 1 << 16], short)

    def test_different_seeds_differ(self):
        a = sample_marginal(LAPLACE, 1.0, 100, 1).values
        b = sample_marginal(LAPLACE, 1.0, 100, 2).values
        assert not np.array_equal(a, b)


class TestMarginalLaws:
    def test_poisson_half_time_mean(self):
        x = sample_marginal(ATOM, 0.5, 10 ** 6, 11).values
        se = x.std() / 1000.0
        assert abs(x.mean() - 0.5) < 4 * se

    def test_laplace_variance(self):
        x = sample_marginal(LAPLACE, 1.0, 10 ** 6, 12).values
        assert x.var() == pytest.approx(2.0, rel=0.02)

    def test_gamma_marginal_at_partial_time(self):
        g = GammaLevy(rate=2.0, shape=3.0)
        z = 0.4
        x = sample_marginal(g, z, 200000, 13).values
        assert x.mean() == pytest.approx(z * 3.0 / 2.0, rel=0.02)

    def test_levy_process_consistency_ks(self):
        # X_{1/2} + X'_{1/2} must equal X_1 in law (two-sample KS at 1%)
        n = 10 ** 5
        half1 = sample_marginal(LAPLACE, 0.5, n, 21).values.ravel()
        half2 = sample_marginal(LAPLACE, 0.5, n, 22).values.ravel()
        full = sample_marginal(LAPLACE, 1.0, n, 23).values.ravel()
        _, pvalue = stats.ks_2samp(half1 + half2, full)
        assert pvalue > 0.01

    def test_compound_poisson_moments(self):
        x = sample_marginal(CP, 1.0, 400000, 31).values
        assert x.mean() == pytest.approx(0.5, rel=0.02)
        assert x.var() == pytest.approx(1.0 / 3.0, rel=0.03)


class TestSampleVector:
    def test_per_coordinate_variance(self):
        b = sample_vector(IDVectorSpec(3, LAPLACE), 200000, 5)
        for k in range(3):
            assert b.values[:, k].var() == pytest.approx(2.0, rel=0.05)

    def test_norm_of_single_coordinate_is_abs(self):
        b = sample_vector(IDVectorSpec(1, LAPLACE), 1000, 6)
        norms = np.linalg.norm(b.values, axis=1)
        assert np.array_equal(norms, np.abs(b.values[:, 0]))

    def test_cross_coordinate_correlation_vanishes(self):
        b = sample_vector(IDVectorSpec(2, LAPLACE), 200000, 7)
        corr = np.corrcoef(b.values.T)[0, 1]
        assert abs(corr) < 4.0 / math.sqrt(200000)

    def test_drift_applied(self):
        b = sample_vector(IDVectorSpec(1, ATOM, drift=-1.0), 200000, 8)
        assert b.values.mean() == pytest.approx(0.0, abs=0.02)

    def test_independent_coordinates(self):
        spec = IDVectorSpec(2, [LAPLACE, ATOM], drift=(0.0, 0.0))
        b = sample_vector(spec, 200000, 9)
        assert b.values[:, 0].var() == pytest.approx(2.0, rel=0.05)
        assert b.values[:, 1].mean() == pytest.approx(1.0, rel=0.05)


class TestNormExpectation:
    def test_laplace_d1(self):
        est = estimate_norm_expectation(IDVectorSpec(1, LAPLACE), 2, 10 ** 5, 41)
        assert est["ci_low"] <= 1.0 <= est["ci_high"]

    def test_laplace_d100_concentrates(self):
        est = estimate_norm_expectation(IDVectorSpec(100, LAPLACE), 2, 10 ** 5, 42)
        root = math.sqrt(200.0)
        assert 0.9 * root <= est["mean"] <= 1.0 * root

    def test_centered_poisson_series_oracle(self):
        # E|N - 1| = 2/e for N ~ Poisson(1)
        est = estimate_norm_expectation(IDVectorSpec(1, ATOM, drift=-1.0), 2,
                                        2 * 10 ** 5, 43)
        assert est["ci_low"] <= 2.0 / math.e <= est["ci_high"]


class TestEstimateL:
    def test_laplace_value(self):
        est = estimate_l(LAPLACE, 10 ** 5, 51)
        assert est["ci_low"] <= 0.60579 <= est["ci_high"]
        assert analytic_l(LAPLACE) == pytest.approx(0.6057933674723297, rel=1e-12)

    def test_poisson_series(self):
        assert analytic_l(ATOM) == pytest.approx(0.6800507814218859, rel=1e-12)
        est = estimate_l(ATOM, 10 ** 5, 52)
        assert est["ci_low"] <= analytic_l(ATOM) <= est["ci_high"]

    def test_nonnegative_always(self):
        est = estimate_l(CP, 10 ** 4, 53)
        assert est["value"] >= 0.0


class TestAnalyticMoments:
    def test_laplace_moments(self):
        assert marginal_abs_moment(LAPLACE, 2) == pytest.approx(2.0)
        assert marginal_abs_moment(LAPLACE, 4) == pytest.approx(24.0)
        assert marginal_abs_moment(LAPLACE, 1) == pytest.approx(1.0)

    def test_poisson_moments_are_touchard(self):
        assert marginal_abs_moment(ATOM, 2) == pytest.approx(2.0, rel=1e-10)
        assert marginal_abs_moment(ATOM, 4) == pytest.approx(15.0, rel=1e-10)

    def test_compound_uniform_cumulant_recursion(self):
        assert marginal_abs_moment(CP, 2) == pytest.approx(7.0 / 12.0, rel=1e-12)
        assert marginal_abs_moment(CP, 4) == pytest.approx(1.5958333333333332,
                                                           rel=1e-12)
        mc = estimate_moment(CP, 4, 4 * 10 ** 5, 54)
        assert mc["ci_low"] <= 1.5958333 <= mc["ci_high"]

    def test_mean_and_variance(self):
        assert marginal_mean(ATOM) == 1.0
        assert marginal_mean(ATOM, drift=-1.0) == 0.0
        assert marginal_variance(LAPLACE) == 2.0


class TestModifiedMoments:
    def test_nonnegative_family_vanishes_exactly(self):
        est = estimate_modified_moments(ATOM, 2, n=2000, seed=61)
        assert est["mod_m_p_lower"] == 0.0
        assert "positive-case" in est["hint"]

    def test_laplace_endpoints_half_second_moment(self):
        # at z in {0, 1} the split has one empty piece: E|X^+|^2 = 1
        est = estimate_modified_moments(LAPLACE, 2, z_grid=[0.0, 1.0],
                                        n=200000, seed=62)
        for entry in est["per_z"]:
            for sign in ("plus", "minus"):
                assert entry[sign]["m_p"] == pytest.approx(1.0, rel=0.05)

    def test_symmetric_family_sign_agreement(self):
        est = estimate_modified_moments(LAPLACE, 2, z_grid=[0.3, 0.7],
                                        n=200000, seed=63)
        for entry in est["per_z"]:
            assert entry["plus"]["m_p"] == pytest.approx(entry["minus"]["m_p"],
                                                         rel=0.1)

    def test_bracketing_against_plain_moments(self):
        est = estimate_modified_moments(LAPLACE, 2, n=50000, seed=64)
        assert est["mod_m_p_lower"] <= 2.0
        assert est["mod_m_2p_upper"] >= 24.0 * 0.9


class TestEmpiricalTail:
    def test_laplace_exact_survival_in_ci(self):
        # P(|X| >= 1 + 2) = e^{-3}
        tail = empirical_tail(IDVectorSpec(1, LAPLACE), 2, [2.0], 10 ** 5, 71,
                              Centering("E_norm_p", 1.0))
        assert tail.ci_low[0] <= math.exp(-3) <= tail.ci_high[0]

    def test_nonpositive_threshold_gives_one(self):
        tail = empirical_tail(IDVectorSpec(1, LAPLACE), 2, [0.5], 1000, 72,
                              Centering("explicit", -1.0))
        assert tail.p_hat[0] == 1.0

    def test_monotone_and_ci_order(self):
        tail = empirical_tail(IDVectorSpec(2, LAPLACE), 2, np.linspace(0, 6, 13),
                              20000, 73, Centering("explicit", 1.0))
        assert all(a >= b for a, b in zip(tail.p_hat, tail.p_hat[1:]))
        for lo, ph, hi in zip(tail.ci_low, tail.p_hat, tail.ci_high):
            assert lo <= ph <= hi
            assert 0.0 <= lo and hi <= 1.0

    def test_lower_direction(self):
        norms = np.array([0.0, 1.0, 2.0, 3.0])
        tail = tail_from_norms(norms, [0.5], Centering("explicit", 2.0),
                               p=2.0, seed=0, direction="lower")
        # count norms <= 1.5: two of four
        assert tail.p_hat[0] == 0.5

    def test_round_trip_dict(self):
        tail = empirical_tail(IDVectorSpec(1, ATOM), 2, [1.0, 2.0], 500, 74,
                              Centering("E_norm_p", 1.0))
        from idconc import TailEstimate
        again = TailEstimate.from_dict(tail.to_dict())
        assert again == tail


class TestCustomDensitySampling:
    def _measure(self):
        return CustomDensity.from_table([[0.5, 1.0], [1.5, 1.0]], M=math.inf)

    def test_variance_budget_certified(self):
        diag = custom_approximation_diagnostics(self._measure())
        assert diag["relative_variance_error"] < 1e-4

    def test_sample_variance_matches(self):
        m = self._measure()
        x = sample_marginal(m, 1.0, 300000, 81).values
        target = marginal_variance(m)  # integral of u^2 k(u)
        assert x.var() == pytest.approx(target, rel=0.03)

    def test_small_jump_truncation_with_origin_support(self):
        m = CustomDensity.from_table([[0.0, 2.0], [1.0, 2.0]], M=math.inf)
        diag = custom_approximation_diagnostics(m)
        assert 0 < diag["delta"] < 1.0
        x = sample_marginal(m, 1.0, 300000, 82).values
        assert x.mean() == pytest.approx(marginal_mean(m), rel=0.05)

    def test_infinite_variation_rejected(self):
        m = CustomDensity(lambda u: np.asarray(u, float) ** -2.0,
                          (0.0, 1.0), M=math.inf, R=1.0)
        with pytest.raises(ConfigurationError, match="infinite variation"):
            sample_marginal(m, 1.0, 100, 83)


class TestCollectMoments:
    def test_analytic_paths_marked(self):
        ms = collect_moments(IDVectorSpec(1, LAPLACE), 2.0, n=1000, seed=91)
        assert ms.m_p == 2.0 and ms.m_2p == 24.0
        assert ms.prov("m_p").kind == "analytic"
        assert ms.l == pytest.approx(0.6057933674723297)
        assert ms.E_norm_p == 1.0

    def test_monte_carlo_conservative_directions(self):
        spec = IDVectorSpec(5, LAPLACE)
        ms = collect_moments(spec, 2.0, n=20000, seed=92,
                             need=("E_norm_p",))
        assert ms.prov("E_norm_p").kind == "monte-carlo"
        assert ms.E_norm_p < ms.E_norm_p_upper

    def test_modified_collection(self):
        ms = collect_moments(IDVectorSpec(2, LAPLACE), 2.0, n=5000, seed=93,
                             need=("modified", "E_norm_p"))
        assert ms.mod_m_p_lower is not None and ms.mod_m_p_lower > 0
        assert ms.mod_m_2p_upper is not None
