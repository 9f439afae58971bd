import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from idconc import (BoundCertificate, Centering, ConfigurationError,
                    NumericError, RangeError, RateFunction, chernoff_bound,
                    constrained_chernoff, cor2_rate, find_T, invert_monotone,
                    linear_rate)


class TestInvertMonotone:
    def test_linear_exact(self):
        h = linear_rate(3.0)
        assert invert_monotone(h, 3.0) == pytest.approx(1.0, rel=1e-10)

    def test_exponential_rate_analytic_inverse(self):
        # h(t) = V^2 (e^{tR} - 1)/R; inverse is log(1 + R s/V^2)/R
        h = cor2_rate(8.0, 1.0)
        s = 8.0 * (math.e - 1.0)
        assert invert_monotone(h, s) == pytest.approx(1.0, rel=1e-10)

    def test_zero(self):
        assert invert_monotone(linear_rate(2.0), 0.0) == 0.0

    def test_beyond_sup_raises_with_sup_named(self):
        bounded = RateFunction(lambda t: 1.0 - math.exp(-t), math.inf, "bounded")
        with pytest.raises(RangeError, match="supremum"):
            invert_monotone(bounded, 2.0)

    def test_finite_domain_beyond_sup(self):
        bounded = RateFunction(lambda t: t / (1.0 + t), 5.0, "bounded-finite")
        with pytest.raises(RangeError):
            invert_monotone(bounded, 1.0)

    @given(s=st.floats(1e-6, 50.0))
    @settings(max_examples=50, deadline=None)
    def test_round_trip(self, s):
        h = cor2_rate(4.0, 0.5)
        t = invert_monotone(h, s)
        assert h(t) == pytest.approx(s, rel=1e-7, abs=1e-9)


class TestChernoffBound:
    def test_linear_gaussian_type(self):
        # exp(-x^2 / (2c)) for h = c t
        assert chernoff_bound(linear_rate(1.0), 2.0) == pytest.approx(
            math.exp(-2.0), rel=1e-8)

    def test_exponential_rate_closed_form(self):
        got = chernoff_bound(cor2_rate(8.0, 1.0), 8.0)
        assert got == pytest.approx(math.exp(8 - 16 * math.log(2)), rel=1e-8)

    def test_x_zero(self):
        assert chernoff_bound(linear_rate(5.0), 0.0) == 1.0

    def test_monotone_and_convex_exponent(self):
        h = cor2_rate(2.0, 1.0)
        xs = np.linspace(0.5, 20.0, 15)
        bounds = [chernoff_bound(h, x) for x in xs]
        assert all(b2 < b1 for b1, b2 in zip(bounds, bounds[1:]))
        neglog = -np.log(bounds)
        assert np.all(np.diff(neglog, 2) > -1e-9)  # Legendre transform is convex

    def test_broken_rate_detected(self):
        # not nondecreasing: the two forms cannot agree
        broken = RateFunction(lambda t: t if t < 1 else 0.25 * t, math.inf,
                              "broken")
        with pytest.raises(NumericError, match="disagree"):
            chernoff_bound(broken, 1.2)

    def test_beyond_validity(self):
        bounded = RateFunction(lambda t: 1.0 - math.exp(-t), math.inf, "bounded")
        with pytest.raises(RangeError):
            chernoff_bound(bounded, 3.0)


class TestConstrainedChernoff:
    def test_interior_maximum(self):
        assert constrained_chernoff(linear_rate(1.0), 1.0, 1.0) == pytest.approx(
            math.exp(-0.25), rel=1e-10)

    def test_boundary_maximum(self):
        assert constrained_chernoff(linear_rate(1.0), 0.25, 1.0) == pytest.approx(
            math.exp(-0.1875), rel=1e-10)

    def test_x_zero(self):
        assert constrained_chernoff(linear_rate(1.0), 1.0, 0.0) == 1.0

    def test_T_out_of_range(self):
        g = RateFunction(lambda t: t, 2.0, "lin")
        with pytest.raises(ConfigurationError):
            constrained_chernoff(g, 2.5, 1.0)


class TestFindT:
    def test_linear_closed_form(self):
        # g(t) = t/(2 a^2): t g(t) = 1/2 at t = a
        for a in (0.5, 1.0, 3.0):
            g = linear_rate(1.0 / (2 * a * a))
            assert find_T(g) == pytest.approx(a, rel=1e-9)

    def test_residual_contract(self):
        g = RateFunction(lambda t: math.expm1(t), math.inf, "exp")
        T = find_T(g)
        assert 0.5 - 1e-9 <= T * g(T) <= 0.5

    def test_returns_t_max_when_product_stays_small(self):
        g = RateFunction(lambda t: 1e-6 * t, 5.0, "tiny")
        assert find_T(g) == 5.0


class TestRateFunction:
    def test_domain_checks(self):
        h = RateFunction(lambda t: t, 1.0, "lin")
        with pytest.raises(ConfigurationError):
            h(1.0)
        with pytest.raises(ConfigurationError):
            h(-0.1)
        assert h(0.0) == 0.0

    def test_cum_caching_consistency(self):
        calls = []

        def f(t):
            calls.append(t)
            return 2.0 * t

        h = RateFunction(f, math.inf, "lin")
        a = h.cum(1.0)
        b = h.cum(2.0)
        assert a == pytest.approx(1.0, rel=1e-10)
        assert b == pytest.approx(4.0, rel=1e-10)
        # second request served from cache, no new evaluations
        before = len(calls)
        assert h.cum(2.0) == b
        assert len(calls) == before


class TestBoundCertificate:
    def _cert(self, **kw):
        base = dict(family="thm1", rate_label="l", rate_params={}, p=2.0,
                    x_grid=(1.0, 2.0), bound=(0.5, 0.25),
                    validity_sup=math.inf,
                    centering=Centering("E_norm_p", 1.0),
                    measure={"family": "poisson_atom"})
        base.update(kw)
        return BoundCertificate(**base)

    def test_round_trip_json(self):
        cert = self._cert()
        again = BoundCertificate.from_json(cert.to_json())
        assert again == cert

    def test_monotonicity_enforced(self):
        with pytest.raises(NumericError):
            self._cert(bound=(0.25, 0.5))

    def test_validity_enforced(self):
        with pytest.raises(RangeError):
            self._cert(validity_sup=1.5)

    def test_probability_range(self):
        with pytest.raises(NumericError):
            self._cert(bound=(1.5, 0.2))
