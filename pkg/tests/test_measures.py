import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from idconc import (CompoundPoisson, ConfigurationError, CustomDensity,
                    DiscreteJumps, DomainError, GammaLevy, IDVectorSpec,
                    PoissonAtom, SymmetricExponential, UniformJumps,
                    exp_moment_abscissa, exp_moment_integral,
                    exp_weight_integral, levy_integral, measure_config,
                    measure_from_config, poly_moment, support_radius)

LAPLACE = SymmetricExponential(1.0)
GAMMA = GammaLevy(rate=2.5, shape=1.0)
ATOM = PoissonAtom(intensity=1.0, jump=1.0)
CP_UNIFORM = CompoundPoisson(1.0, UniformJumps(0.0, 1.0))
ALL = [LAPLACE, GAMMA, ATOM, CP_UNIFORM,
       CompoundPoisson(2.0, DiscreteJumps((0.5, -1.5), (0.25, 0.75)))]


def quad_oracle(m, f):
    """Independent adaptive-quadrature route: raw scipy piecewise."""
    atoms = m.atoms()
    if atoms is not None:
        return sum(mass * f(u) for u, mass in atoms)
    k = m.density()
    lo, hi = m.support()
    cuts = [c for c in (-1.0, 0.0, 1.0) if lo < c < hi]
    edges = [lo, *cuts, hi]

    def safe(u):
        with np.errstate(over="ignore", invalid="ignore"):
            val = float(f(u)) * float(k(u))
        return val if math.isfinite(val) else 0.0

    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(safe, a, b, epsabs=1e-12, epsrel=1e-10,
                                limit=300)
        total += val
    return total


class TestExpMomentIntegral:
    def test_symmetric_exponential_closed_forms(self):
        # antiderivative: 2 t/(1 - t) and 4 (1/(1-t)^3 - 1) at scale 1
        assert exp_moment_integral(LAPLACE, 0.5, 1) == pytest.approx(2.0, rel=1e-12)
        assert exp_moment_integral(LAPLACE, 0.5, 3) == pytest.approx(28.0, rel=1e-12)

    @pytest.mark.parametrize("m", ALL)
    @pytest.mark.parametrize("r", [1, 3])
    def test_zero_at_t_zero(self, m, r):
        assert exp_moment_integral(m, 0.0, r) == 0.0

    def test_poisson_atom_value(self):
        assert exp_moment_integral(ATOM, 1.0, 1) == pytest.approx(math.e - 1, rel=1e-14)

    @pytest.mark.parametrize("m,t", [(LAPLACE, 0.4), (GAMMA, 1.2),
                                     (ATOM, 0.7), (CP_UNIFORM, 0.9)])
    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_matches_quadrature_oracle(self, m, t, r):
        lib = exp_moment_integral(m, t, r)
        ora = quad_oracle(m, lambda u: abs(u) ** r * np.expm1(t * abs(u)))
        assert lib == pytest.approx(ora, rel=1e-8)

    @pytest.mark.parametrize("m", ALL)
    def test_beyond_abscissa_rejected(self, m):
        M = exp_moment_abscissa(m)
        if math.isfinite(M):
            with pytest.raises(DomainError, match="abscissa"):
                exp_moment_integral(m, M, 1)
            with pytest.raises(DomainError):
                exp_moment_integral(m, M + 1.0, 3)

    @pytest.mark.parametrize("m", [LAPLACE, GAMMA, ATOM, CP_UNIFORM])
    def test_increasing_and_convex_in_t(self, m):
        M = exp_moment_abscissa(m)
        hi = min(M, 4.0) if math.isfinite(M) else 2.0
        ts = np.linspace(0.0, 0.9 * hi, 12)
        vals = [exp_moment_integral(m, t, 1) for t in ts]
        diffs = np.diff(vals)
        assert np.all(diffs > 0)
        assert np.all(np.diff(diffs) > -1e-12)

    def test_r3_dominates_r1_when_support_outside_unit_ball(self):
        big = PoissonAtom(intensity=0.7, jump=2.0)
        for t in (0.2, 1.0, 3.0):
            r1 = exp_moment_integral(big, t, 1)
            r3 = exp_moment_integral(big, t, 3)
            assert r3 >= r1
            assert r3 / r1 == pytest.approx(4.0, rel=1e-14)  # exactly jump^2

    @given(c=st.floats(0.1, 10.0), t=st.floats(0.01, 2.0))
    @settings(max_examples=40, deadline=None)
    def test_scaling_invariance_on_atom(self, c, t):
        base = PoissonAtom(1.3, 0.8)
        scaled = PoissonAtom(1.3, 0.8 * c)
        for r in (1, 3):
            lhs = exp_moment_integral(scaled, t, r)
            rhs = c ** r * exp_moment_integral(base, c * t, r)
            assert lhs == pytest.approx(rhs, rel=1e-12)


class TestPolyMoment:
    def test_symmetric_exponential(self):
        assert poly_moment(LAPLACE, 2) == pytest.approx(2.0, rel=1e-14)
        assert poly_moment(LAPLACE, 4) == pytest.approx(12.0, rel=1e-14)

    def test_poisson_atom(self):
        assert poly_moment(PoissonAtom(2.0, 3.0), 2) == pytest.approx(18.0)

    def test_compound_uniform(self):
        # rate * integral of u^2 on [0,1] = 1/3
        assert poly_moment(CP_UNIFORM, 2) == pytest.approx(1.0 / 3.0, rel=1e-12)

    @pytest.mark.parametrize("m", [LAPLACE, GAMMA, CP_UNIFORM])
    @pytest.mark.parametrize("q", [2, 4])
    def test_matches_quadrature_oracle(self, m, q):
        ora = quad_oracle(m, lambda u: u ** q)
        assert poly_moment(m, q) == pytest.approx(ora, rel=1e-8)

    @given(c=st.floats(0.1, 10.0))
    @settings(max_examples=40, deadline=None)
    def test_scaling(self, c):
        base = PoissonAtom(0.9, 1.7)
        scaled = PoissonAtom(0.9, 1.7 * c)
        for q in (2, 4):
            assert poly_moment(scaled, q) == pytest.approx(
                c ** q * poly_moment(base, q), rel=1e-12)

    def test_odd_or_bad_q_rejected(self):
        with pytest.raises(ConfigurationError):
            poly_moment(LAPLACE, 3)
        with pytest.raises(ConfigurationError):
            poly_moment(LAPLACE, 0)


class TestAbscissaAndRadius:
    def test_values(self):
        assert exp_moment_abscissa(LAPLACE) == 1.0
        assert exp_moment_abscissa(SymmetricExponential(2.0)) == 0.5
        assert exp_moment_abscissa(GAMMA) == 2.5
        assert exp_moment_abscissa(ATOM) == math.inf
        assert support_radius(ATOM) == 1.0
        assert support_radius(LAPLACE) == math.inf
        cp = CompoundPoisson(1.0, UniformJumps(-0.5, 0.5))
        assert support_radius(cp) == 0.5

    def test_custom_declares(self):
        m = CustomDensity.from_table([[0.5, 1.0], [1.5, 1.0]], M=1.0)
        assert exp_moment_abscissa(m) == 1.0
        assert support_radius(m) == 1.5

    def test_custom_requires_M(self):
        with pytest.raises(ConfigurationError, match="M"):
            CustomDensity.from_table([[0.5, 1.0], [1.5, 1.0]], M=None)


class TestCustomDensity:
    def test_flat_box_integrals(self):
        # k(u) = 1 on [0.5, 1.5]
        m = CustomDensity.from_table([[0.5, 1.0], [1.5, 1.0]], M=math.inf)
        assert poly_moment(m, 2) == pytest.approx((1.5 ** 3 - 0.5 ** 3) / 3, rel=1e-9)
        t = 0.8
        ora, _ = integrate.quad(lambda u: u * math.expm1(t * u), 0.5, 1.5)
        assert exp_moment_integral(m, t, 1) == pytest.approx(ora, rel=1e-8)

    def test_weighted_integral(self):
        m = CustomDensity.from_table([[0.5, 1.0], [1.5, 1.0]], M=math.inf)
        w = lambda au: (1.0 + au) ** 2
        ora, _ = integrate.quad(lambda u: (1 + u) ** 2 * u * math.expm1(0.5 * u),
                                0.5, 1.5)
        assert exp_weight_integral(m, 0.5, w) == pytest.approx(ora, rel=1e-8)

    def test_infinite_variation_detected(self):
        # density u^-2 on (0, 1]: valid Levy measure, infinite variation
        m = CustomDensity(lambda u: np.asarray(u, float) ** -2.0,
                          (0.0, 1.0), M=math.inf, R=1.0)
        assert not m.finite_variation
        # moment integrals still converge: |u|(e^{tu}-1)u^-2 ~ t near 0
        val = exp_moment_integral(m, 0.5, 1)
        ora, _ = integrate.quad(lambda u: math.expm1(0.5 * u) / u, 0, 1,
                                points=[0.5])
        assert val == pytest.approx(ora, rel=1e-6)


class TestWeightedIntegrals:
    def test_atom_weighted_exact(self):
        w = lambda au: (0.5 + 2.0 * au) ** 4 + 7.0
        got = exp_weight_integral(ATOM, 0.3, w)
        want = 1.0 * w(1.0) * 1.0 * math.expm1(0.3)
        assert got == pytest.approx(want, rel=1e-14)

    def test_positive_only_drops_negative_atoms(self):
        m = CompoundPoisson(1.0, DiscreteJumps((1.0, -1.0), (0.5, 0.5)))
        full = exp_weight_integral(m, 0.2, lambda au: np.ones_like(au))
        pos = exp_weight_integral(m, 0.2, lambda au: np.ones_like(au),
                                  positive_only=True)
        assert pos == pytest.approx(full / 2, rel=1e-12)


class TestVectorSpec:
    def test_iid_and_independent(self):
        spec = IDVectorSpec(3, LAPLACE)
        assert spec.is_iid and len(spec.measures()) == 3
        spec2 = IDVectorSpec(2, [LAPLACE, ATOM], drift=(0.0, -1.0))
        assert not spec2.is_iid
        assert spec2.drifts().tolist() == [0.0, -1.0]

    def test_length_mismatch(self):
        with pytest.raises(ConfigurationError):
            IDVectorSpec(3, [LAPLACE, ATOM])
        with pytest.raises(ConfigurationError):
            IDVectorSpec(0, LAPLACE)


class TestJsonRoundTrip:
    @pytest.mark.parametrize("m", ALL)
    def test_round_trip(self, m):
        cfg = measure_config(m)
        again = measure_from_config(cfg)
        assert measure_config(again) == cfg

    def test_unknown_family(self):
        with pytest.raises(ConfigurationError, match="family"):
            measure_from_config({"family": "zeta"})

    def test_unknown_field_named(self):
        with pytest.raises(ConfigurationError, match="sacle"):
            measure_from_config({"family": "symmetric_exponential", "sacle": 1})

    def test_custom_from_json(self):
        cfg = {"family": "custom_density", "M": 1.0, "R": None,
               "density_table": [[0.5, 1.0], [1.5, 1.0]]}
        m = measure_from_config(cfg)
        assert support_radius(m) == 1.5
        assert exp_moment_abscissa(m) == 1.0
