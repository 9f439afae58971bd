"""Reproducible sampling of ID vectors and Levy-process marginals.

Sampling is chunked: chunk i of every request draws from a substream
derived from the master seed and the chunk index alone, so results are
identical no matter how the chunks are scheduled, and the first samples
of a long run coincide with those of a short run.  Composite estimators
derive disjoint sub-seeds through the same tree, never by reusing a raw
stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special, stats

from .errors import ConfigurationError
from .measures import (CompoundPoisson, CustomDensity, DiscreteJumps, GammaLevy,
                       IDVectorSpec, PoissonAtom, SymmetricExponential,
                       UniformJumps, has_finite_variation, levy_integral,
                       poly_moment)
from .numerics import ANALYTIC, Centering, Provenance

DEFAULT_CONFIDENCE = 0.99
_CHUNK = 1 << 16

# Reserved branches of the seed-derivation tree.
_K_CHUNK = 0
_K_SUB = 1


def _as_seedseq(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(int(seed))


def _child(ss: np.random.SeedSequence, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=ss.entropy,
                                  spawn_key=tuple(ss.spawn_key) + tuple(key))


def _seed_label(seed):
    if isinstance(seed, np.random.SeedSequence):
        if seed.spawn_key:
            return f"{seed.entropy}/{'.'.join(str(k) for k in seed.spawn_key)}"
        return seed.entropy
    return int(seed)


def _chunks(n: int):
    start = 0
    i = 0
    while start < n:
        size = min(_CHUNK, n - start)
        yield i, size
        start += size
        i += 1


@dataclass(frozen=True)
class SampleBatch:
    """An n x d array of draws plus everything needed to regenerate it."""

    values: np.ndarray
    seed: object
    n: int
    spec: IDVectorSpec
    z: float


@dataclass(frozen=True)
class TailEstimate:
    """Empirical survival probabilities with exact binomial intervals."""

    x_grid: tuple
    p_hat: tuple
    ci_low: tuple
    ci_high: tuple
    counts: tuple
    n: int
    seed: object
    p: float
    confidence: float
    centering: Centering
    direction: str = "upper"

    def to_dict(self) -> dict:
        return {
            "x_grid": list(self.x_grid), "p_hat": list(self.p_hat),
            "ci_low": list(self.ci_low), "ci_high": list(self.ci_high),
            "counts": list(self.counts), "n": self.n, "seed": self.seed,
            "p": self.p, "confidence": self.confidence,
            "centering": self.centering.to_dict(), "direction": self.direction,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TailEstimate":
        return cls(x_grid=tuple(d["x_grid"]), p_hat=tuple(d["p_hat"]),
                   ci_low=tuple(d["ci_low"]), ci_high=tuple(d["ci_high"]),
                   counts=tuple(d["counts"]), n=int(d["n"]), seed=d["seed"],
                   p=float(d["p"]), confidence=float(d["confidence"]),
                   centering=Centering.from_dict(d["centering"]),
                   direction=d.get("direction", "upper"))


# ---------------------------------------------------------------------------
# Marginal draws
# ---------------------------------------------------------------------------

def _compound_sums(counts: np.ndarray, draw_jumps, rng) -> np.ndarray:
    total = int(counts.sum())
    if total == 0:
        return np.zeros(counts.shape, dtype=float)
    jumps = draw_jumps(rng, total)
    cs = np.concatenate([[0.0], np.cumsum(jumps)])
    ends = np.cumsum(counts.ravel())
    out = cs[ends] - cs[ends - counts.ravel()]
    return out.reshape(counts.shape)


def _custom_sampler_parts(m: CustomDensity):
    """Truncation threshold, jump law grid and mean compensation for a custom density.

    Small jumps are cut at a threshold holding less than 1e-6 of the total
    second moment and replaced by their mean; remaining jumps are drawn by
    inverse CDF on a dense grid.
    """
    if not has_finite_variation(m):
        raise ConfigurationError(
            "custom density has infinite variation; sampling is unsupported")
    lo, hi = m.support()
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ConfigurationError(
            "sampling a custom density requires bounded support")
    second = levy_integral(m, lambda u: np.square(u))
    inner = min(abs(v) for v in (lo, hi) if v != 0) if lo * hi > 0 else 0.0
    delta = 0.0
    if lo < 0 < hi or inner == 0.0:
        delta = max(abs(lo), abs(hi))
        while levy_integral(m, np.square, window=(-delta, delta)) > 1e-6 * second:
            delta *= 0.5
            if delta < 1e-300:
                raise ConfigurationError("could not truncate small jumps")
    small_mean = levy_integral(m, lambda u: np.asarray(u, dtype=float),
                               window=(-delta, delta)) if delta > 0 else 0.0

    dens = m.density()
    grids = []
    for a, b in ((lo, min(-delta, hi)), (max(delta, lo), hi)):
        if b <= a:
            continue
        us = np.linspace(a, b, 4097)
        ks = np.asarray(dens(us), dtype=float)
        mass = np.concatenate([[0.0], np.cumsum(0.5 * (ks[1:] + ks[:-1]) * np.diff(us))])
        grids.append((us, mass))
    cum = 0.0
    cat_u, cat_c = [], []
    for us, mass in grids:
        cat_u.append(us)
        cat_c.append(mass + cum)
        cum += mass[-1]
    rate = cum
    u_grid = np.concatenate(cat_u)
    c_grid = np.concatenate(cat_c)
    # implied second moment of the discretised jump law, for diagnostics
    mids = 0.5 * (u_grid[1:] + u_grid[:-1])
    dm = np.diff(c_grid)
    approx_second = float(np.sum(mids ** 2 * dm))
    return {"delta": delta, "rate": rate, "u_grid": u_grid, "c_grid": c_grid,
            "small_mean": small_mean, "second": second,
            "approx_second": approx_second}


_CUSTOM_CACHE: dict[int, dict] = {}


def _custom_parts(m: CustomDensity) -> dict:
    key = id(m)
    if key not in _CUSTOM_CACHE:
        _CUSTOM_CACHE[key] = _custom_sampler_parts(m)
    return _CUSTOM_CACHE[key]


def custom_approximation_diagnostics(m: CustomDensity) -> dict:
    """Truncation threshold and second-moment budget of the sampler for m."""
    parts = _custom_parts(m)
    total = parts["second"]
    kept = parts["approx_second"] + (0.0 if parts["delta"] == 0 else
                                     levy_integral(m, np.square,
                                                   window=(-parts["delta"], parts["delta"])))
    return {"delta": parts["delta"], "rate": parts["rate"],
            "second_moment": total,
            "approx_second_moment": parts["approx_second"],
            "relative_variance_error": abs(parts["approx_second"] - total) / total,
            "kept_plus_discarded": kept}


def _draw_marginal(m, z: float, rng: np.random.Generator, shape) -> np.ndarray:
    if isinstance(m, SymmetricExponential):
        return rng.gamma(z, m.scale, shape) - rng.gamma(z, m.scale, shape)
    if isinstance(m, GammaLevy):
        return rng.gamma(z * m.shape, 1.0 / m.rate, shape)
    if isinstance(m, PoissonAtom):
        return m.jump * rng.poisson(z * m.intensity, shape).astype(float)
    if isinstance(m, CompoundPoisson):
        counts = rng.poisson(z * m.rate, shape)
        if isinstance(m.jumps, UniformJumps):
            lo, hi = m.jumps.low, m.jumps.high
            draw = lambda r, k: r.uniform(lo, hi, k)
        else:
            vals = np.asarray(m.jumps.values)
            probs = np.asarray(m.jumps.probs)
            draw = lambda r, k: r.choice(vals, size=k, p=probs)
        return _compound_sums(counts, draw, rng)
    if isinstance(m, CustomDensity):
        parts = _custom_parts(m)
        counts = rng.poisson(z * parts["rate"], shape)
        c_grid, u_grid = parts["c_grid"], parts["u_grid"]

        def draw(r, k):
            return np.interp(r.random(k) * parts["rate"], c_grid, u_grid)

        out = _compound_sums(counts, draw, rng)
        return out + z * parts["small_mean"]
    raise ConfigurationError(f"cannot sample family {type(m).__name__}")


def sample_marginal(m, z: float, n: int, seed) -> SampleBatch:
    """n i.i.d. draws of the time-z marginal of the (driftless) measure."""
    if not 0 < z <= 1:
        raise ConfigurationError("z must lie in (0, 1]")
    if n < 1:
        raise ConfigurationError("n must be positive")
    ss = _as_seedseq(seed)
    out = np.empty(n, dtype=float)
    start = 0
    for i, size in _chunks(n):
        rng = np.random.default_rng(_child(ss, _K_CHUNK, i))
        out[start:start + size] = _draw_marginal(m, z, rng, size)
        start += size
    spec = IDVectorSpec(1, m)
    return SampleBatch(values=out.reshape(n, 1), seed=_seed_label(seed),
                       n=n, spec=spec, z=float(z))


def sample_vector(spec: IDVectorSpec, n: int, seed) -> SampleBatch:
    """n draws of the full d-dimensional vector at unit time, plus drift."""
    if n < 1:
        raise ConfigurationError("n must be positive")
    ss = _as_seedseq(seed)
    measures = spec.measures()
    drifts = spec.drifts()
    out = np.empty((n, spec.d), dtype=float)
    start = 0
    for i, size in _chunks(n):
        rng = np.random.default_rng(_child(ss, _K_CHUNK, i))
        if spec.is_iid:
            out[start:start + size, :] = _draw_marginal(
                spec.iid_measure(), 1.0, rng, (size, spec.d))
        else:
            for k, mk in enumerate(measures):
                out[start:start + size, k] = _draw_marginal(mk, 1.0, rng, size)
        start += size
    out += drifts[None, :]
    return SampleBatch(values=out, seed=_seed_label(seed), n=n, spec=spec, z=1.0)


def _norms(values: np.ndarray, p: float) -> np.ndarray:
    if p == 2.0:
        return np.sqrt(np.einsum("ij,ij->i", values, values))
    return np.sum(np.abs(values) ** p, axis=1) ** (1.0 / p)


# ---------------------------------------------------------------------------
# Moment estimators
# ---------------------------------------------------------------------------

def _z_score(confidence: float) -> float:
    return float(stats.norm.ppf(0.5 + confidence / 2.0))


def _mean_ci(x: np.ndarray, confidence: float) -> dict:
    n = x.size
    mean = float(np.mean(x))
    se = float(np.std(x, ddof=1) / math.sqrt(n)) if n > 1 else math.inf
    half = _z_score(confidence) * se
    return {"mean": mean, "ci_low": mean - half, "ci_high": mean + half,
            "n": n, "confidence": confidence}


def estimate_norm_expectation(spec: IDVectorSpec, p: float, n: int, seed,
                              confidence: float = DEFAULT_CONFIDENCE) -> dict:
    """Sample mean of the lp-norm with a CLT interval.

    Consumers that place this quantity in a rate-function denominator
    should take ci_low; centerings should take ci_high, so that estimation
    error can only weaken the certified claim.
    """
    if p < 1:
        raise ConfigurationError("norm order p must be >= 1")
    batch = sample_vector(spec, n, seed)
    out = _mean_ci(_norms(batch.values, p), confidence)
    out["seed"] = _seed_label(seed)
    return out


def analytic_l(m, drift: float = 0.0):
    """-log E[exp(-X1^2)] where closed forms or stable series exist, else None."""
    if isinstance(m, SymmetricExponential) and drift == 0.0:
        s = m.scale
        val = (1.0 / s) * math.exp(1.0 / (4 * s * s)) * math.sqrt(math.pi) / 2.0 \
            * special.erfc(1.0 / (2 * s))
        return -math.log(val)
    if isinstance(m, PoissonAtom):
        lam, a = m.intensity, m.jump
        total, k, term = 0.0, 0, math.exp(-lam)
        while k < 5 * (lam + 10):
            total += term * math.exp(-((a * k + drift) ** 2))
            k += 1
            term *= lam / k
        return -math.log(total)
    if isinstance(m, GammaLevy):
        a, t0 = m.rate, m.shape
        val, _ = integrate.quad(
            lambda x: math.exp(-((x + drift) ** 2)) * a ** t0 * x ** (t0 - 1)
            * math.exp(-a * x) / math.gamma(t0), 0, np.inf)
        return -math.log(val)
    return None


def estimate_l(m, n: int, seed, confidence: float = DEFAULT_CONFIDENCE,
               drift: float = 0.0) -> dict:
    """-log of the sample mean of exp(-X1^2).

    The conservative direction for downstream rate functions is the lower
    endpoint (ci_low), since the quantity sits in denominators.
    """
    batch = sample_marginal(m, 1.0, n, seed)
    x = batch.values.ravel() + drift
    w = np.exp(-x * x)
    ci = _mean_ci(w, confidence)
    tiny = 1e-300
    return {"value": -math.log(max(ci["mean"], tiny)),
            "ci_low": -math.log(max(ci["ci_high"], tiny)),
            "ci_high": -math.log(max(ci["ci_low"], tiny)),
            "n": n, "seed": _seed_label(seed), "confidence": confidence}


def marginal_mean(m, drift: float = 0.0) -> float:
    """Mean of the unit-time marginal: first jump moment plus drift."""
    if isinstance(m, SymmetricExponential):
        jump_mean = 0.0
    elif isinstance(m, GammaLevy):
        jump_mean = m.shape / m.rate
    elif isinstance(m, PoissonAtom):
        jump_mean = m.intensity * m.jump
    elif isinstance(m, CompoundPoisson):
        jump_mean = m.rate * m.jumps.moment(1)
    else:
        jump_mean = levy_integral(m, lambda u: np.asarray(u, dtype=float))
    return jump_mean + drift


def marginal_variance(m) -> float:
    """Variance of the unit-time marginal equals the second jump moment."""
    return poly_moment(m, 2)


def marginal_second_moment(m, drift: float = 0.0) -> float:
    mu = marginal_mean(m, drift)
    return marginal_variance(m) + mu * mu


def _poisson_abs_moment(lam: float, q: float, scale: float = 1.0,
                        shift: float = 0.0) -> float:
    total, k, term = 0.0, 0, math.exp(-lam)
    kmax = int(lam + 20 * math.sqrt(lam) + 60)
    while k <= kmax:
        total += term * abs(scale * k + shift) ** q
        k += 1
        term *= lam / k
    return total


def _cumulants_to_raw(kappas: list[float]) -> list[float]:
    mus = [1.0]
    for order in range(1, len(kappas) + 1):
        mus.append(sum(math.comb(order - 1, j) * kappas[j] * mus[order - 1 - j]
                       for j in range(order)))
    return mus


def marginal_abs_moment(m, q: float, drift: float = 0.0):
    """E|X1|^q for the unit-time marginal when a closed form exists, else None."""
    if q <= 0:
        raise ConfigurationError("moment order must be positive")
    if isinstance(m, SymmetricExponential) and drift == 0.0:
        return math.gamma(q + 1.0) * m.scale ** q
    if isinstance(m, GammaLevy) and drift == 0.0:
        t0 = m.shape
        return math.gamma(t0 + q) / (math.gamma(t0) * m.rate ** q)
    if isinstance(m, PoissonAtom):
        return _poisson_abs_moment(m.intensity, q, scale=m.jump, shift=drift)
    if isinstance(m, CompoundPoisson) and drift == 0.0 and q == int(q):
        j = m.jumps
        nonneg = (j.low >= 0) if isinstance(j, UniformJumps) \
            else all(v > 0 for v in j.values)
        if nonneg:
            kappas = [m.rate * j.moment(r) for r in range(1, int(q) + 1)]
            return _cumulants_to_raw(kappas)[int(q)]
    return None


def estimate_moment(m, q: float, n: int, seed,
                    confidence: float = DEFAULT_CONFIDENCE,
                    drift: float = 0.0) -> dict:
    """Monte Carlo E|X1|^q with a CLT interval."""
    batch = sample_marginal(m, 1.0, n, seed)
    x = np.abs(batch.values.ravel() + drift) ** q
    out = _mean_ci(x, confidence)
    out["seed"] = _seed_label(seed)
    return out


def default_z_grid(points: int = 21) -> np.ndarray:
    return np.linspace(0.0, 1.0, points)


def estimate_modified_moments(m, p: float, z_grid=None, n: int = 20000,
                              seed=0, confidence: float = DEFAULT_CONFIDENCE,
                              drift: float = 0.0) -> dict:
    """Modified moments from the time-split X = Y_z + Z_z over a z grid.

    For each z the positive parts of the two independent pieces are summed
    (and likewise the negative parts), and the p-th and 2p-th moments of
    the magnitudes estimated.  The reported lower p-moment is the smallest
    lower confidence limit over the grid and sign choices, the upper
    2p-moment the largest upper limit, so grid and sampling slack both act
    in the conservative direction.  The endpoints z = 0 and z = 1 use the
    exact limits (one piece is identically zero).
    """
    if p < 1:
        raise ConfigurationError("p must be >= 1")
    if z_grid is None:
        z_grid = default_z_grid()
    ss = _as_seedseq(seed)
    lower_p = math.inf
    upper_2p = 0.0
    per_z = []
    for i, z in enumerate(np.asarray(z_grid, dtype=float)):
        if not 0 <= z <= 1:
            raise ConfigurationError("z grid values must lie in [0, 1]")
        if z == 0.0:
            y = np.zeros(n)
            w = sample_marginal(m, 1.0, n, _child(ss, _K_SUB, 2 * i + 1)) \
                .values.ravel() + drift
        elif z == 1.0:
            y = sample_marginal(m, 1.0, n, _child(ss, _K_SUB, 2 * i)) \
                .values.ravel() + drift
            w = np.zeros(n)
        else:
            y = sample_marginal(m, z, n, _child(ss, _K_SUB, 2 * i)) \
                .values.ravel() + drift * z
            w = sample_marginal(m, 1.0 - z, n, _child(ss, _K_SUB, 2 * i + 1)) \
                .values.ravel() + drift * (1.0 - z)
        plus = np.maximum(y, 0.0) + np.maximum(w, 0.0)
        minus = -(np.minimum(y, 0.0) + np.minimum(w, 0.0))
        entry = {"z": float(z)}
        for sign, sample in (("plus", plus), ("minus", minus)):
            mp = _mean_ci(sample ** p, confidence)
            m2p = _mean_ci(sample ** (2 * p), confidence)
            if np.all(sample == 0.0):
                mp = {"mean": 0.0, "ci_low": 0.0, "ci_high": 0.0}
                m2p = {"mean": 0.0, "ci_low": 0.0, "ci_high": 0.0}
            entry[sign] = {"m_p": mp["mean"], "m_2p": m2p["mean"]}
            lower_p = min(lower_p, mp["ci_low"])
            upper_2p = max(upper_2p, m2p["ci_high"])
        per_z.append(entry)
    lower_p = max(lower_p, 0.0)
    out = {"mod_m_p_lower": lower_p, "mod_m_2p_upper": upper_2p,
           "per_z": per_z, "n": n, "seed": _seed_label(seed),
           "confidence": confidence}
    if lower_p == 0.0:
        out["hint"] = ("modified p-moment vanishes; use the positive-case "
                       "rate if coordinates are nonnegative")
    return out


# ---------------------------------------------------------------------------
# Empirical tails
# ---------------------------------------------------------------------------

def _clopper_pearson(k: int, n: int, confidence: float) -> tuple[float, float]:
    alpha = 1.0 - confidence
    lo = 0.0 if k == 0 else float(stats.beta.ppf(alpha / 2.0, k, n - k + 1))
    hi = 1.0 if k == n else float(stats.beta.ppf(1.0 - alpha / 2.0, k + 1, n - k))
    return lo, hi


def tail_from_norms(norms: np.ndarray, x_grid, centering, *, p: float,
                    seed, confidence: float = DEFAULT_CONFIDENCE,
                    direction: str = "upper") -> TailEstimate:
    """Survival (or lower-tail) frequencies of precomputed norms."""
    if direction not in ("upper", "lower"):
        raise ConfigurationError("direction must be 'upper' or 'lower'")
    if not isinstance(centering, Centering):
        centering = Centering(kind="explicit", value=float(centering))
    n = norms.size
    sorted_norms = np.sort(norms)
    xs = np.asarray(x_grid, dtype=float)
    if direction == "upper":
        ks = n - np.searchsorted(sorted_norms, centering.value + xs, side="left")
    else:
        ks = np.searchsorted(sorted_norms, centering.value - xs, side="right")
    p_hat, lows, highs = [], [], []
    for k in ks:
        k = int(k)
        lo, hi = _clopper_pearson(k, n, confidence)
        p_hat.append(k / n)
        lows.append(lo)
        highs.append(hi)
    return TailEstimate(x_grid=tuple(float(x) for x in xs),
                        p_hat=tuple(p_hat), ci_low=tuple(lows),
                        ci_high=tuple(highs),
                        counts=tuple(int(k) for k in ks), n=n,
                        seed=_seed_label(seed) if not isinstance(seed, str) else seed,
                        p=float(p), confidence=confidence,
                        centering=centering, direction=direction)


def empirical_tail(spec: IDVectorSpec, p: float, x_grid, n: int, seed,
                   centering, confidence: float = DEFAULT_CONFIDENCE,
                   direction: str = "upper") -> TailEstimate:
    """Empirical P(|X|_p >= centering + x) per grid point, with exact CIs."""
    batch = sample_vector(spec, n, seed)
    norms = _norms(batch.values, p)
    return tail_from_norms(norms, x_grid, centering, p=p, seed=seed,
                           confidence=confidence, direction=direction)


# ---------------------------------------------------------------------------
# High-level moment collection
# ---------------------------------------------------------------------------

def collect_moments(spec: IDVectorSpec, p: float = 2.0, *, n: int = 100000,
                    seed=0, confidence: float = DEFAULT_CONFIDENCE,
                    need=("m_p", "m_2p", "l", "E_norm_p", "E_X1_sq"),
                    z_grid=None, modified_n: int | None = None):
    """Assemble a MomentSet, analytic where possible, Monte Carlo otherwise.

    Monte Carlo values are stored pre-shifted in the conservative
    direction: denominators (m_p, l, E-norms, the modified lower moment)
    carry the lower confidence limit, numerators (m_2p, the modified upper
    moment) the upper one.  E_norm_p_upper carries the upper limit for use
    as a centering.
    """
    from .rates import MomentSet  # local import to avoid a cycle

    m = spec.iid_measure()
    drift = spec.iid_drift()
    ss = _as_seedseq(seed)
    fields: dict = {}
    prov: dict = {}

    def mc(label: str) -> Provenance:
        return Provenance("monte-carlo", seed=_seed_label(seed), n=n,
                          confidence=confidence)

    if "m_p" in need or "m_2p" in need:
        for field_name, q, conservative in (("m_p", p, "ci_low"),
                                            ("m_2p", 2 * p, "ci_high")):
            if field_name not in need:
                continue
            val = marginal_abs_moment(m, q, drift)
            if val is not None:
                fields[field_name] = val
                prov[field_name] = ANALYTIC
            else:
                est = estimate_moment(m, q, n, _child(ss, _K_SUB, 10), confidence,
                                      drift)
                fields[field_name] = max(est[conservative], 0.0)
                prov[field_name] = mc(field_name)
    if "l" in need:
        val = analytic_l(m, drift)
        if val is not None:
            fields["l"] = val
            prov["l"] = ANALYTIC
        else:
            est = estimate_l(m, n, _child(ss, _K_SUB, 11), confidence, drift)
            fields["l"] = est["ci_low"]
            prov["l"] = mc("l")
    if "E_norm_p" in need:
        if spec.d == 1:
            val = marginal_abs_moment(m, 1.0, drift)
        else:
            val = None
        if val is not None:
            fields["E_norm_p"] = val
            fields["E_norm_p_upper"] = val
            prov["E_norm_p"] = ANALYTIC
        else:
            est = estimate_norm_expectation(spec, p, n, _child(ss, _K_SUB, 12),
                                            confidence)
            fields["E_norm_p"] = max(est["ci_low"], 0.0)
            fields["E_norm_p_upper"] = est["ci_high"]
            prov["E_norm_p"] = mc("E_norm_p")
    if "E_X1_sq" in need:
        fields["E_X1_sq"] = marginal_second_moment(m, drift)
        prov["E_X1_sq"] = ANALYTIC
    if "modified" in need:
        est = estimate_modified_moments(
            m, p, z_grid, modified_n or max(n // 5, 1000),
            _child(ss, _K_SUB, 13), confidence, drift)
        fields["mod_m_p_lower"] = est["mod_m_p_lower"]
        fields["mod_m_2p_upper"] = est["mod_m_2p_upper"]
        prov["mod_m_p_lower"] = mc("mod_m_p_lower")
        prov["mod_m_2p_upper"] = mc("mod_m_2p_upper")
    return MomentSet(provenance=prov, **fields)
