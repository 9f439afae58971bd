"""Audits of certified bounds against data, exact oracles and identities.

The statistical direction is one-sided by design: a certified bound
upper-bounds the true probability, so the only falsifiable event is an
empirical lower confidence limit exceeding the bound, and that is exactly
what the harness tests (testing p_hat <= bound directly would alarm on
sampling noise).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .errors import ConfigurationError
from .measures import IDVectorSpec, poly_moment, support_radius
from .numerics import BoundCertificate
from .rates import thm3_report
from .sampling import (DEFAULT_CONFIDENCE, TailEstimate, _as_seedseq, _child,
                       _K_SUB, _norms, sample_marginal, sample_vector)


@dataclass(frozen=True)
class Report:
    """Outcome of one verification job; pure function of its inputs."""

    name: str
    verdict: str
    points: tuple = ()
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict in ("PASS", "HEURISTIC-PASS")

    @property
    def heuristic(self) -> bool:
        return self.verdict.startswith("HEURISTIC")

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_dict(self) -> dict:
        return {"name": self.name, "verdict": self.verdict,
                "points": list(self.points), "meta": self.meta}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def to_text(self) -> str:
        lines = [f"{self.name}: {self.verdict}"]
        for pt in self.points:
            frag = ", ".join(f"{k}={v}" for k, v in pt.items())
            lines.append(f"  {frag}")
        for k, v in sorted(self.meta.items()):
            lines.append(f"  # {k}: {v}")
        return "\n".join(lines)


def verify_bound(cert: BoundCertificate, tail: TailEstimate, *,
                 overall_confidence: float = DEFAULT_CONFIDENCE) -> Report:
    """Check a certificate against an empirical tail, point by point.

    A point passes when the stored lower confidence limit does not exceed
    the bound; the overall verdict recomputes one-sided lower limits at a
    Bonferroni-adjusted level across the grid so the whole-certificate
    false-alarm probability stays controlled.
    """
    if len(cert.x_grid) != len(tail.x_grid) or any(
            not math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)
            for a, b in zip(cert.x_grid, tail.x_grid)):
        raise ConfigurationError("certificate and tail use different x grids")
    if cert.p != tail.p:
        raise ConfigurationError("certificate and tail use different norm orders")
    if cert.direction != tail.direction:
        raise ConfigurationError("certificate and tail use different directions")
    if not math.isclose(cert.centering.value, tail.centering.value,
                        rel_tol=1e-9, abs_tol=1e-12):
        raise ConfigurationError("certificate and tail use different centerings")

    G = len(cert.x_grid)
    alpha_point = (1.0 - overall_confidence) / G
    points = []
    all_adjusted = True
    for x, bound, p_hat, lo, k in zip(cert.x_grid, cert.bound, tail.p_hat,
                                      tail.ci_low, tail.counts):
        lo_adj = 0.0 if k == 0 else float(stats.beta.ppf(alpha_point, k,
                                                         tail.n - k + 1))
        point_pass = lo <= bound + 1e-15
        adj_pass = lo_adj <= bound + 1e-15
        all_adjusted = all_adjusted and adj_pass
        slack = math.inf if p_hat == 0.0 else math.log(bound / p_hat) \
            if bound > 0 else -math.inf
        points.append({"x": x, "bound": bound, "p_hat": p_hat, "ci_low": lo,
                       "ci_low_adjusted": lo_adj, "pass": bool(point_pass),
                       "pass_adjusted": bool(adj_pass), "log_slack": slack})
    verdict = "PASS" if all_adjusted else "FAIL"
    meta = {"family": cert.family, "n": tail.n, "seed": tail.seed,
            "overall_confidence": overall_confidence,
            "per_point_alpha": alpha_point,
            "centering": cert.centering.value, "direction": cert.direction}
    return Report(name=f"bound-audit[{cert.family}]", verdict=verdict,
                  points=tuple(points), meta=meta)


def verify_variance_identity(m, n: int, seed,
                             confidence: float = DEFAULT_CONFIDENCE) -> Report:
    """Sample variance of the marginal must cover the second jump moment.

    For an ID law without Gaussian part, Var(X1) equals the integral of
    u^2 against the Levy measure; this is the covariance representation
    specialised to coordinate functions.
    """
    target = poly_moment(m, 2)
    x = sample_marginal(m, 1.0, n, seed).values.ravel()
    s2 = float(np.var(x, ddof=1))
    centered = x - np.mean(x)
    m4 = float(np.mean(centered ** 4))
    var_of_s2 = max(m4 - s2 ** 2 * (n - 3) / (n - 1), 0.0) / n
    half = float(stats.norm.ppf(0.5 + confidence / 2.0)) * math.sqrt(var_of_s2)
    ok = abs(s2 - target) <= half
    return Report(
        name="variance-identity", verdict="PASS" if ok else "FAIL",
        points=({"target": target, "sample_variance": s2, "half_width": half},),
        meta={"n": n, "seed": seed if isinstance(seed, int) else str(seed),
              "confidence": confidence})


def verify_young(n_trials: int, seed, tol: float = 1e-12) -> Report:
    """Exhaustive check of the decoupling inequality on finite supports.

    For random bounded pairs (X, Y) on a joint finite support and
    lambda in (0, 2]:
      E[X e^{lY}] <= E[Y e^{lY}] + (log E[e^{lX}]/l) E[e^{lY}]
                                 - (log E[e^{lY}]/l) E[e^{lY}].
    Expectations are finite sums, so violations beyond rounding are real.
    """
    rng = np.random.default_rng(_as_seedseq(seed))
    violations = []
    worst = -math.inf
    for trial in range(n_trials):
        size = int(rng.integers(1, 7))
        xs = rng.uniform(-2.0, 2.0, size)
        ys = rng.uniform(-2.0, 2.0, size)
        w = rng.dirichlet(np.ones(size))
        lam = float(rng.uniform(0.0, 2.0)) or 1.0
        ey = float(np.sum(w * np.exp(lam * ys)))
        lhs = float(np.sum(w * xs * np.exp(lam * ys)))
        rhs = float(np.sum(w * ys * np.exp(lam * ys))) \
            + math.log(float(np.sum(w * np.exp(lam * xs)))) / lam * ey \
            - math.log(ey) / lam * ey
        gap = lhs - rhs
        worst = max(worst, gap)
        if gap > tol:
            violations.append({"trial": trial, "gap": gap, "lambda": lam})
    verdict = "PASS" if not violations else "FAIL"
    return Report(name="young-decoupling", verdict=verdict,
                  points=tuple(violations),
                  meta={"n_trials": n_trials, "worst_gap": worst,
                        "tolerance": tol})


def verify_thm3_integrability(m, lam: float, n_schedule, seed, d: int = 1,
                              growth_factor: float = 1.5) -> Report:
    """Heuristic finiteness audit of the superexponential moment.

    Running sample means of exp((|X|_2/R) log+(lam |X|_2 / R)) across the
    growing sample schedule must stay within ``growth_factor`` of each
    other.  This is evidence, not proof; the verdict is labelled HEURISTIC.
    """
    info = thm3_report(m)
    if lam >= info["lambda_max"]:
        raise ConfigurationError(
            f"lambda={lam} is not below lambda_max={info['lambda_max']}; "
            "outside the guaranteed range")
    if lam <= 0:
        raise ConfigurationError("lambda must be positive")
    R = info["R"]
    spec = IDVectorSpec(d, m)
    ss = _as_seedseq(seed)
    means = []
    for i, n in enumerate(n_schedule):
        batch = sample_vector(spec, int(n), _child(ss, _K_SUB, i))
        norms = _norms(batch.values, 2.0)
        expo = (norms / R) * np.maximum(np.log(np.maximum(lam * norms / R,
                                                          1e-300)), 0.0)
        means.append(float(np.mean(np.exp(expo))))
    lo, hi = min(means), max(means)
    stable = hi <= growth_factor * lo
    verdict = "HEURISTIC-PASS" if stable else "HEURISTIC-FAIL"
    return Report(name="integrability-audit", verdict=verdict,
                  points=tuple({"n": int(n), "mean": mval}
                               for n, mval in zip(n_schedule, means)),
                  meta={"lambda": lam, "lambda_max": info["lambda_max"],
                        "R": R, "d": d, "growth_factor": growth_factor,
                        "note": "stability heuristic, not a proof"})


def verify_covariance_formula(intensity: float, jump: float, f_coeffs,
                              g_coeffs, *, rel_tol: float = 1e-8,
                              kmax: int | None = None) -> Report:
    """Deterministic check of the interpolated covariance representation.

    For a single atom the representation reads, with U = Y'_z + Z_z and
    V = Y_z + Z_z built from independent Poisson pieces at times z, 1-z:

      Cov(f(X), g(X)) = integral over z of
          intensity * E[(f(U + a) - f(U)) (g(V + a) - g(V))].

    Both sides are evaluated by truncated series (the z-integral by fixed
    Gauss-Legendre), so agreement is a sharp test of the normalisation.
    Practical for small intensities and polynomial f, g only.
    """
    lam, a = float(intensity), float(jump)
    if lam > 2.0:
        raise ConfigurationError("series check is intended for small intensities")
    if kmax is None:
        kmax = int(lam + 20 * math.sqrt(lam) + 40)

    def poly(coeffs, x):
        return np.polyval(coeffs, x)

    ks = np.arange(kmax + 1)
    log_fact = np.cumsum(np.concatenate([[0.0], np.log(np.arange(1, kmax + 1))]))

    def pmf(rate):
        if rate == 0.0:
            out = np.zeros(kmax + 1)
            out[0] = 1.0
            return out
        return np.exp(-rate + ks * np.log(rate) - log_fact)

    w1 = pmf(lam)
    fx = poly(f_coeffs, a * ks)
    gx = poly(g_coeffs, a * ks)
    lhs = float(np.sum(w1 * fx * gx) - np.sum(w1 * fx) * np.sum(w1 * gx))

    nodes, weights = np.polynomial.legendre.leggauss(48)
    zs = 0.5 * (nodes + 1.0)
    zw = 0.5 * weights
    ks_long = np.arange(2 * kmax + 2)
    df = poly(f_coeffs, a * (ks_long + 1)) - poly(f_coeffs, a * ks_long)
    dg = poly(g_coeffs, a * (ks_long + 1)) - poly(g_coeffs, a * ks_long)
    # windows[l, j] = value at count l + j, for conditioning on the shared piece
    idx = np.arange(kmax + 1)[:, None] + np.arange(kmax + 1)[None, :]
    df_win = df[idx]
    dg_win = dg[idx]
    rhs = 0.0
    for z, wz in zip(zs, zw):
        py = pmf(z * lam)
        pz = pmf((1.0 - z) * lam)
        # E[df(Y' + Z) | Z = l] and E[dg(Y + Z) | Z = l] are independent given Z.
        ef = df_win @ py
        eg = dg_win @ py
        rhs += wz * lam * float(np.sum(pz * ef * eg))
    scale = max(abs(lhs), abs(rhs), 1e-12)
    ok = abs(lhs - rhs) <= rel_tol * scale
    return Report(name="covariance-representation",
                  verdict="PASS" if ok else "FAIL",
                  points=({"lhs": lhs, "rhs": rhs,
                           "rel_diff": abs(lhs - rhs) / scale},),
                  meta={"intensity": lam, "jump": a, "kmax": kmax})
