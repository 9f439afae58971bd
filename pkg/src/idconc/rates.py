"""Every rate function and closed-form bound, plus certificate builders.

Rate functions are weighted integrals of |u| (exp(t|u|) - 1) against the
Levy measure; the weights are either constants or small polynomial powers
of |u|.  Atomic measures are evaluated exactly; density families with
closed moment integrals go through an exact binomial expansion of the
polynomial weight; everything else falls back to quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError, NumericError, RangeError
from .measures import (IDVectorSpec, exp_moment_abscissa, exp_moment_integral,
                       exp_weight_integral, marginal_is_nonnegative,
                       marginal_is_symmetric, measure_config,
                       measure_is_nonnegative, measure_is_symmetric,
                       poly_moment, support_radius)
from .numerics import (ANALYTIC, BoundCertificate, Centering, Provenance,
                       RateFunction, chernoff_bound, constrained_chernoff,
                       find_T, invert_monotone)

VALIDITY_NOTE = "validity range taken as x < sup of the rate function"


# ---------------------------------------------------------------------------
# Moment inputs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentSet:
    """Marginal moment inputs consumed by the rate functions.

    Monte Carlo entries are stored pre-shifted in the conservative
    direction (see the sampler); ``E_norm_p_upper`` is the centering-side
    companion of ``E_norm_p``.
    """

    m_p: float | None = None
    m_2p: float | None = None
    l: float | None = None
    E_norm_p: float | None = None
    E_norm_p_upper: float | None = None
    E_X1_sq: float | None = None
    mod_m_p_lower: float | None = None
    mod_m_2p_upper: float | None = None
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        for name in ("m_p", "m_2p", "l", "E_norm_p", "E_norm_p_upper",
                     "E_X1_sq", "mod_m_p_lower", "mod_m_2p_upper"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ConfigurationError(f"{name} must be nonnegative")
        if self.l is not None and self.l == 0.0:
            raise ConfigurationError("l = 0 means a degenerate coordinate; refused")
        if self.m_p is not None and self.m_2p is not None:
            if self.m_2p < self.m_p ** 2 * (1.0 - 1e-9):
                raise ConfigurationError(
                    "m_2p < m_p^2 violates the Cauchy-Schwarz inequality")
        if self.E_norm_p is not None and self.E_norm_p_upper is None:
            object.__setattr__(self, "E_norm_p_upper", self.E_norm_p)

    def prov(self, name: str) -> Provenance:
        return self.provenance.get(name, ANALYTIC)


@dataclass(frozen=True)
class ProjectionSpec:
    """Column norms of an orthogonal projection, plus its offset parameter."""

    d: int
    col_norms: tuple
    E: float

    def __post_init__(self):
        norms = tuple(float(v) for v in self.col_norms)
        object.__setattr__(self, "col_norms", norms)
        if len(norms) != self.d:
            raise ConfigurationError("col_norms length must equal d")
        if any(not -1e-12 <= v <= 1.0 + 1e-12 for v in norms):
            raise ConfigurationError("projection column norms must lie in [0, 1]")
        if not self.E > 0:
            raise ConfigurationError("offset E must be positive")

    @classmethod
    def from_matrix(cls, P, E: float) -> "ProjectionSpec":
        P = np.asarray(P, dtype=float)
        if P.ndim != 2 or P.shape[0] != P.shape[1]:
            raise ConfigurationError("projection matrix must be square")
        if not np.allclose(P, P.T, atol=1e-10) or not np.allclose(P @ P, P, atol=1e-8):
            raise ConfigurationError("matrix is not an orthogonal projection")
        norms = np.linalg.norm(P, axis=0)
        trace = float(np.trace(P))
        if abs(trace - round(trace)) > 1e-8 or \
                abs(float(np.sum(norms ** 2)) - trace) > 1e-8:
            raise ConfigurationError(
                "column norms inconsistent with a projection subspace dimension")
        return cls(d=P.shape[0], col_norms=tuple(norms), E=float(E))


# ---------------------------------------------------------------------------
# Rate constructors
# ---------------------------------------------------------------------------

def rate_thm1(m, l: float, *, provenance=()) -> RateFunction:
    """Euclidean-norm rate built from first and third absolute jump moments.

    g(t) = (8 + 12 log2 / l) I1(t) + (8 / l) I3(t), where I_r(t) is the
    integral of |u|^r (exp(t|u|) - 1) and l = -log E[exp(-X1^2)].
    """
    if not l > 0:
        raise ConfigurationError("l must be positive")
    c1 = 8.0 + 12.0 * math.log(2.0) / l
    c3 = 8.0 / l

    def g(t):
        return c1 * exp_moment_integral(m, t, 1) + c3 * exp_moment_integral(m, t, 3)

    return RateFunction(g, exp_moment_abscissa(m), "l2-constrained",
                        params={"measure": measure_config(m), "l": l},
                        provenance=provenance)


def _power_weight_rate(m, p: float, base: float, slope: float, const: float,
                       label: str, *, positive_only: bool = False,
                       first_term_factor: float = 1.0, params: dict | None = None,
                       provenance=(), dimension_dependent: bool = False,
                       method: str = "auto") -> RateFunction:
    """p^2 * integral of [f*(base + slope |u|)^(2p-2) + const] |u|(e^{t|u|}-1).

    Atomic measures are summed exactly.  When the exponent 2p-2 is an
    integer and the family has closed moment integrals, the power is
    expanded binomially into exact moment integrals; otherwise the weight
    goes into the quadrature directly.
    """
    expo = 2.0 * p - 2.0
    p_sq = p * p
    int_expo = int(round(expo))
    expandable = (abs(expo - int_expo) < 1e-12 and int_expo >= 0
                  and m.atoms() is None
                  and m.closed_exp_moment(0.5 * exp_moment_abscissa(m)
                                          if math.isfinite(exp_moment_abscissa(m))
                                          else 1.0, 1) is not None)
    if method == "expand" and not expandable:
        raise ConfigurationError("binomial expansion unavailable for this family")
    use_expansion = expandable if method == "auto" else (method == "expand")

    if m.atoms() is not None:
        def h(t):
            def weight(au):
                return first_term_factor * (base + slope * au) ** expo + const
            return p_sq * exp_weight_integral(m, t, weight,
                                              positive_only=positive_only)
    elif use_expansion:
        coeffs = [math.comb(int_expo, j) * base ** (int_expo - j) * slope ** j
                  for j in range(int_expo + 1)]

        def h(t):
            total = const * exp_moment_integral(m, t, 1)
            for j, c in enumerate(coeffs):
                total += first_term_factor * c * exp_moment_integral(m, t, j + 1)
            return p_sq * total
    else:
        def h(t):
            def weight(au):
                return first_term_factor * (base + slope * au) ** expo + const
            return p_sq * exp_weight_integral(m, t, weight,
                                              positive_only=positive_only)

    return RateFunction(h, exp_moment_abscissa(m), label,
                        params=params or {}, provenance=provenance,
                        dimension_dependent=dimension_dependent)


def rate_thm2(m, p: float, m_p: float, m_2p: float, *, provenance=(),
              method: str = "auto") -> RateFunction:
    """lp-norm rate for symmetric or nonnegative marginals; no d anywhere."""
    if p < 2:
        raise ConfigurationError("p must be >= 2")
    if not m_p > 0:
        raise ConfigurationError("m_p must be positive")
    if not (measure_is_symmetric(m) or measure_is_nonnegative(m)):
        raise ConfigurationError(
            "marginal is neither symmetric nor nonnegative; "
            "use rate_thm5_general instead")
    slope = 4.0 ** (1.0 / p) / m_p ** (1.0 / p)
    const = 2.0 ** (2 * p + 1) * m_2p / m_p ** 2
    return _power_weight_rate(
        m, p, 1.0, slope, const, "lp-symmetric-or-positive",
        params={"measure": measure_config(m), "p": p, "m_p": m_p, "m_2p": m_2p},
        provenance=provenance, method=method)


def rate_thm5_positive(m, p: float, m_p: float, m_2p: float, *, provenance=(),
                       method: str = "auto") -> RateFunction:
    """Sharpened lp-norm rate for almost surely nonnegative coordinates."""
    if p < 2:
        raise ConfigurationError("p must be >= 2")
    if not m_p > 0:
        raise ConfigurationError("m_p must be positive")
    if not measure_is_nonnegative(m):
        raise ConfigurationError("positive-case rate needs nonnegative coordinates")
    base = 2.0 ** (-1.0 / p)
    slope = 1.0 / m_p ** (1.0 / p)
    const = 4.0 * (1.0 + 2.0 ** (-1.0 / p)) ** (2 * p - 2) * m_2p / m_p ** 2
    return _power_weight_rate(
        m, p, base, slope, const, "lp-positive",
        positive_only=True,
        params={"measure": measure_config(m), "p": p, "m_p": m_p, "m_2p": m_2p},
        provenance=provenance, method=method)


def rate_thm5_general(m, p: float, mod_m_p_lower: float, mod_m_2p_upper: float,
                      d: int | None = None, *, provenance=(),
                      method: str = "auto") -> RateFunction:
    """General-case lp-norm rate built on the modified (time-split) moments.

    For 1 <= p < 2 the first weight term carries a d^(2/p - 1) prefactor
    and the result is flagged dimension-dependent.
    """
    if p < 1:
        raise ConfigurationError("p must be >= 1")
    if not mod_m_p_lower > 0:
        raise ConfigurationError(
            "modified moment vanishes; use the positive-case rate if "
            "coordinates are nonnegative")
    first = 1.0
    dim_dep = False
    if p < 2:
        if d is None:
            raise ConfigurationError("d is required when 1 <= p < 2")
        first = float(d) ** (2.0 / p - 1.0)
        dim_dep = True
    slope = 2.0 ** (1.0 / p) / mod_m_p_lower ** (1.0 / p)
    const = 2.0 ** (2 * p) * mod_m_2p_upper / mod_m_p_lower ** 2
    params = {"measure": measure_config(m), "p": p,
              "mod_m_p_lower": mod_m_p_lower, "mod_m_2p_upper": mod_m_2p_upper}
    if dim_dep:
        params["d"] = d
    return _power_weight_rate(
        m, p, 1.0, slope, const, "lp-general", first_term_factor=first,
        params=params, provenance=provenance, dimension_dependent=dim_dep,
        method=method)


def rate_thm4(m, d: int, eps: float, E_norm_2: float, *,
              provenance=()) -> RateFunction:
    """Euclidean-norm rate with the inflated centering (1+eps) E|X|_2."""
    if not eps > 0:
        raise ConfigurationError("eps must be positive")
    if not E_norm_2 > 0:
        raise ConfigurationError("E_norm_2 must be positive")
    c3 = 2.0 * d / (eps * E_norm_2) ** 2

    def h(t):
        return 8.0 * exp_moment_integral(m, t, 1) + c3 * exp_moment_integral(m, t, 3)

    return RateFunction(h, exp_moment_abscissa(m), "l2-inflated-centering",
                        params={"measure": measure_config(m), "d": d,
                                "eps": eps, "E_norm_2": E_norm_2},
                        provenance=provenance)


def rate_projection(ms, proj: ProjectionSpec, variant: str, *,
                    E_X1_sq: float | None = None, provenance=()) -> RateFunction:
    """Rate for the Euclidean norm of an orthogonal projection.

    variant "cor3": independent coordinates, explicit offset proj.E; the
    fourth powers of the projection column norms weight the third-moment
    terms.  variant "cor4": i.i.d. centered coordinates with proj.E read
    as a relative eps; the identity E|P X|_2^2 = E[X1^2] * sum of squared
    column norms removes the column norms from the rate entirely.
    """
    if variant not in ("cor3", "cor4"):
        raise ConfigurationError("variant must be 'cor3' or 'cor4'")
    measures = tuple(ms) if isinstance(ms, (list, tuple)) else (ms,) * proj.d
    if len(measures) != proj.d:
        raise ConfigurationError("need one measure per coordinate")
    t_max = min(exp_moment_abscissa(mk) for mk in measures)
    if variant == "cor4":
        if isinstance(ms, (list, tuple)) and len(set(ms)) > 1:
            raise ConfigurationError("cor4 requires i.i.d. coordinates")
        if E_X1_sq is None or not E_X1_sq > 0:
            raise ConfigurationError("cor4 requires E_X1_sq > 0")
        m = measures[0]
        c3 = 2.0 / (proj.E ** 2 * E_X1_sq)

        def h(t):
            return 8.0 * exp_moment_integral(m, t, 1) \
                + c3 * exp_moment_integral(m, t, 3)

        return RateFunction(h, t_max, "projection-iid",
                            params={"measure": measure_config(m),
                                    "eps": proj.E, "E_X1_sq": E_X1_sq},
                            provenance=provenance)

    pi4 = [v ** 4 for v in proj.col_norms]
    c3 = 2.0 / proj.E ** 2

    def h(t):
        first = max(exp_moment_integral(mk, t, 1) for mk in measures)
        second = sum(w * exp_moment_integral(mk, t, 3)
                     for w, mk in zip(pi4, measures) if w > 0)
        return 8.0 * first + c3 * second

    return RateFunction(h, t_max, "projection-independent",
                        params={"measures": [measure_config(mk) for mk in
                                             set(measures)] if len(set(measures)) > 1
                                else measure_config(measures[0]),
                                "E": proj.E, "col_norms": list(proj.col_norms),
                                "d": proj.d},
                        provenance=provenance)


def rate_cor5(m, p: float, d: int, eps: float, E_norm_p: float, *,
              provenance=()) -> RateFunction:
    """lp-norm rate with inflated centering; d enters only through a root."""
    if p < 2:
        raise ConfigurationError("p must be >= 2")
    if not eps > 0:
        raise ConfigurationError("eps must be positive")
    if not E_norm_p > 0:
        raise ConfigurationError("E_norm_p must be positive")
    slope = float(d) ** (1.0 / (2.0 * p - 2.0)) / (eps * E_norm_p)
    return _power_weight_rate(
        m, p, 1.0, slope, 0.0, "lp-inflated-centering",
        params={"measure": measure_config(m), "p": p, "d": d, "eps": eps,
                "E_norm_p": E_norm_p},
        provenance=provenance)


# ---------------------------------------------------------------------------
# Closed-form bounded-support bound and report
# ---------------------------------------------------------------------------

def _v_eps_sq(measures, eps: float, E_norm_2: float) -> tuple[float, float]:
    radii = [support_radius(mk) for mk in measures]
    if any(math.isinf(r) for r in radii):
        raise DomainError("bounded-support bound requires finite support radii")
    R = max(radii)
    V2 = 8.0 * max(poly_moment(mk, 2) for mk in measures) \
        + (2.0 / (eps * E_norm_2) ** 2) * sum(poly_moment(mk, 4)
                                              for mk in measures)
    return V2, R


def cor2_rate(V_sq: float, R: float) -> RateFunction:
    """The exponential rate V^2 (e^{tR} - 1)/R whose transform is closed-form."""
    return RateFunction(lambda t: V_sq * math.expm1(t * R) / R, math.inf,
                        "bounded-support", params={"V_sq": V_sq, "R": R})


def bound_cor2(ms, d: int, eps: float, E_norm_2: float, x: float, *,
               cross_check: bool = True) -> float:
    """Closed-form bound exp(x/R - (x/R + V^2/R^2) log(1 + R x / V^2)).

    Valid for every x >= 0 when all coordinate measures have bounded
    support.  Each evaluation is cross-asserted against the generic
    Chernoff pipeline applied to the rate V^2 (e^{tR} - 1)/R.
    """
    if x < 0:
        raise ConfigurationError("x must be nonnegative")
    measures = tuple(ms) if isinstance(ms, (list, tuple)) else (ms,) * d
    V2, R = _v_eps_sq(measures, eps, E_norm_2)
    if x == 0.0:
        return 1.0
    neg_log = (x / R + V2 / R ** 2) * math.log1p(R * x / V2) - x / R
    if cross_check:
        generic = chernoff_bound(cor2_rate(V2, R), x)
        other = -math.log(generic) if generic > 0 else math.inf
        if abs(other - neg_log) > 1e-6 * max(abs(other), abs(neg_log)):
            raise NumericError(
                f"closed form and Chernoff pipeline disagree: {neg_log} vs {other}")
    return math.exp(-neg_log)


def thm3_report(m) -> dict:
    """Second-moment functional and the admissible lambda range for the
    more-than-exponential integrability statement on bounded support."""
    R = support_radius(m)
    if math.isinf(R):
        raise DomainError("integrability report requires a finite support radius")
    V_sq = 8.0 * poly_moment(m, 2)
    lambda_max = R ** 2 / (math.e * V_sq)
    return {"V_sq": V_sq, "R": R, "lambda_max": lambda_max,
            "statement": ("E[exp((|X|_2/R) log(lambda |X|_2 / R))] is finite "
                          "for lambda < lambda_max")}


# ---------------------------------------------------------------------------
# Certificate builders
# ---------------------------------------------------------------------------

def _provenance_list(moments: MomentSet, names) -> tuple:
    return tuple((name, moments.prov(name)) for name in names
                 if getattr(moments, name) is not None)


def _chernoff_certificate(rate: RateFunction, x_grid, centering: Centering,
                          family: str, measure: dict, p: float,
                          direction: str = "upper", provenance=(),
                          notes=()) -> BoundCertificate:
    xs = [float(x) for x in x_grid]
    validity = rate.sup_value()
    for x in xs:
        if x >= validity:
            raise RangeError(
                f"x={x} at or beyond the validity supremum {validity}")
    bounds = [chernoff_bound(rate, x) for x in xs]
    return BoundCertificate(
        family=family, rate_label=rate.label, rate_params=rate.params,
        p=p, x_grid=tuple(xs), bound=tuple(bounds), validity_sup=validity,
        centering=centering, measure=measure, direction=direction,
        inputs_provenance=tuple(provenance), notes=(VALIDITY_NOTE, *notes))


def bound_thm1(spec: IDVectorSpec, moments: MomentSet, x_grid) -> BoundCertificate:
    """Certificate for P(|X|_2 >= E|X|_2 + x) on i.i.d. coordinates.

    Valid for every x > 0: the Chernoff supremum is restricted to [0, T]
    with T the largest point where t g(t) <= 1/2.
    """
    m = spec.iid_measure()
    if moments.l is None or moments.E_norm_p_upper is None:
        raise ConfigurationError("bound_thm1 needs l and E_norm_p in the moments")
    g = rate_thm1(m, moments.l)
    T = find_T(g)
    xs = [float(x) for x in x_grid]
    bounds = [constrained_chernoff(g, T, x) for x in xs]
    centering = Centering("E_norm_p", moments.E_norm_p_upper,
                          moments.prov("E_norm_p"))
    params = dict(g.params)
    params["T"] = T
    return BoundCertificate(
        family="thm1", rate_label=g.label, rate_params=params, p=2.0,
        x_grid=tuple(xs), bound=tuple(bounds), validity_sup=math.inf,
        centering=centering, measure=measure_config(m),
        inputs_provenance=_provenance_list(moments, ("l", "E_norm_p")),
        notes=())


def bound_thm2(spec: IDVectorSpec, p: float, moments: MomentSet,
               x_grid) -> BoundCertificate:
    """Certificate for P(|X|_p - E|X|_p >= x); contains no d anywhere."""
    m = spec.iid_measure()
    drift = spec.iid_drift()
    if not (marginal_is_symmetric(m, drift) or marginal_is_nonnegative(m, drift)):
        raise ConfigurationError(
            "marginal (drift included) is neither symmetric nor nonnegative; "
            "use the general-case rate")
    if moments.m_p is None or moments.m_2p is None:
        raise ConfigurationError("bound_thm2 needs m_p and m_2p")
    if moments.E_norm_p_upper is None:
        raise ConfigurationError("bound_thm2 needs E_norm_p for the centering")
    h = rate_thm2(m, p, moments.m_p, moments.m_2p)
    centering = Centering("E_norm_p", moments.E_norm_p_upper,
                          moments.prov("E_norm_p"))
    return _chernoff_certificate(
        h, x_grid, centering, "thm2", measure_config(m), p,
        provenance=_provenance_list(moments, ("m_p", "m_2p", "E_norm_p")))


def bound_thm5(spec: IDVectorSpec, p: float, moments: MomentSet,
               x_grid) -> BoundCertificate:
    """General lp certificate: nonnegative marginals route to the sharpened
    positive-case rate, everything else uses the modified moments."""
    m = spec.iid_measure()
    drift = spec.iid_drift()
    if moments.E_norm_p_upper is None:
        raise ConfigurationError("bound_thm5 needs E_norm_p for the centering")
    centering = Centering("E_norm_p", moments.E_norm_p_upper,
                          moments.prov("E_norm_p"))
    if marginal_is_nonnegative(m, drift) and p >= 2:
        if moments.m_p is None or moments.m_2p is None:
            raise ConfigurationError("positive-case rate needs m_p and m_2p")
        h = rate_thm5_positive(m, p, moments.m_p, moments.m_2p)
        return _chernoff_certificate(
            h, x_grid, centering, "thm5_pos", measure_config(m), p,
            provenance=_provenance_list(moments, ("m_p", "m_2p", "E_norm_p")))
    if moments.mod_m_p_lower is None or moments.mod_m_2p_upper is None:
        raise ConfigurationError("general-case rate needs the modified moments")
    h = rate_thm5_general(m, p, moments.mod_m_p_lower, moments.mod_m_2p_upper,
                          d=spec.d)
    return _chernoff_certificate(
        h, x_grid, centering, "thm5_gen", measure_config(m), p,
        provenance=_provenance_list(
            moments, ("mod_m_p_lower", "mod_m_2p_upper", "E_norm_p")),
        notes=("dimension-dependent rate",) if h.dimension_dependent else ())


def bound_thm4(spec: IDVectorSpec, eps: float, moments: MomentSet,
               x_grid) -> BoundCertificate:
    """Certificate for P(|X|_2 >= (1+eps) E|X|_2 + x)."""
    m = spec.iid_measure()
    if moments.E_norm_p is None:
        raise ConfigurationError("bound_thm4 needs E_norm_p (p=2)")
    h = rate_thm4(m, spec.d, eps, moments.E_norm_p)
    centering = Centering("(1+eps)E_norm_p",
                          (1.0 + eps) * moments.E_norm_p_upper,
                          moments.prov("E_norm_p"))
    return _chernoff_certificate(
        h, x_grid, centering, "thm4", measure_config(m), 2.0,
        provenance=_provenance_list(moments, ("E_norm_p",)))


def bound_cor5(spec: IDVectorSpec, p: float, eps: float, moments: MomentSet,
               x_grid, direction: str = "upper") -> BoundCertificate:
    """Certificate for the inflated-centering lp bound, either direction.

    Upper: P(|X|_p >= (1+eps) E|X|_p + x).  Lower: P(|X|_p <= (1-eps)
    E|X|_p - x); the same rate serves both.
    """
    m = spec.iid_measure()
    if moments.E_norm_p is None:
        raise ConfigurationError("bound_cor5 needs E_norm_p")
    h = rate_cor5(m, p, spec.d, eps, moments.E_norm_p)
    if direction == "upper":
        centering = Centering("(1+eps)E_norm_p",
                              (1.0 + eps) * moments.E_norm_p_upper,
                              moments.prov("E_norm_p"))
    else:
        if eps >= 1:
            raise ConfigurationError("lower direction needs eps < 1")
        centering = Centering("(1-eps)E_norm_p",
                              (1.0 - eps) * moments.E_norm_p,
                              moments.prov("E_norm_p"))
    return _chernoff_certificate(
        h, x_grid, centering, "cor5", measure_config(m), p,
        direction=direction,
        provenance=_provenance_list(moments, ("E_norm_p",)))


def bound_cor2_certificate(spec: IDVectorSpec, eps: float, moments: MomentSet,
                           x_grid) -> BoundCertificate:
    """Certificate form of the closed-form bounded-support bound."""
    measures = spec.measures()
    if moments.E_norm_p is None:
        raise ConfigurationError("bound_cor2 needs E_norm_p (p=2)")
    V2, R = _v_eps_sq(measures, eps, moments.E_norm_p)
    xs = [float(x) for x in x_grid]
    bounds = [bound_cor2(measures, spec.d, eps, moments.E_norm_p, x,
                         cross_check=False) for x in xs]
    centering = Centering("(1+eps)E_norm_p",
                          (1.0 + eps) * moments.E_norm_p_upper,
                          moments.prov("E_norm_p"))
    params = {"V_eps_sq": V2, "R": R, "eps": eps, "d": spec.d,
              "E_norm_2": moments.E_norm_p}
    return BoundCertificate(
        family="cor2", rate_label="bounded-support", rate_params=params,
        p=2.0, x_grid=tuple(xs), bound=tuple(bounds), validity_sup=math.inf,
        centering=centering,
        measure=measure_config(measures[0]) if spec.is_iid
        else {"per_coordinate": [measure_config(mk) for mk in measures]},
        inputs_provenance=_provenance_list(moments, ("E_norm_p",)),
        notes=("rate V^2(exp(tR)-1)/R chosen so its Chernoff transform "
               "reproduces the closed form",))


def bound_projection(proj: ProjectionSpec, rate: RateFunction,
                     centering_value: float, x_grid, variant: str,
                     direction: str = "upper", provenance=()) -> BoundCertificate:
    """Certificate wrapper for projection rates with caller-set centering."""
    kind = {"cor3": "E_proj_norm+E" if direction == "upper" else "E_proj_norm-E",
            "cor4": "(1+eps)sqrt(E_proj_norm_sq)" if direction == "upper"
            else "sqrt(E_proj_norm_sq)-eps"}[variant]
    centering = Centering(kind, centering_value)
    measure = rate.params.get("measure") or rate.params.get("measures")
    return _chernoff_certificate(rate, x_grid, centering, variant, measure,
                                 2.0, direction=direction, provenance=provenance)
