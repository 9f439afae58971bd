"""One-dimensional Levy measures and the integral functionals built on them.

Every measure exposes the same small surface: the exponential-moment
abscissa ``M = sup{t : integral of exp(t|u|) over |u|>1 is finite}``, the
support radius ``R``, closed-form moment integrals where the family has
them, and a generic "integrate f against the measure" fallback.  Atomic
measures sum over their atoms; density measures go through quadrature with
the domain split at 0 and at |u| = 1, so the 1/|u|-type singularity of the
exponential families never enters an integrand (every integrand used here
carries at least one power of |u|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import ConfigurationError, DomainError, NumericError

# Default tolerances for integrals against the Levy measure.
INNER_ABS_TOL = 1e-9
INNER_REL_TOL = 1e-8

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _expm1(x: float) -> float:
    try:
        return math.expm1(x)
    except OverflowError:
        return math.inf


def _leggauss(order: int) -> tuple[np.ndarray, np.ndarray]:
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


def _gl_fixed(f, a: float, b: float, panels: int, order: int = 32) -> float:
    x, w = _leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    vals = np.asarray(f(nodes), dtype=float).reshape(panels, order)
    return float(np.sum(vals * w[None, :] * half[:, None]))


def gl_integral(f, a: float, b: float, *, epsabs: float = INNER_ABS_TOL,
                epsrel: float = INNER_REL_TOL, initial_panels: int = 4,
                max_rounds: int = 14) -> float:
    """Panel-doubling Gauss-Legendre quadrature for a smooth vectorised f.

    The panel count doubles until two successive refinements agree within
    the requested tolerance, which certifies the result for the analytic
    integrands used here (polynomial weights times exp(t*u) times a smooth
    density).
    """
    if not (b > a):
        return 0.0
    with np.errstate(over="ignore"):
        panels = initial_panels
        prev = _gl_fixed(f, a, b, panels)
        for _ in range(max_rounds):
            panels *= 2
            cur = _gl_fixed(f, a, b, panels)
            if math.isinf(prev) and math.isinf(cur):
                return cur
            if abs(cur - prev) <= max(epsabs, epsrel * max(abs(cur), abs(prev))):
                return cur
            prev = cur
    raise NumericError(
        f"quadrature did not converge on [{a}, {b}]; "
        f"last correction {abs(cur - prev):.3e}"
    )


def _quad_scipy(f, a: float, b: float, *, epsabs: float, epsrel: float,
                points: Sequence[float] | None = None) -> float:
    if points is not None and not (math.isfinite(a) and math.isfinite(b)):
        points = None
    kwargs = {"epsabs": epsabs, "epsrel": epsrel, "full_output": 1,
              "limit": max(300, 10 * (len(points) + 1 if points else 1))}
    if points is not None:
        pts = [p for p in points if a < p < b]
        if pts:
            kwargs["points"] = pts
    out = integrate.quad(lambda u: float(f(u)), a, b, **kwargs)
    val, abserr = out[0], out[1]
    trouble = len(out) > 3
    if trouble and abserr > 10.0 * max(epsabs, epsrel * abs(val)):
        raise NumericError(
            f"quadrature on [{a}, {b}] unreliable; achieved abs error {abserr:.3e}"
        )
    return float(val)


# ---------------------------------------------------------------------------
# Measure families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetricExponential:
    """Levy density exp(-|u|/scale)/|u| on the whole real line.

    The associated ID marginal at unit time is the symmetric Laplace law
    with the same scale.
    """

    scale: float = 1.0

    def __post_init__(self):
        if not (isinstance(self.scale, (int, float)) and 0 < self.scale < math.inf):
            raise ConfigurationError("scale must be positive and finite")

    def abscissa(self) -> float:
        return 1.0 / self.scale

    def radius(self) -> float:
        return math.inf

    def atoms(self):
        return None

    def support(self) -> tuple[float, float]:
        return (-math.inf, math.inf)

    def density(self):
        s = self.scale
        return lambda u: np.exp(-np.abs(u) / s) / np.abs(u)

    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def smooth_density(self) -> bool:
        return True

    def closed_exp_moment(self, t: float, r: int) -> float:
        s = self.scale
        return 2.0 * math.gamma(r) * ((1.0 / s - t) ** (-r) - s ** r)

    def closed_poly_moment(self, q: float) -> float:
        return 2.0 * math.gamma(q) * self.scale ** q


@dataclass(frozen=True)
class GammaLevy:
    """Levy density shape * exp(-rate*u)/u on u > 0 (gamma subordinator)."""

    rate: float
    shape: float

    def __post_init__(self):
        if not (0 < self.rate < math.inf):
            raise ConfigurationError("rate must be positive and finite")
        if not (0 < self.shape < math.inf):
            raise ConfigurationError("shape must be positive and finite")

    def abscissa(self) -> float:
        return self.rate

    def radius(self) -> float:
        return math.inf

    def atoms(self):
        return None

    def support(self) -> tuple[float, float]:
        return (0.0, math.inf)

    def density(self):
        a, t0 = self.rate, self.shape
        return lambda u: t0 * np.exp(-a * u) / u

    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def smooth_density(self) -> bool:
        return True

    def closed_exp_moment(self, t: float, r: int) -> float:
        a = self.rate
        return self.shape * math.gamma(r) * ((a - t) ** (-r) - a ** (-r))

    def closed_poly_moment(self, q: float) -> float:
        return self.shape * math.gamma(q) * self.rate ** (-q)


@dataclass(frozen=True)
class PoissonAtom:
    """A single atom of the given intensity at a nonzero jump size."""

    intensity: float
    jump: float

    def __post_init__(self):
        if not (0 < self.intensity < math.inf):
            raise ConfigurationError("intensity must be positive and finite")
        if not (self.jump != 0 and math.isfinite(self.jump)):
            raise ConfigurationError("jump must be nonzero and finite")

    def abscissa(self) -> float:
        return math.inf

    def radius(self) -> float:
        return abs(self.jump)

    def atoms(self):
        return ((self.jump, self.intensity),)

    def closed_exp_moment(self, t: float, r: int) -> float:
        a = abs(self.jump)
        return self.intensity * a ** r * _expm1(t * a)

    def closed_poly_moment(self, q: float) -> float:
        return self.intensity * abs(self.jump) ** q


@dataclass(frozen=True)
class UniformJumps:
    """Jump sizes uniform on [low, high]."""

    low: float
    high: float

    def __post_init__(self):
        if not (math.isfinite(self.low) and math.isfinite(self.high)
                and self.low < self.high):
            raise ConfigurationError("need finite low < high for uniform jumps")

    def abs_bound(self) -> float:
        return max(abs(self.low), abs(self.high))

    def moment(self, q: int) -> float:
        lo, hi = self.low, self.high
        return (hi ** (q + 1) - lo ** (q + 1)) / ((q + 1) * (hi - lo))


@dataclass(frozen=True)
class DiscreteJumps:
    """Jump sizes on a finite set of nonzero values with given probabilities."""

    values: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        pr = tuple(float(p) for p in self.probs)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "probs", pr)
        if len(vals) == 0 or len(vals) != len(pr):
            raise ConfigurationError("values and probs must be nonempty, equal length")
        if any(v == 0 or not math.isfinite(v) for v in vals):
            raise ConfigurationError("jump values must be nonzero and finite")
        if any(p <= 0 for p in pr) or abs(sum(pr) - 1.0) > 1e-9:
            raise ConfigurationError("probs must be positive and sum to 1")

    def abs_bound(self) -> float:
        return max(abs(v) for v in self.values)

    def moment(self, q: int) -> float:
        return sum(p * v ** q for v, p in zip(self.values, self.probs))


@dataclass(frozen=True)
class CompoundPoisson:
    """Total jump intensity ``rate`` with a bounded jump-size distribution."""

    rate: float
    jumps: UniformJumps | DiscreteJumps

    def __post_init__(self):
        if not (0 < self.rate < math.inf):
            raise ConfigurationError("rate must be positive and finite")
        if not isinstance(self.jumps, (UniformJumps, DiscreteJumps)):
            raise ConfigurationError("jumps must be UniformJumps or DiscreteJumps")

    def abscissa(self) -> float:
        return math.inf

    def radius(self) -> float:
        return self.jumps.abs_bound()

    def atoms(self):
        if isinstance(self.jumps, DiscreteJumps):
            return tuple((v, self.rate * p)
                         for v, p in zip(self.jumps.values, self.jumps.probs))
        return None

    def support(self) -> tuple[float, float]:
        return (self.jumps.low, self.jumps.high)

    def density(self):
        c = self.rate / (self.jumps.high - self.jumps.low)
        return lambda u: np.full_like(np.asarray(u, dtype=float), c)

    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def smooth_density(self) -> bool:
        return True

    def closed_exp_moment(self, t: float, r: int):
        if isinstance(self.jumps, DiscreteJumps):
            return sum(mass * abs(v) ** r * _expm1(t * abs(v))
                       for v, mass in self.atoms())
        return None

    def closed_poly_moment(self, q: float) -> float:
        return self.rate * self.jumps.moment(int(q))


class CustomDensity:
    """A caller-supplied Levy density with declared abscissa and radius.

    The library never probes tail behaviour numerically: ``M`` must be
    declared (it is echoed into every downstream certificate), and ``R``
    defaults to the support bound when that is finite.
    """

    def __init__(self, density: Callable[[np.ndarray], np.ndarray],
                 support: tuple[float, float], M: float,
                 R: float | None = None,
                 breakpoints: Sequence[float] = (),
                 table: Sequence[tuple[float, float]] | None = None):
        lo, hi = float(support[0]), float(support[1])
        if not lo < hi:
            raise ConfigurationError("support must be a nonempty interval")
        if M is None:
            raise ConfigurationError(
                "CustomDensity requires a declared exponential-moment abscissa M")
        M = float(M)
        if not M > 0:
            raise ConfigurationError("declared M must be positive")
        if R is None:
            R = max(abs(lo), abs(hi)) if math.isfinite(lo) and math.isfinite(hi) \
                else math.inf
        R = float(R)
        if not R > 0:
            raise ConfigurationError("declared R must be positive")
        self._density = density
        self._support = (lo, hi)
        self._M = M
        self._R = R
        self._breakpoints = tuple(sorted(float(b) for b in breakpoints if lo < b < hi))
        self._table = None if table is None else tuple((float(u), float(k)) for u, k in table)
        self._validate()

    @classmethod
    def from_table(cls, table: Sequence[tuple[float, float]], M: float,
                   R: float | None = None) -> "CustomDensity":
        """Piecewise-linear density through (u, k(u)) points; zero outside."""
        pts = sorted((float(u), float(k)) for u, k in table)
        if len(pts) < 2:
            raise ConfigurationError("density_table needs at least two points")
        us = np.array([p[0] for p in pts])
        ks = np.array([p[1] for p in pts])
        if np.any(np.diff(us) <= 0):
            raise ConfigurationError("density_table u values must be distinct")
        if np.any(ks < 0):
            raise ConfigurationError("density values must be nonnegative")

        def density(u):
            return np.interp(u, us, ks, left=0.0, right=0.0)

        return cls(density, (float(us[0]), float(us[-1])), M, R,
                   breakpoints=us[1:-1], table=pts)

    def _validate(self):
        # Levy condition: integral of (1 ^ u^2) must be finite, and we record
        # whether the small-jump first moment converges (finite variation).
        try:
            near = levy_integral(self, lambda u: np.square(u),
                                 window=(-1.0, 1.0))
            far = levy_integral(self, lambda u: np.ones_like(np.asarray(u, dtype=float)),
                                window="far")
        except NumericError as exc:
            raise ConfigurationError(f"not a usable Levy density: {exc}") from exc
        if not (math.isfinite(near) and math.isfinite(far)):
            raise ConfigurationError("density violates the Levy integrability condition")
        try:
            levy_integral(self, lambda u: np.abs(u), window=(-1.0, 1.0))
            self._finite_variation = True
        except NumericError:
            self._finite_variation = False

    def abscissa(self) -> float:
        return self._M

    def radius(self) -> float:
        return self._R

    def atoms(self):
        return None

    def support(self) -> tuple[float, float]:
        return self._support

    def density(self):
        return self._density

    def breakpoints(self) -> tuple[float, ...]:
        return self._breakpoints

    def smooth_density(self) -> bool:
        return False

    def closed_exp_moment(self, t, r):
        return None

    def closed_poly_moment(self, q):
        return None

    @property
    def finite_variation(self) -> bool:
        return self._finite_variation

    @property
    def table(self):
        return self._table


LevyMeasure1D = (SymmetricExponential, GammaLevy, PoissonAtom, CompoundPoisson,
                 CustomDensity)


# ---------------------------------------------------------------------------
# Integral functionals
# ---------------------------------------------------------------------------

def _pieces(lo: float, hi: float, breakpoints: Sequence[float]) -> list[tuple[float, float]]:
    cuts = sorted({c for c in (-1.0, 0.0, 1.0, *breakpoints) if lo < c < hi})
    edges = [lo, *cuts, hi]
    return [(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def levy_integral(m, f, *, epsabs: float = INNER_ABS_TOL,
                  epsrel: float = INNER_REL_TOL, positive_only: bool = False,
                  window=None) -> float:
    """Integrate ``f(u)`` against the measure: atoms sum, densities quadrate.

    ``window`` restricts the integration region: a pair clips to that
    interval, the string "far" keeps only |u| > 1.  ``f`` must be finite on
    the (restricted) support; integrable endpoint behaviour is handled by
    the quadrature.
    """
    atoms = m.atoms()
    if atoms is not None:
        total = 0.0
        for u, mass in atoms:
            if positive_only and u <= 0:
                continue
            if window == "far" and abs(u) <= 1:
                continue
            if isinstance(window, tuple) and not (window[0] <= u <= window[1]):
                continue
            total += mass * float(f(u))
        return total

    k = m.density()
    lo, hi = m.support()
    if positive_only:
        lo = max(lo, 0.0)
    regions = [(lo, hi)]
    if isinstance(window, tuple):
        regions = [(max(lo, window[0]), min(hi, window[1]))]
    elif window == "far":
        regions = [(lo, min(hi, -1.0)), (max(lo, 1.0), hi)]

    def integrand(u):
        u = np.asarray(u, dtype=float)
        # Where the density underflows to 0 the true product is below
        # ~1e-300 times f; masking non-finite products there keeps the
        # far tail from poisoning the quadrature with inf * 0.
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            kv = k(u)
            v = f(u) * kv
            return np.where(np.isfinite(v), v, 0.0)

    total = 0.0
    for rlo, rhi in regions:
        if not rhi > rlo:
            continue
        for a, b in _pieces(rlo, rhi, m.breakpoints()):
            if math.isfinite(a) and math.isfinite(b) and m.smooth_density():
                total += gl_integral(integrand, a, b, epsabs=epsabs, epsrel=epsrel)
            else:
                total += _quad_scipy(integrand, a, b, epsabs=epsabs,
                                     epsrel=epsrel, points=m.breakpoints())
    return total


def _check_t(m, t: float):
    if t < 0:
        raise DomainError("t must be nonnegative")
    if t >= m.abscissa():
        raise DomainError(
            f"t={t} beyond exponential-moment abscissa M={m.abscissa()}")


def exp_moment_abscissa(m) -> float:
    """Supremum of t for which exp(t|u|) is integrable over |u| > 1."""
    return m.abscissa()


def support_radius(m) -> float:
    """Smallest radius outside of which the measure vanishes."""
    return m.radius()


def exp_moment_integral(m, t: float, r: int = 1, *, method: str = "auto",
                        epsabs: float = INNER_ABS_TOL,
                        epsrel: float = INNER_REL_TOL) -> float:
    """Integral of |u|^r (exp(t|u|) - 1) against the measure.

    The odd powers r = 1 and r = 3 are the ones every rate function needs;
    other positive integers arise when polynomial weights are expanded.
    Closed forms are used when the family has them, otherwise quadrature.
    """
    r = int(r)
    if r < 1:
        raise ConfigurationError("power r must be a positive integer")
    _check_t(m, t)
    if t == 0:
        return 0.0
    if method in ("auto", "closed"):
        closed = m.closed_exp_moment(t, r)
        if closed is not None:
            return float(closed)
        if method == "closed":
            raise ConfigurationError("no closed form for this family")
    return levy_integral(
        m, lambda u: np.abs(u) ** r * np.expm1(t * np.abs(u)),
        epsabs=epsabs, epsrel=epsrel)


def poly_moment(m, q: int, *, method: str = "auto",
                epsabs: float = INNER_ABS_TOL,
                epsrel: float = INNER_REL_TOL) -> float:
    """Integral of u^q against the measure, for positive even q."""
    q = int(q)
    if q < 2 or q % 2 != 0:
        raise ConfigurationError("q must be a positive even integer")
    if method in ("auto", "closed"):
        closed = m.closed_poly_moment(q)
        if closed is not None:
            return float(closed)
        if method == "closed":
            raise ConfigurationError("no closed form for this family")
    try:
        val = levy_integral(m, lambda u: np.asarray(u, dtype=float) ** q,
                            epsabs=epsabs, epsrel=epsrel)
    except NumericError as exc:
        raise DomainError(f"moment of order {q} appears divergent: {exc}") from exc
    if not math.isfinite(val):
        raise DomainError(f"moment of order {q} is divergent")
    return val


def exp_weight_integral(m, t: float, weight, *, positive_only: bool = False,
                        epsabs: float = INNER_ABS_TOL,
                        epsrel: float = INNER_REL_TOL) -> float:
    """Integral of weight(|u|) |u| (exp(t|u|) - 1) against the measure."""
    _check_t(m, t)
    if t == 0:
        return 0.0

    def f(u):
        au = np.abs(np.asarray(u, dtype=float))
        with np.errstate(over="ignore"):
            return weight(au) * au * np.expm1(t * au)

    return levy_integral(m, f, epsabs=epsabs, epsrel=epsrel,
                         positive_only=positive_only)


# ---------------------------------------------------------------------------
# Structural predicates
# ---------------------------------------------------------------------------

def measure_is_symmetric(m) -> bool:
    """True when the measure is provably symmetric about 0."""
    if isinstance(m, SymmetricExponential):
        return True
    if isinstance(m, CompoundPoisson):
        j = m.jumps
        if isinstance(j, UniformJumps):
            return math.isclose(j.low, -j.high, rel_tol=0, abs_tol=1e-15)
        pairs = sorted(zip(j.values, j.probs))
        rev = sorted(zip((-v for v in j.values), j.probs))
        return all(math.isclose(a[0], b[0], abs_tol=1e-15) and
                   math.isclose(a[1], b[1], abs_tol=1e-15)
                   for a, b in zip(pairs, rev))
    return False


def measure_is_nonnegative(m) -> bool:
    """True when the measure is supported on the positive half-line."""
    if isinstance(m, GammaLevy):
        return True
    if isinstance(m, PoissonAtom):
        return m.jump > 0
    if isinstance(m, CompoundPoisson):
        if isinstance(m.jumps, UniformJumps):
            return m.jumps.low >= 0
        return all(v > 0 for v in m.jumps.values)
    if isinstance(m, CustomDensity):
        return m.support()[0] >= 0
    return False


def has_finite_variation(m) -> bool:
    """Whether the small-jump first moment is finite (always, for built-ins)."""
    if isinstance(m, CustomDensity):
        return m.finite_variation
    return True


# ---------------------------------------------------------------------------
# Vector specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IDVectorSpec:
    """Dimension, per-coordinate Levy measures and drift of an ID vector.

    All built-in families have finite small-jump first moment, so the law
    of each coordinate is ``drift + (uncompensated jump sum)``; the drift
    field records that convention explicitly.
    """

    d: int
    coordinates: object
    drift: object = 0.0

    def __post_init__(self):
        if not (isinstance(self.d, int) and self.d >= 1):
            raise ConfigurationError("d must be a positive integer")
        coords = self.coordinates
        if isinstance(coords, (list, tuple)):
            coords = tuple(coords)
            object.__setattr__(self, "coordinates", coords)
            if len(coords) != self.d:
                raise ConfigurationError(
                    f"coordinate list length {len(coords)} != d={self.d}")
            for c in coords:
                if not isinstance(c, LevyMeasure1D):
                    raise ConfigurationError("coordinates must be Levy measures")
        elif not isinstance(coords, LevyMeasure1D):
            raise ConfigurationError("coordinates must be a Levy measure or a list")
        drift = self.drift
        if isinstance(drift, (list, tuple, np.ndarray)):
            drift = tuple(float(g) for g in drift)
            object.__setattr__(self, "drift", drift)
            if len(drift) != self.d:
                raise ConfigurationError("drift list length must equal d")
        else:
            object.__setattr__(self, "drift", float(drift))

    @property
    def is_iid(self) -> bool:
        if isinstance(self.coordinates, tuple):
            return False
        return not isinstance(self.drift, tuple)

    def measures(self) -> tuple:
        if isinstance(self.coordinates, tuple):
            return self.coordinates
        return (self.coordinates,) * self.d

    def drifts(self) -> np.ndarray:
        if isinstance(self.drift, tuple):
            return np.asarray(self.drift, dtype=float)
        return np.full(self.d, float(self.drift))

    def iid_measure(self):
        if isinstance(self.coordinates, tuple):
            raise ConfigurationError("this operation requires i.i.d. coordinates")
        return self.coordinates

    def iid_drift(self) -> float:
        if isinstance(self.drift, tuple):
            raise ConfigurationError("this operation requires i.i.d. coordinates")
        return float(self.drift)


def marginal_is_symmetric(m, drift: float = 0.0) -> bool:
    return measure_is_symmetric(m) and drift == 0.0


def marginal_is_nonnegative(m, drift: float = 0.0) -> bool:
    return measure_is_nonnegative(m) and drift >= 0.0


# ---------------------------------------------------------------------------
# JSON description (shared with the CLI)
# ---------------------------------------------------------------------------

def _require_keys(cfg: dict, required: set, optional: set = frozenset()):
    missing = required - cfg.keys()
    if missing:
        raise ConfigurationError(f"measure config missing field: {sorted(missing)[0]}")
    unknown = cfg.keys() - required - optional - {"family"}
    if unknown:
        raise ConfigurationError(f"measure config has unknown field: {sorted(unknown)[0]}")


def measure_from_config(cfg: dict):
    """Build a measure from its JSON object form."""
    if not isinstance(cfg, dict) or "family" not in cfg:
        raise ConfigurationError("measure config must be an object with a 'family' field")
    fam = cfg["family"]
    if fam == "symmetric_exponential":
        _require_keys(cfg, set(), {"scale"})
        return SymmetricExponential(scale=float(cfg.get("scale", 1.0)))
    if fam == "gamma_levy":
        _require_keys(cfg, {"rate", "shape"})
        return GammaLevy(rate=float(cfg["rate"]), shape=float(cfg["shape"]))
    if fam == "poisson_atom":
        _require_keys(cfg, {"intensity", "jump"})
        return PoissonAtom(intensity=float(cfg["intensity"]), jump=float(cfg["jump"]))
    if fam == "compound_poisson":
        _require_keys(cfg, {"rate", "jumps"})
        j = cfg["jumps"]
        if not isinstance(j, dict) or "kind" not in j:
            raise ConfigurationError("jumps must be an object with a 'kind' field")
        if j["kind"] == "uniform":
            jumps = UniformJumps(low=float(j["low"]), high=float(j["high"]))
        elif j["kind"] == "discrete":
            jumps = DiscreteJumps(values=tuple(j["values"]), probs=tuple(j["probs"]))
        else:
            raise ConfigurationError(f"unknown jump kind: {j['kind']}")
        return CompoundPoisson(rate=float(cfg["rate"]), jumps=jumps)
    if fam == "custom_density":
        _require_keys(cfg, {"M", "density_table"}, {"R"})
        M = cfg["M"]
        M = math.inf if M is None else float(M)
        R = cfg.get("R")
        R = None if R is None else float(R)
        return CustomDensity.from_table(cfg["density_table"], M=M, R=R)
    raise ConfigurationError(f"unknown measure family: {fam}")


def measure_config(m) -> dict:
    """Canonical JSON object form of a measure."""
    if isinstance(m, SymmetricExponential):
        return {"family": "symmetric_exponential", "scale": m.scale}
    if isinstance(m, GammaLevy):
        return {"family": "gamma_levy", "rate": m.rate, "shape": m.shape}
    if isinstance(m, PoissonAtom):
        return {"family": "poisson_atom", "intensity": m.intensity, "jump": m.jump}
    if isinstance(m, CompoundPoisson):
        if isinstance(m.jumps, UniformJumps):
            j = {"kind": "uniform", "low": m.jumps.low, "high": m.jumps.high}
        else:
            j = {"kind": "discrete", "values": list(m.jumps.values),
                 "probs": list(m.jumps.probs)}
        return {"family": "compound_poisson", "rate": m.rate, "jumps": j}
    if isinstance(m, CustomDensity):
        out = {"family": "custom_density",
               "M": None if math.isinf(m.abscissa()) else m.abscissa(),
               "R": None if math.isinf(m.radius()) else m.radius()}
        if m.table is not None:
            out["density_table"] = [[u, k] for u, k in m.table]
        return out
    raise ConfigurationError(f"not a known measure: {m!r}")
