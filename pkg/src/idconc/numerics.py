"""Generic machinery that turns a monotone rate function into a tail bound.

A rate function h is nondecreasing with h(0) = 0 on [0, t_max).  The tail
bound at deviation x is exp(-I(x)) with I(x) = integral of the inverse of
h from 0 to x, which by Legendre duality equals sup_t [t x - H(t)] with
H(t) = integral of h from 0 to t.  Both forms are computed on every call
and cross-asserted, so a broken h (or a broken quadrature) is detected
rather than silently reported.
"""

from __future__ import annotations

import bisect
import json
import math
import threading
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .errors import ConfigurationError, NumericError, RangeError

# Relative tolerance for the agreement of the two bound forms, in -log space.
AGREE_REL_TOL = 1e-6
# Relative tolerance for quadratures of rate functions and their inverses.
CUM_REL_TOL = 1e-10
_HUGE = 1e15


@dataclass(frozen=True)
class Provenance:
    """How a numeric input was obtained: analytically or by Monte Carlo."""

    kind: str
    seed: object = None
    n: int | None = None
    confidence: float | None = None

    def __post_init__(self):
        if self.kind not in ("analytic", "monte-carlo"):
            raise ConfigurationError("provenance kind must be analytic or monte-carlo")

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "monte-carlo":
            out.update({"seed": self.seed, "n": self.n, "confidence": self.confidence})
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Provenance":
        return cls(kind=d["kind"], seed=d.get("seed"), n=d.get("n"),
                   confidence=d.get("confidence"))


ANALYTIC = Provenance("analytic")


class RateFunction:
    """A nondecreasing function on [0, t_max) with value 0 at 0.

    Evaluations outside the domain raise; the running integral from 0 is
    cached (quadrature is the dominant cost when the underlying measure
    has no closed forms), and the cache is guarded so concurrent use gives
    the same values as serial use.
    """

    def __init__(self, fn, t_max: float, label: str, params: dict | None = None,
                 provenance=(), dimension_dependent: bool = False):
        if not t_max > 0:
            raise ConfigurationError("t_max must be positive")
        self._fn = fn
        self.t_max = float(t_max)
        self.label = label
        self.params = dict(params or {})
        self.provenance = tuple(provenance)
        self.dimension_dependent = dimension_dependent
        self._cum_t = [0.0]
        self._cum_v = [0.0]
        self._lock = threading.Lock()
        self._sup = None

    def __call__(self, t: float) -> float:
        if t < 0:
            raise ConfigurationError("rate functions are defined for t >= 0")
        if t >= self.t_max:
            raise ConfigurationError(
                f"t={t} at or beyond the rate function domain t_max={self.t_max}")
        if t == 0.0:
            return 0.0
        return float(self._fn(t))

    def cum(self, t: float) -> float:
        """Integral of the rate function from 0 to t, with cached prefixes."""
        if t == 0.0:
            return 0.0
        if not 0 < t < self.t_max:
            raise ConfigurationError(f"t={t} outside [0, t_max)")
        with self._lock:
            i = bisect.bisect_right(self._cum_t, t) - 1
            t0, v0 = self._cum_t[i], self._cum_v[i]
        if t0 == t:
            return v0
        inc, _ = integrate.quad(self, t0, t, epsabs=0.0, epsrel=CUM_REL_TOL,
                                limit=200)
        total = v0 + inc
        with self._lock:
            j = bisect.bisect_left(self._cum_t, t)
            if j >= len(self._cum_t) or self._cum_t[j] != t:
                self._cum_t.insert(j, t)
                self._cum_v.insert(j, total)
        return total

    def sup_value(self) -> float:
        """Estimate of the supremum of h on [0, t_max); inf when it diverges."""
        if self._sup is not None:
            return self._sup
        if math.isfinite(self.t_max):
            probe = self(self.t_max * (1.0 - 1e-12))
            sup = math.inf if probe > _HUGE else probe
        else:
            t, val = 1.0, 0.0
            for _ in range(300):
                val = self(t)
                if val > _HUGE or math.isinf(val):
                    val = math.inf
                    break
                t *= 2.0
            sup = val if math.isinf(val) else val
        self._sup = sup
        return sup


def linear_rate(c: float, label: str = "linear") -> RateFunction:
    """h(t) = c t; handy reference rate with closed-form transform."""
    return RateFunction(lambda t: c * t, math.inf, label, params={"c": c})


def _bracket_above(h: RateFunction, s: float) -> tuple[float, float]:
    """Find lo <= hi with h(lo) <= s <= h(hi), growing hi toward t_max."""
    lo = 0.0
    if math.isfinite(h.t_max):
        hi = 0.5 * h.t_max
        val = 0.0
        for _ in range(80):
            val = h(hi)
            if val >= s:
                return lo, hi
            lo = hi
            nxt = h.t_max - 0.5 * (h.t_max - hi)
            if not nxt > hi or nxt >= h.t_max:
                break
            hi = nxt
        raise RangeError(
            f"target {s} is at or beyond the rate function supremum "
            f"(validity supremum ~ {val})")
    hi = 1.0
    for _ in range(300):
        val = h(hi)
        if val >= s:
            return lo, hi
        lo = hi
        hi *= 2.0
    raise RangeError(
        f"target {s} is at or beyond the rate function supremum "
        f"(validity supremum ~ {val})")


def invert_monotone(h: RateFunction, s: float, *, value_tol: float = 1e-9,
                    hi: float | None = None) -> float:
    """Solve h(t) = s for a nondecreasing h by bisection.

    Returns t with the bracket narrowed to width 1e-12 relative to the
    domain scale and |h(t) - s| <= value_tol * max(1, s).
    """
    if s < 0:
        raise ConfigurationError("target must be nonnegative")
    if s == 0.0:
        return 0.0
    if hi is not None and h(hi) >= s:
        lo = 0.0
    else:
        lo, hi = _bracket_above(h, s)
    width_tol = 1e-12 * (h.t_max if math.isfinite(h.t_max) else max(1.0, hi))
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if h(mid) >= s:
            hi = mid
        else:
            lo = mid
        if hi - lo <= width_tol and abs(h(0.5 * (lo + hi)) - s) <= value_tol * max(1.0, s):
            break
    t = 0.5 * (lo + hi)
    resid = abs(h(t) - s)
    if resid > max(value_tol * max(1.0, s), 1e-6 * s):
        raise NumericError(
            f"inversion stalled: |h(t) - s| = {resid:.3e} at t = {t}")
    return t


def chernoff_bound(h: RateFunction, x: float, *,
                   agree_rtol: float = AGREE_REL_TOL) -> float:
    """Tail bound exp(-integral of h^{-1} from 0 to x).

    The exponent is computed twice, as the integral of the inverse and as
    the Legendre supremum sup_t [t x - H(t)]; the two must agree within
    ``agree_rtol`` relative in -log space or a NumericError is raised.
    """
    if x < 0:
        raise ConfigurationError("deviation x must be nonnegative")
    if x == 0.0:
        return 1.0
    t_star = invert_monotone(h, x)
    sup_form = t_star * x - h.cum(t_star)
    integral_form, _ = integrate.quad(
        lambda s: invert_monotone(h, s, hi=t_star), 0.0, x,
        epsabs=0.0, epsrel=1e-9, limit=200)
    tol = agree_rtol * max(abs(integral_form), abs(sup_form), 1e-300)
    if abs(integral_form - sup_form) > tol:
        raise NumericError(
            "integral and supremum forms of the bound disagree: "
            f"{integral_form:.12e} vs {sup_form:.12e} "
            f"(rate function {h.label} is suspect)")
    return float(math.exp(-integral_form))


def constrained_chernoff(g: RateFunction, T: float, x: float) -> float:
    """exp(-sup over t in [0, T] of [t x - 2 * integral of g from 0 to t]).

    The objective is concave with derivative x - 2 g(t), so the maximiser
    is T when x >= 2 g(T) and the root of the derivative otherwise.
    """
    if not (0 < T < g.t_max):
        raise ConfigurationError(f"T={T} outside (0, t_max={g.t_max})")
    if x < 0:
        raise ConfigurationError("deviation x must be nonnegative")
    if x == 0.0:
        return 1.0
    if x >= 2.0 * g(T):
        t_star = T
    else:
        lo, hi = 0.0, T
        for _ in range(200):
            if hi - lo <= 1e-14 * T:
                break
            mid = 0.5 * (lo + hi)
            if x - 2.0 * g(mid) > 0:
                lo = mid
            else:
                hi = mid
        t_star = 0.5 * (lo + hi)
    value = t_star * x - 2.0 * g.cum(t_star)
    return float(math.exp(-max(value, 0.0)))


def find_T(g: RateFunction, *, target: float = 0.5,
           residual_tol: float = 1e-9) -> float:
    """Largest T with T * g(T) <= target, or t_max when never reached.

    The product t * g(t) is nondecreasing, so bisection applies; interior
    solutions satisfy T*g(T) in [target - residual_tol, target].
    """
    def psi(t):
        return t * g(t)

    if math.isfinite(g.t_max):
        hi = g.t_max * (1.0 - 1e-12)
        if psi(hi) <= target:
            return g.t_max
        lo = 0.0
    else:
        lo, hi = 0.0, 1.0
        grown = False
        for _ in range(300):
            if psi(hi) > target:
                grown = True
                break
            lo = hi
            hi *= 2.0
        if not grown:
            return g.t_max
    for _ in range(500):
        val = psi(lo)
        if target - residual_tol <= val <= target:
            return lo
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if psi(mid) <= target:
            lo = mid
        else:
            hi = mid
    val = psi(lo)
    if not (target - residual_tol <= val <= target):
        raise NumericError(
            f"could not pin T: residual {target - val:.3e} exceeds {residual_tol}")
    return lo


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Centering:
    """Which expectation the deviation is measured from."""

    kind: str
    value: float
    provenance: Provenance = ANALYTIC

    def to_dict(self) -> dict:
        return {"kind": self.kind, "value": self.value,
                "provenance": self.provenance.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "Centering":
        return cls(kind=d["kind"], value=float(d["value"]),
                   provenance=Provenance.from_dict(d["provenance"]))


@dataclass(frozen=True)
class BoundCertificate:
    """A tail bound evaluated on an x-grid, with input provenance.

    ``bound[i]`` upper-bounds the probability that the norm deviates by at
    least ``x_grid[i]`` past (direction "upper") or below (direction
    "lower") the stated centering.
    """

    family: str
    rate_label: str
    rate_params: dict
    p: float
    x_grid: tuple
    bound: tuple
    validity_sup: float
    centering: Centering
    measure: dict
    direction: str = "upper"
    inputs_provenance: tuple = ()
    notes: tuple = ()

    def __post_init__(self):
        xs = tuple(float(x) for x in self.x_grid)
        bs = tuple(float(b) for b in self.bound)
        object.__setattr__(self, "x_grid", xs)
        object.__setattr__(self, "bound", bs)
        if len(xs) != len(bs):
            raise ConfigurationError("x_grid and bound must have equal length")
        if self.direction not in ("upper", "lower"):
            raise ConfigurationError("direction must be 'upper' or 'lower'")
        if any(x < 0 for x in xs):
            raise ConfigurationError("x_grid values must be nonnegative")
        if any(not (0.0 <= b <= 1.0) for b in bs):
            raise NumericError("bound values must lie in [0, 1]")
        if any(x2 <= x1 for x1, x2 in zip(xs, xs[1:])):
            raise ConfigurationError("x_grid must be strictly increasing")
        for b1, b2 in zip(bs, bs[1:]):
            if b2 > b1 * (1.0 + 1e-9):
                raise NumericError("bound values must be nonincreasing in x")
        for x in xs:
            if x >= self.validity_sup:
                raise RangeError(
                    f"x={x} at or beyond validity supremum {self.validity_sup}")

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "rate_label": self.rate_label,
            "rate_params": self.rate_params,
            "p": self.p,
            "direction": self.direction,
            "x_grid": list(self.x_grid),
            "bound": list(self.bound),
            "validity_sup": None if math.isinf(self.validity_sup) else self.validity_sup,
            "centering": self.centering.to_dict(),
            "measure": self.measure,
            "inputs_provenance": [[name, prov.to_dict()]
                                  for name, prov in self.inputs_provenance],
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "BoundCertificate":
        vs = d.get("validity_sup")
        return cls(
            family=d["family"], rate_label=d["rate_label"],
            rate_params=d["rate_params"], p=float(d["p"]),
            x_grid=tuple(d["x_grid"]), bound=tuple(d["bound"]),
            validity_sup=math.inf if vs is None else float(vs),
            centering=Centering.from_dict(d["centering"]),
            measure=d["measure"], direction=d.get("direction", "upper"),
            inputs_provenance=tuple(
                (name, Provenance.from_dict(p))
                for name, p in d.get("inputs_provenance", [])),
            notes=tuple(d.get("notes", ())),
        )

    @classmethod
    def from_json(cls, text: str) -> "BoundCertificate":
        return cls.from_dict(json.loads(text))
