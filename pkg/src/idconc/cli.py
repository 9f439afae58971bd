"""Command-line front end: certificates, verification runs, sweeps, reports.

Outputs are byte-reproducible for a fixed configuration: floats are
rendered with 17 significant digits, rows are emitted in a fixed order,
JSON keys are sorted, and every file embeds the resolved configuration and
the library version.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigurationError, IdconcError
from .measures import (IDVectorSpec, measure_config, measure_from_config,
                       support_radius)
from .numerics import BoundCertificate
from .rates import (MomentSet, bound_cor2_certificate, bound_cor5, bound_thm1,
                    bound_thm2, bound_thm4, bound_thm5)
from .sampling import (DEFAULT_CONFIDENCE, TailEstimate, _as_seedseq, _child,
                       _K_SUB, collect_moments, empirical_tail)
from .verification import Report, verify_bound

MEASURE_ALIASES = {
    "laplace": {"family": "symmetric_exponential", "scale": 1.0},
    "symmetric_exponential": {"family": "symmetric_exponential", "scale": 1.0},
    "gamma": {"family": "gamma_levy", "rate": 1.0, "shape": 1.0},
    "poisson_atom": {"family": "poisson_atom", "intensity": 1.0, "jump": 1.0},
    "compound_uniform": {"family": "compound_poisson", "rate": 1.0,
                         "jumps": {"kind": "uniform", "low": 0.0, "high": 1.0}},
}

_FAMILY_NEEDS = {
    "thm1": ("l", "E_norm_p"),
    "thm2": ("m_p", "m_2p", "E_norm_p"),
    "thm4": ("E_norm_p",),
    "thm5_pos": ("m_p", "m_2p", "E_norm_p"),
    "thm5_gen": ("modified", "E_norm_p"),
    "cor2": ("E_norm_p",),
    "cor5": ("E_norm_p",),
}

FAMILIES = tuple(_FAMILY_NEEDS)


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return format(float(v), ".17g")


def _parse_measure(text: str) -> dict:
    if text.strip().startswith("{"):
        try:
            cfg = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"measure: invalid JSON ({exc})") from exc
        return cfg
    if text in MEASURE_ALIASES:
        return dict(MEASURE_ALIASES[text])
    path = Path(text)
    if path.exists():
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"measure: invalid JSON file ({exc})") from exc
    raise ConfigurationError(
        f"measure: '{text}' is not an alias, inline JSON, or existing file")


def _parse_grid(text: str) -> dict:
    parts = text.split(":")
    if len(parts) != 4:
        raise ConfigurationError("x_grid: expected min:max:count:linear|log")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigurationError(f"x_grid: {exc}") from exc
    spacing = parts[3]
    if spacing not in ("linear", "log"):
        raise ConfigurationError("x_grid: spacing must be 'linear' or 'log'")
    if count < 2:
        raise ConfigurationError("x_grid: count must be at least 2")
    if not lo < hi:
        raise ConfigurationError("x_grid: need min < max")
    if spacing == "log" and lo <= 0:
        raise ConfigurationError("x_grid: log spacing needs min > 0")
    return {"min": lo, "max": hi, "count": count, "spacing": spacing}


def _grid_values(g: dict) -> np.ndarray:
    if g["spacing"] == "log":
        return np.geomspace(g["min"], g["max"], g["count"])
    return np.linspace(g["min"], g["max"], g["count"])


def _int_list(text: str, name: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s != ""]
    except ValueError as exc:
        raise ConfigurationError(f"{name}: {exc}") from exc


def _float_list(text: str, name: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s != ""]
    except ValueError as exc:
        raise ConfigurationError(f"{name}: {exc}") from exc


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    measure: dict | None = None
    d: int = 1
    p: float = 2.0
    eps: float = 1.0
    x_grid: dict | None = None
    n: int = 100000
    seed: int = 0
    confidence: float = DEFAULT_CONFIDENCE
    output: str | None = None
    fmt: str = "csv"
    d_list: tuple = ()
    p_list: tuple = ()
    certificate: str | None = None
    tail: str | None = None

    def to_dict(self) -> dict:
        # The output path is where the file lives, not part of what it
        # computes; leaving it out keeps outputs byte-comparable across
        # destinations.
        out = {k: v for k, v in self.__dict__.items()
               if v is not None and k != "output"}
        for key in ("d_list", "p_list"):
            if not out.get(key):
                out.pop(key, None)
        return out


def _resolved_header(config: RunConfig) -> list[str]:
    blob = json.dumps({"version": __version__, "config": config.to_dict()},
                      sort_keys=True, separators=(",", ":"))
    return [f"# idconc {__version__}", f"# {blob}"]


def _check_applicability(family: str, measure, d: int, p: float, n: int,
                         command: str):
    if family not in FAMILIES:
        raise ConfigurationError(f"family: unknown family '{family}'")
    if family == "cor2" and math.isinf(support_radius(measure)):
        raise ConfigurationError(
            "family: cor2 requires a measure with finite support radius R")
    if family in ("thm2", "thm5_pos", "cor5") and p < 2:
        raise ConfigurationError(f"p: family {family} requires p >= 2")
    if family in ("thm1", "thm4", "cor2") and p != 2.0:
        raise ConfigurationError(f"p: family {family} is an l2 bound; use p=2")
    if command == "verify" and n < 100:
        raise ConfigurationError("n: verify requires n >= 100")


def _build_certificate(config: RunConfig) -> BoundCertificate:
    measure = measure_from_config(config.measure)
    spec = IDVectorSpec(config.d, measure)
    xs = _grid_values(config.x_grid)
    ss = _as_seedseq(config.seed)
    moments = collect_moments(
        spec, config.p, n=config.n, seed=_child(ss, _K_SUB, 0),
        confidence=config.confidence, need=_FAMILY_NEEDS[config.family])
    family = config.family
    if family == "thm1":
        return bound_thm1(spec, moments, xs)
    if family == "thm2":
        return bound_thm2(spec, config.p, moments, xs)
    if family == "thm4":
        return bound_thm4(spec, config.eps, moments, xs)
    if family in ("thm5_pos", "thm5_gen"):
        cert = bound_thm5(spec, config.p, moments, xs)
        if cert.family != family:
            raise ConfigurationError(
                f"family: measure routes to {cert.family}, not {family}")
        return cert
    if family == "cor2":
        return bound_cor2_certificate(spec, config.eps, moments, xs)
    if family == "cor5":
        return bound_cor5(spec, config.p, config.eps, moments, xs)
    raise ConfigurationError(f"family: unknown family '{family}'")


def _csv_lines(config: RunConfig, cert: BoundCertificate,
               tail: TailEstimate | None, report: Report | None) -> list[str]:
    lines = _resolved_header(config)
    lines.append("x,bound,p_hat,ci_low,ci_high,pass")
    for i, (x, b) in enumerate(zip(cert.x_grid, cert.bound)):
        if tail is None:
            lines.append(f"{_fmt(x)},{_fmt(b)},,,,")
        else:
            ok = report.points[i]["pass"] if report is not None else None
            lines.append(
                f"{_fmt(x)},{_fmt(b)},{_fmt(tail.p_hat[i])},"
                f"{_fmt(tail.ci_low[i])},{_fmt(tail.ci_high[i])},{_fmt(ok)}")
    return lines


def _json_blob(config: RunConfig, payload: dict) -> str:
    doc = {"version": __version__, "config": config.to_dict(), **payload}
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _sidecar(base: str, ext: str) -> Path:
    return Path(base + ext)


def _emit(config: RunConfig, cert: BoundCertificate,
          tail: TailEstimate | None = None, report: Report | None = None,
          out=sys.stdout) -> None:
    payload: dict = {"certificate": cert.to_dict()}
    if tail is not None:
        payload["tail"] = tail.to_dict()
    if report is not None:
        payload["report"] = report.to_dict()
    if config.fmt == "json":
        blob = _json_blob(config, payload)
        if config.output is None:
            out.write(blob)
        else:
            _write(_sidecar(config.output, ".json"), blob)
        return
    csv_text = "\n".join(_csv_lines(config, cert, tail, report)) + "\n"
    if config.output is None:
        out.write(csv_text)
        if report is not None:
            out.write(report.to_text() + "\n")
        return
    base = config.output
    _write(_sidecar(base, ".csv"), csv_text)
    _write(_sidecar(base, ".cert.json"),
           _json_blob(config, {"certificate": cert.to_dict()}))
    if tail is not None:
        _write(_sidecar(base, ".tail.json"),
               _json_blob(config, {"tail": tail.to_dict()}))
    if report is not None:
        _write(_sidecar(base, ".report.json"),
               _json_blob(config, {"report": report.to_dict()}))


def cmd_bound(config: RunConfig, out=sys.stdout) -> int:
    _check_applicability(config.family, measure_from_config(config.measure),
                         config.d, config.p, config.n, "bound")
    cert = _build_certificate(config)
    _emit(config, cert, out=out)
    return 0


def cmd_verify(config: RunConfig, out=sys.stdout) -> int:
    measure = measure_from_config(config.measure)
    _check_applicability(config.family, measure, config.d, config.p,
                         config.n, "verify")
    cert = _build_certificate(config)
    spec = IDVectorSpec(config.d, measure)
    ss = _as_seedseq(config.seed)
    tail = empirical_tail(spec, config.p, cert.x_grid, config.n,
                          _child(ss, _K_SUB, 1), cert.centering,
                          confidence=config.confidence,
                          direction=cert.direction)
    report = verify_bound(cert, tail, overall_confidence=config.confidence)
    _emit(config, cert, tail, report, out=out)
    if config.output is not None:
        out.write(report.to_text() + "\n")
    return report.exit_code


def cmd_sweep(config: RunConfig, out=sys.stdout) -> int:
    measure = measure_from_config(config.measure)
    ds = config.d_list or (config.d,)
    ps = config.p_list or (config.p,)
    lines = _resolved_header(config)
    lines.append("family,d,p,eps,x,bound")
    for d in ds:
        for p in ps:
            sub = RunConfig(command="bound", family=config.family,
                            measure=config.measure, d=int(d), p=float(p),
                            eps=config.eps, x_grid=config.x_grid, n=config.n,
                            seed=config.seed, confidence=config.confidence)
            _check_applicability(config.family, measure, int(d), float(p),
                                 config.n, "sweep")
            cert = _build_certificate(sub)
            for x, b in zip(cert.x_grid, cert.bound):
                lines.append(f"{config.family},{d},{_fmt(p)},{_fmt(config.eps)},"
                             f"{_fmt(x)},{_fmt(b)}")
    text = "\n".join(lines) + "\n"
    if config.output is None:
        out.write(text)
    else:
        _write(_sidecar(config.output, ".csv"), text)
    return 0


def cmd_report(config: RunConfig, out=sys.stdout) -> int:
    try:
        cert_doc = json.loads(Path(config.certificate).read_text())
        tail_doc = json.loads(Path(config.tail).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"report inputs: {exc}") from exc
    cert = BoundCertificate.from_dict(cert_doc["certificate"])
    tail = TailEstimate.from_dict(tail_doc["tail"])
    report = verify_bound(cert, tail, overall_confidence=config.confidence)
    _emit(config, cert, tail, report, out=out)
    if config.output is not None:
        out.write(report.to_text() + "\n")
    return report.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="idconc",
        description=("Concentration bounds for lp-norms of infinitely "
                     "divisible vectors, with Monte Carlo validation"))
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, families=True):
        if families:
            sp.add_argument("--family", required=True,
                            help=f"bound family, one of {', '.join(FAMILIES)}")
            sp.add_argument("--measure", required=True,
                            help="alias, inline JSON, or path to a JSON file")
            sp.add_argument("--d", type=int, default=1, help="dimension")
            sp.add_argument("--p", type=float, default=2.0, help="norm order")
            sp.add_argument("--eps", type=float, default=1.0,
                            help="relative centering inflation")
            sp.add_argument("--x", default="0.1:10:20:log", dest="x_grid",
                            help="deviation grid min:max:count:linear|log")
            sp.add_argument("--n", type=int, default=100000,
                            help="Monte Carlo sample count")
            sp.add_argument("--seed", type=int,
                            default=int(os.environ.get("IDCONC_SEED", "0")),
                            help="master seed (env IDCONC_SEED)")
        sp.add_argument("--confidence", type=float, default=DEFAULT_CONFIDENCE)
        sp.add_argument("--output", default=None,
                        help="output base path; stdout when omitted")
        sp.add_argument("--format", dest="fmt", choices=("csv", "json"),
                        default="csv")

    sp = sub.add_parser("bound", help="compute a bound certificate")
    common(sp)
    sp = sub.add_parser("verify", help="certificate + empirical tail + audit")
    common(sp)
    sp = sub.add_parser("sweep", help="tabulate bounds over parameter lists")
    common(sp)
    sp.add_argument("--d-list", default=None, help="comma list of dimensions")
    sp.add_argument("--p-list", default=None, help="comma list of norm orders")
    sp = sub.add_parser("report", help="re-audit a stored certificate/tail pair")
    common(sp, families=False)
    sp.add_argument("--certificate", required=True)
    sp.add_argument("--tail", required=True)
    return parser


def main(argv=None, out=sys.stdout, err=sys.stderr) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if ns.command == "report":
            config = RunConfig(command="report", certificate=ns.certificate,
                               tail=ns.tail, confidence=ns.confidence,
                               output=ns.output, fmt=ns.fmt)
            return cmd_report(config, out=out)
        config = RunConfig(
            command=ns.command, family=ns.family,
            measure=_parse_measure(ns.measure), d=ns.d, p=ns.p, eps=ns.eps,
            x_grid=_parse_grid(ns.x_grid), n=ns.n, seed=ns.seed,
            confidence=ns.confidence, output=ns.output, fmt=ns.fmt)
        if ns.command == "bound":
            return cmd_bound(config, out=out)
        if ns.command == "verify":
            return cmd_verify(config, out=out)
        if ns.command == "sweep":
            config.d_list = tuple(_int_list(ns.d_list, "d-list")) \
                if ns.d_list else ()
            config.p_list = tuple(_float_list(ns.p_list, "p-list")) \
                if ns.p_list else ()
            return cmd_sweep(config, out=out)
        raise ConfigurationError(f"unknown command {ns.command}")
    except IdconcError as exc:
        err.write(f"error: {exc}\n")
        return 2


def entry() -> None:
    raise SystemExit(main())
