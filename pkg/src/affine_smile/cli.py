"""Configuration ingestion, scenario execution and CSV/SVG emission.

The config file is JSON.  Schema (unknown keys are rejected everywhere):

    {
      "params": {
        "a": .., "b": .., "c": .., "alpha": .., "beta": ..,
        "sigma_s_sq": .., "sigma_lam_sq": .., "lambda0": ..,   # lambda0 optional
        "jump": {"type": "gaussian", "mean": .., "variance": ..}
                | {"type": "constant", "value": ..}
                | {"type": "mixture", "mixture": [[w, y], ...]}
      },
      "sweep":      {"field": "a", "values": [0.05, 0.5, 1.0]},      # optional
      "grids":      {"x": {"lo": .., "hi": .., "n": ..}, "theta": {"n": ..}},
      "maturities": [2, 4, 6, 8, 10],
      "mc":         {"n_paths": .., "dt": .., "horizon": .., "seed": ..,
                     "antithetic": false},
      "outputs":    "out",
      "formats":    ["csv", "svg"]
    }

Exit codes: 0 success, 2 configuration/validation failure, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import cumulant, ldp, pricing, smile
from .errors import AffineSmileError, ConfigError, InvalidModelError, NumericalError
from .model import (
    ConstantJumps,
    GaussianJumps,
    JumpLaw,
    MixtureJumps,
    ModelParams,
    validate_params,
)
from .pricing import McConfig

__all__ = ["ScenarioConfig", "OutputBundle", "parse_config", "run_figures", "main"]

_SWEEPABLE = ("a", "b", "c", "alpha", "beta", "sigma_s_sq", "sigma_lam_sq", "lambda0")
_DEFAULT_MATURITIES = (2.0, 4.0, 6.0, 8.0, 10.0)
_DEFAULT_MC = {"n_paths": 100_000, "dt": 1e-3, "horizon": 1.0, "seed": 20240811,
               "antithetic": False}


@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    n: int

    def values(self) -> list[float]:
        step = (self.hi - self.lo) / (self.n - 1)
        return [self.lo + i * step for i in range(self.n)]


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario: base parameters plus experiment design."""

    raw_params: dict
    sweep: Optional[tuple[str, tuple[float, ...]]]
    x_grid: Optional[GridSpec]
    theta_points: int
    maturities: tuple[float, ...]
    mc: McConfig
    outputs: Path
    formats: frozenset[str]

    def resolved(self) -> list[tuple[str, ModelParams]]:
        """Parameter sets after applying the sweep, labelled for output files."""
        if self.sweep is None:
            return [("base", _params_from_dict(self.raw_params))]
        field, values = self.sweep
        out = []
        for v in values:
            d = dict(self.raw_params)
            d[field] = v
            out.append((f"{field}={v:g}", _params_from_dict(d)))
        return out


@dataclass(frozen=True)
class OutputBundle:
    """Files written by a scenario run plus any per-artifact failures."""

    manifest: tuple[tuple[str, str, str], ...]          # (name, path, sha256)
    failures: tuple[tuple[str, str], ...] = ()          # (name, message)


def _jump_from_dict(d: dict, errors: list, path: str) -> Optional[JumpLaw]:
    if not isinstance(d, dict):
        errors.append((path, "jump must be an object"))
        return None
    kind = d.get("type")
    try:
        if kind == "gaussian":
            _reject_unknown(d, {"type", "mean", "variance"}, errors, path)
            return GaussianJumps(float(d["mean"]), float(d["variance"]))
        if kind == "constant":
            _reject_unknown(d, {"type", "value"}, errors, path)
            return ConstantJumps(float(d["value"]))
        if kind == "mixture":
            _reject_unknown(d, {"type", "mixture"}, errors, path)
            comps = tuple((float(w), float(y)) for w, y in d["mixture"])
            return MixtureJumps(comps)
    except KeyError as exc:
        errors.append((path, f"missing jump field {exc}"))
        return None
    except (TypeError, ValueError) as exc:
        errors.append((path, str(exc)))
        return None
    errors.append((path + ".type", f"unknown jump type {kind!r}"))
    return None


def _params_from_dict(d: dict) -> ModelParams:
    jump = _jump_from_dict(d["jump"], [], "params.jump")
    if jump is None:
        raise ConfigError([("params.jump", "invalid jump specification")])
    return ModelParams(
        a=float(d["a"]),
        b=float(d["b"]),
        c=float(d["c"]),
        alpha=float(d["alpha"]),
        beta=float(d["beta"]),
        sigma_s=math.sqrt(float(d["sigma_s_sq"])),
        sigma_lam=math.sqrt(float(d["sigma_lam_sq"])),
        jump=jump,
        lambda0=float(d["lambda0"]) if "lambda0" in d else None,
    )


def _reject_unknown(d: dict, allowed: set, errors: list, path: str) -> None:
    for key in d:
        if key not in allowed:
            errors.append((f"{path}.{key}", "unknown key"))


def parse_config(text: str) -> ScenarioConfig:
    """Parse and fully validate a JSON scenario; raises :class:`ConfigError`
    with one entry per offending field."""
    errors: list[tuple[str, str]] = []
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([("<document>", f"not valid JSON: {exc}")]) from exc
    if not isinstance(doc, dict):
        raise ConfigError([("<document>", "top level must be an object")])

    _reject_unknown(
        doc,
        {"params", "sweep", "grids", "maturities", "mc", "outputs", "formats"},
        errors,
        "<top>",
    )

    raw_params = doc.get("params")
    params_ok = False
    if not isinstance(raw_params, dict):
        errors.append(("params", "required object"))
        raw_params = {}
    else:
        required = {"a", "b", "c", "alpha", "beta", "sigma_s_sq", "sigma_lam_sq", "jump"}
        _reject_unknown(raw_params, required | {"lambda0"}, errors, "params")
        missing = sorted(required - raw_params.keys())
        for key in missing:
            errors.append((f"params.{key}", "required field"))
        for key in ("a", "b", "c", "alpha", "beta", "sigma_s_sq", "sigma_lam_sq", "lambda0"):
            if key in raw_params and not isinstance(raw_params[key], (int, float)):
                errors.append((f"params.{key}", "must be a number"))
        for key in ("sigma_s_sq", "sigma_lam_sq"):
            if isinstance(raw_params.get(key), (int, float)) and raw_params[key] <= 0:
                errors.append((f"params.{key}", "must be strictly positive"))
        if "jump" in raw_params:
            _jump_from_dict(raw_params["jump"], errors, "params.jump")
        params_ok = not any(p.startswith("params") for p, _ in errors)

    sweep = None
    if "sweep" in doc:
        s = doc["sweep"]
        if not isinstance(s, dict):
            errors.append(("sweep", "must be an object"))
        else:
            _reject_unknown(s, {"field", "values"}, errors, "sweep")
            field = s.get("field")
            values = s.get("values")
            if field not in _SWEEPABLE:
                errors.append(("sweep.field", f"must be one of {_SWEEPABLE}"))
            if (
                not isinstance(values, list)
                or not values
                or not all(isinstance(v, (int, float)) for v in values)
            ):
                errors.append(("sweep.values", "must be a non-empty list of numbers"))
            elif sorted(values) != values:
                errors.append(("sweep.values", "must be sorted ascending"))
            if field in _SWEEPABLE and isinstance(values, list) and values:
                sweep = (field, tuple(float(v) for v in values))

    x_grid = None
    theta_points = 101
    if "grids" in doc:
        g = doc["grids"]
        if not isinstance(g, dict):
            errors.append(("grids", "must be an object"))
        else:
            _reject_unknown(g, {"x", "theta"}, errors, "grids")
            if "x" in g and g["x"] is not None:
                gx = g["x"]
                _reject_unknown(gx, {"lo", "hi", "n"}, errors, "grids.x")
                try:
                    x_grid = GridSpec(float(gx["lo"]), float(gx["hi"]), int(gx["n"]))
                    if x_grid.n < 2 or x_grid.hi <= x_grid.lo:
                        errors.append(("grids.x", "need n >= 2 and hi > lo"))
                        x_grid = None
                except (KeyError, TypeError, ValueError):
                    errors.append(("grids.x", "need numeric lo, hi and integer n"))
            if "theta" in g and g["theta"] is not None:
                gt = g["theta"]
                _reject_unknown(gt, {"n"}, errors, "grids.theta")
                try:
                    theta_points = int(gt["n"])
                    if theta_points < 3:
                        errors.append(("grids.theta.n", "need at least 3 points"))
                except (KeyError, TypeError, ValueError):
                    errors.append(("grids.theta", "need integer n"))

    maturities = _DEFAULT_MATURITIES
    if "maturities" in doc:
        m = doc["maturities"]
        if (
            not isinstance(m, list)
            or not m
            or not all(isinstance(v, (int, float)) and v > 0 for v in m)
            or sorted(m) != m
        ):
            errors.append(("maturities", "must be a sorted list of positive numbers"))
        else:
            maturities = tuple(float(v) for v in m)

    mc_dict = dict(_DEFAULT_MC)
    if "mc" in doc:
        m = doc["mc"]
        if not isinstance(m, dict):
            errors.append(("mc", "must be an object"))
        else:
            _reject_unknown(m, set(_DEFAULT_MC), errors, "mc")
            mc_dict.update(m)
    mc = None
    try:
        mc = McConfig(
            n_paths=int(mc_dict["n_paths"]),
            dt=float(mc_dict["dt"]),
            horizon=float(mc_dict["horizon"]),
            seed=int(mc_dict["seed"]),
            antithetic=bool(mc_dict["antithetic"]),
        )
    except (TypeError, ValueError) as exc:
        errors.append(("mc", str(exc)))

    outputs = doc.get("outputs", "out")
    if not isinstance(outputs, str) or not outputs:
        errors.append(("outputs", "must be a non-empty path string"))
        outputs = "out"

    formats = doc.get("formats", ["csv", "svg"])
    if (
        not isinstance(formats, list)
        or not formats
        or not set(formats) <= {"csv", "svg"}
    ):
        errors.append(("formats", "must be a non-empty subset of ['csv', 'svg']"))
        formats = ["csv"]

    # Assumption checks on the base and every sweep-resolved parameter set
    if params_ok:
        candidates = [("params", dict(raw_params))]
        if sweep is not None:
            field, values = sweep
            for v in values:
                d = dict(raw_params)
                d[field] = v
                candidates.append((f"params[{field}={v:g}]", d))
        for label, d in candidates:
            try:
                report = validate_params(_params_from_dict(d))
            except (ConfigError, ValueError) as exc:
                errors.append((label, str(exc)))
                continue
            for code, msg in report.violations:
                errors.append((label, f"{code}: {msg}"))

    if errors:
        raise ConfigError(errors)
    return ScenarioConfig(
        raw_params=dict(raw_params),
        sweep=sweep,
        x_grid=x_grid,
        theta_points=theta_points,
        maturities=maturities,
        mc=mc,
        outputs=Path(outputs),
        formats=frozenset(formats),
    )


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _max_workers() -> int:
    try:
        return max(1, int(os.environ.get("AFFINE_SMILE_THREADS", "1")))
    except ValueError:
        return 1


def _map_points(fn: Callable, xs: Sequence[float]) -> list:
    workers = _max_workers()
    if workers == 1:
        return [fn(x) for x in xs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, xs))


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row))
            fh.write("\n")
    return _digest(path)


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _slug(label: str) -> str:
    return label.replace("=", "_").replace(" ", "")


def _common_x_grid(cfg: ScenarioConfig, sets: list[tuple[str, ModelParams]]) -> list[float]:
    """One grid shared by every sweep value so the overlays line up."""
    if cfg.x_grid is not None:
        return cfg.x_grid.values()
    bounds = [ldp.x_boundaries(p) for _, p in sets]
    lo = min(b[0] for b in bounds) - 0.5
    hi = max(b[1] for b in bounds) + 0.5
    return GridSpec(lo, hi, 201).values()


# ---------------------------------------------------------------------------
# scenario runners (each returns manifest entries)
# ---------------------------------------------------------------------------


def _emit_rate(cfg: ScenarioConfig) -> OutputBundle:
    sets = cfg.resolved()
    xs = _common_x_grid(cfg, sets)
    entries = []
    for label, p in sets:
        domain = cumulant.critical_domain(p)
        points = _map_points(lambda x: ldp.rate_I(p, x, domain=domain), xs)
        name = f"rate_I_{_slug(label)}"
        path = cfg.outputs / f"{name}.csv"
        digest = _write_csv(
            path,
            ("x", "I", "theta_star"),
            [(pt.x, pt.value, pt.theta_star) for pt in points],
        )
        entries.append((name, str(path), digest))

        name = f"rate_I_bar_{_slug(label)}"
        path = cfg.outputs / f"{name}.csv"
        digest = _write_csv(
            path, ("x", "I_bar"), [(pt.x, pt.value - pt.x) for pt in points]
        )
        entries.append((name, str(path), digest))
    return OutputBundle(tuple(entries))


def _emit_smile(cfg: ScenarioConfig) -> OutputBundle:
    sets = cfg.resolved()
    xs = _common_x_grid(cfg, sets)
    entries = []
    for label, p in sets:
        domain = cumulant.critical_domain(p)
        boundaries = ldp.x_boundaries(p)
        values = _map_points(
            lambda x: smile.sigma_inf_sq(p, x, domain=domain, boundaries=boundaries), xs
        )
        name = f"sigma_inf_sq_{_slug(label)}"
        path = cfg.outputs / f"{name}.csv"
        digest = _write_csv(path, ("x", "sigma_inf_sq"), list(zip(xs, values)))
        entries.append((name, str(path), digest))
    return OutputBundle(tuple(entries))


def _emit_wings(cfg: ScenarioConfig, maturities: Sequence[float]) -> OutputBundle:
    entries = []
    for label, p in cfg.resolved():
        rows = []
        for t in maturities:
            for side in ("right", "left"):
                w = smile.wing_slope(p, t, side)
                rows.append((w.maturity, w.side, w.critical_moment, w.lee_exponent, w.slope))
        name = f"wings_{_slug(label)}"
        path = cfg.outputs / f"{name}.csv"
        digest = _write_csv(
            path, ("T", "side", "critical_moment", "lee_exponent", "slope"), rows
        )
        entries.append((name, str(path), digest))
    return OutputBundle(tuple(entries))


def _emit_cgf(cfg: ScenarioConfig, grid_override: Optional[GridSpec]) -> OutputBundle:
    entries = []
    for label, p in cfg.resolved():
        domain = cumulant.critical_domain(p)
        if grid_override is not None:
            thetas = grid_override.values()
        else:
            lo = domain.theta_min if math.isfinite(domain.theta_min) else -5.0
            hi = domain.theta_max if math.isfinite(domain.theta_max) else 5.0
            span = hi - lo
            thetas = GridSpec(lo + 1e-3 * span, hi - 1e-3 * span, cfg.theta_points).values()
        rows = [
            (t, cumulant.limiting_cgf(p, t), cumulant.limiting_cgf_deriv(p, t))
            for t in thetas
        ]
        name = f"cgf_{_slug(label)}"
        path = cfg.outputs / f"{name}.csv"
        digest = _write_csv(path, ("theta", "Lambda", "Lambda_prime"), rows)
        entries.append((name, str(path), digest))
    return OutputBundle(tuple(entries))


def _emit_mc(
    cfg: ScenarioConfig, theta: Optional[float], strike_k: Optional[float]
) -> OutputBundle:
    entries = []
    for label, p in cfg.resolved():
        rows = []
        if theta is not None:
            est = pricing.mc_mgf(p, cfg.mc, theta)
            analytic = cumulant.finite_time_mgf(p, cfg.mc.horizon, theta)
            rows.append((f"mgf(theta={theta:g})", est.mean, est.std_error, analytic))
            print(
                f"{label}: mc={est.mean:.8g} +- {est.std_error:.3g}  "
                f"ode={analytic:.8g}"
            )
        if strike_k is not None:
            for kind in ("call", "put"):
                est = pricing.mc_option_price(p, cfg.mc, strike_k, kind)
                rows.append((f"{kind}(k={strike_k:g})", est.mean, est.std_error, ""))
                print(f"{label}: {kind}(k={strike_k:g}) = {est.mean:.8g} +- {est.std_error:.3g}")
        name = f"mc_{_slug(label)}"
        path = cfg.outputs / f"{name}.csv"
        digest = _write_csv(path, ("quantity", "mc_mean", "mc_stderr", "analytic"), rows)
        entries.append((name, str(path), digest))
    return OutputBundle(tuple(entries))


def run_figures(cfg: ScenarioConfig) -> OutputBundle:
    """Emit every report artifact for the scenario.

    Per sweep value: rate-function, share-measure rate and implied-variance
    CSVs on a common grid, plus wing tables for both sides; the SVG panels
    overlay the sweep values.  Individual artifact failures are recorded and
    the rest are still produced.
    """
    sets = cfg.resolved()
    xs = _common_x_grid(cfg, sets)
    entries: list[tuple[str, str, str]] = []
    failures: list[tuple[str, str]] = []

    rate_series: list[tuple[str, list[float], list[float]]] = []
    bar_series: list[tuple[str, list[float], list[float]]] = []
    smile_series: list[tuple[str, list[float], list[float]]] = []
    wing_series: dict[str, list[tuple[str, list[float], list[float]]]] = {
        "right": [],
        "left": [],
    }

    for label, p in sets:
        try:
            domain = cumulant.critical_domain(p)
            boundaries = ldp.x_boundaries(p)
            points = _map_points(lambda x: ldp.rate_I(p, x, domain=domain), xs)
            rate_vals = [pt.value for pt in points]
            bar_vals = [pt.value - pt.x for pt in points]
            smile_vals = [
                smile.sigma_inf_sq(p, x, domain=domain, boundaries=boundaries)
                for x in xs
            ]
        except AffineSmileError as exc:
            failures.append((f"curves[{label}]", str(exc)))
            continue
        rate_series.append((label, list(xs), rate_vals))
        bar_series.append((label, list(xs), bar_vals))
        smile_series.append((label, list(xs), smile_vals))

        if "csv" in cfg.formats:
            name = f"rate_I_{_slug(label)}"
            path = cfg.outputs / f"{name}.csv"
            digest = _write_csv(
                path,
                ("x", "I", "theta_star"),
                [(pt.x, pt.value, pt.theta_star) for pt in points],
            )
            entries.append((name, str(path), digest))

            name = f"rate_I_bar_{_slug(label)}"
            path = cfg.outputs / f"{name}.csv"
            digest = _write_csv(path, ("x", "I_bar"), list(zip(xs, bar_vals)))
            entries.append((name, str(path), digest))

            name = f"sigma_inf_sq_{_slug(label)}"
            path = cfg.outputs / f"{name}.csv"
            digest = _write_csv(path, ("x", "sigma_inf_sq"), list(zip(xs, smile_vals)))
            entries.append((name, str(path), digest))

        try:
            rows = []
            for t in cfg.maturities:
                for side in ("right", "left"):
                    w = smile.wing_slope(p, t, side)
                    rows.append(
                        (w.maturity, w.side, w.critical_moment, w.lee_exponent, w.slope)
                    )
            for side in ("right", "left"):
                ts = [r[0] for r in rows if r[1] == side]
                ratios = [r[4] / r[0] for r in rows if r[1] == side]
                wing_series[side].append((label, ts, ratios))
            if "csv" in cfg.formats:
                name = f"wings_{_slug(label)}"
                path = cfg.outputs / f"{name}.csv"
                digest = _write_csv(
                    path, ("T", "side", "critical_moment", "lee_exponent", "slope"), rows
                )
                entries.append((name, str(path), digest))
        except AffineSmileError as exc:
            failures.append((f"wings[{label}]", str(exc)))

    if "svg" in cfg.formats:
        from . import _figures

        cfg.outputs.mkdir(parents=True, exist_ok=True)
        figure_jobs = [
            (
                "fig_rate_I",
                lambda path: _figures.curve_overlay(
                    path, rate_series, "x", "rate I(x)", zoom=True
                ),
            ),
            (
                "fig_rate_I_bar",
                lambda path: _figures.curve_overlay(
                    path, bar_series, "x", "share-measure rate", zoom=True
                ),
            ),
            (
                "fig_sigma_inf_sq",
                lambda path: _figures.curve_overlay(
                    path, smile_series, "x", "asymptotic implied variance"
                ),
            ),
            (
                "fig_wings_right",
                lambda path: _figures.wing_ratio_plot(path, wing_series["right"], "right"),
            ),
            (
                "fig_wings_left",
                lambda path: _figures.wing_ratio_plot(path, wing_series["left"], "left"),
            ),
        ]
        for name, job in figure_jobs:
            path = cfg.outputs / f"{name}.svg"
            try:
                job(str(path))
                entries.append((name, str(path), _digest(path)))
            except Exception as exc:  # pragma: no cover - matplotlib failures
                failures.append((name, str(exc)))

    return OutputBundle(tuple(entries), tuple(failures))


# ---------------------------------------------------------------------------
# command line front end
# ---------------------------------------------------------------------------


def _print_bundle(bundle: OutputBundle) -> None:
    for name, path, digest in bundle.manifest:
        print(f"{name}  {path}  sha256:{digest[:16]}")
    for name, message in bundle.failures:
        print(f"FAILED {name}: {message}", file=sys.stderr)


def _parse_grid_flag(text: str) -> GridSpec:
    lo, hi, n = text.split(",")
    return GridSpec(float(lo), float(hi), int(n))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affine-smile",
        description="Rate functions and implied-volatility asymptotics for a "
        "self-exciting affine jump-diffusion model",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, _help in (
        ("validate", "check a scenario configuration"),
        ("cgf", "tabulate the limiting CGF and its derivative"),
        ("rate", "tabulate the rate functions"),
        ("smile", "tabulate the large-maturity implied variance"),
        ("wings", "tabulate fixed-maturity wing slopes"),
        ("mc", "Monte Carlo estimates next to ODE values"),
        ("figures", "emit every CSV and SVG artifact"),
    ):
        cmd = sub.add_parser(name, help=_help)
        cmd.add_argument("config", help="path to the JSON scenario file")
        if name == "cgf":
            cmd.add_argument(
                "--theta-grid",
                type=_parse_grid_flag,
                default=None,
                metavar="LO,HI,N",
                help="override the tilt grid",
            )
        if name == "wings":
            cmd.add_argument(
                "--maturities",
                default=None,
                metavar="T1,T2,...",
                help="override the maturity list",
            )
        if name == "mc":
            group = cmd.add_mutually_exclusive_group(required=True)
            group.add_argument("--theta", type=float, help="tilt for an MGF estimate")
            group.add_argument(
                "--strike", type=float, help="log-moneyness for option estimates"
            )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = parse_config(Path(args.config).read_text())
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(exc, file=sys.stderr)
        return 2

    try:
        if args.command == "validate":
            for label, p in cfg.resolved():
                print(f"{label}: ok")
            return 0
        if args.command == "cgf":
            bundle = _emit_cgf(cfg, args.theta_grid)
        elif args.command == "rate":
            bundle = _emit_rate(cfg)
        elif args.command == "smile":
            bundle = _emit_smile(cfg)
        elif args.command == "wings":
            maturities = cfg.maturities
            if args.maturities:
                maturities = tuple(float(t) for t in args.maturities.split(","))
            bundle = _emit_wings(cfg, maturities)
        elif args.command == "mc":
            bundle = _emit_mc(cfg, args.theta, args.strike)
        else:
            bundle = run_figures(cfg)
    except (InvalidModelError, ConfigError) as exc:
        print(exc, file=sys.stderr)
        return 2
    except (NumericalError, OverflowError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3

    _print_bundle(bundle)
    return 0 if not bundle.failures else 3


if __name__ == "__main__":
    sys.exit(main())
