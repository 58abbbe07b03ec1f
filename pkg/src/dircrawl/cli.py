"""Command-line front end.

Subcommands mirror the library layout: ``simulate`` integrates a gait and
emits the trajectory, ``analytic`` evaluates the closed forms, ``verify``
compares the two and sets the exit code, ``sweep`` runs a parameter grid,
and ``figure`` tabulates the standard displacement curve families.

Configuration is a single JSON document with a versioned ``schema`` field;
unknown keys are rejected and every validation error names the offending
field.  Numbers are emitted with ``output.precision`` significant digits
(default 17, full round-trip precision) so outputs are byte-stable and
diffable.

Exit codes: 0 success, 1 runtime/solver failure (or failed verification),
2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, replace
from typing import Any, Sequence

from . import engine
from .body import (
    Breather,
    CompositeStride,
    ConstantLength,
    GaitProgram,
    SquareWave,
    TwoSegmentPath,
)
from .errors import ConfigError, UnsupportedPairError
from .friction import FrictionLaw

SCHEMA_VERSION = 1

__all__ = ["RunConfig", "main"]


def _fmt(x: float, precision: int = 17) -> str:
    return format(float(x), f".{precision}g")


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

_GAIT_FIELDS: dict[str, dict[str, str]] = {
    # config key -> dataclass field
    "breather": {"L": "ref_length", "delta": "delta", "T": "period"},
    "constant_length": {
        "L": "ref_length",
        "x_star": "split",
        "l1_rest": "seg1_rest",
        "delta": "delta",
        "T": "period",
    },
    "two_segment": {
        "L": "ref_length",
        "x_star": "split",
        "times": "times",
        "l1": "l1",
        "l2": "l2",
    },
    "composite_stride": {"lambda": "lam", "delta": "delta", "h": "h", "T": "period"},
    "square_wave": {"L": "ref_length", "delta": "delta", "epsilon": "epsilon", "c": "speed"},
}

_GAIT_CLASSES = {
    "breather": Breather,
    "constant_length": ConstantLength,
    "two_segment": TwoSegmentPath,
    "composite_stride": CompositeStride,
    "square_wave": SquareWave,
}

_LAW_KEYS = ("tau_minus", "tau_plus", "mu_minus", "mu_plus")


def _require_number(block: str, key: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{block}.{key}: expected a number, got {value!r}")
    return float(value)


def _reject_unknown(block: str, data: dict, allowed: Sequence[str]) -> None:
    for key in data:
        if key not in allowed:
            raise ConfigError(f"{block}.{key}: unknown key")


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration: substrate law, gait, numerics, output."""

    law: FrictionLaw
    gait: GaitProgram
    gait_kind: str
    dt: float | None
    n_periods: int
    tolerance: float
    out_format: str
    out_path: str | None
    precision: int
    requested_regime: str | None
    sweep_axes: tuple[tuple[str, tuple[float, ...]], ...] | None

    @classmethod
    def from_dict(cls, data: Any) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("top level: expected a JSON object")
        _reject_unknown("config", data, ("schema", "substrate", "gait", "numeric", "output", "sweep"))
        schema = data.get("schema")
        if schema != SCHEMA_VERSION:
            raise ConfigError(f"schema: expected {SCHEMA_VERSION}, got {schema!r}")

        sub = data.get("substrate")
        if not isinstance(sub, dict):
            raise ConfigError("substrate: required object with tau/mu parameters")
        _reject_unknown("substrate", sub, _LAW_KEYS)
        try:
            law = FrictionLaw(
                **{k: _require_number("substrate", k, sub.get(k, 0.0)) for k in _LAW_KEYS}
            )
        except ValueError as exc:
            raise ConfigError(f"substrate: {exc}") from exc

        gait_block = data.get("gait")
        if not isinstance(gait_block, dict):
            raise ConfigError("gait: required object with a 'kind' tag")
        kind = gait_block.get("kind")
        if kind not in _GAIT_FIELDS:
            raise ConfigError(
                f"gait.kind: expected one of {sorted(_GAIT_FIELDS)}, got {kind!r}"
            )
        field_map = _GAIT_FIELDS[kind]
        allowed = ["kind", *field_map.keys()]
        if kind == "square_wave":
            allowed.append("regime")
        _reject_unknown("gait", gait_block, allowed)
        kwargs: dict[str, Any] = {}
        for key, field_name in field_map.items():
            if key not in gait_block:
                raise ConfigError(f"gait.{key}: required for kind {kind!r}")
            value = gait_block[key]
            if key in ("times", "l1", "l2"):
                if not isinstance(value, list) or not value:
                    raise ConfigError(f"gait.{key}: expected a non-empty array")
                kwargs[field_name] = tuple(
                    _require_number("gait", key, v) for v in value
                )
            else:
                kwargs[field_name] = _require_number("gait", key, value)
        requested_regime = None
        if kind == "square_wave" and "regime" in gait_block:
            requested_regime = gait_block["regime"]
            if requested_regime not in ("stick_slip", "sliding"):
                raise ConfigError(
                    f"gait.regime: expected 'stick_slip' or 'sliding', got {requested_regime!r}"
                )
        try:
            gait = _GAIT_CLASSES[kind](**kwargs)
        except ValueError as exc:
            raise ConfigError(f"gait: {exc}") from exc

        numeric = data.get("numeric", {})
        if not isinstance(numeric, dict):
            raise ConfigError("numeric: expected an object")
        _reject_unknown("numeric", numeric, ("dt", "n_periods", "tolerance"))
        dt = numeric.get("dt")
        if dt is not None:
            dt = _require_number("numeric", "dt", dt)
            if dt <= 0.0:
                raise ConfigError("numeric.dt: must be positive")
        n_periods = numeric.get("n_periods", 1)
        if isinstance(n_periods, bool) or not isinstance(n_periods, int) or n_periods < 1:
            raise ConfigError(f"numeric.n_periods: expected a positive integer, got {n_periods!r}")
        tolerance = _require_number("numeric", "tolerance", numeric.get("tolerance", 1e-6))
        if tolerance <= 0.0:
            raise ConfigError("numeric.tolerance: must be positive")

        output = data.get("output", {})
        if not isinstance(output, dict):
            raise ConfigError("output: expected an object")
        _reject_unknown("output", output, ("format", "path", "precision"))
        out_format = output.get("format", "csv")
        if out_format not in ("csv", "json"):
            raise ConfigError(f"output.format: expected 'csv' or 'json', got {out_format!r}")
        out_path = output.get("path")
        if out_path is not None and not isinstance(out_path, str):
            raise ConfigError("output.path: expected a string")
        precision = output.get("precision", 17)
        if isinstance(precision, bool) or not isinstance(precision, int) or not 1 <= precision <= 17:
            raise ConfigError(f"output.precision: expected an integer in [1, 17], got {precision!r}")

        sweep_axes = None
        if "sweep" in data:
            sweep_block = data["sweep"]
            if not isinstance(sweep_block, dict):
                raise ConfigError("sweep: expected an object")
            _reject_unknown("sweep", sweep_block, ("axes",))
            axes_raw = sweep_block.get("axes")
            if not isinstance(axes_raw, list) or not axes_raw:
                raise ConfigError("sweep.axes: expected a non-empty array")
            axes = []
            for i, axis in enumerate(axes_raw):
                if not isinstance(axis, dict):
                    raise ConfigError(f"sweep.axes[{i}]: expected an object")
                _reject_unknown(f"sweep.axes[{i}]", axis, ("path", "values"))
                path = axis.get("path")
                values = axis.get("values")
                if not isinstance(path, str) or "." not in path:
                    raise ConfigError(f"sweep.axes[{i}].path: expected 'law.<f>' or 'gait.<f>'")
                if not isinstance(values, list) or not values:
                    raise ConfigError(f"sweep.axes[{i}].values: expected a non-empty array")
                axes.append(
                    (path, tuple(_require_number(f"sweep.axes[{i}]", "values", v) for v in values))
                )
            sweep_axes = tuple(axes)

        return cls(
            law=law,
            gait=gait,
            gait_kind=kind,
            dt=dt,
            n_periods=n_periods,
            tolerance=tolerance,
            out_format=out_format,
            out_path=out_path,
            precision=precision,
            requested_regime=requested_regime,
            sweep_axes=sweep_axes,
        )

    def to_dict(self) -> dict[str, Any]:
        """Canonical echo of the configuration; parsing it reproduces an
        identical RunConfig."""
        gait_block: dict[str, Any] = {"kind": self.gait_kind}
        for key, field_name in _GAIT_FIELDS[self.gait_kind].items():
            value = getattr(self.gait, field_name)
            gait_block[key] = list(value) if isinstance(value, tuple) else value
        if self.requested_regime is not None:
            gait_block["regime"] = self.requested_regime
        out: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "substrate": {k: getattr(self.law, k) for k in _LAW_KEYS},
            "gait": gait_block,
            "numeric": {
                "dt": self.dt,
                "n_periods": self.n_periods,
                "tolerance": self.tolerance,
            },
            "output": {
                "format": self.out_format,
                "path": self.out_path,
                "precision": self.precision,
            },
        }
        if self.sweep_axes is not None:
            out["sweep"] = {
                "axes": [{"path": p, "values": list(v)} for p, v in self.sweep_axes]
            }
        return out


def _load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    return RunConfig.from_dict(data)


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _write_csv(
    path: str | None,
    header: Sequence[str],
    rows: Sequence[Sequence[Any]],
    precision: int = 17,
) -> None:
    fh, close = _open_out(path)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [_fmt(v, precision) if isinstance(v, float) else v for v in row]
            )
    finally:
        if close:
            fh.close()


def _write_json(path: str | None, obj: Any) -> None:
    fh, close = _open_out(path)
    try:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
    finally:
        if close:
            fh.close()


def _float_or_none(x: float | None) -> float | None:
    return None if x is None else float(x)


def _admissibility_dict(adm) -> dict[str, Any] | None:
    if adm is None:
        return None
    return {
        "regime": adm.regime,
        "delta_max": adm.delta_max,
        "violated_condition": adm.violated_condition,
        "stickslip_delta_max": adm.stickslip_delta_max,
        "sliding_delta_max": adm.sliding_delta_max,
    }


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_simulate(cfg: RunConfig, out: str | None) -> int:
    traj = engine.simulate(cfg.law, cfg.gait, n_periods=cfg.n_periods, dt=cfg.dt)
    if cfg.out_format == "csv":
        rows = []
        n_steps = len(traj.regimes)
        for i, t in enumerate(traj.times):
            regime = traj.regimes[min(i, n_steps - 1)] if n_steps else ""
            rows.append(
                (float(t), float(traj.x1[i]), float(traj.x2[i]), float(traj.l[i]), regime)
            )
        _write_csv(out, ("t", "x1", "x2", "l", "regime"), rows, cfg.precision)
    else:
        obj = {
            "schema": SCHEMA_VERSION,
            "command": "simulate",
            "net_displacement": traj.net_displacement,
            "samples": {
                "t": [float(v) for v in traj.times],
                "x1": [float(v) for v in traj.x1],
                "x2": [float(v) for v in traj.x2],
                "l": [float(v) for v in traj.l],
                "regime": list(traj.regimes),
            },
        }
        _write_json(out, obj)
    return 0


def _cmd_analytic(cfg: RunConfig, out: str | None) -> int:
    report = engine.cycle_displacement(cfg.law, cfg.gait, dt=cfg.dt)
    adm = _admissibility_dict(report.admissibility)
    feasible = None
    if cfg.requested_regime is not None and adm is not None:
        feasible = adm["regime"] == cfg.requested_regime
    obj = {
        "schema": SCHEMA_VERSION,
        "command": "analytic",
        "gait_kind": report.gait_kind,
        "analytic_value": _float_or_none(report.analytic_value),
        "net_displacement_numeric": report.net_displacement,
        "contributions": {k: v for k, v in report.contributions},
        "abs_residual": _float_or_none(report.abs_residual),
        "rel_residual": _float_or_none(report.rel_residual),
        "admissibility": adm,
        "requested_regime": cfg.requested_regime,
        "requested_regime_feasible": feasible,
        "note": report.meta.get("note"),
    }
    _write_json(out, obj)
    return 0


def _cmd_verify(cfg: RunConfig, out: str | None) -> int:
    try:
        report = engine.verify(cfg.law, cfg.gait, dt=cfg.dt, tol=cfg.tolerance)
    except UnsupportedPairError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    obj = {
        "schema": SCHEMA_VERSION,
        "command": "verify",
        "passed": report.passed,
        "checks": [
            {
                "name": c.name,
                "numeric": c.numeric,
                "analytic": c.analytic,
                "residual": c.residual,
                "tolerance": c.tolerance,
                "passed": c.passed,
            }
            for c in report.checks
        ],
    }
    _write_json(out, obj)
    return 0 if report.passed else 1


def _cmd_sweep(cfg: RunConfig, out: str | None) -> int:
    if cfg.sweep_axes is None:
        raise ConfigError("sweep: config must contain a 'sweep' block with axes")
    rows = engine.sweep(cfg.law, cfg.gait, cfg.sweep_axes, dt=cfg.dt)
    header = (
        "index",
        *(path for path, _ in cfg.sweep_axes),
        "net_displacement",
        "analytic_value",
        "abs_residual",
        "regime_or_admissibility",
        "error",
    )
    out_rows = []
    for row in rows:
        values = [v for _, v in row.params]
        if row.report is not None:
            rep = row.report
            if rep.admissibility is not None:
                regime = rep.admissibility.regime
            else:
                counts = rep.meta.get("regime_counts", {})
                regime = max(counts, key=counts.get) if counts else ""
            out_rows.append(
                (
                    row.index,
                    *values,
                    rep.net_displacement,
                    "" if rep.analytic_value is None else _fmt(rep.analytic_value, cfg.precision),
                    "" if rep.abs_residual is None else _fmt(rep.abs_residual, cfg.precision),
                    regime,
                    "",
                )
            )
        else:
            out_rows.append((row.index, *values, "", "", "", "", row.error))
    _write_csv(out, header, out_rows, cfg.precision)
    return 0


def _parse_float_list(text: str, what: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"{what}: expected comma-separated numbers, got {text!r}") from exc


def _cmd_figure(args: argparse.Namespace) -> int:
    epsilons = _parse_float_list(args.epsilons, "--epsilons") if args.epsilons else None
    if args.name == "fig6":
        alphas = _parse_float_list(args.alphas, "--alphas") if args.alphas else None
        rows = engine.figure6_data(alphas=alphas, epsilons=epsilons, L=args.length)
        _write_csv(args.out, engine.FIG6_COLUMNS, rows)
    else:
        betas = None
        if args.betas_squared:
            betas = tuple(
                b2**0.5 for b2 in _parse_float_list(args.betas_squared, "--betas-squared")
            )
        rows = engine.figure7_data(
            betas=betas, epsilons=epsilons, delta_over_length=args.delta_over_l
        )
        _write_csv(args.out, engine.FIG7_COLUMNS, rows)
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dircrawl",
        description="Quasi-static crawling on directional frictional substrates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--dt", type=float, default=None, help="override numeric.dt")
        p.add_argument("--periods", type=int, default=None, help="override numeric.n_periods")
        p.add_argument("--tol", type=float, default=None, help="override numeric.tolerance")
        p.add_argument(
            "--echo-config",
            action="store_true",
            help="print the normalized configuration to stdout before running",
        )

    sim = sub.add_parser("simulate")
    add_common(sim)
    sim.add_argument("--format", choices=("csv", "json"), default=None)
    for name in ("analytic", "verify", "sweep"):
        add_common(sub.add_parser(name))

    fig = sub.add_parser("figure")
    fig.add_argument("name", choices=("fig6", "fig7"))
    fig.add_argument("--out", default=None)
    fig.add_argument("--epsilons", default=None, help="comma-separated amplitudes")
    fig.add_argument("--alphas", default=None, help="fig6: comma-separated alpha values")
    fig.add_argument("--betas-squared", default=None, help="fig7: comma-separated beta^2 values")
    fig.add_argument("--delta-over-l", type=float, default=0.25, help="fig7 wave width / length")
    fig.add_argument("--length", type=float, default=1.0, help="fig6 body length")
    return parser


def _apply_overrides(cfg: RunConfig, args: argparse.Namespace) -> RunConfig:
    updates: dict[str, Any] = {}
    if args.dt is not None:
        if args.dt <= 0.0:
            raise ConfigError("--dt: must be positive")
        updates["dt"] = args.dt
    if args.periods is not None:
        if args.periods < 1:
            raise ConfigError("--periods: must be >= 1")
        updates["n_periods"] = args.periods
    if args.tol is not None:
        if args.tol <= 0.0:
            raise ConfigError("--tol: must be positive")
        updates["tolerance"] = args.tol
    if getattr(args, "format", None) is not None:
        updates["out_format"] = args.format
    return replace(cfg, **updates) if updates else cfg


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "figure":
            return _cmd_figure(args)
        cfg = _apply_overrides(_load_config(args.config), args)
        if args.echo_config:
            json.dump(cfg.to_dict(), sys.stdout, indent=2)
            sys.stdout.write("\n")
        out = args.out if args.out is not None else cfg.out_path
        if args.command == "simulate":
            return _cmd_simulate(cfg, out)
        if args.command == "analytic":
            return _cmd_analytic(cfg, out)
        if args.command == "verify":
            return _cmd_verify(cfg, out)
        if args.command == "sweep":
            return _cmd_sweep(cfg, out)
        raise AssertionError(f"unhandled command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # solver/runtime failures
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
