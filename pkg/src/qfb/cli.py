"""Command-line front end: TOML scenario configs in, CSV data out.

Subcommands mirror the analysis operations: ``poles``, ``entropy``,
``sensitivity``, ``sweep`` and ``compare``. Exit codes: 0 on success, 1 on
configuration or usage errors, 2 when an instability is detected. All
numbers are written with ``%.17g`` so a reread reproduces them exactly.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from .analysis import (
    ScenarioConfig,
    SweepSpec,
    compare_fixed_entropy,
    entropy_curve_all_modes,
    fluctuation_sweep,
    scenario_poles,
    sensitivity,
)
from .errors import ConfigError, QfbError, UnstablePerturbation

_SCHEMA = {
    "system": {"topology", "lambda_over_kappa", "kappa", "lambdas", "kappas", "deltas"},
    "feedback": {"mode", "rho"},
    "sweep": {"delta_range", "samples", "pairing"},
    "freq": {"min", "max", "points"},
    "output": {"path", "format"},
}


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _validate_sections(doc: dict[str, Any]) -> None:
    for section, keys in doc.items():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        if not isinstance(keys, dict):
            raise ConfigError(f"section [{section}] must be a table")
        unknown = set(keys) - _SCHEMA[section]
        if unknown:
            raise ConfigError(
                f"unknown keys in [{section}]: {', '.join(sorted(unknown))}"
            )


def _coerce(value: str) -> Any:
    if value == "none":
        return None
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            continue
    return value


def _apply_overrides(doc: dict[str, Any], overrides: list[str]) -> None:
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        dotted, raw = item.split("=", 1)
        parts = dotted.strip().split(".")
        if len(parts) != 2:
            raise ConfigError(f"--set key must be section.key, got {dotted!r}")
        section, key = parts
        doc.setdefault(section, {})[key] = _coerce(raw.strip())


def load_config(path: str | Path, overrides: list[str] | None = None):
    """Parse and validate a run config; returns (ScenarioConfig, SweepSpec,
    output path or None)."""
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    if overrides:
        _apply_overrides(doc, overrides)
    _validate_sections(doc)

    system = doc.get("system", {})
    if "topology" not in system or "lambda_over_kappa" not in system:
        raise ConfigError("[system] needs 'topology' and 'lambda_over_kappa'")
    kappa = float(system.get("kappa", 1.0))
    lam0 = float(system["lambda_over_kappa"]) * kappa

    feedback = doc.get("feedback", {})
    mode = feedback.get("mode")
    rho = float(feedback.get("rho", 0.0))
    if mode is not None and not isinstance(mode, int):
        raise ConfigError("feedback.mode must be an integer or absent/none")

    freq = doc.get("freq", {})
    omega_grid = tuple(
        np.linspace(
            float(freq.get("min", 0.0)),
            float(freq.get("max", 5.0)),
            int(freq.get("points", 200)),
        )
    )

    def _tup(key: str):
        v = system.get(key)
        return tuple(float(x) for x in v) if v is not None else None

    cfg = ScenarioConfig(
        topology=str(system["topology"]),
        lam0=lam0,
        kappa0=kappa,
        feedback_mode=mode,
        rho=rho,
        omega_grid=omega_grid,
        lambdas=_tup("lambdas"),
        kappas=_tup("kappas"),
        deltas=_tup("deltas"),
    )

    sweep = doc.get("sweep", {})
    spec = SweepSpec(
        delta_range=float(sweep.get("delta_range", 0.1)),
        samples=int(sweep.get("samples", 90)),
        pairing=str(sweep.get("pairing", "grid")),
    )

    output = doc.get("output", {})
    if output.get("format", "csv") != "csv":
        raise ConfigError("output.format must be 'csv'")
    out_path = output.get("path")
    return cfg, spec, out_path


def _open_out(path: str | None, cli_out: str | None):
    target = cli_out or path
    if target is None:
        return sys.stdout, False
    return open(target, "w", newline="\n"), True


def _writer(fh) -> csv.writer:
    return csv.writer(fh, lineterminator="\n")


def cmd_poles(cfg: ScenarioConfig, out_fh) -> int:
    open_poles, closed = scenario_poles(cfg)
    w = _writer(out_fh)
    w.writerow(["loop", "index", "re", "im"])
    stable = True
    for i, z in enumerate(sorted(open_poles, key=lambda z: (z.real, z.imag))):
        w.writerow(["open", i, _fmt(z.real), _fmt(z.imag)])
        stable &= z.real < 0
    if closed is not None:
        for i, z in enumerate(sorted(closed, key=lambda z: (z.real, z.imag))):
            w.writerow(["closed", i, _fmt(z.real), _fmt(z.imag)])
            stable &= z.real < 0
    print(f"verdict: {'stable' if stable else 'unstable'}", file=sys.stderr)
    return 0 if stable else 2


def cmd_entropy(cfg: ScenarioConfig, out_fh) -> int:
    try:
        rows = entropy_curve_all_modes(cfg)
    except UnstablePerturbation:
        print("nominal system is unstable", file=sys.stderr)
        return 2
    w = _writer(out_fh)
    w.writerow(["omega"] + [f"S_{j + 1}" for j in range(cfg.n)])
    for omega, entropies in rows:
        w.writerow([_fmt(omega)] + [_fmt(s) for s in entropies])
    return 0


def cmd_sensitivity(cfg: ScenarioConfig, out_fh) -> int:
    w = _writer(out_fh)
    w.writerow(["topology", "feedback_mode", "rho", "omega", "dS_dlambda"])
    fb = "none" if cfg.feedback_mode is None else str(cfg.feedback_mode)
    try:
        for wgrid in cfg.omega_grid:
            omega = wgrid * cfg.kappa0
            val = sensitivity(cfg, omega)
            w.writerow([cfg.topology, fb, _fmt(cfg.rho), _fmt(omega), _fmt(val)])
    except UnstablePerturbation:
        print("perturbed system is unstable", file=sys.stderr)
        return 2
    return 0


def _summary_path(target: str) -> str:
    p = Path(target)
    return str(p.with_name(p.stem + ".summary" + (p.suffix or ".csv")))


def cmd_sweep(cfg: ScenarioConfig, spec: SweepSpec, out_fh, target: str | None) -> int:
    result = fluctuation_sweep(cfg, spec)
    w = _writer(out_fh)
    w.writerow(["sample_id", "delta1", "delta2", "omega", "S"])
    for sample in result.samples:
        if sample.entropies is None:
            continue
        for wgrid, s in zip(cfg.omega_grid, sample.entropies):
            w.writerow(
                [
                    sample.index,
                    _fmt(sample.delta1),
                    _fmt(sample.delta2),
                    _fmt(wgrid * cfg.kappa0),
                    _fmt(s),
                ]
            )
    if target is not None:
        with open(_summary_path(target), "w", newline="\n") as fh:
            sw = _writer(fh)
            sw.writerow(["omega", "spread"])
            for wgrid, spread in zip(cfg.omega_grid, result.spread):
                sw.writerow([_fmt(wgrid * cfg.kappa0), _fmt(spread)])
    if result.unstable_count:
        print(f"excluded_unstable: {result.unstable_count}", file=sys.stderr)
    return 0


def cmd_compare(cfg_a: ScenarioConfig, cfg_b: ScenarioConfig, spec: SweepSpec, out_fh) -> int:
    report = compare_fixed_entropy(cfg_a, cfg_b, spec)
    w = _writer(out_fh)
    w.writerow(["scenario", "topology", "feedback_mode", "nominal_S0", "spread0"])
    for name, cfg, nominal, spread in (
        ("a", cfg_a, report.nominal_a, report.spread_a),
        ("b", cfg_b, report.nominal_b, report.spread_b),
    ):
        fb = "none" if cfg.feedback_mode is None else str(cfg.feedback_mode)
        w.writerow([name, cfg.topology, fb, _fmt(nominal), _fmt(spread)])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfb",
        description="Entanglement robustness analysis of cavity networks "
        "with coherent feedback.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("poles", "entropy", "sensitivity", "sweep", "compare"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="TOML scenario config")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="dotted-path config override, e.g. feedback.rho=0.04",
        )
        p.add_argument("--out", help="output CSV path (default: config output.path)")
        if name == "compare":
            p.add_argument(
                "--config-b", required=True, help="second scenario to compare against"
            )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg, spec, out_path = load_config(args.config, args.set)
        if args.command == "compare":
            cfg_b, _, _ = load_config(args.config_b, [])
        fh, close = _open_out(out_path, args.out)
        try:
            target = args.out or out_path
            if args.command == "poles":
                return cmd_poles(cfg, fh)
            if args.command == "entropy":
                return cmd_entropy(cfg, fh)
            if args.command == "sensitivity":
                return cmd_sensitivity(cfg, fh)
            if args.command == "sweep":
                return cmd_sweep(cfg, spec, fh, target)
            return cmd_compare(cfg, cfg_b, spec, fh)
        finally:
            if close:
                fh.close()
    except (ConfigError, OSError, tomllib.TOMLDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except QfbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
