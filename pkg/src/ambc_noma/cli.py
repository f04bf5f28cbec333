"""Command-line entry point: ``validate`` compares closed forms with Monte Carlo,
``sweep`` writes analytic and simulated curves to CSV.

Exit codes: 0 success, 1 at least one validation FAIL, 2 configuration error.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import analytic
from .analytic import OUTAGE_METRICS, feasibility
from .channel import SystemParams
from .config import (ConfigError, RunConfig, default_config, describe_params, parse_config,
                     parse_grid, parse_metrics)
from .montecarlo import RNG_ALGORITHM, apply_axis, point_seed, simulate

Z_LIMIT = 3.0
ABS_TOLERANCE = 5e-4

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def fmt_prob(x: float) -> str:
    return f"{x:.6g}"


def fmt_se(x: float) -> str:
    return f"{x:.3g}"


@dataclass(frozen=True)
class ValidationRow:
    profile: str
    snr_db: float
    metric: str
    analytic: float
    mc: float
    se: float
    guard: str = ""

    @property
    def gap(self) -> float:
        return self.mc - self.analytic

    @property
    def z(self) -> float:
        if self.se > 0:
            return self.gap / self.se
        return 0.0 if self.gap == 0 else math.copysign(math.inf, self.gap)

    @property
    def passed(self) -> bool:
        return abs(self.z) <= Z_LIMIT or abs(self.gap) <= ABS_TOLERANCE


@dataclass(frozen=True)
class ValidationReport:
    rows: tuple
    metadata: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def failures(self) -> list:
        return [r for r in self.rows if not r.passed]

    def to_text(self) -> str:
        out = io.StringIO()
        for key, value in self.metadata:
            out.write(f"# {key} = {value}\n")
        out.write("profile,snr_db,metric,analytic,mc,mc_se,z,status,guard\n")
        for r in self.rows:
            out.write(",".join([
                r.profile, f"{r.snr_db:g}", r.metric, fmt_prob(r.analytic), fmt_prob(r.mc),
                fmt_se(r.se), f"{r.z:.2f}", "PASS" if r.passed else "FAIL", r.guard,
            ]) + "\n")
        fails = len(self.failures)
        out.write(f"# summary = {len(self.rows) - fails} PASS, {fails} FAIL\n")
        return out.getvalue()


def _profiles(cfg: RunConfig) -> list[tuple[str, SystemParams]]:
    p = cfg.params
    if p.iqi.is_ideal:
        return [("ideal", p)]
    out = [("iqi", p)]
    if cfg.compare_ideal:
        out.append(("ideal", p.ideal()))
    return out


def _guard(metric: str, p: SystemParams, cfg: RunConfig) -> str:
    f = feasibility(metric, p, ip_near_gain=cfg.ip_near_gain)
    return "" if f.ok else f.reason.value


def _metadata(cfg: RunConfig, p: SystemParams, extra=()) -> list[tuple[str, str]]:
    meta = [("tool", "ambc-noma")]
    meta += list(extra)
    meta += describe_params(p)
    meta += [
        ("metrics", ",".join(cfg.metrics)),
        ("seed", str(cfg.seed)),
        ("trials", str(cfg.trials)),
        ("quadrature_n", str(cfg.quadrature_n)),
        ("ip_near_gain", cfg.ip_near_gain),
        ("rng", RNG_ALGORITHM),
    ]
    return meta


def run_validate(cfg: RunConfig, analytic_fn=analytic.evaluate) -> ValidationReport:
    """Analytic vs Monte Carlo at every (profile, SNR, metric).

    ``analytic_fn(metric, params, n_nodes=..., ip_near_gain=...)`` can be swapped
    out to check that a wrong closed form is caught.
    """
    rows, guards = [], []
    for name, base in _profiles(cfg):
        for snr in cfg.snr_db_grid:
            p = base.with_snr_db(snr)
            est = simulate(p, cfg.metrics, cfg.trials, cfg.seed, cfg.workers)
            for m in cfg.metrics:
                value = analytic_fn(m, p, n_nodes=cfg.quadrature_n, ip_near_gain=cfg.ip_near_gain)
                guard = _guard(m, p, cfg)
                if guard:
                    guards.append((f"guard {name} {m} @ {snr:g} dB", guard))
                rows.append(ValidationRow(name, snr, m, value, est[m].value, est[m].std_error, guard))
    extra = [("mode", "validate"), ("profiles", ",".join(n for n, _ in _profiles(cfg))),
             ("snr_db_grid", ",".join(f"{s:g}" for s in cfg.snr_db_grid)),
             ("pass_rule", f"|z| <= {Z_LIMIT:g} or |gap| <= {ABS_TOLERANCE:g}")]
    return ValidationReport(tuple(rows), tuple(_metadata(cfg, cfg.params, extra) + guards))


def sweep_columns(cfg: RunConfig) -> list[str]:
    cols = [cfg.axis]
    for m in cfg.metrics:
        cols += [f"analytic_{m}", f"mc_{m}", f"mc_se_{m}"]
    if cfg.emit_floors:
        cols += [f"floor_{m}" for m in cfg.metrics if m in OUTAGE_METRICS]
    return cols


def sweep_text(cfg: RunConfig) -> str:
    grid = cfg.sweep_grid
    base = cfg.params
    out = io.StringIO()
    body, guards = [], []
    for i, value in enumerate(grid):
        p = apply_axis(base, cfg.axis, value)
        seed = cfg.seed if cfg.common_random_numbers else point_seed(cfg.seed, i)
        est = simulate(p, cfg.metrics, cfg.trials, seed, cfg.workers)
        row = [f"{value:g}"]
        for m in cfg.metrics:
            a = analytic.evaluate(m, p, n_nodes=cfg.quadrature_n, ip_near_gain=cfg.ip_near_gain)
            row += [fmt_prob(a), fmt_prob(est[m].value), fmt_se(est[m].std_error)]
            guard = _guard(m, p, cfg)
            if guard:
                guards.append((f"guard {m} @ {cfg.axis}={value:g}", guard))
        if cfg.emit_floors:
            row += [fmt_prob(analytic.floor(m, p)) for m in cfg.metrics if m in OUTAGE_METRICS]
        body.append(",".join(row))
    extra = [("mode", "sweep"), ("axis", cfg.axis), ("grid", ",".join(f"{v:g}" for v in grid)),
             ("snr_db", f"{base.snr_db:g}"),
             ("common_random_numbers", str(cfg.common_random_numbers).lower())]
    for key, val in _metadata(cfg, base, extra) + guards:
        out.write(f"# {key} = {val}\n")
    out.write(",".join(sweep_columns(cfg)) + "\n")
    for line in body:
        out.write(line + "\n")
    return out.getvalue()


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(Path(output), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_sweep(cfg: RunConfig) -> str:
    """Write the sweep CSV to ``cfg.output`` (stdout if unset) and return its text."""
    text = sweep_text(cfg)
    _emit(text, cfg.output)
    return text


# --- argument parsing -------------------------------------------------------

def _arg_type(parse):
    def convert(text):
        try:
            return parse(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return convert


_grid_arg = _arg_type(parse_grid)
_metrics_arg = _arg_type(parse_metrics)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--snr-db", type=float, help="transmit SNR in dB")
    common.add_argument("--snr-db-grid", type=_grid_arg, help="start:stop:step or comma list (dB)")
    common.add_argument("--beta", type=float, help="backscatter reflection coefficient")
    common.add_argument("--a1", type=float, help="near-user power coefficient (a2 = 1 - a1)")
    common.add_argument("--metrics", type=_metrics_arg, help="comma list of metric ids")
    common.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    common.add_argument("--seed", type=int, help="root seed")
    common.add_argument("--quadrature-n", type=int, help="Gauss-Chebyshev nodes")
    common.add_argument("--workers", type=int, help="worker threads (results do not depend on it)")
    common.add_argument("--ideal", action="store_true", default=None,
                        help="ideal transceivers (epsilon=1, phi=0 everywhere)")
    common.add_argument("--output", help="write results here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="ambc-noma",
        description="Outage and intercept probabilities of a backscatter NOMA downlink with I/Q imbalance.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="closed forms vs Monte Carlo")
    sw = sub.add_parser("sweep", parents=[common], help="analytic + Monte Carlo curves as CSV")
    sw.add_argument("--axis", choices=("gamma_db", "beta", "a1"))
    sw.add_argument("--grid", type=_grid_arg, help="sweep grid (defaults to the SNR grid)")
    sw.add_argument("--emit-floors", action="store_true", default=None,
                    help="add high-SNR error-floor columns for outage metrics")
    return parser


_FLAG_KEYS = ("snr_db", "snr_db_grid", "beta", "a1", "metrics", "trials", "seed", "quadrature_n",
              "workers", "ideal", "output", "axis", "grid", "emit_floors")


def config_from_args(args) -> RunConfig:
    overrides = {k: getattr(args, k, None) for k in _FLAG_KEYS}
    overrides["mode"] = args.command
    cfg = parse_config(args.config, overrides) if args.config else default_config(overrides)
    if args.command == "sweep":
        cfg.sweep_grid  # raises ConfigError when the axis has no grid
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if cfg.mode == "sweep":
            run_sweep(cfg)
            return EXIT_OK
        report = run_validate(cfg)
        _emit(report.to_text(), cfg.output)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
