"""Plain-text ``key = value`` run configuration.

Lines are ``key = value``; ``#`` starts a comment.  Omitted keys take the
defaults of the numerical-results setup.  Angles are given in degrees and SNRs
in dB here, and converted once when the :class:`RunConfig` is built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .analytic import DEFAULT_NODES, METRICS
from .channel import DEFAULT_LAMBDAS, SystemParams
from .iqi import IqiProfile, MismatchParams
from .montecarlo import DEFAULT_TRIALS, SWEEP_AXES

CHAINS = ("source_tx", "bd_tx", "bd_rx", "near_rx", "far_rx", "eve_rx")


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def parse_grid(text: str) -> list[float]:
    """``start:stop:step`` (stop inclusive) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid range must be start:stop:step, got {text!r}")
        start, stop, step = (float(v) for v in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"grid range {text!r} must have step > 0 and stop >= start")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        values = [round(start + i * step, 12) for i in range(count)]
    else:
        values = [float(v) for v in text.split(",") if v.strip()]
    if not values:
        raise ValueError("grid is empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"grid must be strictly increasing, got {values}")
    return values


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def parse_metrics(text: str) -> tuple:
    metrics = tuple(m.strip() for m in text.split(",") if m.strip())
    if not metrics:
        raise ValueError("metric list is empty")
    bad = [m for m in metrics if m not in METRICS]
    if bad:
        raise ValueError(f"unknown metrics {bad}; expected a subset of {', '.join(METRICS)}")
    return metrics


def _choice(options):
    def parse(text):
        text = text.strip()
        if text not in options:
            raise ValueError(f"expected one of {options}, got {text!r}")
        return text
    return parse


def _opt_grid(text):
    return parse_grid(text) if text.strip() else None


# key -> (parser, default)
_SCALARS = {
    "a1": (float, 0.1),
    "beta": (float, 0.1),
    **{f"lambda{k}": (float, DEFAULT_LAMBDAS[k - 1]) for k in range(1, 8)},
    "snr_db": (float, 25.0),
    "snr_db_grid": (parse_grid, [0.0, 10.0, 20.0, 30.0, 40.0]),
    "th_x2": (float, 1.0),
    "th_x1": (float, 2.0),
    "th_c": (float, 0.1),
    "th_e_far": (float, 1.2),
    "th_e_near": (float, 1.0),
    "th_e_bd": (float, 0.8),
    "epsilon_t": (float, 1.05),
    "phi_t_deg": (float, 20.0),
    "epsilon_r": (float, 1.05),
    "phi_r_deg": (float, 20.0),
    "compare_ideal": (_parse_bool, True),
    "mode": (_choice(("validate", "sweep")), "validate"),
    "axis": (_choice(SWEEP_AXES), "gamma_db"),
    "grid": (_opt_grid, None),
    "metrics": (parse_metrics, METRICS),
    "trials": (int, DEFAULT_TRIALS),
    "seed": (int, 0),
    "quadrature_n": (int, DEFAULT_NODES),
    "workers": (int, 1),
    "output": (str, None),
    "common_random_numbers": (_parse_bool, True),
    "ip_near_gain": (_choice(("xi", "direct")), "xi"),
    "emit_floors": (_parse_bool, False),
    "ideal": (_parse_bool, False),
}
_CHAIN_FIELDS = {"epsilon": float, "phi_deg": float}


def _is_chain_key(key: str) -> bool:
    parts = key.split(".")
    return len(parts) == 3 and parts[0] == "iqi" and parts[1] in CHAINS and parts[2] in _CHAIN_FIELDS


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams
    mode: str = "validate"
    snr_db_grid: tuple = (0.0, 10.0, 20.0, 30.0, 40.0)
    axis: str = "gamma_db"
    grid: tuple = ()
    metrics: tuple = METRICS
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    quadrature_n: int = DEFAULT_NODES
    workers: int = 1
    output: str | None = None
    compare_ideal: bool = True
    common_random_numbers: bool = True
    ip_near_gain: str = "xi"
    emit_floors: bool = False
    raw: dict = field(default_factory=dict, compare=False)

    @property
    def sweep_grid(self) -> tuple:
        if self.grid:
            return self.grid
        if self.axis == "gamma_db":
            return self.snr_db_grid
        raise ConfigError(f"a grid is required for axis {self.axis!r}")


def read_pairs(text: str) -> list[tuple[int, str, str]]:
    pairs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"expected 'key = value', got {line.strip()!r}", lineno)
        key, value = (s.strip() for s in body.split("=", 1))
        if not key:
            raise ConfigError("missing key", lineno)
        pairs.append((lineno, key, value))
    return pairs


def build_config(pairs, overrides: dict | None = None) -> RunConfig:
    """Turn parsed ``(line, key, value)`` triples plus typed overrides into a RunConfig.

    Overrides are already-typed values keyed like the file (e.g. from CLI flags)
    and win over file entries.
    """
    values = {key: default for key, (_, default) in _SCALARS.items()}
    chains: dict[str, dict[str, float]] = {}
    lines: dict[str, int] = {}
    for lineno, key, text in pairs:
        if key in lines:
            raise ConfigError(f"duplicate key {key!r} (first set on line {lines[key]})", lineno)
        lines[key] = lineno
        try:
            if key in _SCALARS:
                values[key] = _SCALARS[key][0](text)
            elif _is_chain_key(key):
                _, chain, fld = key.split(".")
                chains.setdefault(chain, {})[fld] = _CHAIN_FIELDS[fld](text)
            else:
                raise ValueError(f"unknown key {key!r}")
        except ValueError as exc:
            raise ConfigError(str(exc), lineno) from None
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in _SCALARS:
            raise ConfigError(f"unknown override {key!r}")
        values[key] = value
        lines.pop(key, None)

    def fail(msg, *keys):
        line = next((lines[k] for k in keys if k in lines), None)
        raise ConfigError(msg, line)

    if not 0 < values["a1"] < 0.5:
        fail(f"a1 = {values['a1']} violates 0 < a1 < a2 = 1 - a1", "a1")
    for key in ("trials", "quadrature_n", "workers"):
        if values[key] < 1:
            fail(f"{key} must be >= 1", key)
    if values["ideal"]:
        iqi = IqiProfile.ideal()
    else:
        try:
            base = IqiProfile.uniform(values["epsilon_t"], values["phi_t_deg"],
                                      values["epsilon_r"], values["phi_r_deg"])
            per_chain = {}
            for chain, fields in chains.items():
                current = getattr(base, chain)
                eps = fields.get("epsilon", current.epsilon)
                phi = fields.get("phi_deg", math.degrees(current.phi))
                per_chain[chain] = MismatchParams.from_degrees(eps, phi)
            iqi = replace(base, **per_chain)
        except ValueError as exc:
            fail(str(exc), "epsilon_t", "epsilon_r")
    try:
        params = SystemParams(
            a1=values["a1"],
            beta=values["beta"],
            lambdas=tuple(values[f"lambda{k}"] for k in range(1, 8)),
            gamma=10.0 ** (values["snr_db"] / 10.0),
            th_x2=values["th_x2"],
            th_x1=values["th_x1"],
            th_c=values["th_c"],
            th_e_far=values["th_e_far"],
            th_e_near=values["th_e_near"],
            th_e_bd=values["th_e_bd"],
            iqi=iqi,
        )
    except ValueError as exc:
        fail(str(exc), *_SCALARS)
    if values["axis"] == "beta" and values["grid"] and not all(0 < b <= 1 for b in values["grid"]):
        fail("beta grid must lie in (0, 1]", "grid")
    if values["axis"] == "a1" and values["grid"] and not all(0 < a < 0.5 for a in values["grid"]):
        fail("a1 grid must lie in (0, 0.5)", "grid")
    return RunConfig(
        params=params,
        mode=values["mode"],
        snr_db_grid=tuple(values["snr_db_grid"]),
        axis=values["axis"],
        grid=tuple(values["grid"] or ()),
        metrics=tuple(values["metrics"]),
        trials=values["trials"],
        seed=values["seed"],
        quadrature_n=values["quadrature_n"],
        workers=values["workers"],
        output=values["output"],
        compare_ideal=values["compare_ideal"],
        common_random_numbers=values["common_random_numbers"],
        ip_near_gain=values["ip_near_gain"],
        emit_floors=values["emit_floors"],
        raw=values,
    )


def parse_config(path, overrides: dict | None = None) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    return build_config(read_pairs(text), overrides)


def default_config(overrides: dict | None = None) -> RunConfig:
    return build_config([], overrides)


def describe_params(p: SystemParams) -> list[tuple[str, str]]:
    """Flat ``(key, value)`` view of the parameters for output metadata."""
    items = [("a1", repr(p.a1)), ("a2", repr(p.a2)), ("beta", repr(p.beta))]
    items += [(f"lambda{k}", repr(v)) for k, v in enumerate(p.lambdas, start=1)]
    items += [(name, repr(getattr(p, name)))
              for name in ("th_x2", "th_x1", "th_c", "th_e_far", "th_e_near", "th_e_bd")]
    for chain in CHAINS:
        m = getattr(p.iqi, chain)
        items.append((f"iqi.{chain}", f"epsilon={m.epsilon!r} phi_deg={np.degrees(m.phi)!r}"))
    return items
