"""Monte Carlo estimates of the outage and intercept probabilities.

Trials are cut into fixed-size blocks; block ``k`` draws from its own PCG64
stream spawned from ``SeedSequence(seed)``.  Workers only decide which thread
runs a block, so estimates do not depend on the worker count.  All six metrics
are counted on the same fading draws.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .analytic import METRICS
from .channel import SystemParams, sample_fading
from .sinr import sinr_c, sinr_x1, sinr_x2

RNG_ALGORITHM = f"numpy-{np.__version__} PCG64, SeedSequence(seed).spawn(n_blocks)"
BLOCK_SIZE = 1 << 16
DEFAULT_TRIALS = 10**6
SWEEP_AXES = ("gamma_db", "beta", "a1")


@dataclass(frozen=True)
class MetricEstimate:
    """Empirical probability with its binomial standard error.

    When every trial or no trial hits, ``std_error`` carries the rule-of-three
    bound ``3 / trials`` instead of zero and ``bounded`` is set.
    """

    metric_id: str
    value: float
    std_error: float
    trials: int
    seed: int
    hits: int
    bounded: bool = False

    @classmethod
    def from_hits(cls, metric_id: str, hits: int, trials: int, seed: int) -> "MetricEstimate":
        if trials < 1:
            raise ValueError("trials must be >= 1")
        value = hits / trials
        if 0 < hits < trials:
            return cls(metric_id, value, math.sqrt(value * (1 - value) / trials), trials, seed, hits)
        return cls(metric_id, value, 3.0 / trials, trials, seed, hits, bounded=True)


def count_events(p: SystemParams, sample, metrics=METRICS) -> dict[str, int]:
    """Count outage/intercept events in a vector fading sample."""
    out = {}
    need_near = {"op_near", "op_bd"} & set(metrics)
    if "op_far" in metrics:
        out["op_far"] = int(np.count_nonzero(~(sinr_x2("far", sample, None, p) > p.th_x2)))
    if need_near:
        c = p.composites("near")
        ok = (sinr_x2("near", sample, c, p) > p.th_x2) & (sinr_x1("near", sample, c, p) > p.th_x1)
        if "op_near" in metrics:
            out["op_near"] = int(np.count_nonzero(~ok))
        if "op_bd" in metrics:
            ok &= sinr_c("near", sample, c, p) > p.th_c
            out["op_bd"] = int(np.count_nonzero(~ok))
    if {"ip_far", "ip_near", "ip_bd"} & set(metrics):
        c = p.composites("eve")
        # each intercept is a single-threshold event on the eavesdropper's SINR
        if "ip_far" in metrics:
            out["ip_far"] = int(np.count_nonzero(sinr_x2("eve", sample, c, p) > p.th_e_far))
        if "ip_near" in metrics:
            out["ip_near"] = int(np.count_nonzero(sinr_x1("eve", sample, c, p) > p.th_e_near))
        if "ip_bd" in metrics:
            out["ip_bd"] = int(np.count_nonzero(sinr_c("eve", sample, c, p) > p.th_e_bd))
    return out


def _check_metrics(metrics):
    metrics = tuple(metrics)
    if not metrics:
        raise ValueError("need at least one metric")
    unknown = [m for m in metrics if m not in METRICS]
    if unknown:
        raise ValueError(f"unknown metrics {unknown}; expected a subset of {METRICS}")
    return metrics


def simulate(p: SystemParams, metrics=METRICS, trials: int = DEFAULT_TRIALS, seed: int = 0,
             workers: int = 1, block_size: int = BLOCK_SIZE) -> dict[str, MetricEstimate]:
    metrics = _check_metrics(metrics)
    trials = int(trials)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n_blocks = -(-trials // block_size)
    children = np.random.SeedSequence(seed).spawn(n_blocks)

    def run_block(k):
        size = min(block_size, trials - k * block_size)
        rng = np.random.Generator(np.random.PCG64(children[k]))
        return count_events(p, sample_fading(p, rng, size), metrics)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_block, range(n_blocks)))
    else:
        parts = [run_block(k) for k in range(n_blocks)]
    return {m: MetricEstimate.from_hits(m, sum(part[m] for part in parts), trials, seed)
            for m in metrics}


def estimate_op_far(p, trials=DEFAULT_TRIALS, seed=0, workers=1) -> MetricEstimate:
    return simulate(p, ("op_far",), trials, seed, workers)["op_far"]


def estimate_op_near(p, trials=DEFAULT_TRIALS, seed=0, workers=1) -> MetricEstimate:
    return simulate(p, ("op_near",), trials, seed, workers)["op_near"]


def estimate_op_bd(p, trials=DEFAULT_TRIALS, seed=0, workers=1) -> MetricEstimate:
    return simulate(p, ("op_bd",), trials, seed, workers)["op_bd"]


def estimate_ip(user: str, p, trials=DEFAULT_TRIALS, seed=0, workers=1) -> MetricEstimate:
    """Intercept probability of ``user`` in {"far", "near", "bd"}."""
    if user not in ("far", "near", "bd"):
        raise ValueError(f"user must be 'far', 'near' or 'bd', got {user!r}")
    metric = f"ip_{user}"
    return simulate(p, (metric,), trials, seed, workers)[metric]


def apply_axis(p: SystemParams, axis: str, value: float) -> SystemParams:
    if axis == "gamma_db":
        return p.with_snr_db(value)
    if axis == "beta":
        return replace(p, beta=float(value))
    if axis == "a1":
        return replace(p, a1=float(value))
    raise ValueError(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")


def point_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def sweep(metrics, p: SystemParams, axis: str, grid, trials: int = DEFAULT_TRIALS, seed: int = 0,
          common_random_numbers: bool = True, workers: int = 1):
    """One estimate per (grid point, metric), as ``[(value, {metric: estimate})]``.

    With common random numbers every grid point reuses the same fading draws,
    which keeps curves smooth and makes monotone trends exact.
    """
    metrics = _check_metrics(metrics)
    grid = [float(v) for v in grid]
    if not grid:
        raise ValueError("grid must be nonempty")
    rows = []
    for i, value in enumerate(grid):
        s = seed if common_random_numbers else point_seed(seed, i)
        rows.append((value, simulate(apply_axis(p, axis, value), metrics, trials, s, workers)))
    return rows
