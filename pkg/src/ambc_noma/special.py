"""Special functions and Gauss-Chebyshev nodes used by the closed forms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

EULER_GAMMA = 0.57721566490153286061
_EPS = 1e-16
_TINY = 1e-300
_SERIES_MAX = 1.0  # series below, continued fraction above


def _e1_series(t: float) -> float:
    # E1(t) = -gamma - ln t - sum_{k>=1} (-t)^k / (k k!)
    total = 0.0
    term = 1.0
    k = 1
    while True:
        term *= -t / k
        contrib = term / k
        total += contrib
        if abs(contrib) < _EPS * abs(total) or k > 200:
            break
        k += 1
    return -EULER_GAMMA - math.log(t) - total


def _scaled_e1_cf(t: float) -> float:
    """``exp(t) * E1(t)`` from the modified-Lentz continued fraction, ``t > 0``."""
    b = t + 1.0
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"continued fraction for E1({t}) did not converge")


def exp_integral_ei(x: float) -> float:
    """Exponential integral ``Ei(x)`` for ``x < 0``."""
    x = float(x)
    if not x < 0:
        raise ValueError(f"exp_integral_ei is only defined here for x < 0, got {x}")
    t = -x
    if t <= _SERIES_MAX:
        return -_e1_series(t)
    # underflows to -0.0 beyond t ~ 745
    return -_scaled_e1_cf(t) * math.exp(-t)


def scaled_ei_product(delta: float) -> float:
    """``delta * exp(delta) * Ei(-delta)`` without forming ``exp(delta)``.

    The value lies in (-1, 0) and tends to -1 as ``delta`` grows.
    """
    delta = float(delta)
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if math.isinf(delta):
        return -1.0
    if delta <= _SERIES_MAX:
        return -delta * math.exp(delta) * _e1_series(delta)
    return -delta * _scaled_e1_cf(delta)


def bessel_k0(x):
    """Modified Bessel function of the second kind, order zero, for ``x > 0``.

    Accepts scalars or arrays.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(arr > 0):
        raise ValueError("bessel_k0 requires x > 0")
    out = _sp.k0(arr)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ChebyshevNodes:
    """First-kind Chebyshev nodes; the matching weights are all ``pi / n``."""

    n: int
    nodes: np.ndarray

    @property
    def sqrt_weight(self) -> np.ndarray:
        """``sqrt(1 - node^2)``, the factor turning the rule into a plain integral."""
        return np.sqrt(1.0 - self.nodes * self.nodes)


def chebyshev_nodes(n: int) -> ChebyshevNodes:
    n = int(n)
    if n < 1:
        raise ValueError(f"need at least one node, got n={n}")
    k = np.arange(1, n + 1)
    nodes = np.cos((2 * k - 1) * math.pi / (2 * n))
    if n % 2:
        nodes[n // 2] = 0.0
    return ChebyshevNodes(n, nodes)


def chebyshev_integral(f, lower: float, upper: float, n: int) -> float:
    """Approximate ``int_lower^upper f`` with the ``n``-node Gauss-Chebyshev rule.

    ``f`` must accept a numpy array.
    """
    cn = chebyshev_nodes(n)
    half = 0.5 * (upper - lower)
    mid = 0.5 * (upper + lower)
    vals = f(mid + half * cn.nodes)
    return float(math.pi * half / n * np.sum(vals * cn.sqrt_weight))
