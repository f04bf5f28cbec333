"""Closed-form outage and intercept probabilities.

Every receiver's SINR has the shape ``k rho / (X b + rho r + d / gamma)`` where
``rho`` is the exponential direct-link gain and ``X`` the product of the two
exponential gains through the backscatter device.  Conditioning on ``X`` turns
each decoding event into a threshold on ``rho``; averaging over ``X`` gives
``delta * exp(delta) * Ei(-delta)`` terms, and truncated averages are done with
Gauss-Chebyshev quadrature (see :mod:`ambc_noma.channel`).

When a SINR ceiling sits below its threshold the event is certain (outage) or
impossible (intercept) and the guards below short-circuit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .channel import SystemParams, db_to_linear, product_exp_partial, product_exp_tail
from .iqi import rx_coefficients, tx_coefficients
from .special import scaled_ei_product

DEFAULT_NODES = 200
OUTAGE_METRICS = ("op_far", "op_near", "op_bd")
INTERCEPT_METRICS = ("ip_far", "ip_near", "ip_bd")
METRICS = OUTAGE_METRICS + INTERCEPT_METRICS
_SLACK = 1e-9


class Infeasible(str, Enum):
    X2_CEILING = "x2-ceiling-below-threshold"
    X1_CEILING = "x1-ceiling-below-threshold"
    BD_CEILING = "bd-ceiling-below-threshold"
    BD_WINDOW = "bd-window-empty"


@dataclass(frozen=True)
class Feasibility:
    ok: bool
    reason: Infeasible | None = None

    def __post_init__(self):
        if self.ok == (self.reason is not None):
            raise ValueError("reason must be set exactly when ok is False")


FEASIBLE = Feasibility(True)


def _checked(value: float) -> float:
    if not (-_SLACK <= value <= 1 + _SLACK):
        raise ArithmeticError(f"probability {value!r} outside [0, 1]; formula is inconsistent")
    return min(max(value, 0.0), 1.0)


def _ratio(gain: float, residual: float, threshold: float) -> float | None:
    """``threshold / (gain - residual * threshold)``, or None when the ceiling is too low."""
    den = gain - residual * threshold
    if den <= 0:
        return None
    return threshold / den


def _resolve_branch(p: SystemParams, branch: str | None) -> str:
    if branch is None:
        return "ideal" if p.iqi.is_ideal else "nonideal"
    if branch not in ("ideal", "nonideal"):
        raise ValueError(f"branch must be 'ideal' or 'nonideal', got {branch!r}")
    return branch


# --- per-receiver threshold ratios ------------------------------------------

def _far_ratio(p: SystemParams):
    c = p.composites("far")
    return _ratio(c.xi * p.a2, c.c_coeff, p.th_x2)


def _near_ratio(p: SystemParams):
    """Largest direct-gain-to-interference ratio needed to decode both ``x2`` and ``x1``."""
    c = p.composites("near")
    r2 = _ratio(c.xi * p.a2, c.c_coeff, p.th_x2)
    if r2 is None:
        return None, Infeasible.X2_CEILING
    r1 = _ratio(c.xi * p.a1, p.a2 * c.b_coeff + c.m_coeff, p.th_x1)
    if r1 is None:
        return None, Infeasible.X1_CEILING
    return max(r1, r2), None


def _near_ratio_ideal(p: SystemParams):
    r2 = _ratio(p.a2, p.a1, p.th_x2)
    if r2 is None:
        return None, Infeasible.X2_CEILING
    return max(r2, p.th_x1 / p.a1), None


def _bd_window(p: SystemParams, ratio: float):
    """Backscatter-link coefficients for the BD outage; None when c(t) is undecodable."""
    c = p.composites("near")
    margin = c.q_coeff - c.a_coeff * p.th_c
    if margin <= 0:
        return None, Infeasible.BD_CEILING
    resid = c.residual_total
    if resid > 0 and margin / p.th_c - resid * ratio * c.backscatter_total <= 0:
        return None, Infeasible.BD_WINDOW
    return (c, margin, resid), None


def _eve_x1_gain(p: SystemParams, gain: str) -> float:
    c = p.composites("eve")
    if gain == "xi":
        return c.xi
    if gain == "direct":
        return rx_coefficients(p.iqi.eve_rx).mu2 * tx_coefficients(p.iqi.source_tx).mu2
    raise ValueError(f"gain must be 'xi' or 'direct', got {gain!r}")


def feasibility(metric: str, p: SystemParams, branch: str | None = None,
                ip_near_gain: str = "xi") -> Feasibility:
    """Report whether ``metric`` can leave its trivial value (OP=1 or IP=0)."""
    if metric == "op_far":
        return FEASIBLE if _far_ratio(p) is not None else Feasibility(False, Infeasible.X2_CEILING)
    if metric == "op_near":
        ratio, why = _near_ratio(p)
        return FEASIBLE if ratio is not None else Feasibility(False, why)
    if metric == "op_bd":
        if _resolve_branch(p, branch) == "ideal":
            ratio, why = _near_ratio_ideal(p)
            return FEASIBLE if ratio is not None else Feasibility(False, why)
        ratio, why = _near_ratio(p)
        if ratio is None:
            return Feasibility(False, why)
        _, why = _bd_window(p, ratio)
        return FEASIBLE if why is None else Feasibility(False, why)
    c = p.composites("eve")
    if metric == "ip_far":
        ok = _ratio(c.xi * p.a2, c.c_coeff, p.th_e_far) is not None
        return FEASIBLE if ok else Feasibility(False, Infeasible.X2_CEILING)
    if metric == "ip_near":
        ok = _ratio(_eve_x1_gain(p, ip_near_gain) * p.a1, p.a2 * c.b_coeff + c.m_coeff,
                    p.th_e_near) is not None
        return FEASIBLE if ok else Feasibility(False, Infeasible.X1_CEILING)
    if metric == "ip_bd":
        if _resolve_branch(p, branch) == "ideal":
            return FEASIBLE
        ok = c.q_coeff - c.a_coeff * p.th_e_bd > 0
        return FEASIBLE if ok else Feasibility(False, Infeasible.BD_CEILING)
    raise ValueError(f"unknown metric {metric!r}")


# --- outage probabilities ---------------------------------------------------

def op_far(p: SystemParams) -> float:
    ratio = _far_ratio(p)
    if ratio is None:
        return 1.0
    c = p.composites("far")
    lam_h, lam_g, lam_b = p.link_means("far")
    delta = lam_h / (lam_b * lam_g * ratio * c.backscatter_total)
    return _checked(1.0 + scaled_ei_product(delta) * math.exp(-ratio * c.d_coeff / (lam_h * p.gamma)))


def op_far_asymptotic(p: SystemParams) -> float:
    ratio = _far_ratio(p)
    if ratio is None:
        return 1.0
    c = p.composites("far")
    lam_h, lam_g, lam_b = p.link_means("far")
    delta = lam_h / (lam_b * lam_g * ratio * c.backscatter_total)
    return _checked(1.0 + scaled_ei_product(delta))


def op_near(p: SystemParams) -> float:
    ratio, _ = _near_ratio(p)
    if ratio is None:
        return 1.0
    c = p.composites("near")
    lam_h, lam_g, lam_b = p.link_means("near")
    delta = lam_h / (lam_b * lam_g * ratio * c.backscatter_total)
    return _checked(1.0 + scaled_ei_product(delta) * math.exp(-ratio * c.d_coeff / (lam_h * p.gamma)))


def op_near_asymptotic(p: SystemParams) -> float:
    ratio, _ = _near_ratio(p)
    if ratio is None:
        return 1.0
    c = p.composites("near")
    lam_h, lam_g, lam_b = p.link_means("near")
    delta = lam_h / (lam_b * lam_g * ratio * c.backscatter_total)
    return _checked(1.0 + scaled_ei_product(delta))


def op_bd_ideal(p: SystemParams, n_nodes: int = DEFAULT_NODES) -> float:
    """BD outage with ideal front ends everywhere, whatever ``p.iqi`` says."""
    ratio, _ = _near_ratio_ideal(p)
    if ratio is None:
        return 1.0
    lam_h, lam_g, lam_b = p.link_means("near")
    b2 = p.beta ** 2
    delta = lam_h / (lam_b * lam_g * ratio * b2)
    # c(t) decodes iff the cascade gain exceeds th_c / (beta^2 gamma)
    head = product_exp_partial(p.th_c / (b2 * p.gamma), lam_g, lam_b,
                               decay=ratio * b2 / lam_h, n=n_nodes)
    noise = math.exp(-ratio / (p.gamma * lam_h))
    return _checked(1.0 + noise * (scaled_ei_product(delta) + head))


def op_bd_nonideal(p: SystemParams, n_nodes: int = DEFAULT_NODES) -> float:
    """BD outage under the IQI levels in ``p``.

    Success needs ``rho`` above the x1/x2 line ``ratio (X K + D/gamma)`` and,
    when IQI leaves a residual ``W > 0``, below the c(t) line
    ``(X margin / th_c - D/gamma) / W``.  The window opens at ``X = x_open``.
    """
    ratio, _ = _near_ratio(p)
    if ratio is None:
        return 1.0
    window, _ = _bd_window(p, ratio)
    if window is None:
        return 1.0
    c, margin, resid = window
    lam_h, lam_g, lam_b = p.link_means("near")
    g = p.gamma
    k_tot = c.backscatter_total
    d = c.d_coeff
    slope = ratio * k_tot / lam_h

    if resid == 0:
        x_open = p.th_c * d / (margin * g)
        upper = 0.0
    else:
        x_open = (d / g) * (1.0 + resid * ratio) / (margin / p.th_c - resid * ratio * k_tot)
        cut_slope = margin / (p.th_c * resid * lam_h)
        # where the c(t) line crosses rho = 0
        x_zero = p.th_c * d / (margin * g)
        upper = math.exp(-cut_slope * (x_open - x_zero)) * product_exp_tail(
            x_open, lam_g, lam_b, decay=cut_slope, n=n_nodes)
    lower = (math.exp(-ratio * d / (g * lam_h) - slope * x_open)
             * product_exp_tail(x_open, lam_g, lam_b, decay=slope, n=n_nodes))
    return _checked(1.0 - lower + upper)


def op_bd(p: SystemParams, branch: str | None = None, n_nodes: int = DEFAULT_NODES) -> float:
    if _resolve_branch(p, branch) == "ideal":
        return op_bd_ideal(p, n_nodes)
    return op_bd_nonideal(p, n_nodes)


def op_bd_asymptotic(p: SystemParams, branch: str | None = None) -> float:
    if _resolve_branch(p, branch) == "ideal":
        ratio, _ = _near_ratio_ideal(p)
        if ratio is None:
            return 1.0
        lam_h, lam_g, lam_b = p.link_means("near")
        delta = lam_h / (lam_b * lam_g * ratio * p.beta ** 2)
        return _checked(1.0 + scaled_ei_product(delta))
    ratio, _ = _near_ratio(p)
    if ratio is None:
        return 1.0
    window, _ = _bd_window(p, ratio)
    if window is None:
        return 1.0
    c, margin, resid = window
    lam_h, lam_g, lam_b = p.link_means("near")
    value = 1.0 + scaled_ei_product(lam_h / (lam_b * lam_g * ratio * c.backscatter_total))
    if resid > 0:
        value -= scaled_ei_product(lam_h * resid * p.th_c / (lam_b * lam_g * margin))
    return _checked(value)


# --- intercept probabilities ------------------------------------------------

def ip_far(p: SystemParams) -> float:
    c = p.composites("eve")
    ratio = _ratio(c.xi * p.a2, c.c_coeff, p.th_e_far)
    if ratio is None:
        return 0.0
    lam_h, lam_g, lam_b = p.link_means("eve")
    delta = lam_h / (lam_b * lam_g * ratio * c.backscatter_total)
    return _checked(-scaled_ei_product(delta) * math.exp(-ratio * c.d_coeff / (lam_h * p.gamma)))


def ip_near(p: SystemParams, gain: str = "xi") -> float:
    """Intercept probability of ``x1``.

    ``gain="xi"`` uses the same numerator gain as the SINR model;
    ``gain="direct"`` keeps only the direct-branch product ``|mu_rE|^2 |mu_tS|^2``.
    """
    c = p.composites("eve")
    ratio = _ratio(_eve_x1_gain(p, gain) * p.a1, p.a2 * c.b_coeff + c.m_coeff, p.th_e_near)
    if ratio is None:
        return 0.0
    lam_h, lam_g, lam_b = p.link_means("eve")
    delta = lam_h / (lam_b * lam_g * ratio * c.backscatter_total)
    return _checked(-scaled_ei_product(delta) * math.exp(-ratio * c.d_coeff / (lam_h * p.gamma)))


def ip_bd(p: SystemParams, branch: str | None = None, n_nodes: int = DEFAULT_NODES) -> float:
    lam_h, lam_g, lam_b = p.link_means("eve")
    if _resolve_branch(p, branch) == "ideal":
        return _checked(product_exp_tail(p.th_e_bd / (p.beta ** 2 * p.gamma), lam_g, lam_b, n=n_nodes))
    c = p.composites("eve")
    margin = c.q_coeff - c.a_coeff * p.th_e_bd
    if margin <= 0:
        return 0.0
    x_zero = p.th_e_bd * c.d_coeff / (margin * p.gamma)
    value = product_exp_tail(x_zero, lam_g, lam_b, n=n_nodes)
    if c.residual_total > 0:
        cut_slope = margin / (p.th_e_bd * c.residual_total * lam_h)
        value -= product_exp_tail(x_zero, lam_g, lam_b, decay=cut_slope, n=n_nodes)
    return _checked(value)


# --- dispatch ---------------------------------------------------------------

def evaluate(metric: str, p: SystemParams, n_nodes: int = DEFAULT_NODES,
             ip_near_gain: str = "xi", branch: str | None = None) -> float:
    """Closed-form value of ``metric``; BD metrics pick the branch from ``p.iqi``."""
    if metric == "op_far":
        return op_far(p)
    if metric == "op_near":
        return op_near(p)
    if metric == "op_bd":
        return op_bd(p, branch, n_nodes)
    if metric == "ip_far":
        return ip_far(p)
    if metric == "ip_near":
        return ip_near(p, ip_near_gain)
    if metric == "ip_bd":
        return ip_bd(p, branch, n_nodes)
    raise ValueError(f"unknown metric {metric!r}")


def floor(metric: str, p: SystemParams, branch: str | None = None) -> float:
    """High-SNR limit of an outage metric."""
    if metric == "op_far":
        return op_far_asymptotic(p)
    if metric == "op_near":
        return op_near_asymptotic(p)
    if metric == "op_bd":
        return op_bd_asymptotic(p, branch)
    raise ValueError(f"no error floor defined for {metric!r}")


def diversity_order(curve, gamma_lo_db: float, gamma_hi_db: float) -> float:
    """Slope ``-d log10(OP) / d log10(gamma)`` between two SNRs given in dB.

    ``curve`` maps a linear SNR to an outage probability.
    """
    if not gamma_hi_db > gamma_lo_db:
        raise ValueError("need gamma_hi_db > gamma_lo_db")
    lo = curve(db_to_linear(gamma_lo_db))
    hi = curve(db_to_linear(gamma_hi_db))
    if lo == hi:
        return 0.0
    if lo <= 0 or hi <= 0:
        raise ValueError("outage probabilities must be positive to take logarithms")
    return -(math.log10(hi) - math.log10(lo)) / ((gamma_hi_db - gamma_lo_db) / 10.0)


def outage_curve(metric: str, p: SystemParams, n_nodes: int = DEFAULT_NODES):
    """``gamma -> OP`` for ``metric`` with everything else in ``p`` fixed."""
    return lambda gamma: evaluate(metric, replace(p, gamma=float(gamma)), n_nodes)


@dataclass(frozen=True)
class AnalyticIntermediates:
    """Threshold ratios and exponential-integral arguments behind the closed forms.

    Ratios are ``None`` where the corresponding event is infeasible; arguments
    are NaN when not defined.
    """

    far_ratio: float | None
    near_ratio: float | None
    near_ratio_ideal: float | None
    eve_x2_ratio: float | None
    eve_x1_ratio: float | None
    ei_args: dict = field(default_factory=dict)


def intermediates(p: SystemParams) -> AnalyticIntermediates:
    nan = float("nan")
    cf, cn, ce = p.composites("far"), p.composites("near"), p.composites("eve")
    far = _far_ratio(p)
    near, _ = _near_ratio(p)
    near_id, _ = _near_ratio_ideal(p)
    eve2 = _ratio(ce.xi * p.a2, ce.c_coeff, p.th_e_far)
    eve1 = _ratio(ce.xi * p.a1, p.a2 * ce.b_coeff + ce.m_coeff, p.th_e_near)

    def arg(receiver, ratio, k_tot):
        if ratio is None:
            return nan
        lam_h, lam_g, lam_b = p.link_means(receiver)
        return lam_h / (lam_b * lam_g * ratio * k_tot)

    args = {
        "op_far": arg("far", far, cf.backscatter_total),
        "op_near": arg("near", near, cn.backscatter_total),
        "op_bd_ideal": arg("near", near_id, p.beta ** 2),
        "ip_far": arg("eve", eve2, ce.backscatter_total),
        "ip_near": arg("eve", eve1, ce.backscatter_total),
    }
    margin = cn.q_coeff - cn.a_coeff * p.th_c
    lam_h, lam_g, lam_b = p.link_means("near")
    args["op_bd_residual"] = (lam_h * cn.residual_total * p.th_c / (lam_b * lam_g * margin)
                              if margin > 0 else nan)
    margin_e = ce.q_coeff - ce.a_coeff * p.th_e_bd
    lam_h, lam_g, lam_b = p.link_means("eve")
    args["ip_bd_residual"] = (lam_h * ce.residual_total * p.th_e_bd / (lam_b * lam_g * margin_e)
                              if margin_e > 0 else nan)
    return AnalyticIntermediates(far, near, near_id, eve2, eve1, args)

