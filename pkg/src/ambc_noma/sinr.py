"""Instantaneous SINRs along the SIC chain ``x2 -> x1 -> c(t)``.

All functions broadcast over numpy arrays held in a :class:`FadingSample`.
"""

from __future__ import annotations

import numpy as np

from .channel import FadingSample, SystemParams
from .iqi import ReceiverComposites


def _resolve(receiver, c, p):
    return p.composites(receiver) if c is None else c


def sinr_x2(receiver: str, s: FadingSample, c: ReceiverComposites | None, p: SystemParams):
    """SINR for decoding the far user's symbol ``x2`` at ``receiver``."""
    c = _resolve(receiver, c, p)
    rho = s.direct(receiver)
    cascade = s.via_bd(receiver)
    g = p.gamma
    num = c.xi * p.a2 * rho * g
    den = cascade * c.backscatter_total * g + rho * c.c_coeff * g + c.d_coeff
    return num / den


def sinr_far_x2(s: FadingSample, c: ReceiverComposites | None, p: SystemParams):
    return sinr_x2("far", s, c, p)


def sinr_x1(receiver: str, s: FadingSample, c: ReceiverComposites | None, p: SystemParams):
    """SINR for ``x1`` once ``x2`` has been cancelled (up to IQI residue)."""
    c = _resolve(receiver, c, p)
    rho = s.direct(receiver)
    cascade = s.via_bd(receiver)
    g = p.gamma
    num = c.xi * p.a1 * rho * g
    den = (cascade * c.backscatter_total * g
           + rho * (p.a2 * c.b_coeff + c.m_coeff) * g
           + c.d_coeff)
    return num / den


def sinr_c(receiver: str, s: FadingSample, c: ReceiverComposites | None, p: SystemParams):
    """SINR of the backscattered symbol after both source symbols are cancelled."""
    c = _resolve(receiver, c, p)
    rho = s.direct(receiver)
    cascade = s.via_bd(receiver)
    g = p.gamma
    num = c.q_coeff * cascade * g
    den = cascade * c.a_coeff * g + rho * c.residual_total * g + c.d_coeff
    return num / den


def sinr_all(receiver: str, s: FadingSample, p: SystemParams) -> dict[str, np.ndarray]:
    c = p.composites(receiver)
    return {
        "x2": sinr_x2(receiver, s, c, p),
        "x1": sinr_x1(receiver, s, c, p),
        "c": sinr_c(receiver, s, c, p),
    }
