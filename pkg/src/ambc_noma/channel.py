"""System parameters, Rayleigh fading statistics and product-of-exponentials integrals."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .iqi import IqiProfile, ReceiverComposites
from .special import bessel_k0, chebyshev_integral, scaled_ei_product

# Which channel-variance index belongs to which link.  Inferred from which
# variances show up in each receiver's outage/intercept expressions; change
# it here only.
LINK_VARIANCE_INDEX = {
    "h_near": 1,
    "h_far": 2,
    "h_eve": 3,
    "g_near": 4,
    "g_far": 5,
    "g_eve": 6,
    "h_bd": 7,
}

# receiver -> (direct S->i link, BD->i link)
RECEIVER_LINKS = {
    "near": ("h_near", "g_near"),
    "far": ("h_far", "g_far"),
    "eve": ("h_eve", "g_eve"),
}

DEFAULT_LAMBDAS = (1.0, 0.1, 1.0, 0.5, 0.8, 0.2, 0.1)


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0) if np.ndim(db) else 10.0 ** (db / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class SystemParams:
    """Full parameterization of the downlink; ``gamma`` is the linear transmit SNR."""

    a1: float = 0.1
    beta: float = 0.1
    lambdas: tuple = DEFAULT_LAMBDAS
    gamma: float = 100.0
    th_x2: float = 1.0
    th_x1: float = 2.0
    th_c: float = 0.1
    th_e_far: float = 1.2
    th_e_near: float = 1.0
    th_e_bd: float = 0.8
    iqi: IqiProfile = field(default_factory=IqiProfile.ideal)

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))
        if not 0 < self.a1 < 0.5:
            raise ValueError(f"need 0 < a1 < a2 = 1 - a1, got a1={self.a1}")
        if not 0 < self.beta <= 1:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")
        if len(self.lambdas) != 7 or min(self.lambdas) <= 0:
            raise ValueError(f"need seven positive channel variances, got {self.lambdas}")
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be positive and finite, got {self.gamma}")
        for name in ("th_x2", "th_x1", "th_c", "th_e_far", "th_e_near", "th_e_bd"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")

    @property
    def a2(self) -> float:
        return 1.0 - self.a1

    @property
    def snr_db(self) -> float:
        return float(linear_to_db(self.gamma))

    def with_snr_db(self, snr_db: float) -> "SystemParams":
        return replace(self, gamma=db_to_linear(float(snr_db)))

    def ideal(self) -> "SystemParams":
        return replace(self, iqi=IqiProfile.ideal())

    def variance(self, link: str) -> float:
        return self.lambdas[LINK_VARIANCE_INDEX[link] - 1]

    def link_means(self, receiver: str) -> tuple[float, float, float]:
        """(direct-link mean, BD->receiver mean, S->BD mean) for ``receiver``."""
        direct, bd = RECEIVER_LINKS[receiver]
        return self.variance(direct), self.variance(bd), self.variance("h_bd")

    def composites(self, receiver: str) -> ReceiverComposites:
        return self.iqi.composites(receiver, self.a1, self.beta)


@dataclass(frozen=True)
class FadingSample:
    """Channel power gains for one (or a vector of) fading realization(s)."""

    rho_dn: object
    rho_df: object
    rho_e: object
    rho_g_dn: object
    rho_g_df: object
    rho_g_e: object
    rho_b: object

    def direct(self, receiver: str):
        return {"near": self.rho_dn, "far": self.rho_df, "eve": self.rho_e}[receiver]

    def via_bd(self, receiver: str):
        g = {"near": self.rho_g_dn, "far": self.rho_g_df, "eve": self.rho_g_e}[receiver]
        return g * self.rho_b


def sample_fading(p: SystemParams, rng: np.random.Generator, size=None) -> FadingSample:
    """Draw exponential power gains; the draw order is fixed for reproducibility."""
    draw = lambda link: rng.exponential(p.variance(link), size)  # noqa: E731
    return FadingSample(
        rho_dn=draw("h_near"),
        rho_df=draw("h_far"),
        rho_e=draw("h_eve"),
        rho_g_dn=draw("g_near"),
        rho_g_df=draw("g_far"),
        rho_g_e=draw("g_eve"),
        rho_b=draw("h_bd"),
    )


# --- product of two independent exponentials -------------------------------
#
# With means la, lb the product X has density 2 K0(2 sqrt(x / c)) / c, c = la lb.
# Quadratures below run in v = 2 sqrt(x / c), where the integrand v K0(v) is
# bounded, and warp [0, 1] onto the v-interval with a smoothstep so the
# integrand vanishes at the rule's endpoints.

_V_CAP = 45.0  # int_45^inf v K0(v) dv < 1e-18
_EXP_CUT = 45.0


def _check_means(la, lb):
    if not (la > 0 and lb > 0):
        raise ValueError(f"exponential means must be positive, got {la}, {lb}")


def product_exp_pdf(y, la: float, lb: float):
    _check_means(la, lb)
    y_arr = np.asarray(y, dtype=float)
    if not np.all(y_arr > 0):
        raise ValueError("product_exp_pdf requires y > 0")
    c = la * lb
    return 2.0 / c * bessel_k0(2.0 * np.sqrt(y_arr / c))


def product_exp_laplace(s: float, la: float, lb: float) -> float:
    """``E[exp(-s X)]`` for the product ``X`` in closed form."""
    _check_means(la, lb)
    if s < 0:
        raise ValueError(f"decay rate must be nonnegative, got {s}")
    if s == 0:
        return 1.0
    return -scaled_ei_product(1.0 / (s * la * lb))


def _v_integral(v_lo: float, width: float, decay_c: float, n: int) -> float:
    # int_{v_lo}^{v_lo+width} v K0(v) exp(-decay_c (v^2 - v_lo^2) / 4) dv
    if width <= 0:
        return 0.0

    def integrand(u):
        w = u * u * (3.0 - 2.0 * u)
        v = v_lo + width * w
        dv = width * 6.0 * u * (1.0 - u)
        return v * bessel_k0(v) * np.exp(-0.25 * decay_c * (v * v - v_lo * v_lo)) * dv

    return chebyshev_integral(integrand, 0.0, 1.0, n)


def product_exp_partial(upper: float, la: float, lb: float, decay: float = 0.0,
                        n: int = 200) -> float:
    """``int_0^upper f_X(x) exp(-decay x) dx`` by Gauss-Chebyshev quadrature."""
    _check_means(la, lb)
    if upper <= 0:
        return 0.0
    c = la * lb
    v_hi = min(2.0 * math.sqrt(upper / c), _V_CAP)
    if decay > 0:
        v_hi = min(v_hi, math.sqrt(4.0 * _EXP_CUT / (decay * c)))
    return _v_integral(0.0, v_hi, decay * c, n)


def product_exp_tail(z: float, la: float, lb: float, decay: float = 0.0,
                     n: int = 200) -> float:
    """``int_z^inf f_X(x) exp(-decay (x - z)) dx``; with ``decay=0`` this is ``Pr(X > z)``."""
    _check_means(la, lb)
    if z < 0:
        raise ValueError(f"z must be nonnegative, got {z}")
    if decay < 0:
        raise ValueError(f"decay rate must be nonnegative, got {decay}")
    c = la * lb
    if decay * z <= 1.0 and z <= c:
        # closed-form Laplace transform minus the truncated head
        head = product_exp_partial(z, la, lb, decay, n)
        return math.exp(decay * z) * (product_exp_laplace(decay, la, lb) - head)
    v_lo = 2.0 * math.sqrt(z / c)
    width = _V_CAP
    if decay > 0:
        # smallest width with decay*c*(2 v_lo w + w^2)/4 >= cut
        k = 4.0 * _EXP_CUT / (decay * c)
        width = min(width, k / (v_lo + math.sqrt(v_lo * v_lo + k)))
    return _v_integral(v_lo, width, decay * c, n)
