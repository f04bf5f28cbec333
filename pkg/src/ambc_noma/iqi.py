"""I/Q imbalance coefficients and the per-receiver composite scalars.

A front end with amplitude mismatch ``epsilon`` and phase mismatch ``phi``
maps a baseband signal ``x`` to ``mu * x + nu * conj(x)``.  The transmit and
receive chains use opposite phase signs.  Every SINR in the system only sees
squared moduli of these coefficients, collected in :class:`ReceiverComposites`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class MismatchParams:
    """Amplitude (unitless, 1 = ideal) and phase (radians) mismatch of one chain."""

    epsilon: float = 1.0
    phi: float = 0.0

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValueError(f"epsilon must be positive and finite, got {self.epsilon!r}")
        if not math.isfinite(self.phi):
            raise ValueError(f"phi must be finite, got {self.phi!r}")

    @classmethod
    def from_degrees(cls, epsilon: float, phi_deg: float) -> "MismatchParams":
        return cls(epsilon, math.radians(phi_deg))

    @property
    def is_ideal(self) -> bool:
        return self.epsilon == 1.0 and self.phi == 0.0


IDEAL = MismatchParams()


@dataclass(frozen=True)
class IqPair:
    mu: complex
    nu: complex

    @property
    def mu2(self) -> float:
        return abs(self.mu) ** 2

    @property
    def nu2(self) -> float:
        return abs(self.nu) ** 2

    @property
    def power(self) -> float:
        """``|mu|^2 + |nu|^2``, equal to ``(1 + epsilon^2) / 2``."""
        return self.mu2 + self.nu2


def tx_coefficients(m: MismatchParams) -> IqPair:
    rot = m.epsilon * cmath.exp(1j * m.phi)
    return IqPair(0.5 * (1 + rot), 0.5 * (1 - rot.conjugate()))


def rx_coefficients(m: MismatchParams) -> IqPair:
    rot = m.epsilon * cmath.exp(-1j * m.phi)
    return IqPair(0.5 * (1 + rot), 0.5 * (1 - rot.conjugate()))


@dataclass(frozen=True)
class ReceiverComposites:
    """Scalars that weight each term of a receiver's SINRs.

    ``xi``
        gain on the wanted source signal.
    ``a_coeff`` / ``q_coeff``
        backscatter power landing on the image / direct branch of ``c(t)``.
    ``b_coeff``, ``m_coeff``
        residual self-interference left after cancelling the source signal.
    ``c_coeff``
        interference seen while decoding ``x2`` (``a1 * xi + m_coeff``).
    ``d_coeff``
        receiver noise gain.
    """

    xi: float
    a_coeff: float
    q_coeff: float
    b_coeff: float
    c_coeff: float
    d_coeff: float
    m_coeff: float

    @property
    def backscatter_total(self) -> float:
        return self.a_coeff + self.q_coeff

    @property
    def residual_total(self) -> float:
        return self.b_coeff + self.m_coeff


def receiver_composites(tx_s: IqPair, tx_bd: IqPair, rx_bd: IqPair, rx_i: IqPair,
                        a1: float, beta: float) -> ReceiverComposites:
    """Reduce the four coefficient pairs on the path S -> (BD) -> i to composites."""
    if not 0 < beta <= 1:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    if not 0 < a1 < 1:
        raise ValueError(f"a1 must lie in (0, 1), got {a1}")
    b2 = beta * beta
    src = tx_s.power
    # |z*| = |z|, so the conjugated factors reduce to plain squared moduli
    a_coeff = (rx_i.mu2 * b2 * rx_bd.mu2 * tx_bd.nu2 * src
               + rx_i.mu2 * b2 * rx_bd.nu2 * tx_bd.nu2 * src
               + rx_i.nu2 * b2 * rx_bd.mu2 * tx_bd.mu2 * src
               + rx_i.nu2 * b2 * rx_bd.nu2 * tx_bd.mu2 * src)
    q_coeff = (rx_i.mu2 * b2 * rx_bd.mu2 * tx_bd.mu2 * src
               + rx_i.mu2 * b2 * rx_bd.nu2 * tx_bd.mu2 * src
               + rx_i.nu2 * b2 * rx_bd.mu2 * tx_bd.nu2 * src
               + rx_i.nu2 * b2 * rx_bd.nu2 * tx_bd.nu2 * src)
    xi = rx_i.mu2 * tx_s.mu2 + rx_i.nu2 * tx_s.nu2
    b_coeff = abs(rx_i.mu * tx_s.mu - 1) ** 2 + rx_i.nu2 * tx_s.nu2
    m_coeff = rx_i.mu2 * tx_s.nu2 + rx_i.nu2 * tx_s.mu2
    return ReceiverComposites(
        xi=xi,
        a_coeff=a_coeff,
        q_coeff=q_coeff,
        b_coeff=b_coeff,
        c_coeff=a1 * xi + m_coeff,
        d_coeff=rx_i.power,
        m_coeff=m_coeff,
    )


RECEIVERS = ("near", "far", "eve")


@dataclass(frozen=True)
class IqiProfile:
    """Mismatch levels for every chain in the network.

    The source and the backscatter device transmit; the backscatter device and
    the three receivers (near user, far user, eavesdropper) receive.
    """

    source_tx: MismatchParams = field(default=IDEAL)
    bd_tx: MismatchParams = field(default=IDEAL)
    bd_rx: MismatchParams = field(default=IDEAL)
    near_rx: MismatchParams = field(default=IDEAL)
    far_rx: MismatchParams = field(default=IDEAL)
    eve_rx: MismatchParams = field(default=IDEAL)

    @classmethod
    def ideal(cls) -> "IqiProfile":
        return cls()

    @classmethod
    def uniform(cls, epsilon_t: float, phi_t_deg: float,
                epsilon_r: float | None = None, phi_r_deg: float | None = None) -> "IqiProfile":
        """Same TX levels on every transmitter and same RX levels on every receiver."""
        tx = MismatchParams.from_degrees(epsilon_t, phi_t_deg)
        rx = MismatchParams.from_degrees(
            epsilon_t if epsilon_r is None else epsilon_r,
            phi_t_deg if phi_r_deg is None else phi_r_deg,
        )
        return cls(source_tx=tx, bd_tx=tx, bd_rx=rx, near_rx=rx, far_rx=rx, eve_rx=rx)

    @property
    def is_ideal(self) -> bool:
        return all(getattr(self, name).is_ideal for name in self.__dataclass_fields__)

    def receiver_chain(self, receiver: str) -> MismatchParams:
        if receiver not in RECEIVERS:
            raise ValueError(f"unknown receiver {receiver!r}; expected one of {RECEIVERS}")
        return getattr(self, f"{receiver}_rx")

    def composites(self, receiver: str, a1: float, beta: float) -> ReceiverComposites:
        return receiver_composites(
            tx_coefficients(self.source_tx),
            tx_coefficients(self.bd_tx),
            rx_coefficients(self.bd_rx),
            rx_coefficients(self.receiver_chain(receiver)),
            a1,
            beta,
        )
