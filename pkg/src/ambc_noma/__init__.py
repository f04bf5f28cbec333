"""Outage and intercept probabilities of an ambient-backscatter NOMA downlink
with transceiver I/Q imbalance: closed forms, Monte Carlo and a CLI harness."""

from .analytic import (INTERCEPT_METRICS, METRICS, OUTAGE_METRICS, diversity_order, evaluate,
                       feasibility, floor, intermediates, ip_bd, ip_far, ip_near, op_bd,
                       op_bd_asymptotic, op_bd_ideal, op_bd_nonideal, op_far, op_far_asymptotic,
                       op_near, op_near_asymptotic)
from .channel import FadingSample, SystemParams, sample_fading
from .iqi import IqiProfile, MismatchParams, ReceiverComposites, receiver_composites
from .montecarlo import MetricEstimate, estimate_ip, estimate_op_bd, estimate_op_far, estimate_op_near, simulate, sweep
from .sinr import sinr_c, sinr_x1, sinr_x2

__version__ = "0.1.0"
