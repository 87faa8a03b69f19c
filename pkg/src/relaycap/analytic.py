"""Closed-form ergodic capacities of the selection schemes.

Averaging log2(1 + SNR) against the selection-conditioned densities turns
every term into a product e^x * E1(x); all of those go through
``exp_e1_scaled``, never the naive product, because small means push e^x
past the overflow limit.  Signed inclusion-exclusion sums are accumulated
with ``math.fsum``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import NetworkConfig
from .expint import exp_e1_scaled
from .subsets import all_subsets, bottleneck_universe, partial_csi_universe

LOG2_E = 1.0 / math.log(2.0)

ANALYTIC = "analytic"
MONTECARLO = "montecarlo"
QUADRATURE = "quadrature"
_METHODS = (ANALYTIC, MONTECARLO, QUADRATURE)


@dataclass(frozen=True)
class CapacityEstimate:
    """Ergodic capacity in bits/s/Hz with the method that produced it."""

    value: float
    method: str
    std_error: float = 0.0
    samples: int = 0

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not math.isfinite(self.value) or self.value < 0.0:
            raise ValueError(f"capacity must be finite and >= 0, got {self.value}")
        if self.method != MONTECARLO and (self.std_error != 0.0 or self.samples != 0):
            raise ValueError("std_error/samples are only meaningful for montecarlo")
        if self.std_error < 0.0 or self.samples < 0:
            raise ValueError("std_error and samples must be >= 0")


def _sign(term) -> float:
    # Universes whose subsets carry (-1)^(size-1); the direct-part sum over
    # relay bottlenecks carries (-1)^size instead (handled at the call site).
    return 1.0 if term.size % 2 else -1.0


def capacity_full_csi(config: NetworkConfig) -> CapacityEstimate:
    """Ergodic capacity when selection sees every link's instantaneous SNR."""
    relay_part = []
    for i in range(1, config.relay_count + 1):
        inv_bottleneck = 1.0 / config.bottleneck_mean(i)
        relay_part.append(exp_e1_scaled(inv_bottleneck) * LOG2_E)
        universe = bottleneck_universe(config, exclude=i, include_direct=True)
        for term in all_subsets(universe):
            rate = inv_bottleneck + term.combined_inverse_mean
            relay_part.append(
                -_sign(term) * (LOG2_E * inv_bottleneck) * exp_e1_scaled(rate) / rate
            )
    inv_direct = 1.0 / config.mean_snr_direct
    direct_part = [exp_e1_scaled(inv_direct) * LOG2_E]
    for term in all_subsets(bottleneck_universe(config)):
        rate = inv_direct + term.combined_inverse_mean
        direct_part.append(
            -_sign(term) * (LOG2_E * inv_direct) * exp_e1_scaled(rate) / rate
        )
    value = 0.5 * math.fsum(relay_part) + math.fsum(direct_part)
    return CapacityEstimate(value, ANALYTIC)


def capacity_partial_csi(config: NetworkConfig) -> CapacityEstimate:
    """Ergodic capacity when selection sees only second-hop and direct SNRs.

    Each relay term merges the two win orderings (winning second hop above
    or below its first hop); their combined weight reduces to a single
    inverse-rate factor against the second-hop mean.
    """
    relay_part = []
    for i in range(1, config.relay_count + 1):
        inv_bottleneck = 1.0 / config.bottleneck_mean(i)
        inv_second = 1.0 / config.mean_snr_second_hop[i - 1]
        relay_part.append(exp_e1_scaled(inv_bottleneck) * LOG2_E)
        for term in all_subsets(partial_csi_universe(config, exclude=i)):
            rate = inv_bottleneck + term.combined_inverse_mean
            weight = 1.0 / (inv_second + term.combined_inverse_mean)
            relay_part.append(
                -_sign(term) * (LOG2_E * inv_second) * weight * exp_e1_scaled(rate)
            )
    inv_direct = 1.0 / config.mean_snr_direct
    direct_part = [exp_e1_scaled(inv_direct) * LOG2_E]
    for term in all_subsets(partial_csi_universe(config, exclude=0)):
        rate = inv_direct + term.combined_inverse_mean
        direct_part.append(
            -_sign(term) * (LOG2_E * inv_direct) * exp_e1_scaled(rate) / rate
        )
    value = 0.5 * math.fsum(relay_part) + math.fsum(direct_part)
    return CapacityEstimate(value, ANALYTIC)


def capacity_direct_only(config: NetworkConfig) -> CapacityEstimate:
    """Non-cooperative baseline: always transmit on the direct link."""
    value = exp_e1_scaled(1.0 / config.mean_snr_direct) * LOG2_E
    return CapacityEstimate(value, ANALYTIC)


def _check_mean(mean_snr: float) -> float:
    mean_snr = float(mean_snr)
    if not math.isfinite(mean_snr) or mean_snr <= 0.0:
        raise ValueError(f"mean_snr must be positive, got {mean_snr}")
    return mean_snr


def capacity_full_iid_single(mean_snr: float) -> CapacityEstimate:
    """Single relay, all links sharing one mean: full-CSI capacity in closed form."""
    g = _check_mean(mean_snr)
    value = LOG2_E * math.fsum(
        [
            exp_e1_scaled(1.0 / g),
            0.5 * exp_e1_scaled(2.0 / g),
            -(2.0 / 3.0) * exp_e1_scaled(3.0 / g),
        ]
    )
    return CapacityEstimate(value, ANALYTIC)


def capacity_partial_iid_single(mean_snr: float) -> CapacityEstimate:
    """Single relay, all links sharing one mean: partial-CSI capacity in closed form."""
    g = _check_mean(mean_snr)
    value = LOG2_E * math.fsum(
        [exp_e1_scaled(1.0 / g), -0.25 * exp_e1_scaled(3.0 / g)]
    )
    return CapacityEstimate(value, ANALYTIC)


def capacity_gain_iid(mean_snr: float) -> float:
    """Capacity lost by partial CSI versus full CSI (single relay, identical means)."""
    g = _check_mean(mean_snr)
    return LOG2_E * math.fsum(
        [0.5 * exp_e1_scaled(2.0 / g), -(5.0 / 12.0) * exp_e1_scaled(3.0 / g)]
    )


def capacity_gain_high_snr(mean_snr: float) -> float:
    """High-SNR approximation of ``capacity_gain_iid``: log2(e)/12 * ln(1 + mean/2)."""
    g = _check_mean(mean_snr)
    return (LOG2_E / 12.0) * math.log1p(g / 2.0)
