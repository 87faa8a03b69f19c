"""Fading model of the dual-hop relay network.

A network of M decode-and-forward relays plus a direct link gives 2M+1
independent Rayleigh-faded links, so 2M+1 independent exponential SNRs.
This module holds the configuration (the mean SNRs, linear scale), draws
channel realizations, evaluates the analytical CDFs of the various link
maxima, and provides the two experiment presets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .subsets import all_subsets, bottleneck_universe, partial_csi_universe


@dataclass(frozen=True)
class NetworkConfig:
    """Mean SNRs of all 2M+1 links, linear scale."""

    relay_count: int
    mean_snr_first_hop: tuple[float, ...]
    mean_snr_second_hop: tuple[float, ...]
    mean_snr_direct: float

    def __post_init__(self):
        object.__setattr__(
            self, "mean_snr_first_hop", tuple(float(m) for m in self.mean_snr_first_hop)
        )
        object.__setattr__(
            self, "mean_snr_second_hop", tuple(float(m) for m in self.mean_snr_second_hop)
        )
        object.__setattr__(self, "mean_snr_direct", float(self.mean_snr_direct))
        if self.relay_count < 1:
            raise ValueError(f"relay_count must be >= 1, got {self.relay_count}")
        for name in ("mean_snr_first_hop", "mean_snr_second_hop"):
            means = getattr(self, name)
            if len(means) != self.relay_count:
                raise ValueError(
                    f"{name} has {len(means)} entries for {self.relay_count} relays"
                )
        for m in (*self.mean_snr_first_hop, *self.mean_snr_second_hop, self.mean_snr_direct):
            if not math.isfinite(m) or m <= 0.0:
                raise ValueError(f"mean SNRs must be finite and positive, got {m}")

    def bottleneck_mean(self, i: int) -> float:
        """Mean of min(first hop, second hop) of relay i (1-based)."""
        if not 1 <= i <= self.relay_count:
            raise IndexError(f"relay index {i} out of range 1..{self.relay_count}")
        return 1.0 / (
            1.0 / self.mean_snr_first_hop[i - 1] + 1.0 / self.mean_snr_second_hop[i - 1]
        )


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of all 2M+1 instantaneous SNRs."""

    snr_first_hop: tuple[float, ...]
    snr_second_hop: tuple[float, ...]
    snr_direct: float

    def __post_init__(self):
        object.__setattr__(self, "snr_first_hop", tuple(float(g) for g in self.snr_first_hop))
        object.__setattr__(self, "snr_second_hop", tuple(float(g) for g in self.snr_second_hop))
        object.__setattr__(self, "snr_direct", float(self.snr_direct))
        if len(self.snr_first_hop) != len(self.snr_second_hop):
            raise ValueError("hop SNR lists must have equal length")
        for g in (*self.snr_first_hop, *self.snr_second_hop, self.snr_direct):
            if not math.isfinite(g) or g < 0.0:
                raise ValueError(f"instantaneous SNRs must be finite and >= 0, got {g}")

    @property
    def relay_count(self) -> int:
        return len(self.snr_first_hop)

    def bottleneck(self, i: int) -> float:
        """Instantaneous bottleneck SNR min of both hops of relay i (1-based)."""
        return min(self.snr_first_hop[i - 1], self.snr_second_hop[i - 1])


def _check_snr(snr: float) -> float:
    snr = float(snr)
    if math.isnan(snr) or snr < 0.0:
        raise ValueError(f"SNR argument must be >= 0, got {snr!r}")
    return snr


def _iex_cdf_of_max(universe, snr: float) -> float:
    # Inclusion-exclusion expansion of prod(1 - e^(-snr/mean)); the empty
    # universe is the max over nothing, i.e. the constant 0, whose CDF is 1.
    terms = [1.0]
    for term in all_subsets(universe):
        sign = -1.0 if term.size % 2 else 1.0
        terms.append(sign * math.exp(-snr * term.combined_inverse_mean))
    return math.fsum(terms)


def cdf_bottleneck(config: NetworkConfig, i: int, snr: float) -> float:
    """CDF of relay i's bottleneck SNR: 1 - e^(-snr/bottleneck mean)."""
    snr = _check_snr(snr)
    return -math.expm1(-snr / config.bottleneck_mean(i))


def cdf_max_all(config: NetworkConfig, snr: float) -> float:
    """CDF of the maximum bottleneck SNR over all relays, via inclusion-exclusion."""
    snr = _check_snr(snr)
    return _iex_cdf_of_max(bottleneck_universe(config), snr)


def cdf_max_excluding(config: NetworkConfig, i: int, snr: float) -> float:
    """CDF of the maximum bottleneck SNR over all relays except relay i.

    For a single-relay network the excluded maximum is over an empty set,
    so the CDF is identically 1.
    """
    snr = _check_snr(snr)
    return _iex_cdf_of_max(bottleneck_universe(config, exclude=i), snr)


def cdf_partial_max_excluding(config: NetworkConfig, link: int, snr: float) -> float:
    """CDF of the max of the partial-CSI candidate SNRs, link ``link`` left out.

    Candidates are the direct SNR (index 0) and the second-hop SNRs
    (indices 1..M); ``link`` may be any of 0..M.
    """
    snr = _check_snr(snr)
    return _iex_cdf_of_max(partial_csi_universe(config, exclude=link), snr)


def sample_realization(config: NetworkConfig, rng) -> ChannelRealization:
    """Draw one channel realization from ``rng`` (a numpy Generator).

    Consumes exactly 2M+1 uniforms in the order first hops, second hops,
    direct, and maps each through the inverse CDF x = -mean * ln(u) with
    u on (0, 1].
    """
    m = config.relay_count
    u = 1.0 - np.asarray(rng.random(2 * m + 1))
    draws = -np.log(u)
    return ChannelRealization(
        snr_first_hop=tuple(draws[:m] * config.mean_snr_first_hop),
        snr_second_hop=tuple(draws[m : 2 * m] * config.mean_snr_second_hop),
        snr_direct=draws[2 * m] * config.mean_snr_direct,
    )


def preset_iid(mean_snr: float, relay_count: int) -> NetworkConfig:
    """All 2M+1 links share one mean SNR."""
    mean_snr = float(mean_snr)
    if not math.isfinite(mean_snr) or mean_snr <= 0.0:
        raise ValueError(f"mean_snr must be positive, got {mean_snr}")
    return NetworkConfig(
        relay_count=relay_count,
        mean_snr_first_hop=(mean_snr,) * relay_count,
        mean_snr_second_hop=(mean_snr,) * relay_count,
        mean_snr_direct=mean_snr,
    )


def preset_fig3(mean_snr: float, relay_count: int) -> NetworkConfig:
    """Non-identical configuration: first hop mean/i, second hop mean/(2i), direct mean/100."""
    mean_snr = float(mean_snr)
    if not math.isfinite(mean_snr) or mean_snr <= 0.0:
        raise ValueError(f"mean_snr must be positive, got {mean_snr}")
    return NetworkConfig(
        relay_count=relay_count,
        mean_snr_first_hop=tuple(mean_snr / i for i in range(1, relay_count + 1)),
        mean_snr_second_hop=tuple(mean_snr / (2 * i) for i in range(1, relay_count + 1)),
        mean_snr_direct=mean_snr / 100.0,
    )
