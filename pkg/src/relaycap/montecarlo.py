"""Stochastic estimator of the ergodic capacities.

Reproducibility contract: realization k owns the uniform draws at counter
positions [k*(2M+1), (k+1)*(2M+1)) of a single Philox stream keyed by the
plan seed, so the estimate is a pure function of the plan no matter how
the work is chunked or how many workers run the chunks.  Chunks have a
fixed size and the final reduction walks them in index order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox

from .analytic import MONTECARLO, CapacityEstimate
from .channel import NetworkConfig

FULL = "full"
PARTIAL = "partial"
DIRECT = "direct"
_SCHEMES = (FULL, PARTIAL, DIRECT)

# Multiple of 4 so every chunk starts on a Philox 128-bit counter block
# regardless of the draws-per-realization width.
CHUNK_SIZE = 1 << 14


@dataclass(frozen=True)
class SimulationPlan:
    config: NetworkConfig
    scheme: str
    samples: int
    seed: int

    def __post_init__(self):
        if self.scheme not in _SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.samples < 1:
            raise ValueError(f"samples must be >= 1, got {self.samples}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit an unsigned 64-bit integer")


def _chunk_draws(plan: SimulationPlan, start: int, count: int):
    """Exponential SNR draws for realizations [start, start+count)."""
    m = plan.config.relay_count
    width = 2 * m + 1
    bit_generator = Philox(key=plan.seed)
    offset = start * width
    assert offset % 4 == 0, "chunk start must align with Philox counter blocks"
    bit_generator.advance(offset // 4)
    u = 1.0 - Generator(bit_generator).random((count, width))
    draws = -np.log(u)
    first = draws[:, :m] * plan.config.mean_snr_first_hop
    second = draws[:, m : 2 * m] * plan.config.mean_snr_second_hop
    direct = draws[:, 2 * m] * plan.config.mean_snr_direct
    return first, second, direct


def _chunk_winner(plan: SimulationPlan, start: int, count: int):
    """Per-realization winner index (0 = direct, i = relay i) and capacities."""
    first, second, direct = _chunk_draws(plan, start, count)
    if plan.scheme == DIRECT:
        return None, np.log2(1.0 + direct)
    bottleneck = np.minimum(first, second)
    observed = bottleneck if plan.scheme == FULL else second
    candidates = np.column_stack([direct, observed])
    # argmax keeps the first of equal maxima: direct wins ties, then lowest relay.
    winner = candidates.argmax(axis=1)
    rows = np.arange(count)
    relay_cap = 0.5 * np.log2(1.0 + bottleneck[rows, np.maximum(winner - 1, 0)])
    capacity = np.where(winner == 0, np.log2(1.0 + direct), relay_cap)
    return winner, capacity


def _chunks(samples: int):
    return [
        (start, min(CHUNK_SIZE, samples - start))
        for start in range(0, samples, CHUNK_SIZE)
    ]


def _map_chunks(fn, plan: SimulationPlan, workers: int):
    chunks = _chunks(plan.samples)
    if workers <= 1:
        return [fn(plan, start, count) for start, count in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda c: fn(plan, *c), chunks))


def _capacity_moments(plan: SimulationPlan, start: int, count: int):
    _, capacity = _chunk_winner(plan, start, count)
    return float(capacity.sum()), float(np.dot(capacity, capacity))


def estimate_capacity(plan: SimulationPlan, workers: int = 1) -> CapacityEstimate:
    """Sample mean of the instantaneous capacity with its standard error.

    Identical plans give bit-identical estimates for any ``workers``.
    """
    moments = _map_chunks(_capacity_moments, plan, workers)
    n = plan.samples
    total = math.fsum(s for s, _ in moments)
    total_sq = math.fsum(q for _, q in moments)
    mean = total / n
    if n > 1:
        variance = max(total_sq - n * mean * mean, 0.0) / (n - 1)
        std_error = math.sqrt(variance / n)
    else:
        std_error = 0.0
    return CapacityEstimate(mean, MONTECARLO, std_error=std_error, samples=n)


def _selection_counts(plan: SimulationPlan, start: int, count: int):
    winner, _ = _chunk_winner(plan, start, count)
    return np.bincount(winner, minlength=plan.config.relay_count + 1)


def empirical_selection_distribution(
    plan: SimulationPlan, workers: int = 1
) -> list[float]:
    """Observed frequency of each link choice: entry 0 is the direct link,
    entry i relay i.  Frequencies sum to 1 exactly."""
    if plan.scheme == DIRECT:
        raise ValueError("selection distribution requires scheme 'full' or 'partial'")
    counts = sum(_map_chunks(_selection_counts, plan, workers))
    return [int(c) / plan.samples for c in counts]
