"""Signed subset sums over link means for maxima of independent exponentials.

The CDF of a maximum of independent exponential variables expands by
inclusion-exclusion into sums over index subsets, each subset contributing
e^(-snr * sum of inverse means).  This module enumerates those subsets and
builds the two index universes the capacity expressions draw from: relay
bottleneck means (optionally joined by the direct link) and the
partial-CSI candidate means (direct link plus second hops).

Index 0 is reserved for the direct link throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import TYPE_CHECKING, Iterator, Sequence

if TYPE_CHECKING:
    from .channel import NetworkConfig

MAX_UNIVERSE = 20

Universe = Sequence[tuple[int, float]]


@dataclass(frozen=True)
class SubsetTerm:
    """One inclusion-exclusion term: member indices and their summed inverse means."""

    indices: tuple[int, ...]
    combined_inverse_mean: float

    @property
    def size(self) -> int:
        return len(self.indices)


def subsets_of_size(means: Universe, size: int) -> Iterator[SubsetTerm]:
    """Yield every ``size``-element subset of the (index, mean) universe.

    Iteration order is lexicographic on the sorted indices and therefore
    deterministic.  An out-of-range ``size`` yields nothing, which encodes
    a vanishing sum.
    """
    if len(means) > MAX_UNIVERSE:
        raise ValueError(
            f"universe of {len(means)} links exceeds the exact-enumeration cap "
            f"of {MAX_UNIVERSE}"
        )
    if size < 1 or size > len(means):
        return
    ordered = sorted(means)
    for combo in combinations(ordered, size):
        indices = tuple(i for i, _ in combo)
        inverse = math.fsum(1.0 / m for _, m in combo)
        yield SubsetTerm(indices, inverse)


def all_subsets(means: Universe) -> Iterator[SubsetTerm]:
    """Yield every non-empty subset, smallest sizes first."""
    for size in range(1, len(means) + 1):
        yield from subsets_of_size(means, size)


def bottleneck_universe(
    config: "NetworkConfig",
    exclude: int | None = None,
    include_direct: bool = False,
) -> list[tuple[int, float]]:
    """Universe of relay bottleneck means, optionally joined by the direct link.

    ``exclude`` drops one relay (1-based).  With ``include_direct`` the
    direct-link mean enters as index 0.
    """
    if exclude is not None and not 1 <= exclude <= config.relay_count:
        raise IndexError(f"relay index {exclude} out of range 1..{config.relay_count}")
    universe: list[tuple[int, float]] = []
    if include_direct:
        universe.append((0, config.mean_snr_direct))
    universe.extend(
        (i, config.bottleneck_mean(i))
        for i in range(1, config.relay_count + 1)
        if i != exclude
    )
    return universe


def partial_csi_universe(
    config: "NetworkConfig", exclude: int | None = None
) -> list[tuple[int, float]]:
    """Universe of the SNR means the partial-CSI rule observes.

    Index 0 carries the direct-link mean, index i the second hop of relay i.
    ``exclude`` drops any one of 0..M.
    """
    if exclude is not None and not 0 <= exclude <= config.relay_count:
        raise IndexError(f"link index {exclude} out of range 0..{config.relay_count}")
    universe: list[tuple[int, float]] = []
    if exclude != 0:
        universe.append((0, config.mean_snr_direct))
    universe.extend(
        (i, config.mean_snr_second_hop[i - 1])
        for i in range(1, config.relay_count + 1)
        if i != exclude
    )
    return universe


def excluded_universe(
    config: "NetworkConfig",
    exclude: int | None = None,
    include_direct: bool = False,
) -> list[tuple[int, float]]:
    """Build the index/mean universe feeding ``subsets_of_size``.

    Without ``include_direct``: relay bottleneck means minus the excluded
    relay.  With it: the partial-CSI candidate means (direct plus second
    hops) minus the excluded index.
    """
    if include_direct:
        return partial_csi_universe(config, exclude)
    return bottleneck_universe(config, exclude)
