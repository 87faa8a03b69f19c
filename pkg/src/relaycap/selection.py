"""Instantaneous link-selection rules and per-realization capacity."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import ChannelRealization

DIRECT = "direct"
RELAY = "relay"


@dataclass(frozen=True)
class LinkChoice:
    kind: str
    relay_index: int | None = None

    def __post_init__(self):
        if self.kind not in (DIRECT, RELAY):
            raise ValueError(f"unknown link kind {self.kind!r}")
        if self.kind == RELAY:
            if self.relay_index is None or self.relay_index < 1:
                raise ValueError("relay choice requires a 1-based relay_index")
        elif self.relay_index is not None:
            raise ValueError("direct choice carries no relay_index")

    @classmethod
    def direct(cls) -> "LinkChoice":
        return cls(DIRECT)

    @classmethod
    def relay(cls, index: int) -> "LinkChoice":
        return cls(RELAY, index)


def _argmax_choice(direct_snr: float, relay_snrs) -> LinkChoice:
    # Direct wins ties against any relay; among relays the lowest index wins.
    best = LinkChoice.direct()
    best_snr = direct_snr
    for i, snr in enumerate(relay_snrs, start=1):
        if snr > best_snr:
            best = LinkChoice.relay(i)
            best_snr = snr
    return best


def select_full_csi(r: ChannelRealization) -> LinkChoice:
    """Pick the link with the largest SNR among the direct SNR and all
    relay bottleneck SNRs min(first hop, second hop)."""
    bottlenecks = (r.bottleneck(i) for i in range(1, r.relay_count + 1))
    return _argmax_choice(r.snr_direct, bottlenecks)


def select_partial_csi(r: ChannelRealization) -> LinkChoice:
    """Pick the link with the largest SNR among the direct SNR and the
    second-hop SNRs only; first hops are not observed by this rule."""
    return _argmax_choice(r.snr_direct, r.snr_second_hop)


def instantaneous_capacity(choice: LinkChoice, r: ChannelRealization) -> float:
    """Capacity in bits/s/Hz realized by ``choice`` on realization ``r``.

    A relay path pays the 1/2 prelog for its two channel uses and is limited
    by its bottleneck SNR even when the selection rule only saw the second
    hop.  The direct link uses the channel once.
    """
    if choice.kind == DIRECT:
        return math.log2(1.0 + r.snr_direct)
    return 0.5 * math.log2(1.0 + r.bottleneck(choice.relay_index))
