"""Numerical-integration cross-check of the closed-form capacities.

The selection-conditioned expectations reduce to one-dimensional integrals
of log2(1 + x) against exponential densities and CDF factors.  Those
reduced forms are integrated here with adaptive quadrature, independently
of the E1-based closed forms, so the two routes check each other.

The CDF factors come from :mod:`relaycap.channel` and therefore exercise
the inclusion-exclusion expansion rather than the product form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

from .analytic import LOG2_E, QUADRATURE, CapacityEstimate
from .channel import (
    NetworkConfig,
    cdf_max_all,
    cdf_max_excluding,
    cdf_partial_max_excluding,
)
from .subsets import all_subsets, partial_csi_universe


@dataclass(frozen=True)
class QuadratureSettings:
    relative_tolerance: float = 1e-9
    absolute_tolerance: float = 1e-12
    max_subdivisions: int = 2000

    def __post_init__(self):
        if self.relative_tolerance <= 0.0 or self.absolute_tolerance <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 10:
            raise ValueError("max_subdivisions must be >= 10")


DEFAULT_SETTINGS = QuadratureSettings()


class QuadratureError(RuntimeError):
    """Adaptive integration failed to reach the requested tolerance."""

    def __init__(self, message: str, error_estimate: float):
        super().__init__(f"{message} (achieved error estimate {error_estimate:.3e})")
        self.error_estimate = error_estimate


def _integrate(
    fn, lo: float, hi: float, settings: QuadratureSettings, breakpoints=None
) -> float:
    out = quad(
        fn,
        lo,
        hi,
        epsabs=settings.absolute_tolerance,
        epsrel=settings.relative_tolerance,
        limit=settings.max_subdivisions,
        points=breakpoints,
        full_output=1,
    )
    value, error = out[0], out[1]
    if len(out) > 3:
        raise QuadratureError(f"quadrature did not converge: {out[3]}", error)
    return value


def truncation_point(largest_mean: float, absolute_tolerance: float) -> float:
    """Upper integration limit with a guaranteed tail below ``absolute_tolerance``.

    Every integrand here is bounded by log2(1+x) * (1/m) e^(-x/m) with m the
    slowest-decaying mean, and ln(1+x) <= x gives the closed tail bound
    log2(e) * (U + m) * e^(-U/m).  Doubling U until that bound passes makes
    the truncation error certified rather than heuristic.
    """
    m = largest_mean
    upper = 50.0 * m
    while LOG2_E * (upper + m) * math.exp(-upper / m) > absolute_tolerance:
        upper *= 2.0
        if not math.isfinite(upper):
            raise QuadratureError("could not bound the integrand tail", math.inf)
    return upper


def _full_csi_integrands(config: NetworkConfig):
    """(weight, integrand, density mean) triples summing to the full-CSI capacity.

    The density mean governs the integrand's decay and hence its own
    truncation point.
    """
    integrands = []
    inv_direct = 1.0 / config.mean_snr_direct

    def relay_integrand(i):
        inv_b = 1.0 / config.bottleneck_mean(i)

        def fn(x):
            return (
                math.log2(1.0 + x)
                * inv_b
                * math.exp(-x * inv_b)
                * cdf_max_excluding(config, i, x)
                * -math.expm1(-x * inv_direct)
            )

        return fn

    for i in range(1, config.relay_count + 1):
        integrands.append((0.5, relay_integrand(i), config.bottleneck_mean(i)))

    def direct_integrand(x):
        return (
            math.log2(1.0 + x)
            * inv_direct
            * math.exp(-x * inv_direct)
            * cdf_max_all(config, x)
        )

    integrands.append((1.0, direct_integrand, config.mean_snr_direct))
    return integrands


def relay_selection_tail(config: NetworkConfig, i: int, x: float) -> float:
    """Probability that relay i's second hop wins the partial-CSI contest
    with a value above ``x``; the inner integral of the relay term, reduced
    to closed form."""
    inv_second = 1.0 / config.mean_snr_second_hop[i - 1]
    terms = [math.exp(-x * inv_second)]
    for term in all_subsets(partial_csi_universe(config, exclude=i)):
        sign = 1.0 if term.size % 2 else -1.0
        rate = inv_second + term.combined_inverse_mean
        terms.append(-sign * inv_second / rate * math.exp(-x * rate))
    return math.fsum(terms)


def _partial_csi_integrands(config: NetworkConfig):
    """(weight, integrand, density mean) triples summing to the partial-CSI capacity."""
    integrands = []
    inv_direct = 1.0 / config.mean_snr_direct

    def first_hop_limited(i):
        # Second hop wins the contest but the first hop is the bottleneck.
        inv_first = 1.0 / config.mean_snr_first_hop[i - 1]

        def fn(x):
            return (
                math.log2(1.0 + x)
                * inv_first
                * math.exp(-x * inv_first)
                * relay_selection_tail(config, i, x)
            )

        return fn

    def second_hop_limited(i):
        # Second hop wins the contest and is itself the bottleneck.
        inv_first = 1.0 / config.mean_snr_first_hop[i - 1]
        inv_second = 1.0 / config.mean_snr_second_hop[i - 1]

        def fn(x):
            return (
                math.log2(1.0 + x)
                * inv_second
                * math.exp(-x * inv_second)
                * cdf_partial_max_excluding(config, i, x)
                * math.exp(-x * inv_first)
            )

        return fn

    for i in range(1, config.relay_count + 1):
        integrands.append((0.5, first_hop_limited(i), config.mean_snr_first_hop[i - 1]))
        integrands.append((0.5, second_hop_limited(i), config.mean_snr_second_hop[i - 1]))

    def direct_integrand(x):
        return (
            math.log2(1.0 + x)
            * inv_direct
            * math.exp(-x * inv_direct)
            * cdf_partial_max_excluding(config, 0, x)
        )

    integrands.append((1.0, direct_integrand, config.mean_snr_direct))
    return integrands


def _scale_breakpoints(config: NetworkConfig, upper: float) -> list[float]:
    # Every link mean is a scale on which some CDF factor turns over; handing
    # them to the adaptive rule keeps widely separated scales resolvable.
    scales = {
        config.mean_snr_direct,
        *config.mean_snr_first_hop,
        *config.mean_snr_second_hop,
        *(config.bottleneck_mean(i) for i in range(1, config.relay_count + 1)),
    }
    return sorted(s for s in scales if 0.0 < s < upper)


def _integrate_weighted(
    integrands,
    config: NetworkConfig,
    settings: QuadratureSettings,
    truncation_scale: float,
) -> float:
    pieces = []
    for weight, fn, decay_mean in integrands:
        upper = truncation_scale * truncation_point(decay_mean, settings.absolute_tolerance)
        pieces.append(
            weight * _integrate(fn, 0.0, upper, settings, _scale_breakpoints(config, upper))
        )
    return math.fsum(pieces)


def capacity_full_csi_quadrature(
    config: NetworkConfig,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    truncation_scale: float = 1.0,
) -> CapacityEstimate:
    """Full-CSI ergodic capacity by adaptive quadrature of the reduced integrals."""
    value = _integrate_weighted(
        _full_csi_integrands(config), config, settings, truncation_scale
    )
    return CapacityEstimate(value, QUADRATURE)


def capacity_partial_csi_quadrature(
    config: NetworkConfig,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
    truncation_scale: float = 1.0,
) -> CapacityEstimate:
    """Partial-CSI ergodic capacity by adaptive quadrature of the reduced integrals."""
    value = _integrate_weighted(
        _partial_csi_integrands(config), config, settings, truncation_scale
    )
    return CapacityEstimate(value, QUADRATURE)


def expected_log_capacity(
    cdf,
    prelog: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """E[prelog * log2(1 + X)] for X >= 0 given only its CDF.

    Integration by parts gives prelog * log2(e) * integral of
    (1 - F(x)) / (1 + x); the integral is extended by interval doubling
    until the added tail piece falls below the absolute tolerance.
    """
    def fn(x):
        return (1.0 - cdf(x)) / (1.0 + x)

    total = _integrate(fn, 0.0, 1e3, settings)
    lo, hi = 1e3, 2e3
    for _ in range(60):
        piece = _integrate(fn, lo, hi, settings)
        total += piece
        if abs(piece) < settings.absolute_tolerance:
            return prelog * LOG2_E * total
        lo, hi = hi, 2.0 * hi
    raise QuadratureError("tail of expected-log integral did not die off", abs(piece))
