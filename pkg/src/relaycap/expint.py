"""Exponential integral E1 and its overflow-safe scaled form.

Every closed-form average of log2(1 + SNR) over exponential fading reduces
to terms of the shape e^x * E1(x).  Computing that product naively overflows
as soon as x is large (i.e. the mean SNR is small), so the scaled form
``exp_e1_scaled`` is the workhorse here and the plain ``e1`` is derived
from it where possible.

Evaluation strategy: a power series around 0 for x < 1 and a modified
Lentz continued fraction for e^x * E1(x) above.  Each regime converges
fast exactly where the other one degrades.
"""

from __future__ import annotations

import math

EULER_GAMMA = 0.57721566490153286061

_SWITCH = 1.0
_SERIES_RTOL = 1e-16
_CF_RTOL = 1e-15
_MAX_TERMS = 500
_TINY = 1e-300


def _validate(x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"E1 argument must be a finite positive real, got {x!r}")
    return x


def _e1_series(x: float) -> float:
    # E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k * k!)
    total = -EULER_GAMMA - math.log(x)
    term = -x  # k = 1
    total -= term
    for k in range(2, _MAX_TERMS):
        term *= -x * (k - 1) / (k * k)
        total -= term
        if abs(term) < _SERIES_RTOL * abs(total):
            return total
    raise ArithmeticError(f"E1 series failed to converge at x={x}")


def _scaled_continued_fraction(x: float) -> float:
    # e^x E1(x) = 1 / (x + 1 - 1/(x + 3 - 4/(x + 5 - 9/(...)))), evaluated
    # with the modified Lentz algorithm.
    f = x + 1.0
    if f == 0.0:
        f = _TINY
    c = f
    d = 0.0
    for n in range(1, _MAX_TERMS):
        a = -float(n * n)
        b = x + 2.0 * n + 1.0
        d = b + a * d
        if d == 0.0:
            d = _TINY
        c = b + a / c
        if c == 0.0:
            c = _TINY
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < _CF_RTOL:
            return 1.0 / f
    raise ArithmeticError(f"E1 continued fraction failed to converge at x={x}")


def exp_e1_scaled(x: float) -> float:
    """Return e^x * E1(x) without overflow for any representable x > 0."""
    x = _validate(x)
    if x < _SWITCH:
        return math.exp(x) * _e1_series(x)
    return _scaled_continued_fraction(x)


def e1(x: float) -> float:
    """Return E1(x) = integral of t^-1 e^(-t x) over t in [1, inf).

    Underflows gracefully to 0.0 for large x instead of raising.
    """
    x = _validate(x)
    if x < _SWITCH:
        return _e1_series(x)
    return math.exp(-x) * _scaled_continued_fraction(x)


def e1_approx_high_snr(x: float) -> float:
    """High-SNR logarithmic approximation e^(-x) * ln(1 + 1/x) of E1(x)."""
    x = _validate(x)
    return math.exp(-x) * math.log1p(1.0 / x)
