import math

import numpy as np
import pytest
from scipy.integrate import quad

from relaycap.analytic import (
    capacity_full_csi,
    capacity_full_iid_single,
    capacity_partial_csi,
    capacity_partial_iid_single,
)
from relaycap.channel import NetworkConfig, preset_fig3, preset_iid
from relaycap.montecarlo import SimulationPlan, estimate_capacity
from relaycap.quadrature import (
    QuadratureError,
    QuadratureSettings,
    _full_csi_integrands,
    _partial_csi_integrands,
    capacity_full_csi_quadrature,
    capacity_partial_csi_quadrature,
    expected_log_capacity,
    relay_selection_tail,
    truncation_point,
)


def test_full_iid_single_relay_agrees_with_closed_form():
    value = capacity_full_csi_quadrature(preset_iid(10.0, 1)).value
    assert value == pytest.approx(capacity_full_iid_single(10.0).value, rel=1e-8)


def test_partial_iid_single_relay_agrees_with_closed_form():
    value = capacity_partial_csi_quadrature(preset_iid(10.0, 1)).value
    assert value == pytest.approx(capacity_partial_iid_single(10.0).value, rel=1e-8)


def test_full_fig3_agrees_with_general_form():
    config = preset_fig3(100.0, 2)
    quad_value = capacity_full_csi_quadrature(config).value
    assert quad_value == pytest.approx(capacity_full_csi(config).value, rel=1e-6)


def test_partial_random_inid_agrees_with_general_form():
    rng = np.random.default_rng(23)
    draw = lambda n: tuple(10.0 ** rng.uniform(-1, 3, n))
    config = NetworkConfig(3, draw(3), draw(3), float(draw(1)[0]))
    quad_value = capacity_partial_csi_quadrature(config).value
    assert quad_value == pytest.approx(capacity_partial_csi(config).value, rel=1e-6)


def test_direct_dominant_config_approaches_direct_baseline():
    config = NetworkConfig(1, (1e-4,), (1e-4,), 20.0)
    value = capacity_full_csi_quadrature(config).value
    rate = 1.0 / 20.0
    baseline = expected_log_capacity(lambda x: -math.expm1(-x * rate), 1.0)
    assert value == pytest.approx(baseline, rel=1e-3)


def test_partial_vanishes_with_all_means():
    config = preset_iid(1e-7, 2)
    assert capacity_partial_csi_quadrature(config).value < 1e-6


def test_agreement_with_monte_carlo():
    config = preset_fig3(31.622776601683793, 2)  # 15 dB
    mc_full = estimate_capacity(SimulationPlan(config, "full", 1_000_000, 17))
    mc_partial = estimate_capacity(SimulationPlan(config, "partial", 1_000_000, 18))
    assert abs(capacity_full_csi_quadrature(config).value - mc_full.value) <= (
        3 * mc_full.std_error
    )
    assert abs(capacity_partial_csi_quadrature(config).value - mc_partial.value) <= (
        3 * mc_partial.std_error
    )


class TestExpectedLogCapacity:
    def test_exponential_mean_one(self):
        value = expected_log_capacity(lambda x: -math.expm1(-x), 1.0)
        assert value == pytest.approx(0.8603473822708859, rel=1e-9)

    def test_degenerate_cdf_gives_zero(self):
        assert expected_log_capacity(lambda x: 1.0, 1.0) == 0.0

    def test_prelog_is_linear(self):
        cdf = lambda x: -math.expm1(-x / 3.0)
        full = expected_log_capacity(cdf, 1.0)
        half = expected_log_capacity(cdf, 0.5)
        assert half == pytest.approx(0.5 * full, rel=1e-12)


class TestReducedInnerIntegral:
    def test_matches_numerical_inner_quadrature(self):
        rng = np.random.default_rng(9)
        draw = lambda n: tuple(10.0 ** rng.uniform(-1, 2, n))
        config = NetworkConfig(3, draw(3), draw(3), float(draw(1)[0]))
        from relaycap.channel import cdf_partial_max_excluding

        for _ in range(20):
            i = int(rng.integers(1, 4))
            x = float(10.0 ** rng.uniform(-2, 2))
            mean = config.mean_snr_second_hop[i - 1]

            def integrand(y):
                return (
                    (1.0 / mean)
                    * math.exp(-y / mean)
                    * cdf_partial_max_excluding(config, i, y)
                )

            direct, _ = quad(integrand, x, np.inf, epsabs=1e-13, epsrel=1e-12)
            assert relay_selection_tail(config, i, x) == pytest.approx(direct, abs=1e-10)


class TestTruncation:
    def test_certified_tail_bound(self):
        for mean in (0.01, 1.0, 300.0):
            upper = truncation_point(mean, 1e-12)
            bound = (1 / math.log(2)) * (upper + mean) * math.exp(-upper / mean)
            assert bound <= 1e-12

    def test_doubling_truncation_points_changes_nothing(self):
        config = preset_fig3(50.0, 2)
        settings = QuadratureSettings()
        for fn in (capacity_full_csi_quadrature, capacity_partial_csi_quadrature):
            base = fn(config, settings, truncation_scale=1.0).value
            doubled = fn(config, settings, truncation_scale=2.0).value
            assert abs(base - doubled) < settings.absolute_tolerance


class TestIntegrandsFiniteAtOrigin:
    def test_full(self):
        config = preset_fig3(10.0, 2)
        for _, fn, _ in _full_csi_integrands(config):
            assert fn(0.0) == 0.0
            assert math.isfinite(fn(1e-12))

    def test_partial(self):
        config = preset_fig3(10.0, 2)
        for _, fn, _ in _partial_csi_integrands(config):
            assert fn(0.0) == 0.0
            assert math.isfinite(fn(1e-12))


def test_settings_validation():
    with pytest.raises(ValueError):
        QuadratureSettings(relative_tolerance=0.0)
    with pytest.raises(ValueError):
        QuadratureSettings(absolute_tolerance=-1e-9)
    with pytest.raises(ValueError):
        QuadratureSettings(max_subdivisions=5)


def test_non_convergence_reports_achieved_error():
    # A pathologically oscillatory integrand cannot converge in 10 intervals.
    settings = QuadratureSettings(
        relative_tolerance=1e-13, absolute_tolerance=1e-15, max_subdivisions=10
    )
    from relaycap.quadrature import _integrate

    with pytest.raises(QuadratureError) as info:
        _integrate(lambda x: math.sin(1000.0 * x) / (1e-3 + x), 0.0, 200.0, settings)
    assert info.value.error_estimate > 0.0
