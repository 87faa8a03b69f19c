"""Ergodic capacity of transmission-link selection in dual-hop DF relay networks."""

from .analytic import (
    CapacityEstimate,
    capacity_direct_only,
    capacity_full_csi,
    capacity_full_iid_single,
    capacity_gain_high_snr,
    capacity_gain_iid,
    capacity_partial_csi,
    capacity_partial_iid_single,
)
from .channel import (
    ChannelRealization,
    NetworkConfig,
    cdf_bottleneck,
    cdf_max_all,
    cdf_max_excluding,
    cdf_partial_max_excluding,
    preset_fig3,
    preset_iid,
    sample_realization,
)
from .expint import e1, e1_approx_high_snr, exp_e1_scaled
from .montecarlo import SimulationPlan, empirical_selection_distribution, estimate_capacity
from .quadrature import (
    QuadratureError,
    QuadratureSettings,
    capacity_full_csi_quadrature,
    capacity_partial_csi_quadrature,
    expected_log_capacity,
)
from .selection import LinkChoice, instantaneous_capacity, select_full_csi, select_partial_csi
from .subsets import SubsetTerm, excluded_universe, subsets_of_size

__version__ = "0.1.0"
