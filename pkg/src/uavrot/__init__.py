"""Inter-cell interference mitigation by yawing UAV-mounted planar arrays."""

__version__ = "0.1.0"

from .beamforming import (  # noqa: E402
    GridSpec,
    gain_bruteforce,
    gain_closed_form,
    gain_vs_rotation_curve,
    ground_pattern,
    mrt_weights,
    rotated_gain,
)
from .channel import ArrayConfig, RadioConfig, channel, path_loss, steering_1d  # noqa: E402
from .geometry import LinkGeometry, Position3D, RotationVector, link_geometry, rotate  # noqa: E402
from .network import RateReport, Scenario, interference_power, sinr, sum_rate  # noqa: E402
from .optimizer import (  # noqa: E402
    BudgetExceeded,
    OptimizerConfig,
    OptResult,
    angle_grid,
    aur,
    exhaustive_search,
    fixed_baseline,
)
