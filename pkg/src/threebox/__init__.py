"""Exact simulation of the quantum three-box problem in a three-rail interferometer."""

from .railspace import (
    RailProjector,
    RailState,
    generalized_states,
    inner,
    make_state,
    preset,
    swapped_states,
    three_box_states,
)
from .weakcalc import (
    BeamsplitterSpec,
    WeakValueResult,
    abl_probability,
    balance_pre_state,
    joint_weak_probability,
    post_state_from_bs,
    pre_state_from_bs,
    weak_probabilities,
    weak_value,
)
from .pointer import (
    DisplacementCoupling,
    GaussianPointer,
    PolarizationCoupling,
    PostSelectedPointer,
    ShiftResult,
    apply_polarizer,
    evolve_and_postselect,
    gaussian_overlap,
    gaussian_x_moment,
    mean_shift,
    mean_shift_numeric,
    pointer_moments,
    polarization_rotation,
)
from .experiment import (
    DataSeries,
    PixelScale,
    ScanSpec,
    VisibilityModel,
    apply_visibility,
    fig2_profiles,
    scan_single_rail,
    two_pointer_scan,
)

__version__ = "0.1.0"
