"""Gaussian three-mode states and entanglement distribution with a separable carrier."""

from .compensation import (
    apply_loss,
    apply_phase_noise,
    degauss_hot_squeezing,
    invert_loss,
    invert_phase_noise,
    loss_sweep,
    phase_noise_sweep,
)
from .network import (
    beamsplitter,
    distribute,
    duan_value,
    optimize_distribution_phase,
    phase_shift,
    prepare_three_mode,
    tensor,
    trace_out,
)
from .states import SingleModeSpec, apply_preparation_loss, db_to_variance, make_state, variance_to_db
from .symplectic import (
    covariance,
    is_physical,
    partial_transpose,
    ppt_value,
    ppt_values,
    symplectic_eigenvalues,
    symplectic_form,
)
from .tomography import SETTINGS, monte_carlo_ppt, reconstruct, sample_block

__version__ = "0.1.0"
