"""Collective emission of point dipoles coupled through a d-dimensional field."""
__version__ = "0.1.0"

from .coupling import (  # noqa: E402
    CouplingResult,
    MediumParams,
    NormalizationUndefined,
    collective_coupling,
    coupling_matrix,
    coupling_sweep,
    dielectric_rescale,
    dyadic_greens,
    far_field_coupling,
    gamma_self,
    max_self_rate,
    near_field_exponent,
    reference_rate,
    scalar_greens,
)
from .dynamics import (  # noqa: E402
    NumericalContractError,
    collective_modes,
    evolve,
    lindblad_rhs,
    max_step,
    prepare_state,
    single_excitation_state,
)
from .geometry import ConfigurationError, Dipole, orientation_from_angles  # noqa: E402
