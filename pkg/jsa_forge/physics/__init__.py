"""Physics Package.

Numerical kernels of jsa-forge:

- spectral_core: JSA construction on grids and Schmidt purity
- gaussian_analytics: closed forms for Gaussian inputs
- fock_space: oscillator mapping, squeeze and beam-splitter operators
- perturbative: moment-based purity formulas
- pump_optimizer: pump-ket optimization with random restarts
- dispersion: refractive-index models, (r, s) and GVD-curved JSAs
"""

from .dispersion import (
    build_jsa_gvd,
    build_jsa_linearized,
    central_poling_period,
    group_velocity,
    linear_mismatch,
    load_default_model,
    load_dispersion_model,
    phase_mismatch_full,
    purity_vs_r_sweep,
    rs_from_physics,
    sweep_taus_for_r,
    wavevector,
)
from .fock_space import (
    apply_beamsplitter,
    apply_squeeze,
    beamsplitter_operator,
    map_params,
    project_to_fock,
    squeeze_operator,
    squeezed_fidelity,
    squeezed_vacuum,
    synthesize_jsa_from_fock,
    synthesize_two_mode,
    two_mode_purity,
)
from .gaussian_analytics import (
    asymptotic_gaussian_purity,
    gaussian_correlation_matrix,
    gaussian_purity,
    separability_condition,
)
from .perturbative import (
    asymptotic_purity_general,
    moments,
    optimal_pump,
    optimal_pump_n,
    purity_small_theta,
    squeeze_moments,
)
from .pump_optimizer import (
    cost,
    gradient,
    optimize_pump,
    recover_physical_pump,
    survey_squeezed_optimality,
)
from .spectral_core import (
    adaptive_grids,
    build_jsa,
    default_grids,
    pmf_angle,
    purity_integral,
    purity_schmidt,
    schmidt_decompose,
    spectral_fn_from_name,
    to_frequency_conversion,
    window_grids,
)

__all__ = [
    "adaptive_grids",
    "apply_beamsplitter",
    "apply_squeeze",
    "asymptotic_gaussian_purity",
    "asymptotic_purity_general",
    "beamsplitter_operator",
    "build_jsa",
    "build_jsa_gvd",
    "build_jsa_linearized",
    "central_poling_period",
    "cost",
    "default_grids",
    "gaussian_correlation_matrix",
    "gaussian_purity",
    "gradient",
    "group_velocity",
    "linear_mismatch",
    "load_default_model",
    "load_dispersion_model",
    "map_params",
    "moments",
    "optimal_pump",
    "optimal_pump_n",
    "optimize_pump",
    "phase_mismatch_full",
    "pmf_angle",
    "project_to_fock",
    "purity_integral",
    "purity_schmidt",
    "purity_small_theta",
    "purity_vs_r_sweep",
    "recover_physical_pump",
    "rs_from_physics",
    "schmidt_decompose",
    "separability_condition",
    "spectral_fn_from_name",
    "squeeze_moments",
    "squeeze_operator",
    "squeezed_fidelity",
    "squeezed_vacuum",
    "survey_squeezed_optimality",
    "sweep_taus_for_r",
    "synthesize_jsa_from_fock",
    "synthesize_two_mode",
    "to_frequency_conversion",
    "two_mode_purity",
    "wavevector",
    "window_grids",
]
