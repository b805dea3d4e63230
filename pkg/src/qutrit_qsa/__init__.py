"""Numerical Bayesian state assignment for a three-level quantum system."""
from .assignment import (
    AssignmentResult,
    Povm,
    SmearingKernel,
    assign_state,
    convexity_check,
    large_N_state,
    predictive,
    prior_state,
    smear_povm,
    von_neumann_povm,
)
from .bloch_geometry import (
    PureStateParams,
    ball_condition,
    bounding_box,
    chi_B,
    chi_eigen_oracle,
    cubic_condition_value,
    planar_section,
    pure_state_bloch,
)
from .posterior import (
    FrequencyTriple,
    IntegrationConfig,
    MomentEstimate,
    compute_moments,
    evidence_ratio,
    likelihood,
)
from .priors import Prior, default_gaussian_prior, marginal_density_grid, prior_density
from .su_basis import bloch_from_rho, gellmann_basis, rho_from_bloch
from .symmetry import (
    canonical_triple,
    cycle_relations,
    swap13_relations,
    vanishing_components,
)

__version__ = "0.1.0"
