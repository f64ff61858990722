"""Sharp Hardy constants for homogeneous weights Phi(x/|x|) / |x|^{2 kappa}."""
from .alpha_mu import (AlphaMuCurve, GNConstant, alpha_of_mu, asymptotic_slope, build_curve,
                       euler_lagrange_residual, gn_constant, linear_threshold, mu_of_alpha,
                       mu_of_alpha_fd)
from .constants import (HardyConstants, c_kappa, nu0, tau_fractional, tau_theorem2,
                        tau_theorem4, tau_theorem_main)
from .errors import (ConvergenceError, DivergenceError, DomainError, EvaluationError, HardyError,
                     NotInLpError, SingularPointError, UsageError)
from .rearrangement import (HomogeneousWeight, RearrangedWeight, hardy_littlewood_check,
                            level_set_measure, numeric_rearrangement_check, rearranged_weight)
from .spectral import (EigenResult, SpectralBasis, del_bound_check, laplace_beltrami_eigenvalue,
                       lowest_eigenvalue, lowest_eigenvalue_s2, negativity_check)
from .sphere import QuadratureRule, axisym_rule, integrate, surface_area
from .verifier import (HardyReport, TrialFunction, dirichlet_energy, fractional_gaussian_check,
                       hardy_gap, lemma_decomposition_check, sharpness_probe, weighted_l2)
from .weights import (CapIndicator, Constant, CosineSeries, PolarPower, Tabulated, TabulatedS2,
                      WeightSpec, admissible, evaluate, lp_norm)

__version__ = "0.1.0"

__all__ = [
    "AlphaMuCurve",
    "GNConstant",
    "alpha_of_mu",
    "asymptotic_slope",
    "build_curve",
    "euler_lagrange_residual",
    "gn_constant",
    "linear_threshold",
    "mu_of_alpha",
    "mu_of_alpha_fd",
    "HardyConstants",
    "c_kappa",
    "nu0",
    "tau_fractional",
    "tau_theorem2",
    "tau_theorem4",
    "tau_theorem_main",
    "ConvergenceError",
    "DivergenceError",
    "DomainError",
    "EvaluationError",
    "HardyError",
    "NotInLpError",
    "SingularPointError",
    "UsageError",
    "HomogeneousWeight",
    "RearrangedWeight",
    "hardy_littlewood_check",
    "level_set_measure",
    "numeric_rearrangement_check",
    "rearranged_weight",
    "EigenResult",
    "SpectralBasis",
    "del_bound_check",
    "laplace_beltrami_eigenvalue",
    "lowest_eigenvalue",
    "lowest_eigenvalue_s2",
    "negativity_check",
    "QuadratureRule",
    "axisym_rule",
    "integrate",
    "surface_area",
    "HardyReport",
    "TrialFunction",
    "dirichlet_energy",
    "fractional_gaussian_check",
    "hardy_gap",
    "lemma_decomposition_check",
    "sharpness_probe",
    "weighted_l2",
    "CapIndicator",
    "Constant",
    "CosineSeries",
    "PolarPower",
    "Tabulated",
    "TabulatedS2",
    "WeightSpec",
    "admissible",
    "evaluate",
    "lp_norm",
]

