"""Separability phase diagrams of three-mode Gaussian states under symmetric
parametric amplification, amplitude damping and thermal noise."""

__version__ = "0.1.0"

from .errors import (BracketError, ConfigError, DomainError, NumericalFailureError,
                     PiecewiseMismatchError, ResonanceError, SingularSystemError,
                     TrisepError)
from .gaussian import (CovarianceMatrix, is_valid_cm, min_eigenvalue_hermitian,
                       partial_transpose, pt_sign_matrix, pt_symplectic_form,
                       symplectic_form)
from .evolution import (BathParams, ComplexMoments, PropagatorPair, SymmetricEntries,
                        SymmetricFamily, build_symmetric_gamma, complex_to_real_cm,
                        coupling_matrix, evolve_complex_cm, propagator_equal_damping,
                        propagator_real_eta, steady_alpha_beta, steady_residuals,
                        steady_symmetric, symmetric_entries, vacuum_moments)
from .separability import (Classification, FeasibilityResult, SchurPair, StateClass,
                           bisep_boundary, classify, classify_family,
                           feasibility_slacks, fully_sep_boundary,
                           fully_separable_test, intersection_condition,
                           ppt_min_eig, ppt_symmetric_condition,
                           ppt_symmetric_value, ppt_test, schur_complements)
from .oracles import (GridConfig, OdeConfig, boundary_bisection, grid_feasibility,
                      rk4_propagator)
