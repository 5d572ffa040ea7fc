"""dexlab: distortion maps, near-isometry alignment, and weighted expansions.

Geometry side: composable near-isometric maps of R^d (slow twists, slides,
Euclidean motions), sampling-based distortion certificates, least-squares
rigid alignment, and degeneracy diagnostics for finite point sets; plus jet
fields with the Taylor compatibility residual.

Analysis side: recurrence coefficients and Gauss rules for the measures
exp(-2|x|^beta) dx, the scaled extremal-support numbers a_u, orthonormal
expansions with two-weight norm experiments, and Laguerre expansions on the
positive orthant.
"""

from .align import (DegeneracyReport, ProcrustesResult, RatioCheck, degeneracy_report,
                    pairwise_ratio_check, procrustes_align, simplex_volume)
from .errors import DexlabError
from .expansion import (ConditionReport, ConvergenceResult, ExpansionCoefficients,
                        condition_check, convergence_experiment, delta_u,
                        expansion_coefficients, partial_sum_eval, u_gamma,
                        weighted_norm)
from .jets import (MultiIndex, ResidualReport, WhitneyField, compatibility_residual,
                   jets_from_derivatives, jets_from_polynomial, mi_add, mi_factorial,
                   mi_order, multi_indices, taylor_poly_eval)
from .laguerre import (LaguerreCoefficients, ReconstructionReport, laguerre_coefficients,
                       laguerre_fn, laguerre_poly, reconstruction_report)
from .maps import (AngleProfile, BoxSampler, Composition, DistortionCertificate,
                   DistortionMap, Motion, Slide, SlowTwist, apply_map,
                   build_transition_twist, decay_check, distortion_certificate,
                   ratio_extremes)
from .motions import EuclideanMotion, rotation_from_quaternion
from .mrs import (InfiniteFiniteReport, MRSTable, infinite_finite_check, mrs_number,
                  ratio_diagnostic)
from .orthopoly import (QuadratureRule, RecurrenceTable, eval_orthopoly,
                        eval_orthopoly_all, gauss_from_recurrence,
                        recurrence_coefficients)
from .weights import AdmissibilityReport, WeightSpec, admissibility_report

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityReport", "AngleProfile", "BoxSampler", "Composition",
    "ConditionReport", "ConvergenceResult", "DegeneracyReport",
    "DexlabError", "DistortionCertificate", "DistortionMap",
    "EuclideanMotion", "ExpansionCoefficients", "InfiniteFiniteReport",
    "LaguerreCoefficients", "MRSTable", "Motion", "MultiIndex",
    "ProcrustesResult", "QuadratureRule", "RatioCheck", "ReconstructionReport",
    "RecurrenceTable", "ResidualReport", "Slide", "SlowTwist", "WeightSpec",
    "WhitneyField", "admissibility_report", "apply_map",
    "build_transition_twist", "compatibility_residual", "condition_check",
    "convergence_experiment", "decay_check", "degeneracy_report", "delta_u",
    "distortion_certificate", "eval_orthopoly", "eval_orthopoly_all",
    "expansion_coefficients", "gauss_from_recurrence", "infinite_finite_check",
    "jets_from_derivatives", "jets_from_polynomial", "laguerre_coefficients",
    "laguerre_fn", "laguerre_poly", "mi_add", "mi_factorial", "mi_order",
    "mrs_number", "multi_indices", "pairwise_ratio_check", "partial_sum_eval",
    "procrustes_align", "ratio_diagnostic", "ratio_extremes",
    "reconstruction_report", "recurrence_coefficients", "rotation_from_quaternion",
    "simplex_volume", "taylor_poly_eval", "u_gamma", "weighted_norm",
]
