"""Numerical toolkit for almost complex structures on flat 4-manifolds.

Covers pointwise 2-form algebra, spectral calculus on the flat torus and
the Kodaira-Thurston nilmanifold, J-invariant and J-anti-invariant
cohomology, and a Calabi-Yau type solver for compatible symplectic forms.
"""

__version__ = "0.1.0"

from .acs import (
    AcsField,
    anti_preserving,
    from_fls,
    lee_jalpha,
    nijenhuis_sup,
    standard,
    tame_split,
    tame_to_compatible_candidate,
    tilde_jalpha,
    wellbalanced_defect,
)
from .cohomology import (
    CohomSummary,
    RankReport,
    h_minus,
    intersection_estimate_check,
    kodaira_table,
    lee_hminus_check,
    numerical_rank,
    prop_linear_check,
    semicontinuity_scan,
    verify_direct_sum,
)
from .cy import CyProblem, CySolution, SolverConfig, continuation, normalize_F, solve_cy
from .fiber import (
    ASD_BASIS,
    BETA,
    JBETA,
    OMEGA,
    SD_BASIS,
    acs_from_unit_sd_form,
    j_on_anti,
    split_g,
    split_j,
)
from .hodge import close_ji_form, hodge_decompose, invert_dstar_dplus, verify_dim4_lemma
from .models import FormField, KTGrid, TorusGrid, cup, d_spectral, delta_spectral

__all__ = [
    "ASD_BASIS",
    "BETA",
    "JBETA",
    "OMEGA",
    "SD_BASIS",
    "AcsField",
    "CohomSummary",
    "CyProblem",
    "CySolution",
    "FormField",
    "KTGrid",
    "RankReport",
    "SolverConfig",
    "TorusGrid",
    "acs_from_unit_sd_form",
    "anti_preserving",
    "close_ji_form",
    "continuation",
    "cup",
    "d_spectral",
    "delta_spectral",
    "from_fls",
    "h_minus",
    "hodge_decompose",
    "intersection_estimate_check",
    "invert_dstar_dplus",
    "j_on_anti",
    "kodaira_table",
    "lee_hminus_check",
    "lee_jalpha",
    "nijenhuis_sup",
    "normalize_F",
    "numerical_rank",
    "prop_linear_check",
    "semicontinuity_scan",
    "solve_cy",
    "split_g",
    "split_j",
    "standard",
    "tame_split",
    "tame_to_compatible_candidate",
    "tilde_jalpha",
    "verify_dim4_lemma",
    "verify_direct_sum",
    "wellbalanced_defect",
]
