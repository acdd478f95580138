"""Simulation and verification lab for branching Levy processes at criticality.

The package builds branching Levy processes from their characteristic triplet
(sigma^2, a, Lambda), computes the additive / derivative / truncated
martingales, realizes the spine change of measure, samples Levy processes
conditioned to stay positive through renewal-function h-transforms, and
evaluates the offspring-tail integral test (condition H) that decides whether
the derivative martingale has a non-trivial limit.
"""

from .points import PointSequence, canonicalize, translate, exp_sum, xexp_sum, exp_xexp_sum
from .measure import (
    BranchingMeasure,
    ZeroClusterFamily,
    IntegralValue,
    ConditionHReport,
    AdmissibilityReport,
    check_admissibility,
    integrate,
    condition_h,
    scale_pushforward,
    measure_from_dict,
    measure_to_dict,
)
from .cumulant import (
    BranchingTriplet,
    kappa,
    kappa_derivatives,
    BoundaryReport,
    is_boundary_case,
    solve_theta_star,
    to_boundary_case,
    NoCriticalParameterError,
    triplet_from_dict,
    triplet_to_dict,
)
from .spine import SpineLevyLaw, derive_spine_law, psi, LevyPath, simulate_path, PathConfig
from .renewal import RenewalModel, RenewalConfig, renewal_model, harmonicity_check
from .conditioned import (
    WeightedEnsemble,
    sample_conditioned,
    bessel3_endpoints,
    min_law_check,
    transience_check,
)
from .perpetual import PerpetualVerdict, PerpetualConfig, perpetual_classify, tail_criterion_integral
from .population import (
    PopulationTrajectory,
    SimulationCaps,
    simulate_population,
    additive_martingale,
    derivative_martingale,
    truncated_martingale,
    population_minimum,
)
from .ensemble import simulate_martingale_ensemble, many_to_one_check, EnsembleResult
from .spinal import (
    HatMeasure,
    hat_measure,
    simulate_p_hat,
    simulate_spinal_ensemble,
    spine_selection_check,
    simulate_q_hat_b,
    compensator_check,
)
from .stats import StatReport, mean_se, z_score, two_estimator_z, effective_sample_size
from . import presets

__all__ = [name for name in dir() if not name.startswith("_")]
