"""Accelerated mirror descent with a certifying binary search.

First-order minimization of star-convex objectives with Holder-continuous
gradients over p-norm and composite-norm geometries, plus the matching
binary-search lower-bound adversary and an experiment harness.
"""

from .adversary import (
    AdversaryState,
    PiecewiseDerivative,
    adversary_answer,
    adversary_init,
    assemble_counterexamples,
    construct_g1,
    construct_g2,
    phi_potential,
    query_budget,
    verify_counterexample,
)
from .dgf import Geometry, bregman, grad_psi, grad_psi_inverse, make_geometry, psi
from .geometry import (
    Composite,
    GeometryError,
    NormSpec,
    PNorm,
    dual_norm_eval,
    grad_norm_power,
    inverse_grad_norm_power,
    norm_eval,
    norm_spec_from_json,
    norm_spec_to_json,
)
from .harness import (
    ExperimentConfig,
    RateFit,
    baseline_mirror_descent,
    fit_rate,
    l1_reduction,
    run_adversary_game,
    run_experiment,
    trace_to_csv,
)
from .kernels import backend_name
from .linesearch import (
    BudgetExceeded,
    LineRestriction,
    SearchResult,
    binary_search,
    probe_bound,
)
from .objectives import (
    CountingOracle,
    OracleCounter,
    Problem,
    certify_star_convexity,
    certify_weak_smoothness,
    make_multiscale_norm_power_objective,
    make_norm_power_objective,
    make_quadratic,
    make_radial_star_objective,
    problem_from_id,
)
from .schedules import Schedule, alpha_from_radius, schedule_general, schedule_smooth
from .solver import (
    CertificationMismatch,
    RunResult,
    mirror_step,
    prox_step,
    radius_bound_check,
    run,
    telescope_check,
)

__version__ = "0.1.0"
