"""Risk-averse reward learning and planning for feature-labeled gridworlds."""

from .bayes import (
    DegeneratePosterior,
    Marginal,
    Posterior,
    PriorSpec,
    RewardSpace,
    compute_posterior,
    dirichlet_prior,
    marginalize,
    modified_uniform_prior,
)
from .demonstrator import generate_demos
from .envmodel import (
    ACTIONS,
    DemonstrationSet,
    Environment,
    InvalidEnvironment,
    InvalidTrajectory,
    Trajectory,
    feature_count,
    load_demonstrations,
    load_environment,
    save_demonstrations,
    save_environment,
    step,
)
from .maxent import (
    SoftDP,
    expected_feature_counts,
    maxent_irl_fit,
    soft_value_iteration,
    trajectory_log_likelihood,
)
from .planner import PlanResult, RiskSpec, UnreachableGoal, evaluate, plan, risk_of
from .riskselect import (
    Costmap,
    SelectionConfig,
    build_costmap,
    normalized_entropy,
    select_weights,
)

__all__ = [
    "ACTIONS",
    "Costmap",
    "DegeneratePosterior",
    "DemonstrationSet",
    "Environment",
    "InvalidEnvironment",
    "InvalidTrajectory",
    "Marginal",
    "PlanResult",
    "Posterior",
    "PriorSpec",
    "RewardSpace",
    "RiskSpec",
    "SelectionConfig",
    "SoftDP",
    "Trajectory",
    "UnreachableGoal",
    "build_costmap",
    "compute_posterior",
    "dirichlet_prior",
    "evaluate",
    "expected_feature_counts",
    "feature_count",
    "generate_demos",
    "load_demonstrations",
    "load_environment",
    "marginalize",
    "maxent_irl_fit",
    "modified_uniform_prior",
    "normalized_entropy",
    "plan",
    "risk_of",
    "save_demonstrations",
    "save_environment",
    "select_weights",
    "soft_value_iteration",
    "step",
    "trajectory_log_likelihood",
]

__version__ = "0.1.0"
