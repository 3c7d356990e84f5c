"""Global-stability machinery for scalar delay differential equations.

The package splits into envelope algebra (`bounds`), smooth-map calculus and
condition checks (`calculus`), closed-form stability rules with numerical
corroboration (`criterion`), a fixed-step integrator with dense output
(`integrator`, `dense`), a model catalog (`models`), and a CLI (`cli`).
"""

from .bounds import (
    BoundRow,
    BoundTable,
    RationalBound,
    build_bound_table,
    d_branch,
    derived_constants,
    eval_A,
    eval_B,
    eval_D,
    eval_R,
    eval_RR,
    eval_lambda_map,
    eval_r,
    solve_x2,
)
from .calculus import (
    ConditionReport,
    ReflectionNeeded,
    SmoothScalarMap,
    Witness,
    check_A_conditions,
    check_envelope,
    compose_maps,
    compose_with_expm1,
    fit_rational_bound,
    food_limited_feedback,
    linear_map,
    mobius_map,
    reflect_map,
    scale_map,
    schwarz_derivative,
    smooth_map_from_callable,
    wright_map,
)
from .criterion import (
    Certificate,
    IterationStep,
    IterationTrace,
    StabilityVerdict,
    decide_food_limited,
    decide_for_model,
    decide_theorem_apl,
    decide_theorem_main,
    mM_iteration,
    reverify_gy_witness,
    verify_gy_functional,
)
from .dense import HermiteSeries
from .errors import (
    CriticalPointError,
    DdestabError,
    HistoryRangeError,
    NegativeFeedbackError,
    NoCrossingError,
    PoleDomainError,
    TailEventError,
)
from .integrator import (
    BLOWUP_THRESHOLD,
    HistoryView,
    TailMetrics,
    Trajectory,
    TrajectoryEvent,
    constant_history,
    history_from_function,
    history_from_knots,
    integrate,
    random_history,
    tail_metrics,
    yorke_max,
)
from .models import (
    CallableCoefficient,
    Coefficient,
    Constant,
    Model,
    ModelMeta,
    ProportionalDelay,
    Sawtooth,
    Sinusoidal,
    as_coefficient,
    coefficient_from_config,
    default_history_range,
    eval_r1_r2,
    log_transform,
    make_custom_read_model,
    make_food_limited,
    make_linear_variable_delay,
    make_logistic_vd,
    make_maxima_model,
    make_toy_unstable,
    make_wright,
    model_from_config,
)

__version__ = "0.1.0"

__all__ = [
    "BLOWUP_THRESHOLD",
    "BoundRow",
    "BoundTable",
    "CallableCoefficient",
    "Certificate",
    "Coefficient",
    "ConditionReport",
    "Constant",
    "CriticalPointError",
    "DdestabError",
    "HermiteSeries",
    "HistoryRangeError",
    "HistoryView",
    "IterationStep",
    "IterationTrace",
    "Model",
    "ModelMeta",
    "NegativeFeedbackError",
    "NoCrossingError",
    "PoleDomainError",
    "ProportionalDelay",
    "RationalBound",
    "ReflectionNeeded",
    "Sawtooth",
    "Sinusoidal",
    "SmoothScalarMap",
    "StabilityVerdict",
    "TailEventError",
    "TailMetrics",
    "Trajectory",
    "TrajectoryEvent",
    "Witness",
    "as_coefficient",
    "build_bound_table",
    "check_A_conditions",
    "check_envelope",
    "coefficient_from_config",
    "compose_maps",
    "compose_with_expm1",
    "constant_history",
    "d_branch",
    "decide_food_limited",
    "decide_for_model",
    "decide_theorem_apl",
    "decide_theorem_main",
    "default_history_range",
    "derived_constants",
    "eval_A",
    "eval_B",
    "eval_D",
    "eval_R",
    "eval_RR",
    "eval_lambda_map",
    "eval_r",
    "eval_r1_r2",
    "fit_rational_bound",
    "food_limited_feedback",
    "history_from_function",
    "history_from_knots",
    "integrate",
    "linear_map",
    "log_transform",
    "mM_iteration",
    "make_custom_read_model",
    "make_food_limited",
    "make_linear_variable_delay",
    "make_logistic_vd",
    "make_maxima_model",
    "make_toy_unstable",
    "make_wright",
    "mobius_map",
    "model_from_config",
    "random_history",
    "reflect_map",
    "reverify_gy_witness",
    "scale_map",
    "schwarz_derivative",
    "smooth_map_from_callable",
    "solve_x2",
    "tail_metrics",
    "verify_gy_functional",
    "wright_map",
    "yorke_max",
]
