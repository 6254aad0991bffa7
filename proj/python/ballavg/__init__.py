"""Ball-average smoothness functionals on periodic grids.

Grid functions are numpy arrays with 1, 2 or 3 axes of equal power-of-two
length, sampling a function on the torus [0, 1)^n.
"""

from ._core import (
    DomainError,
    NumericalError,
    a_function,
    analytic_ball_average,
    apply_ball_average,
    apply_filter,
    apply_higher_average,
    ball_multiplier,
    equivalence_study,
    estimate_alpha,
    extract_gradient,
    generate,
    higher_multiplier,
    hl_maximal,
    lp_norm,
    norm,
    run_suite,
    suite_names,
    tail_check,
    validate_direct,
)

__all__ = [
    "DomainError",
    "NumericalError",
    "a_function",
    "analytic_ball_average",
    "apply_ball_average",
    "apply_filter",
    "apply_higher_average",
    "ball_multiplier",
    "equivalence_study",
    "estimate_alpha",
    "extract_gradient",
    "generate",
    "higher_multiplier",
    "hl_maximal",
    "lp_norm",
    "norm",
    "run_suite",
    "suite_names",
    "tail_check",
    "validate_direct",
]
