"""Associated Legendre functions off the cut and their parameter derivatives."""

from legendre_params.errors import (
    ConvergenceError,
    DomainError,
    EvaluationError,
    LegendreError,
    PoleError,
)
from legendre_params.scalars import (
    HalfInteger,
    digamma,
    digamma_diff_sum,
    gamma,
    gamma_ln,
    recip_gamma,
)
from legendre_params.bessel import (
    bessel_i,
    bessel_k,
    di_dorder_at_int,
    dk_dorder_at_int,
)
from legendre_params.legendre import (
    EvalResult,
    ParamPoint,
    legendre_p,
    legendre_q,
    log_coth_map,
    negative_order_p,
    whipple_argument,
    whipple_q_to_p,
)
from legendre_params.param_derivs import (
    DerivRequest,
    dp_ddegree,
    dp_dorder,
    dq_ddegree,
    dq_dorder,
    evaluate,
    special_case_suite,
)
from legendre_params.oracle import (
    QuadratureSpec,
    conformance_run,
    fd_param_derivative,
    quad_ii,
    quad_ik,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DerivRequest",
    "DomainError",
    "EvalResult",
    "EvaluationError",
    "HalfInteger",
    "LegendreError",
    "ParamPoint",
    "PoleError",
    "QuadratureSpec",
    "bessel_i",
    "bessel_k",
    "conformance_run",
    "di_dorder_at_int",
    "digamma",
    "digamma_diff_sum",
    "dk_dorder_at_int",
    "dp_ddegree",
    "dp_dorder",
    "dq_ddegree",
    "dq_dorder",
    "evaluate",
    "fd_param_derivative",
    "gamma",
    "gamma_ln",
    "legendre_p",
    "legendre_q",
    "log_coth_map",
    "negative_order_p",
    "quad_ii",
    "quad_ik",
    "recip_gamma",
    "special_case_suite",
    "whipple_argument",
    "whipple_q_to_p",
]
