"""L-functions: Euler-product coefficients, numerical evaluation by the
smoothed approximate functional equation, and algebraic critical values."""

from .afe import afe_eval, afe_lambda, fe_residual, plan_terms, solve_root_number
from .builders import (
    InsufficientCoefficients, WeightOrder, conv_candidates, conv_spec, dirichlet_spec,
    sym2_candidates, sym2_spec, zeta_spec,
)
from .core import (
    Inconsistent, LFunctionSpec, LValue, NeedMoreCoefficients, RootNumberUnknown,
    euler_coefficients, euler_product,
)
from .lalg import (
    RecognitionFailed, UnsupportedLevel, conv_selected, gauss_sum, lalg_conv, lalg_conv_numeric,
    lalg_sym2, lalg_sym2_numeric, petersson_norm, select_spec, sym2_selected,
)

__all__ = [
    "afe_eval", "afe_lambda", "fe_residual", "plan_terms", "solve_root_number",
    "InsufficientCoefficients", "WeightOrder", "conv_candidates", "conv_spec", "dirichlet_spec",
    "sym2_candidates", "sym2_spec", "zeta_spec", "Inconsistent", "LFunctionSpec", "LValue",
    "NeedMoreCoefficients", "RootNumberUnknown", "euler_coefficients", "euler_product",
    "RecognitionFailed", "UnsupportedLevel", "conv_selected", "gauss_sum", "lalg_conv",
    "lalg_conv_numeric", "lalg_sym2", "lalg_sym2_numeric", "petersson_norm", "select_spec",
    "sym2_selected",
]
