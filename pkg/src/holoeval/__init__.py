"""holoeval: evaluation of parametric holonomic sequences with rigorous
ball arithmetic.

A holonomic sequence satisfies a linear recurrence with polynomial
coefficients; here the coefficients may additionally involve a real or
complex parameter.  The package evaluates the n-th term by five
interchangeable algorithms (naive iteration, exact binary splitting, fast
multipoint evaluation, and three rectangular-splitting variants) and uses
them for rising factorials and very-high-precision gamma computation.
"""

from .balls import (Ball, BallDomainError, ComplexBall, add, add_int, div,
                    div_int, exp, inv, log, log2_const, mul, mul_2exp,
                    mul_int, parse_decimal, pi, pow_int, power, reduce, sqrt,
                    sub, to_decimal)
from .poly import (BiPoly, UniPoly, bipoly_from_text, bipoly_to_text,
                   multipoint_eval, poly_divmod, product_tree,
                   taylor_shift_basecase, taylor_shift_convolution)
from .recmat import (DenominatorZeroError, RecMatrix, ScalarRecurrence,
                     apply_to_vector, companion, eval_factor,
                     product_binsplit_exact, product_naive,
                     rising_factorial_matrix, unroll_rational)
from .engines import (ALGORITHMS, EvalPlan, EvalReport, OpCounter, PowerTable,
                      SymmetryError, bivariate_delta, choose_m,
                      default_algorithm, eval_binsplit_exact, eval_dispatch,
                      eval_multipoint, eval_naive, eval_rect_delta,
                      eval_rect_ps, eval_rect_split, eval_rect_split_taylor,
                      make_plan)
from .special import (BernoulliCache, RisingDeltaCoeffs, StirlingParams,
                      bernoulli_even, gamma_1f1, gamma_stirling,
                      hyp1f1_gamma_matrix, rising_delta_coeffs,
                      rising_factorial, rising_factorial_report,
                      stirling_params, vsc_denominator)

__version__ = "0.1.0"

__all__ = [
    "Ball", "ComplexBall", "BallDomainError", "DenominatorZeroError",
    "SymmetryError",
    "UniPoly", "BiPoly", "RecMatrix", "ScalarRecurrence",
    "EvalPlan", "EvalReport", "OpCounter", "PowerTable",
    "BernoulliCache", "RisingDeltaCoeffs", "StirlingParams",
    "ALGORITHMS",
    "add", "add_int", "sub", "mul", "mul_int", "mul_2exp", "div", "div_int",
    "inv", "sqrt", "exp", "log", "power", "pow_int", "pi", "log2_const",
    "reduce", "to_decimal", "parse_decimal",
    "taylor_shift_basecase", "taylor_shift_convolution", "product_tree",
    "multipoint_eval", "poly_divmod", "bipoly_from_text", "bipoly_to_text",
    "companion", "eval_factor", "product_naive", "product_binsplit_exact",
    "apply_to_vector", "unroll_rational", "rising_factorial_matrix",
    "choose_m", "default_algorithm", "make_plan", "eval_dispatch",
    "eval_naive", "eval_binsplit_exact", "eval_multipoint", "eval_rect_ps",
    "eval_rect_split", "eval_rect_split_taylor", "eval_rect_delta",
    "bivariate_delta",
    "rising_factorial", "rising_factorial_report", "rising_delta_coeffs",
    "bernoulli_even", "vsc_denominator", "stirling_params", "gamma_stirling",
    "gamma_1f1", "hyp1f1_gamma_matrix",
]
