"""Exact normal ordering of exponentials of ``q(ad) a + v(ad)``.

The package computes the substitution flow ``(T, g)``, the normally ordered
operator ``:g(L, ad) exp((T(L, ad) - ad) a):``, Weyl-algebra power tables,
Sheffer polynomials and the combinatorial sequences they count, all with
exact rational arithmetic.
"""

__version__ = "0.1.0"

from .errors import NormordError, ParseError, PreconditionError, VerificationFailure
from .expr import parse, taylor, to_polynomial
from .flow import FlowSolution, group_law_check, solve_flow, solve_flow_bivariate, solve_flow_expr
from .series import Polynomial, Series, compose, reversion
from .sheffer import (
    SequenceResult,
    ShefferPair,
    flow_params_from_sheffer,
    sequence_values,
    sheffer_from_flow,
    sheffer_polynomials,
)
from .weyl import CoherentParams, bargmann_moment, bargmann_moments, normal_order_exp, weyl_table

__all__ = [
    "CoherentParams",
    "FlowSolution",
    "NormordError",
    "ParseError",
    "Polynomial",
    "PreconditionError",
    "SequenceResult",
    "Series",
    "ShefferPair",
    "VerificationFailure",
    "bargmann_moment",
    "bargmann_moments",
    "compose",
    "flow_params_from_sheffer",
    "group_law_check",
    "normal_order_exp",
    "parse",
    "reversion",
    "sequence_values",
    "sheffer_from_flow",
    "sheffer_polynomials",
    "solve_flow",
    "solve_flow_bivariate",
    "solve_flow_expr",
    "taylor",
    "to_polynomial",
    "weyl_table",
]
