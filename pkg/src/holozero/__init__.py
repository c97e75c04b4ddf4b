"""Zeros of holomorphic functions in a rectangle, by argument-principle
subdivision and AAA rational approximation of the logarithmic derivative."""

from .aaa import AAAConfig, AAAResult, aaa_continuum, aaa_discrete
from .delves_lyness import delves_lyness
from .demos import DEMOS, Problem, get_demo
from .engine import (
    BoundaryZeroError,
    EngineConfig,
    NonIntegerCountError,
    RootFindingError,
    RunReport,
    SubdivisionBudgetError,
    ZeroRecord,
    find_poles_manual,
    find_zeros,
    subdivide,
)
from .exprparse import ParseError, eval_expr, expression_handle, parse
from .geometry import Edge, Rectangle, split
from .handle import FunctionHandle
from .numderiv import DerivConfig, cauchy_derivative, wrap_derivative_free
from .quadrature import QuadConfig, count_zeros, gk_integrate_edge
from .rational import BarycentricRational

__all__ = [
    "AAAConfig", "AAAResult", "aaa_continuum", "aaa_discrete", "delves_lyness",
    "DEMOS", "Problem", "get_demo", "BoundaryZeroError", "EngineConfig",
    "NonIntegerCountError", "RootFindingError", "RunReport", "SubdivisionBudgetError",
    "ZeroRecord", "find_poles_manual", "find_zeros", "subdivide", "ParseError",
    "eval_expr", "expression_handle", "parse", "Edge", "Rectangle", "split",
    "FunctionHandle", "DerivConfig", "cauchy_derivative", "wrap_derivative_free",
    "QuadConfig", "count_zeros", "gk_integrate_edge", "BarycentricRational",
]
