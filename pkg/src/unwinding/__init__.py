"""Nonlinear unwinding expansions in Hardy and weighted reproducing kernel spaces."""

from .errors import (
    ContractionError,
    DeflationError,
    DegenerateRemainder,
    DomainError,
    RearrangementError,
    StrategyExhausted,
    TruncationError,
    UnwindingError,
)
from .expansion import (
    ExpansionConfig,
    ExpansionResult,
    expand,
    model_projection,
    partial_sum,
    tmw_coefficients,
    verify_reconstruction,
)
from .hardy import AnalyticCoeffs, cauchy_kernel, evaluate, hp_norm, inner, riesz_project, to_boundary
from .multipliers import (
    BlaschkeProduct,
    Dichotomy,
    GeneralSymbol,
    Monomial,
    MultiplierProduct,
    blaschke_factor,
    classify_tail,
    finite_blaschke,
    outer_half_shift,
)
from .rkhs import WeightedSpace, adjoint_apply, expand_rkhs, mult_matrix, operator_norm
from .strategies import (
    ClassicalUnwinding,
    FixedSequence,
    GreedyAFD,
    Outer,
    SymbolSequence,
    Taylor,
    classical_unwinding,
)
from .toeplitz import apply_analytic, apply_coanalytic, apply_P, apply_Q, backward_shift, outer_q_formula, shift

__version__ = "0.1.0"
