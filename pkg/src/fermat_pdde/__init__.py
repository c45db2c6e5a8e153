"""Symbolic verification and construction engine for Fermat-type systems of
partial differential-difference equations in several complex variables."""
from .scalar import I, ONE, PI, ZERO, Scalar, scalar_exp
from .errors import (
    ClassifierMismatch,
    ExactModeUnsupported,
    FermatError,
    InadmissibleArgument,
    InconsistentShiftRule,
    InvalidFamily,
    MissingSymbol,
    OpaqueDerivative,
    OutOfRangeVariable,
    ParamShape,
    ParseError,
    SourceSpan,
    UnknownSymbolShift,
)
from .poly import Poly
from .expr import Expr, OpaqueSymbol, SymbolRegistry, cos, evaluate, exp, sin
from .parser import parse_constant, parse_declarations, parse_expr, print_expr
from .calculus import ShiftVector, SystemSpec, partial, residuals, shift
from .normal_form import ExpPolyNF, VerificationReport, is_zero, numeric_verify, to_nf, verify_system

__version__ = "0.1.0"
