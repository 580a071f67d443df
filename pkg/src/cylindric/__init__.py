"""Normal forms, witness structures and a decision procedure for
non-commutative (NCA_n) and weak (WCA_n) cylindric algebras."""

from .errors import (
    BudgetExceeded,
    CylindricError,
    DegreeMismatch,
    IndexBoundsError,
    PreconditionError,
    TermSyntaxError,
    VerificationFailure,
)
from .forms import NormalForm, enumerate_degree0, enumerate_forms, reduce_degree
from .frames import AtomStructure, check_conditions, complex_algebra, models, point_form
from .oracle import SearchSpace, oracle_satisfiable
from .rewriter import FormSet, decide_equation, decide_zero, eval_on_form, rewrite
from .splitter import nonatomicity_report, split_atom
from .terms import NCA, WCA, Params, instantiate_axioms, parse_term, to_text
from .witness import build_witness, is_satisfiable

__version__ = "0.1.0"

__all__ = [
    "NCA",
    "WCA",
    "AtomStructure",
    "BudgetExceeded",
    "CylindricError",
    "DegreeMismatch",
    "FormSet",
    "IndexBoundsError",
    "NormalForm",
    "Params",
    "PreconditionError",
    "SearchSpace",
    "TermSyntaxError",
    "VerificationFailure",
    "build_witness",
    "check_conditions",
    "complex_algebra",
    "decide_equation",
    "decide_zero",
    "enumerate_degree0",
    "enumerate_forms",
    "eval_on_form",
    "instantiate_axioms",
    "is_satisfiable",
    "models",
    "nonatomicity_report",
    "oracle_satisfiable",
    "parse_term",
    "point_form",
    "reduce_degree",
    "rewrite",
    "split_atom",
    "to_text",
]
