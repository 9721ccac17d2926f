"""Exact parametric-objective solvers for LP, IP and small quadratic programs."""

from .diophantine_ip import search_first_method, search_second_method
from .exact_arith import AffineForm, ParamMatrix, rref
from .geometric_lp import solve_geometric
from .groebner_nlp import MultiPoly, NlpProblem, buchberger, make_nlp, solve_nlp
from .lp_model import LpProblem, Relation, Sense, make_lp
from .model_io import load_model, parse_model, render_model
from .oracle import simplex_solve
from .outcome import LpOutcome, Status
from .parametric_lp import solve_parametric

__all__ = [
    "AffineForm",
    "LpOutcome",
    "LpProblem",
    "MultiPoly",
    "NlpProblem",
    "ParamMatrix",
    "Relation",
    "Sense",
    "Status",
    "buchberger",
    "load_model",
    "make_lp",
    "make_nlp",
    "parse_model",
    "render_model",
    "rref",
    "search_first_method",
    "search_second_method",
    "simplex_solve",
    "solve_geometric",
    "solve_nlp",
    "solve_parametric",
]
