"""Counting reductions between #SAT variants, ZH/ZW diagrams, the permanent and perfect matchings."""

from .cyclo import CycloNumber
from .diagram import DiagramBuilder, Tensor, ZhDiagram, ZwDiagram, contract, contract_int, load_diagram
from .encode import cnf_to_zh, zh_to_cnf
from .errors import BoundExceededError, FormatError, GadgetSelfTestError, PreconditionError, ZhCountError
from .evalzh import SignedSatCert, eval_via_counting, fragment_of, lower_fragment, zhpi_to_3sat
from .formula import CnfFormula, count_auto, count_sat, count_sat_elim, emit_dimacs, parse_dimacs, profile
from .perm import build_permanent_graph, cycle_cover_sum, gadget_search, permanent_ryser
from .reduce import pipeline, verify_cert
from .zw import XsatInstance, count_perfect_matchings, xsat_count, xsat_to_perfect_matchings

__version__ = "0.1.0"

__all__ = [
    "CycloNumber",
    "DiagramBuilder",
    "Tensor",
    "ZhDiagram",
    "ZwDiagram",
    "contract",
    "contract_int",
    "load_diagram",
    "cnf_to_zh",
    "zh_to_cnf",
    "BoundExceededError",
    "FormatError",
    "GadgetSelfTestError",
    "PreconditionError",
    "ZhCountError",
    "SignedSatCert",
    "eval_via_counting",
    "fragment_of",
    "lower_fragment",
    "zhpi_to_3sat",
    "CnfFormula",
    "count_auto",
    "count_sat",
    "count_sat_elim",
    "emit_dimacs",
    "parse_dimacs",
    "profile",
    "build_permanent_graph",
    "cycle_cover_sum",
    "gadget_search",
    "permanent_ryser",
    "pipeline",
    "verify_cert",
    "XsatInstance",
    "count_perfect_matchings",
    "xsat_count",
    "xsat_to_perfect_matchings",
]
