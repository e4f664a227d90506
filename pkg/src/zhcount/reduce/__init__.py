"""Reduction passes between CNF classes, with count certificates."""

from .certs import CertChain, CompositionError, ReductionCert, Relation, Step, compose, load_cert, verify_cert
from .fib import FibZero, choose_fib_modulus, fib, fib_closed_form, fib_matrix_power, find_fib_zero
from .passes import (
    bipartize_2sat,
    crossings,
    degree3,
    extension_weights,
    monotonize,
    nand_clauses,
    planarize,
    swap_gadget,
    to_2sat_exact,
    to_2sat_fixed,
    to_2sat_pow2p1,
    xor_gadget,
)
from .pipeline import STAGES, parse_targets, pipeline

__all__ = [
    "CertChain",
    "CompositionError",
    "ReductionCert",
    "Relation",
    "Step",
    "compose",
    "load_cert",
    "verify_cert",
    "FibZero",
    "choose_fib_modulus",
    "fib",
    "fib_closed_form",
    "fib_matrix_power",
    "find_fib_zero",
    "bipartize_2sat",
    "crossings",
    "degree3",
    "extension_weights",
    "monotonize",
    "nand_clauses",
    "planarize",
    "swap_gadget",
    "to_2sat_exact",
    "to_2sat_fixed",
    "to_2sat_pow2p1",
    "xor_gadget",
    "STAGES",
    "parse_targets",
    "pipeline",
]
