"""Local certification of graph properties: first-order sentences on graphs of
bounded treedepth, with the tools needed to check the constructions."""

from .certs import (
    CannotCertify, Certificate, Field, LocalView, Scheme, Verdict, cert_size_bits, fuzz_scheme,
    mutate_certs, run_verification,
)
from .ef import ef_equivalent
from .graph import Graph, load_graph, make_graph, save_graph
from .kernel import k_reduce, type_bound
from .logic import evaluate, parse_formula, quantifier_depth
from .treedepth import Model, compute_treedepth_exact, is_valid_model

__version__ = "0.1.0"

__all__ = [
    "CannotCertify", "Certificate", "Field", "Graph", "LocalView", "Model", "Scheme", "Verdict",
    "cert_size_bits", "compute_treedepth_exact", "ef_equivalent", "evaluate", "fuzz_scheme",
    "is_valid_model", "k_reduce", "load_graph", "make_graph", "mutate_certs", "parse_formula",
    "quantifier_depth", "run_verification", "save_graph", "type_bound",
]
