"""Contextuality-by-Default analysis of systems of dichotomous random variables."""

__version__ = "0.1.0"

from .chsh import ChshReport, chsh, expectation_product
from .coupling import (
    CbdReport,
    Coupling,
    PairCoupling,
    ReducedCoupling,
    analyze,
    build_coupling_lp,
    maximal_coupling,
    omega_vector,
    product_coupling,
    reduced_coupling_feasible,
)
from .errors import CbdError, ParseError, ValidationError
from .fixtures import cyclic_system, fixtures, perturbed_pr_box, perturbed_trivial, pr_box, trivial
from .jsonio import dumps_system, load_system, parse_system, report_to_dict
from .simulate import SimulationResult, sample_context, simulate
from .system import (
    Connection,
    ContextDistribution,
    Probability,
    SampleSpace,
    System,
    canonical_sample_space,
    connections,
    is_consistently_connected,
    make_ab_system,
    make_consistent_ab_system,
    marginal,
    validate_system,
)

__all__ = [
    "CbdError", "CbdReport", "ChshReport", "Connection", "ContextDistribution",
    "Coupling", "PairCoupling", "ParseError", "Probability", "ReducedCoupling",
    "SampleSpace", "SimulationResult", "System", "ValidationError", "analyze",
    "build_coupling_lp", "canonical_sample_space", "chsh", "connections",
    "cyclic_system", "dumps_system", "expectation_product", "fixtures",
    "is_consistently_connected", "load_system", "make_ab_system",
    "make_consistent_ab_system", "marginal", "maximal_coupling", "omega_vector",
    "parse_system", "perturbed_pr_box", "perturbed_trivial", "pr_box",
    "product_coupling", "reduced_coupling_feasible", "report_to_dict",
    "sample_context", "simulate", "trivial", "validate_system",
]
