"""Exact analysis of elliptic surfaces y^2 = x^3 + A(t)x + B(t) over Q(t)."""
from .kodaira import (
    Configuration,
    KodairaFiber,
    Place,
    classify_valuations,
    configuration,
    euler_number,
    infinity_fiber_from_table,
    refine_places,
)
from .mwlattice import Section, height, rank_bound, specialize, torsion_bound, trivial_lattice
from .qpoly import Poly, RatFunc, mahler_measure, naive_height, parse_poly, reverse_pad, squarefree_decompose, valuation
from .twist import detect_twist, tw_probe, twist
from .weierstrass import (
    WeierstrassPair,
    classify_membership,
    detect_trivial,
    frame,
    infinity_model,
    invariants,
)

__version__ = "0.1.0"

__all__ = [
    "Configuration",
    "KodairaFiber",
    "Place",
    "Poly",
    "RatFunc",
    "Section",
    "WeierstrassPair",
    "classify_membership",
    "classify_valuations",
    "configuration",
    "detect_trivial",
    "detect_twist",
    "euler_number",
    "frame",
    "height",
    "infinity_fiber_from_table",
    "infinity_model",
    "invariants",
    "mahler_measure",
    "naive_height",
    "parse_poly",
    "rank_bound",
    "refine_places",
    "reverse_pad",
    "specialize",
    "squarefree_decompose",
    "torsion_bound",
    "trivial_lattice",
    "tw_probe",
    "twist",
    "valuation",
]
