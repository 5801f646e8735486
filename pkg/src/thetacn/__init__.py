"""Selmer-rank certificates for non-theta-congruent and non-tiling numbers.

The package computes the 2-isogeny Selmer groups of the curves
E_{n,pi/3}: y^2 = x(x-n)(x+3n) and E_{n,2pi/3}: y^2 = x(x+n)(x-3n) from
closed-form local image tables, and checks residue-graph criteria for
vanishing Selmer rank against that computation.
"""

from .arith import SquareClass, class_of, factor, hilbert, is_prime, legendre
from .criteria import (
    ClassificationRecord,
    CriterionId,
    OutOfScope,
    classify,
    conjecture_report,
    eval_criterion,
    sweep,
    verify_range,
)
from .descent import Curve, SelmerReport, Theta, curve, selmer
from .graph import ResidueGraph, build_goto_G, build_goto_g, build_unified, is_odd_graph
from .witness import WitnessPoint, search_point

__version__ = "0.1.0"

__all__ = [
    "SquareClass",
    "class_of",
    "factor",
    "hilbert",
    "is_prime",
    "legendre",
    "ClassificationRecord",
    "CriterionId",
    "OutOfScope",
    "classify",
    "conjecture_report",
    "eval_criterion",
    "sweep",
    "verify_range",
    "Curve",
    "SelmerReport",
    "Theta",
    "curve",
    "selmer",
    "ResidueGraph",
    "build_goto_G",
    "build_goto_g",
    "build_unified",
    "is_odd_graph",
    "WitnessPoint",
    "search_point",
]
