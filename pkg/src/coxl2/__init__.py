"""Exact combinatorics of Coxeter systems: growth series, weighted Euler
characteristic, region-of-convergence tests, rule-deduced weighted L2 Betti
numbers, and the boundary bookkeeping of the fattened Davis complex."""

__version__ = "0.1.0"

from .system import (
    INF,
    Asymmetric,
    CoxeterError,
    CoxeterMatrix,
    CoxeterSystem,
    DiagonalNotOne,
    OffDiagonalBelowTwo,
    UnknownGenerator,
    build_system,
    generator_classes,
    irreducible_components,
    restrict,
)
