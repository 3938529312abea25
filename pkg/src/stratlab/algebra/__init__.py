from .numbers import (
    ApproxComplex,
    ExactComplex,
    ctx,
    set_precision,
    settings,
)
from .parse import PolynomialSyntaxError, parse_polynomial
from .poly import MultiPoly, UnknownVariable, euler_defect
from .roots import PolarRoot, nth_roots
from .weights import InvalidWeights, WeightSystem, is_quasihomogeneous, milnor_orlik


def differentiate(p: MultiPoly, var: str) -> MultiPoly:
    return p.differentiate(var)


def evaluate(p: MultiPoly, point, digits=None):
    return p.evaluate(point, digits=digits)


__all__ = [
    "ApproxComplex",
    "ExactComplex",
    "InvalidWeights",
    "MultiPoly",
    "PolarRoot",
    "PolynomialSyntaxError",
    "UnknownVariable",
    "WeightSystem",
    "ctx",
    "differentiate",
    "euler_defect",
    "evaluate",
    "is_quasihomogeneous",
    "milnor_orlik",
    "nth_roots",
    "parse_polynomial",
    "set_precision",
    "settings",
]
