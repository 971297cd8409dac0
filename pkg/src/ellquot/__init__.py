"""Exact computations on elliptic fibrations of the quotients Y_(n)^(l) of products of C_(n)."""

from .algebra import MultiPoly, Place, parse_poly
from .weierstrass import FiberConfiguration, KodairaType, WeierstrassModel, classify_all

__version__ = "0.1.0"

__all__ = ["MultiPoly", "Place", "parse_poly", "KodairaType", "WeierstrassModel", "FiberConfiguration",
           "classify_all", "__version__"]
