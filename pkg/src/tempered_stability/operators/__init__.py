"""
Tempered fractional operators and product-integration weights.
"""

from .tempered import (
    SampledFunction,
    TemperedOrder,
    gronwall_bound,
    gronwall_series_bound,
    solve_gronwall_equality,
    tempered_derivative,
    tempered_integral,
    tempered_integral_path,
)
from .weights import ProductWeights, WeightCache, build_weights, get_weights

__all__ = [
    "SampledFunction",
    "TemperedOrder",
    "gronwall_bound",
    "gronwall_series_bound",
    "solve_gronwall_equality",
    "tempered_derivative",
    "tempered_integral",
    "tempered_integral_path",
    "ProductWeights",
    "WeightCache",
    "build_weights",
    "get_weights",
]
