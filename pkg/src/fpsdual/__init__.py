"""Formal power series, their polynomial duals and row-finite operators."""

from .field import Q, R64, Fp, FieldDescriptor, FieldValue, near, parse_descriptor, parse_value
from .monoid import IndexSpace, Word
from .poly import Polynomial, dirac, pair
from .series import (
    Series,
    Status,
    StarUndefined,
    Topology,
    cauchy_product,
    embed,
    star,
    sum_family,
    valuation,
)

__version__ = "0.1.0"
