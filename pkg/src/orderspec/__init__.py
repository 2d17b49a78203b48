"""Exact order spectra and element-order ratios of finite groups."""

from .spectrum import (InvalidSpectrum, OrderSpectrum, cyclic, direct_product, exponent,
                       make_spectrum, power, rho, rho_star, trivial, wreath_c2)
from .perm import CapExceeded, ElementSet, Permutation, generate, parse_perm, spectrum_of
from .families import FamilySpec
from .expr import evaluate, parse_expr

__version__ = "0.1.0"

__all__ = [
    "InvalidSpectrum", "OrderSpectrum", "cyclic", "direct_product", "exponent",
    "make_spectrum", "power", "rho", "rho_star", "trivial", "wreath_c2",
    "CapExceeded", "ElementSet", "Permutation", "generate", "parse_perm", "spectrum_of",
    "FamilySpec", "evaluate", "parse_expr",
]
