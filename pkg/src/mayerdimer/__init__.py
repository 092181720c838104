"""Mayer series of the hard-dimer lattice gas and the monomer-dimer free energy."""

from .free_energy import LambdaExpansion, lambda_expansion, normal_form
from .mayer import MayerTable, mayer_coefficients
from .series import TruncatedSeries

__all__ = [
    "LambdaExpansion",
    "MayerTable",
    "TruncatedSeries",
    "lambda_expansion",
    "mayer_coefficients",
    "normal_form",
]
__version__ = "0.1.0"
