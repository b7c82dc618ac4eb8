"""Dirac scattering on Kerr-Newman-de Sitter exteriors."""

import json as _json

from ._knds import (
    BlackHoleParams,
    ConfigError,
    DomainError,
    Geometry,
    InadmissibleError,
    NumericalError,
    angular_eigenvalues,
    asymptotic_model,
    compare_blackholes,
    reference_params,
    scatter,
    transfer_matrix,
    validate_params,
)
from ._knds import run_inverse as _run_inverse


def run_inverse(params, **options):
    """Synthesize forward data for params and recover the parameters; returns a dict."""
    return _json.loads(_run_inverse(params, **options))


__all__ = [
    "BlackHoleParams",
    "ConfigError",
    "DomainError",
    "Geometry",
    "InadmissibleError",
    "NumericalError",
    "angular_eigenvalues",
    "asymptotic_model",
    "compare_blackholes",
    "reference_params",
    "run_inverse",
    "scatter",
    "transfer_matrix",
    "validate_params",
]
