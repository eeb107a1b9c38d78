"""Orthogonal graphs over Z_{2^n}: construction, measurement, verification."""

__version__ = "0.1.0"

from .quad_forms import FormSpec
from .ortho_graph import OrthoGraph, build_graph, residue_graph
from .reports import VerifyOptions, run_params, run_verify

__all__ = [
    "FormSpec",
    "OrthoGraph",
    "VerifyOptions",
    "build_graph",
    "residue_graph",
    "run_params",
    "run_verify",
    "__version__",
]
