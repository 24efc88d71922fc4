"""Exact combinatorics of affine walls, Peterson lifts and quantum Chevalley products."""

from .errors import (
    CosetError,
    DomainError,
    InternalError,
    LatticeError,
    LiftError,
    NotGenericError,
    SeidelCombError,
    SizeError,
    SpecError,
)
from .rootdata import LatticeKind, RootDatum, WeylElement, build_root_datum, weyl_group

__version__ = "0.1.0"

__all__ = [
    "CosetError",
    "DomainError",
    "InternalError",
    "LatticeError",
    "LiftError",
    "NotGenericError",
    "SeidelCombError",
    "SizeError",
    "SpecError",
    "LatticeKind",
    "RootDatum",
    "WeylElement",
    "build_root_datum",
    "weyl_group",
]
