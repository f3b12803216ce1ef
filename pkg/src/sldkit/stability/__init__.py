"""Deterministic stability analysis: zero-order lobes plus a Floquet oracle."""

from .fdm import cross_check_agreement, fdm_spectral_radius
from .types import LobeCurve, OperatingPoint, SldResult, ZoneLabel
from .zoa import (
    ChatterEigenvalue,
    SweepConfig,
    chatter_eigenvalue,
    classify_deterministic,
    critical_depth,
    spindle_speeds,
    zoa_lobes,
    zone_annotate,
)

__all__ = [
    "ChatterEigenvalue",
    "SweepConfig",
    "chatter_eigenvalue",
    "classify_deterministic",
    "critical_depth",
    "spindle_speeds",
    "zoa_lobes",
    "zone_annotate",
    "LobeCurve",
    "OperatingPoint",
    "SldResult",
    "ZoneLabel",
    "cross_check_agreement",
    "fdm_spectral_radius",
]
