"""Tool dynamics: geometry, beam FEM, modal parameters, tip FRFs."""

from .fem import (
    DEFAULT_DAMPING_RATIO,
    Mode,
    ModeSet,
    SystemMatrices,
    assemble_system,
    dominant_mode,
    modes_in_direction,
    solve_modes,
)
from .frf import FRF, synthesize_frf
from .geometry import (
    BeamElement,
    BeamMesh,
    ToolGeometry,
    ToolMaterial,
    ToolSegment,
    build_beam_mesh,
    parse_tool_document,
    tool_from_dict,
)
from .imports import import_frf_table, import_modal_table

__all__ = [
    "DEFAULT_DAMPING_RATIO",
    "Mode",
    "ModeSet",
    "SystemMatrices",
    "assemble_system",
    "dominant_mode",
    "modes_in_direction",
    "solve_modes",
    "FRF",
    "synthesize_frf",
    "BeamElement",
    "BeamMesh",
    "ToolGeometry",
    "ToolMaterial",
    "ToolSegment",
    "build_beam_mesh",
    "parse_tool_document",
    "tool_from_dict",
    "import_frf_table",
    "import_modal_table",
]
