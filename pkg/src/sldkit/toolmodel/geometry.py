"""CAM-style tool description and its finite-element beam mesh.

A tool is a stack of cylindrical segments listed from the holder side toward
the tip. Only the overhanging portion (the last ``overhang_length`` metres of
the stack, i.e. holder face to tip) is meshed; anything beyond that sits
inside the holder and is treated as rigid. Fluted segments use an equivalent
diameter ``d_eff = d_eff_factor * nominal`` for both section area and second
moment, because the flute grooves remove material that a solid cylinder would
overstate.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from ..errors import InvalidGeometryError, ParseError
from ..units import gpa_to_pa, mm_to_m

SEGMENT_KINDS = ("shank", "fluted")
DEFAULT_D_EFF_FACTOR = 0.8


@dataclass(frozen=True)
class ToolSegment:
    length: float  # m
    outer_diameter: float  # m
    kind: str  # "shank" | "fluted"

    def __post_init__(self):
        if self.kind not in SEGMENT_KINDS:
            raise InvalidGeometryError(f"unknown segment kind '{self.kind}'")
        if self.length <= 0.0 or self.outer_diameter <= 0.0:
            raise InvalidGeometryError(
                f"segment dimensions must be positive (length={self.length}, "
                f"diameter={self.outer_diameter})"
            )


@dataclass(frozen=True)
class ToolGeometry:
    segments: tuple[ToolSegment, ...]
    overhang_length: float  # m, holder face to tool tip
    n_flutes: int
    helix_angle_deg: float = 30.0  # metadata only
    d_eff_factor: float = DEFAULT_D_EFF_FACTOR
    name: str = "tool"

    def __post_init__(self):
        if not self.segments:
            raise InvalidGeometryError("tool needs at least one segment")
        if self.overhang_length <= 0.0:
            raise InvalidGeometryError("overhang_length must be positive")
        if self.n_flutes < 1:
            raise InvalidGeometryError("n_flutes must be a positive integer")
        if not 0.0 < self.d_eff_factor <= 1.0:
            raise InvalidGeometryError("d_eff_factor must lie in (0, 1]")
        if self.total_length < self.overhang_length - 1e-12:
            raise InvalidGeometryError(
                f"overhang {self.overhang_length} m exceeds total tool length "
                f"{self.total_length} m"
            )

    @property
    def total_length(self) -> float:
        return sum(s.length for s in self.segments)

    def section_diameter(self, segment: ToolSegment) -> float:
        """Effective diameter used for section properties."""
        if segment.kind == "fluted":
            return self.d_eff_factor * segment.outer_diameter
        return segment.outer_diameter


@dataclass(frozen=True)
class ToolMaterial:
    youngs_modulus: float  # Pa
    density: float  # kg/m^3
    name: str = "steel"

    def __post_init__(self):
        if self.youngs_modulus <= 0.0:
            raise InvalidGeometryError("youngs_modulus must be positive")
        if self.density <= 0.0:
            raise InvalidGeometryError("density must be positive")


@dataclass(frozen=True)
class BeamElement:
    node_a: int
    node_b: int
    area: float  # m^2
    second_moment: float  # m^4


@dataclass(frozen=True)
class BeamMesh:
    """Axial mesh of the overhang; node 0 is the clamped holder face."""

    nodes: tuple[float, ...]  # axial positions, m, 0 at holder face
    elements: tuple[BeamElement, ...] = field(repr=False)
    clamped_node: int = 0

    def __post_init__(self):
        for a, b in zip(self.nodes, self.nodes[1:]):
            if b <= a:
                raise InvalidGeometryError("mesh nodes must be strictly increasing")
        for i, el in enumerate(self.elements):
            if (el.node_a, el.node_b) != (i, i + 1):
                raise InvalidGeometryError("element endpoints must be adjacent nodes")

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def tip_node(self) -> int:
        return self.n_nodes - 1


def _section_properties(diameter: float) -> tuple[float, float]:
    area = math.pi * diameter**2 / 4.0
    second_moment = math.pi * diameter**4 / 64.0
    return area, second_moment


def build_beam_mesh(geometry: ToolGeometry, elements_per_segment: int) -> BeamMesh:
    """Mesh the overhanging portion of the tool with uniform subdivisions.

    Segment boundaries always coincide with nodes; a segment partially inside
    the holder contributes only its overhanging sub-length. The clamped node
    is the holder face (node 0).
    """
    if elements_per_segment < 1:
        raise InvalidGeometryError("elements_per_segment must be >= 1")

    total = geometry.total_length
    holder_face = total - geometry.overhang_length  # from the stack start

    nodes: list[float] = [0.0]
    elements: list[BeamElement] = []
    cursor = 0.0  # stack coordinate of segment start
    for seg in geometry.segments:
        seg_start = max(cursor, holder_face)
        seg_end = cursor + seg.length
        cursor = seg_end
        if seg_end <= holder_face + 1e-15:
            continue  # fully inside the holder
        span = seg_end - seg_start
        area, second_moment = _section_properties(geometry.section_diameter(seg))
        for i in range(elements_per_segment):
            x_b = seg_start + span * (i + 1) / elements_per_segment - holder_face
            node_a = len(nodes) - 1
            nodes.append(x_b)
            elements.append(BeamElement(node_a, node_a + 1, area, second_moment))
    # land the tip exactly on the overhang length
    nodes[-1] = geometry.overhang_length

    return BeamMesh(nodes=tuple(nodes), elements=tuple(elements), clamped_node=0)


def parse_tool_document(text: str) -> tuple[ToolGeometry, ToolMaterial]:
    """Parse a tool file (JSON, mm/GPa units) into SI domain objects."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"tool file is not valid JSON: {exc}") from exc
    return tool_from_dict(doc)


def tool_from_dict(doc: dict) -> tuple[ToolGeometry, ToolMaterial]:
    for key in ("name", "n_flutes", "overhang_mm", "segments", "material"):
        if key not in doc:
            raise ParseError("missing tool field", field=key)
    segments = []
    for i, seg in enumerate(doc["segments"]):
        for key in ("length_mm", "diameter_mm", "kind"):
            if key not in seg:
                raise ParseError("missing segment field", row=i, field=key)
        segments.append(
            ToolSegment(
                length=mm_to_m(float(seg["length_mm"])),
                outer_diameter=mm_to_m(float(seg["diameter_mm"])),
                kind=str(seg["kind"]),
            )
        )
    mat = doc["material"]
    for key in ("name", "youngs_modulus_gpa", "density_kg_m3"):
        if key not in mat:
            raise ParseError("missing material field", field=key)
    geometry = ToolGeometry(
        segments=tuple(segments),
        overhang_length=mm_to_m(float(doc["overhang_mm"])),
        n_flutes=int(doc["n_flutes"]),
        helix_angle_deg=float(doc.get("helix_angle_deg", 30.0)),
        d_eff_factor=float(doc.get("d_eff_factor", DEFAULT_D_EFF_FACTOR)),
        name=str(doc["name"]),
    )
    material = ToolMaterial(
        youngs_modulus=gpa_to_pa(float(mat["youngs_modulus_gpa"])),
        density=float(mat["density_kg_m3"]),
        name=str(mat["name"]),
    )
    return geometry, material
