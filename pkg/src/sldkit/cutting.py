"""Cutting-force coefficients and milling engagement geometry.

Angle convention: the tooth angle phi is measured from the +Y axis in the
cutting direction, so up-milling enters at phi = 0 and slot milling spans
(0, pi). Getting this wrong flips the lobe geometry, which is why the
convention is stated here once and every consumer (lobe construction and the
time-domain oracle) imports these functions instead of re-deriving them.

The averaged directional factors are exact closed forms (antiderivative
evaluated between entry and exit); no quadrature is involved.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import Distribution, Fixed, Normal, Uniform
from .errors import InvalidInputError, NotFoundError, ParseError
from .units import mpa_to_pa

MILLING_MODES = ("up", "down", "slot")
DEFAULT_CATALOG_REL_UNC = 0.30


@dataclass(frozen=True)
class CoefficientSet:
    """Tangential specific force kt (Pa) and radial ratio kr, with provenance."""

    kt: float
    kr: float
    provenance: str = "catalog"  # "catalog" | "test"
    uncertainty: dict[str, Distribution] = field(default_factory=dict)

    def __post_init__(self):
        if self.kt <= 0.0:
            raise InvalidInputError("kt must be positive")
        if not 0.0 < self.kr < 2.0:
            raise InvalidInputError(f"kr must lie in (0, 2), got {self.kr}")
        if self.provenance not in ("catalog", "test"):
            raise InvalidInputError(f"unknown coefficient provenance '{self.provenance}'")

    def with_values(self, kt: float, kr: float) -> "CoefficientSet":
        return CoefficientSet(kt=kt, kr=kr, provenance=self.provenance,
                              uncertainty=self.uncertainty)


@dataclass(frozen=True)
class CutSpec:
    milling_mode: str  # "up" | "down" | "slot"
    radial_immersion: float  # a_r / D in (0, 1]
    n_teeth: int

    def __post_init__(self):
        if self.milling_mode not in MILLING_MODES:
            raise InvalidInputError(f"milling_mode must be one of {MILLING_MODES}")
        if not 0.0 < self.radial_immersion <= 1.0:
            raise InvalidInputError("radial_immersion must lie in (0, 1]")
        if self.milling_mode == "slot" and self.radial_immersion != 1.0:
            raise InvalidInputError("slot milling implies radial_immersion = 1")
        if self.n_teeth < 1:
            raise InvalidInputError("n_teeth must be a positive integer")


@dataclass(frozen=True)
class AlphaMatrix:
    axx: float
    axy: float
    ayx: float
    ayy: float

    def __post_init__(self):
        for v in (self.axx, self.axy, self.ayx, self.ayy):
            if not math.isfinite(v):
                raise InvalidInputError("directional factors must be finite")

    @property
    def det(self) -> float:
        return self.axx * self.ayy - self.axy * self.ayx


def engagement_angles(cut: CutSpec) -> tuple[float, float]:
    """Entry and exit angles (rad) for the given milling mode and immersion."""
    r = cut.radial_immersion
    if cut.milling_mode == "slot":
        return 0.0, math.pi
    if cut.milling_mode == "up":
        return 0.0, math.acos(1.0 - 2.0 * r)
    return math.acos(2.0 * r - 1.0), math.pi  # down


def directional_factors(phi_start: float, phi_exit: float, kr: float) -> AlphaMatrix:
    """Averaged directional factors between entry and exit (closed form)."""
    if not 0.0 <= phi_start < phi_exit <= math.pi + 1e-12:
        raise InvalidInputError(
            f"need 0 <= phi_start < phi_exit <= pi, got ({phi_start}, {phi_exit})"
        )

    def bracket(phi: float) -> tuple[float, float, float, float]:
        s2, c2 = math.sin(2.0 * phi), math.cos(2.0 * phi)
        fxx = 0.5 * (c2 - 2.0 * kr * phi + kr * s2)
        fxy = 0.5 * (-s2 - 2.0 * phi + kr * c2)
        fyx = 0.5 * (-s2 + 2.0 * phi + kr * c2)
        fyy = 0.5 * (-c2 - 2.0 * kr * phi - kr * s2)
        return fxx, fxy, fyx, fyy

    hi = bracket(phi_exit)
    lo = bracket(phi_start)
    return AlphaMatrix(*(h - l for h, l in zip(hi, lo)))


def instantaneous_factors(phi: np.ndarray, kr: float) -> tuple[np.ndarray, ...]:
    """Per-tooth directional coefficients at tooth angle phi (vectorized).

    These are the integrands whose antiderivatives ``directional_factors``
    evaluates; the time-domain stability oracle sums them over engaged teeth.
    """
    s2, c2 = np.sin(2.0 * phi), np.cos(2.0 * phi)
    axx = -(s2 + kr * (1.0 - c2))
    axy = -((1.0 + c2) + kr * s2)
    ayx = (1.0 - c2) - kr * s2
    ayy = s2 - kr * (1.0 + c2)
    return axx, axy, ayx, ayy


# ---------------------------------------------------------------------------
# Coefficient database
# ---------------------------------------------------------------------------

class CoefficientDatabase:
    """Immutable lookup of kt/kr per workpiece material, catalog and test sourced."""

    def __init__(self, materials: dict[str, dict]):
        self._materials = materials

    @classmethod
    def from_document(cls, text: str) -> "CoefficientDatabase":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"coefficient DB is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict) or "materials" not in doc:
            raise ParseError("coefficient DB must contain a 'materials' array",
                             field="materials")
        materials = {}
        for i, entry in enumerate(doc["materials"]):
            if "name" not in entry:
                raise ParseError("material entry missing name", row=i, field="name")
            materials[str(entry["name"])] = entry
        return cls(materials)

    @property
    def material_names(self) -> list[str]:
        return sorted(self._materials)

    def sources_for(self, name: str) -> list[str]:
        entry = self._materials.get(name, {})
        sources = []
        if "catalog" in entry:
            sources.append("catalog")
        if entry.get("tests"):
            sources.append("test")
        return sources

    def entry(self, name: str) -> dict:
        if name not in self._materials:
            raise NotFoundError(
                f"unknown material '{name}'; available: {', '.join(self.material_names)}"
            )
        return self._materials[name]


def resolve_coefficients(material_name: str, source: str,
                         database: CoefficientDatabase) -> CoefficientSet:
    """Look up coefficients; catalog entries get the customary wide uncertainty."""
    if source not in ("catalog", "test"):
        raise InvalidInputError(f"coefficient source must be catalog or test, got '{source}'")
    entry = database.entry(material_name)

    if source == "catalog":
        if "catalog" not in entry:
            raise NotFoundError(
                f"material '{material_name}' has no catalog record; "
                f"available sources: {', '.join(database.sources_for(material_name)) or 'none'}"
            )
        cat = entry["catalog"]
        kt = mpa_to_pa(float(cat["kt_mpa"]))
        kr = float(cat["kr"])
        kt_rel = float(cat.get("kt_rel_unc", DEFAULT_CATALOG_REL_UNC))
        kr_rel = float(cat.get("kr_rel_unc", DEFAULT_CATALOG_REL_UNC))
        uncertainty = {
            "kt": Uniform(kt * (1.0 - kt_rel), kt * (1.0 + kt_rel)),
            "kr": Uniform(kr * (1.0 - kr_rel), kr * (1.0 + kr_rel)),
        }
        return CoefficientSet(kt=kt, kr=kr, provenance="catalog", uncertainty=uncertainty)

    tests = entry.get("tests") or []
    if not tests:
        raise NotFoundError(
            f"material '{material_name}' has no test records; "
            f"available sources: {', '.join(database.sources_for(material_name)) or 'none'}"
        )
    rec = tests[0]
    kt = mpa_to_pa(float(rec["kt_mpa_mean"]))
    kt_std = mpa_to_pa(float(rec["kt_mpa_std"]))
    kr = float(rec["kr_mean"])
    kr_std = float(rec.get("kr_std", 0.0))
    uncertainty: dict[str, Distribution] = {"kt": Normal(kt, kt_std)}
    uncertainty["kr"] = Normal(kr, kr_std) if kr_std > 0.0 else Fixed(kr)
    return CoefficientSet(kt=kt, kr=kr, provenance="test", uncertainty=uncertainty)
