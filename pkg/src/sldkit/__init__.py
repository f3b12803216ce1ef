"""sldkit: uncertainty-aware stability lobe diagrams for milling.

Builds tool-tip dynamics from CAM-style geometry or measured modal data,
constructs zero-order stability lobes, cross-checks them with a
full-discretization Floquet oracle, and propagates input uncertainty into the
three-region (stable / conditional / unstable) map that drives parameter
selection.
"""

__version__ = "0.1.0"

from .cutting import (
    AlphaMatrix,
    CoefficientDatabase,
    CoefficientSet,
    CutSpec,
    directional_factors,
    engagement_angles,
    resolve_coefficients,
)
from .distributions import Fixed, Normal, Uniform
from .errors import (
    InvalidGeometryError,
    InvalidInputError,
    NotFoundError,
    NumericError,
    OutOfRangeError,
    ParseError,
    SldError,
)
from .stability import (
    LobeCurve,
    OperatingPoint,
    SldResult,
    SweepConfig,
    ZoneLabel,
    chatter_eigenvalue,
    classify_deterministic,
    critical_depth,
    fdm_spectral_radius,
    spindle_speeds,
    zoa_lobes,
    zone_annotate,
)
from .toolmodel import (
    FRF,
    BeamMesh,
    Mode,
    ModeSet,
    SystemMatrices,
    ToolGeometry,
    ToolMaterial,
    ToolSegment,
    assemble_system,
    build_beam_mesh,
    import_frf_table,
    import_modal_table,
    solve_modes,
    synthesize_frf,
)
from .uncertainty import (
    RegionGrid,
    Scenario,
    StabilityVerdict,
    UncertaintyBand,
    UncertaintySpec,
    build_region_grid,
    classify_probabilistic,
    compute_band,
    draw_scenarios,
)
