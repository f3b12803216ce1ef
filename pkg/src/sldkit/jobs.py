"""Job files and the end-to-end pipeline.

A job file bundles everything one SLD study needs: the tool, an optional
measured-dynamics source, the workpiece material, the cut, sweep and Monte
Carlo settings, and probe points. Dynamics sources resolve by precedence
measured FRF > imported modal table > beam FEM, and the choice is recorded in
a provenance note that ends up in every output.

All boundary units (mm, MPa, GPa, Hz, rpm) are converted here, once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .cutting import CoefficientDatabase, CoefficientSet, CutSpec, resolve_coefficients
from .distributions import Distribution, Fixed, Normal, Uniform
from .errors import InvalidInputError, NotFoundError, ParseError, SldError
from .stability.types import OperatingPoint, SldResult
from .stability.zoa import SweepConfig, zoa_lobes
from .toolmodel.fem import ModeSet, assemble_system, dominant_mode, solve_modes
from .toolmodel.frf import FRF, synthesize_frf
from .toolmodel.geometry import ToolGeometry, ToolMaterial, build_beam_mesh, tool_from_dict
from .toolmodel.imports import import_frf_table, import_modal_table
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
    mode_param_key,
)
from .units import mm_to_m


def _load_schema(name: str) -> dict:
    with resources.files("sldkit.schemas").joinpath(name).open("r") as fh:
        return json.load(fh)


_JOB_SCHEMA = _load_schema("job.schema.json")


def default_coefficient_db() -> CoefficientDatabase:
    text = resources.files("sldkit.data").joinpath("coefficients.json").read_text()
    return CoefficientDatabase.from_document(text)


# --- relative distributions: resolved against each parameter's nominal value ---

@dataclass(frozen=True)
class RelUniform:
    rel: float


@dataclass(frozen=True)
class RelNormal:
    rel_std: float


def dist_from_dict(doc: dict, unit_scale: float = 1.0):
    kind = doc["dist"]
    if kind == "fixed":
        return Fixed(doc["value"] * unit_scale)
    if kind == "uniform":
        return Uniform(doc["lo"] * unit_scale, doc["hi"] * unit_scale)
    if kind == "normal":
        return Normal(doc["mean"] * unit_scale, doc["std"] * unit_scale)
    if kind == "uniform_rel":
        return RelUniform(doc["rel"])
    if kind == "normal_rel":
        return RelNormal(doc["rel_std"])
    raise ParseError(f"unknown distribution kind '{kind}'", field="dist")


def resolve_relative(dist, nominal: float) -> Distribution:
    if isinstance(dist, RelUniform):
        return Uniform(nominal * (1.0 - dist.rel), nominal * (1.0 + dist.rel))
    if isinstance(dist, RelNormal):
        return Normal(nominal, nominal * dist.rel_std)
    return dist


@dataclass(frozen=True)
class MonteCarloConfig:
    n_samples: int = 200
    seed: int = 1
    quantiles: str = "minmax"
    workers: int = 1
    band_grid: int = 1000


@dataclass(frozen=True)
class FemConfig:
    elements_per_segment: int = 8
    n_modes: int = 2
    default_damping: float = 0.02


@dataclass(frozen=True)
class JobSpec:
    name: str
    geometry: ToolGeometry
    tool_material: ToolMaterial
    material_name: str
    coefficient_source: str
    cut_mode: str
    radial_immersion: float
    dynamics_source: str  # "fem" | "ema" | "frf"
    modes: ModeSet | None  # for ema source
    measured_frf: FRF | None  # for frf source
    fem: FemConfig
    sweep: dict  # raw sweep overrides; SweepConfig built once dynamics are known
    speed_window: tuple[float, float] | None
    uncertainty_raw: dict  # param name -> distribution (possibly relative)
    monte_carlo: MonteCarloConfig
    points: tuple[OperatingPoint, ...]
    output_paths: dict
    coefficient_db: CoefficientDatabase
    provenance_note: str


def _json_pointer(error: jsonschema.ValidationError) -> str:
    return "/" + "/".join(str(p) for p in error.absolute_path)


def validate_job_document(doc: dict) -> None:
    validator = jsonschema.Draft7Validator(_JOB_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ParseError(f"job schema violation: {err.message}", field=_json_pointer(err))
    if ("tool" in doc) == ("tool_file" in doc):
        raise ParseError("job must give exactly one of 'tool' or 'tool_file'")


def _read_referenced(path: Path) -> str:
    if not path.exists():
        raise NotFoundError(f"referenced file not found: {path}")
    return path.read_text()


def job_from_dict(doc: dict, base_dir: Path | None = None) -> JobSpec:
    """Validate and fully resolve a job document (file refs relative to base_dir)."""
    base = base_dir or Path.cwd()
    validate_job_document(doc)

    if "tool" in doc:
        geometry, tool_material = tool_from_dict(doc["tool"])
    else:
        geometry, tool_material = tool_from_dict(
            json.loads(_read_referenced(base / doc["tool_file"]))
        )

    modes = None
    measured_frf = None
    notes = []
    if "frf_file" in doc:
        measured_frf = import_frf_table(_read_referenced(base / doc["frf_file"]))
        source = "frf"
        notes.append("dynamics: measured FRF table")
        if "modal_file" in doc:
            notes.append("modal file ignored (FRF takes precedence)")
        notes.append("FEM tool model not used for dynamics")
    elif "modal_file" in doc:
        modes = import_modal_table(_read_referenced(base / doc["modal_file"]))
        source = "ema"
        notes.append("dynamics: imported modal table (overrides FEM)")
    else:
        source = "fem"
        notes.append("dynamics: beam FEM from tool geometry, damping assumed")

    fem_doc = doc.get("fem", {})
    fem = FemConfig(
        elements_per_segment=int(fem_doc.get("elements_per_segment", 8)),
        n_modes=int(fem_doc.get("n_modes", 2)),
        default_damping=float(fem_doc.get("default_damping", 0.02)),
    )

    mc_doc = doc.get("monte_carlo", {})
    monte_carlo = MonteCarloConfig(
        n_samples=int(mc_doc.get("n_samples", 200)),
        seed=int(mc_doc.get("seed", 1)),
        quantiles=str(mc_doc.get("quantiles", "minmax")),
        workers=int(mc_doc.get("workers", 1)),
        band_grid=int(mc_doc.get("band_grid", 1000)),
    )

    window = None
    if "speed_window" in doc:
        win = doc["speed_window"]
        window = (float(win["n_min_rpm"]), float(win["n_max_rpm"]))
        if window[0] >= window[1]:
            raise ParseError("speed_window needs n_min_rpm < n_max_rpm", field="speed_window")

    unc_raw = {}
    unit_scales = {"kt": 1e6, "kr": 1.0, "mode_frequency": 1.0, "mode_damping": 1.0,
                   "mode_stiffness": 1.0}  # kt given in MPa
    for key, dist_doc in doc.get("uncertainty", {}).items():
        unc_raw[key] = dist_from_dict(dist_doc, unit_scales[key])
    if source == "frf" and any(k.startswith("mode_") for k in unc_raw):
        raise InvalidInputError(
            "mode-level uncertainties cannot apply when dynamics come from a measured FRF"
        )

    points = tuple(
        OperatingPoint(float(p["n_rpm"]), mm_to_m(float(p["ap_mm"])))
        for p in doc.get("points", [])
    )

    if "coefficient_db" in doc:
        db = CoefficientDatabase.from_document(_read_referenced(base / doc["coefficient_db"]))
    else:
        db = default_coefficient_db()

    return JobSpec(
        name=str(doc.get("name", geometry.name)),
        geometry=geometry,
        tool_material=tool_material,
        material_name=str(doc["material"]),
        coefficient_source=str(doc.get("coefficient_source", "catalog")),
        cut_mode=str(doc["cut"]["milling_mode"]),
        radial_immersion=float(doc["cut"]["radial_immersion"]),
        dynamics_source=source,
        modes=modes,
        measured_frf=measured_frf,
        fem=fem,
        sweep=doc.get("sweep", {}),
        speed_window=window,
        uncertainty_raw=unc_raw,
        monte_carlo=monte_carlo,
        points=points,
        output_paths=dict(doc.get("outputs", {})),
        coefficient_db=db,
        provenance_note="; ".join(notes),
    )


def load_job(path: str | Path) -> JobSpec:
    path = Path(path)
    if not path.exists():
        raise NotFoundError(f"job file not found: {path}")
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"job file is not valid JSON: {exc}") from exc
    return job_from_dict(doc, base_dir=path.parent)


@dataclass(frozen=True)
class RunResult:
    job: JobSpec
    coeffs: CoefficientSet
    modes: ModeSet | None
    sld: SldResult
    band: UncertaintyBand
    region_grid: RegionGrid
    verdicts: tuple[tuple[OperatingPoint, StabilityVerdict], ...]
    metadata: dict = field(default_factory=dict)


def _tagged(stage: str, exc: SldError) -> SldError:
    return type(exc)(f"[{stage}] {exc}")


def _build_sweep(job: JobSpec, modes: ModeSet | None, frf: FRF | None) -> SweepConfig:
    sweep = job.sweep
    if modes is not None:
        # cover every mode: half the lowest to 1.5x the highest natural frequency
        freqs = [m.natural_frequency for m in modes]
        default_min, default_max = 0.5 * min(freqs), 1.5 * max(freqs)
    else:
        default_min, default_max = float(frf.frequencies[0]), float(frf.frequencies[-1])
        if default_min <= 0.0:
            default_min = float(frf.frequencies[1])
    return SweepConfig(
        f_min_hz=float(sweep.get("f_min_hz", default_min)),
        f_max_hz=float(sweep.get("f_max_hz", default_max)),
        n_freq=int(sweep.get("n_freq", 2000)),
        depth_cap_factor=float(sweep.get("depth_cap_factor", 10.0)),
        envelope_grid=int(sweep.get("envelope_grid", 1000)),
    )


def _uncertainty_spec(job: JobSpec, coeffs: CoefficientSet,
                      modes: ModeSet | None) -> UncertaintySpec:
    """Merge job-level overrides with the coefficient DB's own uncertainty."""
    dists: dict[str, Distribution] = {}
    for param in ("kt", "kr"):
        if param in job.uncertainty_raw:
            nominal = getattr(coeffs, param)
            dists[param] = resolve_relative(job.uncertainty_raw[param], nominal)
        elif param in coeffs.uncertainty:
            dists[param] = coeffs.uncertainty[param]
    if modes is not None:
        mode_fields = {
            "mode_frequency": "natural_frequency",
            "mode_damping": "damping_ratio",
            "mode_stiffness": "modal_stiffness",
        }
        for job_key, attr in mode_fields.items():
            if job_key not in job.uncertainty_raw:
                continue
            raw = job.uncertainty_raw[job_key]
            for i, mode in enumerate(modes):
                dists[mode_param_key(i, attr)] = resolve_relative(raw, getattr(mode, attr))
    return UncertaintySpec(dists)


def run_job(job: JobSpec) -> RunResult:
    """Execute the whole pipeline: dynamics, nominal SLD, band, grid, verdicts."""
    try:
        coeffs = resolve_coefficients(job.material_name, job.coefficient_source,
                                      job.coefficient_db)
    except SldError as exc:
        raise _tagged("cutting-mechanics", exc) from exc

    cut = CutSpec(job.cut_mode, job.radial_immersion, job.geometry.n_flutes)

    try:
        if job.dynamics_source == "fem":
            mesh = build_beam_mesh(job.geometry, job.fem.elements_per_segment)
            system = assemble_system(mesh, job.tool_material)
            modes = solve_modes(system, job.fem.n_modes, job.fem.default_damping)
        else:
            modes = job.modes  # None for measured-FRF source
    except SldError as exc:
        raise _tagged("tool-model", exc) from exc

    sweep = _build_sweep(job, modes, job.measured_frf)
    if modes is not None:
        grid_hz = sweep.frequencies_hz
        nominal_frf = synthesize_frf(modes, grid_hz)
        dominant_hz = dominant_mode(modes, "X").natural_frequency

        def frf_builder(scenario: Scenario) -> FRF:
            return synthesize_frf(scenario.modes, grid_hz)

    else:
        nominal_frf = job.measured_frf
        dominant_hz = nominal_frf.peak_frequency

        def frf_builder(scenario: Scenario) -> FRF:
            return nominal_frf

    try:
        sld = zoa_lobes(nominal_frf, cut, coeffs, sweep, int(job.sweep.get("k_max", 5)),
                        speed_window=job.speed_window, dominant_freq_hz=dominant_hz)
    except SldError as exc:
        raise _tagged("stability-core", exc) from exc

    try:
        spec = _uncertainty_spec(job, coeffs, modes)
        scenarios = draw_scenarios(coeffs, modes, spec, job.monte_carlo.n_samples,
                                   job.monte_carlo.seed)
        band = compute_band(
            scenarios, cut, frf_builder, sweep, int(job.sweep.get("k_max", 5)),
            quantiles=job.monte_carlo.quantiles, band_grid=job.monte_carlo.band_grid,
            speed_window=job.speed_window, dominant_freq_hz=dominant_hz,
            workers=job.monte_carlo.workers,
        )
        region = build_region_grid(band)
        verdicts = tuple(
            (point, classify_probabilistic(point, band)) for point in job.points
        )
    except SldError as exc:
        raise _tagged("uncertainty", exc) from exc

    damping_source = "measured" if job.dynamics_source in ("ema", "frf") else "assumed"
    metadata = {
        "tool_name": job.geometry.name,
        "material": job.material_name,
        "dynamics_source": job.dynamics_source,
        "damping_source": damping_source,
        "coefficient_provenance": coeffs.provenance,
        "seed": job.monte_carlo.seed,
        "n_samples": job.monte_carlo.n_samples,
        "quantiles": job.monte_carlo.quantiles,
        "n_failed_scenarios": len(band.failed_scenarios),
        "provenance_note": job.provenance_note,
        "zone_thresholds_note": str(sld.metadata.get("zone_thresholds", "")),
    }
    return RunResult(
        job=job, coeffs=coeffs, modes=modes, sld=sld, band=band, region_grid=region,
        verdicts=verdicts, metadata=metadata,
    )
