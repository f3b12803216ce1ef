"""Monte Carlo propagation of input uncertainty into a three-region map.

Scenario 0 is always the nominal input set, so the deterministic envelope is
inside the band by construction. Every (parameter, scenario) pair draws from
its own counter-based substream (seed, scenario index, parameter key), which
buys two properties at once: results are bitwise independent of evaluation
order or parallelism, and re-runs that add or remove *other* uncertain
parameters reuse identical draws (common random numbers), so band comparisons
are noise-free.

The default band quantiles are min/max: "unconditionally" stable/unstable
means under every sampled scenario. The optional q05/q95 pair trims outliers
but then the band edges no longer imply p_stable of exactly 1 or 0.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .cutting import CoefficientSet, CutSpec
from .distributions import Distribution, Fixed, sample_positive
from .errors import InvalidInputError, OutOfRangeError, SldError
from .stability.types import OperatingPoint
from .stability.zoa import SweepConfig, zoa_lobes
from .toolmodel.fem import Mode, ModeSet

QUANTILE_PAIRS = ("minmax", "q05q95")
MAX_FAILED_FRACTION = 0.10

CLASS_STABLE = "unconditionally_stable"
CLASS_CONDITIONAL = "conditional"
CLASS_UNSTABLE = "unconditionally_unstable"

MODE_PARAMS = ("natural_frequency", "damping_ratio", "modal_stiffness")


def mode_param_key(index: int, param: str) -> str:
    """Canonical parameter key for one mode's uncertain quantity."""
    if param not in MODE_PARAMS:
        raise InvalidInputError(f"unknown mode parameter '{param}'")
    return f"mode[{index}].{param}"


@dataclass(frozen=True)
class UncertaintySpec:
    """Map of parameter key ('kt', 'kr', 'mode[i].param') to distribution."""

    distributions: dict[str, Distribution] = field(default_factory=dict)

    def keys(self) -> list[str]:
        return sorted(self.distributions)

    def is_empty(self) -> bool:
        return all(isinstance(d, Fixed) for d in self.distributions.values())


@dataclass(frozen=True)
class Scenario:
    index: int
    coeffs: CoefficientSet
    modes: ModeSet | None


def _param_rng(seed: int, scenario_index: int, key: str) -> np.random.Generator:
    digest = hashlib.sha1(key.encode()).digest()
    words = (
        int.from_bytes(digest[0:4], "little"),
        int.from_bytes(digest[4:8], "little"),
    )
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(scenario_index, *words))
    return np.random.Generator(np.random.PCG64(ss))


def draw_scenarios(nominal_coeffs: CoefficientSet, nominal_modes: ModeSet | None,
                   spec: UncertaintySpec, n_samples: int, seed: int) -> list[Scenario]:
    """Realize ``n_samples`` scenarios; index 0 is always the nominal inputs."""
    if n_samples < 1:
        raise InvalidInputError("n_samples must be >= 1")
    n_modes = len(nominal_modes) if nominal_modes is not None else 0
    for key in spec.keys():
        if key in ("kt", "kr"):
            continue
        if key.startswith("mode["):
            idx = int(key.split("[", 1)[1].split("]", 1)[0])
            if idx >= n_modes:
                raise InvalidInputError(
                    f"uncertainty key '{key}' refers to a mode that does not exist "
                    f"({n_modes} modes available)"
                )
            continue
        raise InvalidInputError(f"unknown uncertainty parameter '{key}'")

    scenarios = [Scenario(0, nominal_coeffs, nominal_modes)]
    for i in range(1, n_samples):
        kt, kr = nominal_coeffs.kt, nominal_coeffs.kr
        if "kt" in spec.distributions:
            kt = sample_positive(spec.distributions["kt"], _param_rng(seed, i, "kt"))
        if "kr" in spec.distributions:
            kr = sample_positive(spec.distributions["kr"], _param_rng(seed, i, "kr"))
        try:
            coeffs = nominal_coeffs.with_values(kt=kt, kr=kr)
        except InvalidInputError as exc:
            raise InvalidInputError(f"scenario {i}: realized coefficients invalid: {exc}") from exc

        modes = nominal_modes
        if nominal_modes is not None:
            realized: list[Mode] = []
            for j, mode in enumerate(nominal_modes):
                values = {}
                for param in MODE_PARAMS:
                    key = mode_param_key(j, param)
                    if key in spec.distributions:
                        values[param] = sample_positive(
                            spec.distributions[key], _param_rng(seed, i, key)
                        )
                try:
                    realized.append(replace(mode, **values) if values else mode)
                except InvalidInputError as exc:
                    raise InvalidInputError(
                        f"scenario {i}: realized mode {j} invalid: {exc}"
                    ) from exc
            modes = tuple(realized)
        scenarios.append(Scenario(i, coeffs, modes))
    return scenarios


@dataclass(frozen=True)
class UncertaintyBand:
    speed_grid: np.ndarray = field(repr=False)  # rpm
    a_low: np.ndarray = field(repr=False)  # m
    a_high: np.ndarray = field(repr=False)
    nominal: np.ndarray = field(repr=False)
    quantiles: str = "minmax"
    scenario_envelopes: np.ndarray | None = field(default=None, repr=False)
    failed_scenarios: tuple[tuple[int, str], ...] = ()
    n_scenarios: int = 1

    def __post_init__(self):
        if np.any(self.a_low > self.a_high):
            raise InvalidInputError("band lower envelope exceeds upper envelope")
        if self.quantiles == "minmax":
            if np.any(self.a_low > self.nominal) or np.any(self.nominal > self.a_high):
                raise InvalidInputError("nominal envelope escapes a min/max band")

    @property
    def speed_window(self) -> tuple[float, float]:
        return float(self.speed_grid[0]), float(self.speed_grid[-1])

    def interpolate(self, n_rpm: float) -> tuple[float, float, float]:
        lo = float(np.interp(n_rpm, self.speed_grid, self.a_low))
        hi = float(np.interp(n_rpm, self.speed_grid, self.a_high))
        nom = float(np.interp(n_rpm, self.speed_grid, self.nominal))
        return lo, hi, nom


def compute_band(scenarios: list[Scenario], cut: CutSpec,
                 frf_builder: Callable[[Scenario], object], sweep: SweepConfig,
                 k_max: int, quantiles: str = "minmax", band_grid: int = 1000,
                 speed_window: tuple[float, float] | None = None,
                 dominant_freq_hz: float | None = None, workers: int = 1,
                 keep_scenario_envelopes: bool = True) -> UncertaintyBand:
    """Per-scenario lobe envelopes reduced to a lower/upper uncertainty band."""
    if not scenarios:
        raise InvalidInputError("need at least one scenario")
    if quantiles not in QUANTILE_PAIRS:
        raise InvalidInputError(f"quantiles must be one of {QUANTILE_PAIRS}")

    def run(scenario: Scenario):
        frf = frf_builder(scenario)
        return zoa_lobes(frf, cut, scenario.coeffs, sweep, k_max,
                         speed_window=speed_window, dominant_freq_hz=dominant_freq_hz)

    results: list = [None] * len(scenarios)
    failures: list[tuple[int, str]] = []
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_guarded(run), scenarios))
    else:
        outcomes = [_guarded(run)(s) for s in scenarios]
    for scenario, outcome in zip(scenarios, outcomes):
        if isinstance(outcome, Exception):
            if scenario.index == 0:
                raise outcome
            failures.append((scenario.index, str(outcome)))
        else:
            results[scenario.index] = outcome

    if len(failures) > MAX_FAILED_FRACTION * len(scenarios):
        detail = "; ".join(f"#{i}: {msg}" for i, msg in failures[:5])
        raise SldError(
            f"{len(failures)}/{len(scenarios)} scenarios failed "
            f"(tolerated fraction {MAX_FAILED_FRACTION:.0%}): {detail}"
        )

    ok = [r for r in results if r is not None]
    win_lo = max(r.speed_window[0] for r in ok)
    win_hi = min(r.speed_window[1] for r in ok)
    if win_lo >= win_hi:
        raise SldError("scenario speed windows have empty intersection")
    grid = np.linspace(win_lo, win_hi, band_grid)
    stack = np.empty((len(ok), band_grid))
    row = 0
    row_of_scenario = {}
    for idx, r in enumerate(results):
        if r is None:
            continue
        stack[row] = np.interp(grid, r.envelope_speed, r.envelope_depth)
        row_of_scenario[idx] = row
        row += 1

    if quantiles == "minmax":
        a_low = stack.min(axis=0)
        a_high = stack.max(axis=0)
    else:
        a_low = np.quantile(stack, 0.05, axis=0)
        a_high = np.quantile(stack, 0.95, axis=0)

    return UncertaintyBand(
        speed_grid=grid,
        a_low=a_low,
        a_high=a_high,
        nominal=stack[row_of_scenario[0]],
        quantiles=quantiles,
        scenario_envelopes=stack if keep_scenario_envelopes else None,
        failed_scenarios=tuple(failures),
        n_scenarios=len(scenarios),
    )


def _guarded(fn):
    def wrapper(arg):
        try:
            return fn(arg)
        except SldError as exc:
            return exc

    return wrapper


@dataclass(frozen=True)
class RegionGrid:
    speed_axis: np.ndarray = field(repr=False)  # rpm
    depth_axis: np.ndarray = field(repr=False)  # m, cell lower edges
    classes: np.ndarray = field(repr=False)  # str matrix (n_depth, n_speed)


def build_region_grid(band: UncertaintyBand, depth_cells: int = 120,
                      speed_cells: int = 160, depth_max: float | None = None) -> RegionGrid:
    """Classify a depth x speed raster against the band.

    Cells are closed below / open above in depth: a cell belongs to the stable
    region iff its lower edge is strictly below a_low, to the unstable region
    iff its lower edge reaches a_high.
    """
    if depth_cells < 2 or speed_cells < 2:
        raise InvalidInputError("region grid needs at least 2 cells per axis")
    speeds = np.linspace(band.speed_grid[0], band.speed_grid[-1], speed_cells)
    if depth_max is None:
        depth_max = 1.2 * float(band.a_high.max())
    depths = np.linspace(0.0, depth_max, depth_cells)
    lo = np.interp(speeds, band.speed_grid, band.a_low)
    hi = np.interp(speeds, band.speed_grid, band.a_high)
    d = depths[:, None]
    classes = np.where(
        d < lo[None, :], CLASS_STABLE, np.where(d >= hi[None, :], CLASS_UNSTABLE, CLASS_CONDITIONAL)
    )
    return RegionGrid(speed_axis=speeds, depth_axis=depths, classes=classes)


@dataclass(frozen=True)
class StabilityVerdict:
    class_: str
    p_stable: float
    margin: float  # m, nearest band edge minus the probed depth

    def __post_init__(self):
        if not 0.0 <= self.p_stable <= 1.0:
            raise InvalidInputError("p_stable must lie in [0, 1]")


def classify_probabilistic(point: OperatingPoint, band: UncertaintyBand) -> StabilityVerdict:
    """Verdict for one operating point from the band and scenario envelopes."""
    if band.scenario_envelopes is None:
        raise InvalidInputError("band was built without per-scenario envelopes")
    n = point.spindle_speed
    lo_w, hi_w = band.speed_window
    if n < lo_w or n > hi_w:
        raise OutOfRangeError(
            f"speed {n} rpm outside the band window [{lo_w:.1f}, {hi_w:.1f}] rpm"
        )
    a_low, a_high, _ = band.interpolate(n)
    grid = band.speed_grid
    j = min(max(int(np.searchsorted(grid, n, side="right")) - 1, 0), grid.size - 2)
    t = (n - grid[j]) / (grid[j + 1] - grid[j])
    stack = band.scenario_envelopes
    env_at_n = stack[:, j] + t * (stack[:, j + 1] - stack[:, j])
    p_stable = float(np.mean(point.axial_depth < env_at_n))

    if point.axial_depth < a_low:
        class_ = CLASS_STABLE
        margin = a_low - point.axial_depth
    elif point.axial_depth >= a_high:
        class_ = CLASS_UNSTABLE
        margin = a_high - point.axial_depth
    else:
        class_ = CLASS_CONDITIONAL
        d_low = point.axial_depth - a_low
        d_high = a_high - point.axial_depth
        margin = (a_low - point.axial_depth) if d_low <= d_high else (a_high - point.axial_depth)
    return StabilityVerdict(class_=class_, p_stable=p_stable, margin=margin)


def classify_on_grid(grid: RegionGrid, point: OperatingPoint) -> str:
    """Class of the grid node nearest to the point (for consistency checks)."""
    i = int(np.argmin(np.abs(grid.depth_axis - point.axial_depth)))
    j = int(np.argmin(np.abs(grid.speed_axis - point.spindle_speed)))
    return str(grid.classes[i, j])
