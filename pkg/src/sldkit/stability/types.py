"""Result types shared by the frequency-domain and time-domain stability code."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidInputError


@dataclass(frozen=True)
class OperatingPoint:
    spindle_speed: float  # rpm
    axial_depth: float  # m; zero is the air-cut limit used by the time-domain oracle

    def __post_init__(self):
        if self.spindle_speed <= 0.0:
            raise InvalidInputError("spindle_speed must be positive")
        if self.axial_depth < 0.0:
            raise InvalidInputError("axial_depth must be non-negative")


@dataclass(frozen=True)
class ZoneLabel:
    n_lo: float  # rpm
    n_hi: float
    zone: str  # "A" | "B" | "C" | "D"


@dataclass(frozen=True)
class LobeCurve:
    """One lobe family, points in sweep (chatter-frequency) order.

    For a single dominant mode the spindle speed is strictly monotone in the
    chatter frequency within a lobe; richer FRFs can fold the curve, which the
    envelope construction handles run by run.
    """

    lobe_index: int
    omega_c: np.ndarray = field(repr=False)  # rad/s
    spindle_speed: np.ndarray = field(repr=False)  # rpm
    depth_limit: np.ndarray = field(repr=False)  # m

    def __post_init__(self):
        if self.lobe_index < 0:
            raise InvalidInputError("lobe_index must be >= 0")
        if not (self.omega_c.shape == self.spindle_speed.shape == self.depth_limit.shape):
            raise InvalidInputError("lobe point arrays must share one shape")
        if self.depth_limit.size and (
            not np.all(np.isfinite(self.depth_limit)) or np.any(self.depth_limit <= 0.0)
        ):
            raise InvalidInputError("lobe depths must be finite and positive")

    @property
    def n_points(self) -> int:
        return int(self.omega_c.size)


@dataclass(frozen=True)
class SldResult:
    lobes: tuple[LobeCurve, ...]
    envelope_speed: np.ndarray = field(repr=False)  # rpm grid
    envelope_depth: np.ndarray = field(repr=False)  # m
    zone_labels: tuple[ZoneLabel, ...]
    depth_cap: float
    dominant_freq_hz: float
    metadata: dict = field(default_factory=dict)

    @property
    def speed_window(self) -> tuple[float, float]:
        return float(self.envelope_speed[0]), float(self.envelope_speed[-1])

    def envelope_at(self, speed_rpm) -> np.ndarray:
        return np.interp(speed_rpm, self.envelope_speed, self.envelope_depth)
