"""Tool-tip frequency response functions.

Synthesized FRFs come from modal superposition of the tip-referred modes:

    G(w) = sum_i (1/k_i) * w_i^2 / (w_i^2 - w^2 + 2j*zeta_i*w_i*w)

per direction. Measured FRFs are imported as-is and carry their own grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidInputError
from .fem import ModeSet, modes_in_direction


@dataclass(frozen=True)
class FRF:
    frequencies: np.ndarray = field(repr=False)  # Hz, strictly increasing
    g_xx: np.ndarray = field(repr=False)  # complex, m/N
    g_yy: np.ndarray = field(repr=False)
    provenance: str = "synthesized"  # "synthesized" | "measured"

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=float)
        if f.ndim != 1 or f.size == 0:
            raise InvalidInputError("FRF frequency grid must be a non-empty 1-D array")
        if np.any(np.diff(f) <= 0.0):
            raise InvalidInputError("FRF frequencies must be strictly increasing")
        if self.g_xx.shape != f.shape or self.g_yy.shape != f.shape:
            raise InvalidInputError("FRF value arrays must match the frequency grid")
        if self.provenance not in ("synthesized", "measured"):
            raise InvalidInputError(f"unknown FRF provenance '{self.provenance}'")

    def interpolate(self, f_hz: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Linear interpolation of both diagonal terms at the given Hz grid."""
        f_hz = np.asarray(f_hz, dtype=float)
        if np.any(f_hz < self.frequencies[0]) or np.any(f_hz > self.frequencies[-1]):
            raise InvalidInputError(
                f"requested frequencies outside the FRF grid "
                f"[{self.frequencies[0]}, {self.frequencies[-1]}] Hz"
            )
        gxx = np.interp(f_hz, self.frequencies, self.g_xx.real) + 1j * np.interp(
            f_hz, self.frequencies, self.g_xx.imag
        )
        gyy = np.interp(f_hz, self.frequencies, self.g_yy.real) + 1j * np.interp(
            f_hz, self.frequencies, self.g_yy.imag
        )
        return gxx, gyy

    @property
    def peak_frequency(self) -> float:
        """Frequency of the largest compliance magnitude (dominant resonance)."""
        mag = np.maximum(np.abs(self.g_xx), np.abs(self.g_yy))
        return float(self.frequencies[int(np.argmax(mag))])


def _superpose(modes: list, omega: np.ndarray) -> np.ndarray:
    g = np.zeros_like(omega, dtype=complex)
    for m in modes:
        wn = m.omega
        g += (1.0 / m.modal_stiffness) * wn**2 / (
            wn**2 - omega**2 + 2j * m.damping_ratio * wn * omega
        )
    return g


def synthesize_frf(modes: ModeSet, frequencies: np.ndarray) -> FRF:
    """Modal-superposition FRF on the given Hz grid, per direction."""
    if not modes:
        raise InvalidInputError("cannot synthesize an FRF from an empty mode list")
    f = np.asarray(frequencies, dtype=float)
    if f.ndim != 1 or f.size == 0:
        raise InvalidInputError("frequency grid must be a non-empty 1-D array")
    if np.any(f < 0.0) or np.any(np.diff(f) <= 0.0):
        raise InvalidInputError("frequency grid must be non-negative and strictly increasing")
    omega = 2.0 * np.pi * f
    x_modes = modes_in_direction(modes, "X")
    y_modes = modes_in_direction(modes, "Y")
    if not x_modes or not y_modes:
        raise InvalidInputError("mode set must cover both X and Y directions")
    return FRF(
        frequencies=f,
        g_xx=_superpose(x_modes, omega),
        g_yy=_superpose(y_modes, omega),
        provenance="synthesized",
    )
