"""Zero-order frequency-domain stability lobes.

For each candidate chatter frequency the oriented-transfer-function eigenvalue
problem

    a0 * L^2 + a1 * L + 1 = 0,
    a0 = g_xx * g_yy * (axx*ayy - axy*ayx),   a1 = axx*g_xx + ayy*g_yy

is solved for the complex eigenvalue L = L_R + i*L_I. Roots with L_R < 0 map
to a positive limiting depth

    a_lim = -(2*pi*L_R / (N*kt)) * (1 + kappa^2),   kappa = L_I / L_R

and to one spindle speed per lobe index k through the phase condition

    psi = atan(kappa),  eps = pi - 2*psi,  T_k = (eps + 2*k*pi)/omega_c,
    n_k = 60 / (N * T_k).

The sweep is vectorized over the whole frequency grid; per frequency the root
with the smallest positive depth governs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..cutting import AlphaMatrix, CoefficientSet, CutSpec, directional_factors, engagement_angles
from ..errors import InvalidInputError, NumericError, OutOfRangeError
from .types import LobeCurve, OperatingPoint, SldResult, ZoneLabel

DEGENERACY_RTOL = 1e-24  # |a0| below this times |a1|^2 -> linear root only


@dataclass(frozen=True)
class ChatterEigenvalue:
    lambda_re: float
    lambda_im: float

    @property
    def kappa(self) -> float:
        return self.lambda_im / self.lambda_re


@dataclass(frozen=True)
class SweepConfig:
    f_min_hz: float
    f_max_hz: float
    n_freq: int = 2000
    depth_cap_factor: float = 10.0
    envelope_grid: int = 1000

    def __post_init__(self):
        if not 0.0 < self.f_min_hz < self.f_max_hz:
            raise InvalidInputError("sweep window must satisfy 0 < f_min < f_max")
        if self.n_freq < 2:
            raise InvalidInputError("n_freq must be >= 2")
        if self.depth_cap_factor <= 1.0:
            raise InvalidInputError("depth_cap_factor must exceed 1")
        if self.envelope_grid < 2:
            raise InvalidInputError("envelope_grid must be >= 2")

    @property
    def frequencies_hz(self) -> np.ndarray:
        return np.linspace(self.f_min_hz, self.f_max_hz, self.n_freq)


def _quadratic_roots(a0: np.ndarray, a1: np.ndarray) -> np.ndarray:
    """Roots of a0*x^2 + a1*x + 1 = 0, numerically stable for |a0| -> 0.

    Returns shape (2, n); degenerate entries hold the single root -1/a1 twice.
    """
    a0 = np.atleast_1d(np.asarray(a0, dtype=complex))
    a1 = np.atleast_1d(np.asarray(a1, dtype=complex))
    degenerate = np.abs(a0) <= DEGENERACY_RTOL * np.abs(a1) ** 2
    singular = degenerate & (np.abs(a1) == 0.0)
    if np.any(singular):
        raise NumericError("chatter eigenvalue problem singular: both FRF terms vanish")

    s = np.sqrt(a1**2 - 4.0 * a0)
    # pick the sqrt branch that avoids cancellation in a1 + s
    flip = np.real(np.conj(a1) * s) < 0.0
    s = np.where(flip, -s, s)
    q = -0.5 * (a1 + s)
    with np.errstate(divide="ignore", invalid="ignore"):
        r_big = np.where(degenerate, np.inf + 0j, q / np.where(a0 == 0, 1.0, a0))
        r_small = np.where(np.abs(q) == 0.0, np.inf + 0j, 1.0 / q)
        r_lin = -1.0 / np.where(a1 == 0, 1.0, a1)
    roots = np.stack([np.where(degenerate, r_lin, r_big),
                      np.where(degenerate, r_lin, r_small)])
    return roots


def chatter_eigenvalue(frf, omega_c: float, alpha: AlphaMatrix) -> list[ChatterEigenvalue]:
    """Both eigenvalue roots at one chatter frequency (rad/s), unfiltered."""
    gxx, gyy = frf.interpolate(np.array([omega_c / (2.0 * math.pi)]))
    a0 = gxx * gyy * alpha.det
    a1 = alpha.axx * gxx + alpha.ayy * gyy
    roots = _quadratic_roots(a0, a1)[:, 0]
    out = [ChatterEigenvalue(float(r.real), float(r.imag)) for r in roots if np.isfinite(r)]
    # collapse the duplicated degenerate root
    if len(out) == 2 and out[0] == out[1]:
        out = out[:1]
    return out


def critical_depth(ev: ChatterEigenvalue, n_teeth: int, kt: float) -> float:
    """Limiting axial depth (m) for one eigenvalue with negative real part."""
    if ev.lambda_re >= 0.0:
        raise InvalidInputError("eigenvalue with non-negative real part has no positive depth")
    if kt <= 0.0:
        raise InvalidInputError("kt must be positive")
    return -(2.0 * math.pi * ev.lambda_re / (n_teeth * kt)) * (1.0 + ev.kappa**2)


def spindle_speeds(omega_c: float, kappa: float, n_teeth: int, k_range) -> list[float]:
    """Spindle speeds (rpm) of lobe indices ``k_range`` at one chatter frequency."""
    if omega_c <= 0.0:
        raise InvalidInputError("omega_c must be positive")
    psi = math.atan(kappa)
    eps = math.pi - 2.0 * psi
    speeds = []
    for k in k_range:
        if eps + 2.0 * k * math.pi <= 0.0:
            raise InvalidInputError(f"non-positive phase for lobe k={k}")
        period = (eps + 2.0 * k * math.pi) / omega_c
        speeds.append(60.0 / (n_teeth * period))
    return speeds


def _accumulate_envelope(env: np.ndarray, grid: np.ndarray,
                         speeds: np.ndarray, depths: np.ndarray) -> None:
    """Min-accumulate one lobe onto the envelope grid, monotone run by run."""
    if speeds.size < 2:
        return
    direction = np.sign(np.diff(speeds))
    breaks = np.nonzero(direction[1:] * direction[:-1] < 0)[0] + 1
    starts = np.concatenate(([0], breaks)).astype(int)
    stops = np.concatenate((breaks, [speeds.size - 1])).astype(int)
    for lo, hi in zip(starts, stops):
        xs = speeds[lo : hi + 1]
        ys = depths[lo : hi + 1]
        if xs.size < 2:
            continue
        if xs[0] > xs[-1]:
            xs, ys = xs[::-1], ys[::-1]
        vals = np.interp(grid, xs, ys, left=np.inf, right=np.inf)
        np.minimum(env, vals, out=env)


def zone_annotate(speed_window: tuple[float, float], dominant_freq_hz: float,
                  n_teeth: int) -> list[ZoneLabel]:
    """Heuristic A-D zone ranges over the window, from the tooth-passing ratio.

    Cut points on f_tp = n*N/60: zone A up to f_d/10, B up to f_d/4, C up to
    f_d, D beyond. The thresholds are heuristics (flagged as such in output
    metadata); only the qualitative ordering is physical.
    """
    if dominant_freq_hz <= 0.0:
        raise InvalidInputError("dominant frequency must be positive")
    n_lo, n_hi = speed_window
    bounds = [
        ("A", 60.0 * dominant_freq_hz / (10.0 * n_teeth)),
        ("B", 60.0 * dominant_freq_hz / (4.0 * n_teeth)),
        ("C", 60.0 * dominant_freq_hz / n_teeth),
        ("D", math.inf),
    ]
    labels: list[ZoneLabel] = []
    cursor = n_lo
    for name, upper in bounds:
        if cursor >= n_hi:
            break
        if upper <= cursor:
            continue
        top = min(upper, n_hi)
        labels.append(ZoneLabel(n_lo=cursor, n_hi=top, zone=name))
        cursor = top
    return labels


def zoa_lobes(frf, cut: CutSpec, coeffs: CoefficientSet, sweep: SweepConfig,
              k_max: int, speed_window: tuple[float, float] | None = None,
              dominant_freq_hz: float | None = None) -> SldResult:
    """Full zero-order SLD: lobes for k = 0..k_max, envelope, zone labels."""
    if k_max < 0:
        raise InvalidInputError("k_max must be >= 0")

    f_hz = sweep.frequencies_hz
    omega = 2.0 * math.pi * f_hz
    gxx, gyy = frf.interpolate(f_hz)
    phi_st, phi_ex = engagement_angles(cut)
    alpha = directional_factors(phi_st, phi_ex, coeffs.kr)

    a0 = gxx * gyy * alpha.det
    a1 = alpha.axx * gxx + alpha.ayy * gyy
    roots = _quadratic_roots(a0, a1)  # (2, n_freq)

    lam_re = roots.real
    lam_im = roots.imag
    valid = np.isfinite(lam_re) & (lam_re < 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        kappa = np.where(valid, lam_im / lam_re, 0.0)
        depth = np.where(
            valid,
            -(2.0 * math.pi * lam_re / (cut.n_teeth * coeffs.kt)) * (1.0 + kappa**2),
            np.inf,
        )
    pick = np.argmin(depth, axis=0)
    cols = np.arange(f_hz.size)
    depth_sel = depth[pick, cols]
    kappa_sel = kappa[pick, cols]
    keep = np.isfinite(depth_sel)
    if not np.any(keep):
        raise NumericError(
            "no eigenvalue with negative real part anywhere in the sweep; "
            "widen the frequency window around the dominant resonance"
        )

    omega_kept = omega[keep]
    depth_kept = depth_sel[keep]
    kappa_kept = kappa_sel[keep]
    psi = np.arctan(kappa_kept)
    eps = math.pi - 2.0 * psi

    lobes_raw: list[tuple[int, np.ndarray, np.ndarray, np.ndarray]] = []
    for k in range(k_max + 1):
        period = (eps + 2.0 * k * math.pi) / omega_kept
        speeds = 60.0 / (cut.n_teeth * period)
        lobes_raw.append((k, omega_kept, speeds, depth_kept))

    # depth cap: points above cap_factor * minimum depth are pruned from output,
    # and the speed window only spans the surviving (plot-scale) points
    depth_cap = sweep.depth_cap_factor * float(depth_kept.min())
    capped_mask = depth_kept <= depth_cap  # never empty: the minimum survives
    lobes: list[LobeCurve] = []
    for k, omegas, speeds, depths in lobes_raw:
        lobes.append(
            LobeCurve(
                lobe_index=k,
                omega_c=omegas[capped_mask].copy(),
                spindle_speed=speeds[capped_mask].copy(),
                depth_limit=depths[capped_mask].copy(),
            )
        )

    all_speeds = np.concatenate([l.spindle_speed for l in lobes])
    data_lo, data_hi = float(all_speeds.min()), float(all_speeds.max())
    if speed_window is not None:
        win_lo = max(data_lo, speed_window[0])
        win_hi = min(data_hi, speed_window[1])
        if win_lo >= win_hi:
            raise InvalidInputError(
                f"requested speed window {speed_window} lies outside the computed "
                f"lobe range [{data_lo:.1f}, {data_hi:.1f}] rpm"
            )
    else:
        win_lo, win_hi = data_lo, data_hi
    # envelope accumulates from the uncapped curves so gaps a cap would cut into
    # a lobe cannot fake a lower boundary
    grid = np.linspace(win_lo, win_hi, sweep.envelope_grid)
    env = np.full(grid.shape, np.inf)
    for _, _, speeds, depths in lobes_raw:
        _accumulate_envelope(env, grid, speeds, depths)
    if not np.all(np.isfinite(env)):
        gap = grid[~np.isfinite(env)]
        raise NumericError(
            f"no lobe covers speeds near {gap[0]:.0f} rpm within the requested window; "
            "widen the frequency sweep or narrow the speed window"
        )

    if dominant_freq_hz is None:
        dominant_freq_hz = frf.peak_frequency
    zones = zone_annotate((win_lo, win_hi), dominant_freq_hz, cut.n_teeth)

    return SldResult(
        lobes=tuple(lobes),
        envelope_speed=grid,
        envelope_depth=env,
        zone_labels=tuple(zones),
        depth_cap=depth_cap,
        dominant_freq_hz=dominant_freq_hz,
        metadata={
            "zone_thresholds": "heuristic: A<=f_d/10, B<=f_d/4, C<=f_d, D>f_d on f_tp",
            "depth_cap_factor": sweep.depth_cap_factor,
        },
    )


def classify_deterministic(point: OperatingPoint, sld: SldResult) -> str:
    """'stable' strictly below the envelope; the boundary itself is unstable."""
    n = point.spindle_speed
    if n < sld.envelope_speed[0] or n > sld.envelope_speed[-1]:
        raise OutOfRangeError(
            f"speed {n} rpm outside the envelope window "
            f"[{sld.envelope_speed[0]:.1f}, {sld.envelope_speed[-1]:.1f}] rpm"
        )
    limit = float(np.interp(n, sld.envelope_speed, sld.envelope_depth))
    return "stable" if point.axial_depth < limit else "unstable"
