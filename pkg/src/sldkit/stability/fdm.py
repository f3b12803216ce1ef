"""Time-domain stability oracle: full discretization over one tooth period.

The regenerative milling equation with one dominant mode per direction,

    M q" + C q' + K q = Kc(t) (q(t) - q(t - T)),    Kc(t) = (a_p*kt/2) A(t),

is written in state-space form u' = A0 u + Q(t), with the constant structural
part A0 and Q(t) collecting the periodic current and delayed cutting terms.
One tooth period T = 60/(n*N) is split into m intervals of length h; on each
interval the variation-of-constants integral is evaluated with the exact
exponential of A0 and linear interpolation of Q, which makes the update
implicit in the new state and first-order accurate in both the current and
the delayed contribution:

    u_{i+1} = P [ (Phi0 + G0 Ac_i) u_i - G0 Bc_i q_{i-m} - G1 Bc_{i+1} q_{i+1-m} ],
    P = (I - G1 Ac_{i+1})^{-1},
    G0 = F2/h,  G1 = F1 - F2/h,
    F1 = A0^{-1}(Phi0 - I),  F2 = A0^{-1}(h*Phi0 - F1),  Phi0 = exp(A0 h).

Chaining the m per-step maps over the extended state (u plus the last m
position samples) yields the Floquet transition matrix; its spectral radius
below one means asymptotically stable.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.linalg

from ..cutting import CoefficientSet, CutSpec, engagement_angles, instantaneous_factors
from ..errors import InvalidInputError, NumericError
from ..toolmodel.fem import ModeSet, dominant_mode
from .types import OperatingPoint

MIN_INTERVALS = 20


def _directional_matrix(phi_teeth: np.ndarray, phi_st: float, phi_ex: float,
                        kr: float) -> np.ndarray:
    """Summed per-tooth directional matrix A(t) at one instant."""
    phi = np.mod(phi_teeth, 2.0 * math.pi)
    engaged = (phi >= phi_st) & (phi <= phi_ex)
    axx, axy, ayx, ayy = instantaneous_factors(phi, kr)
    return np.array(
        [
            [np.sum(axx * engaged), np.sum(axy * engaged)],
            [np.sum(ayx * engaged), np.sum(ayy * engaged)],
        ]
    )


def fdm_spectral_radius(point: OperatingPoint, modes: ModeSet, cut: CutSpec,
                        coeffs: CoefficientSet, m_intervals: int = 40) -> float:
    """Spectral radius of the tooth-period transition matrix at one point."""
    if m_intervals < MIN_INTERVALS:
        raise InvalidInputError(f"m_intervals must be >= {MIN_INTERVALS}")

    mode_x = dominant_mode(modes, "X")
    mode_y = dominant_mode(modes, "Y")
    m_diag = np.array([mode_x.modal_mass, mode_y.modal_mass])
    k_diag = np.array([mode_x.modal_stiffness, mode_y.modal_stiffness])
    c_diag = np.array(
        [
            2.0 * mode_x.damping_ratio * mode_x.omega * mode_x.modal_mass,
            2.0 * mode_y.damping_ratio * mode_y.omega * mode_y.modal_mass,
        ]
    )

    a0 = np.zeros((4, 4))
    a0[0:2, 2:4] = np.eye(2)
    a0[2:4, 0:2] = -np.diag(k_diag / m_diag)
    a0[2:4, 2:4] = -np.diag(c_diag / m_diag)

    n_rpm = point.spindle_speed
    n_teeth = cut.n_teeth
    period = 60.0 / (n_rpm * n_teeth)
    h = period / m_intervals
    omega_spindle = 2.0 * math.pi * n_rpm / 60.0

    phi0 = scipy.linalg.expm(a0 * h)
    f1 = np.linalg.solve(a0, phi0 - np.eye(4))
    f2 = np.linalg.solve(a0, h * phi0 - f1)
    g0 = f2 / h
    g1 = f1 - f2 / h

    # cutting matrices at the m+1 interval nodes
    phi_st, phi_ex = engagement_angles(cut)
    tooth_offsets = 2.0 * math.pi * np.arange(n_teeth) / n_teeth
    gain = 0.5 * point.axial_depth * coeffs.kt
    kc_nodes = []
    for i in range(m_intervals + 1):
        angles = omega_spindle * (i * h) + tooth_offsets
        kc_nodes.append(gain * _directional_matrix(angles, phi_st, phi_ex, coeffs.kr))

    def ac_of(kc: np.ndarray) -> np.ndarray:
        ac = np.zeros((4, 4))
        ac[2:4, 0:2] = kc / m_diag[:, None]
        return ac

    def bc_of(kc: np.ndarray) -> np.ndarray:
        bc = np.zeros((4, 2))
        bc[2:4, :] = kc / m_diag[:, None]
        return bc

    m = m_intervals
    dim = 4 + 2 * m
    transition = np.eye(dim)
    identity4 = np.eye(4)
    for i in range(m):
        ac_i = ac_of(kc_nodes[i])
        ac_n = ac_of(kc_nodes[i + 1])
        bc_i = bc_of(kc_nodes[i])
        bc_n = bc_of(kc_nodes[i + 1])
        try:
            p = np.linalg.solve(identity4 - g1 @ ac_n, identity4)
        except np.linalg.LinAlgError as exc:
            raise NumericError(f"implicit step matrix singular at interval {i}") from exc

        step = np.zeros((dim, dim))
        step[0:4, 0:4] = p @ (phi0 + g0 @ ac_i)
        step[0:4, 4 + 2 * (m - 1) : 4 + 2 * m] += -p @ g0 @ bc_i  # q_{i-m}
        if m >= 2:
            step[0:4, 4 + 2 * (m - 2) : 4 + 2 * (m - 1)] += -p @ g1 @ bc_n  # q_{i+1-m}
        else:
            step[0:4, 0:2] += -p @ g1 @ bc_n  # m = 1: q_{i+1-m} = q_i
        step[4:6, 0:2] = np.eye(2)  # newest history sample is q_i
        if m >= 2:
            step[6 : 4 + 2 * m, 4 : 4 + 2 * (m - 1)] = np.eye(2 * (m - 1))
        transition = step @ transition

    try:
        eigenvalues = np.linalg.eigvals(transition)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"Floquet eigenvalue iteration did not converge: {exc}") from exc
    return float(np.max(np.abs(eigenvalues)))


def cross_check_agreement(sld, modes: ModeSet, cut: CutSpec, coeffs: CoefficientSet,
                          probe_speeds, factors=(0.7, 1.3),
                          m_intervals: int = 40) -> tuple[int, int]:
    """Count probes where the time-domain verdict matches the envelope side.

    Probes sit at ``factor * envelope(n)``; factors below one must come back
    with spectral radius < 1 and factors above one with > 1.
    """
    agree = 0
    total = 0
    for n_rpm in probe_speeds:
        limit = float(sld.envelope_at(n_rpm))
        for factor in factors:
            rho = fdm_spectral_radius(
                OperatingPoint(n_rpm, factor * limit), modes, cut, coeffs, m_intervals
            )
            total += 1
            if (factor < 1.0 and rho < 1.0) or (factor > 1.0 and rho > 1.0):
                agree += 1
    return agree, total
