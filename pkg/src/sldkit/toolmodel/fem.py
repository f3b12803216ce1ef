"""Euler-Bernoulli beam assembly and modal extraction.

2-node elements with a translation and a rotation DOF per node (Hermitian
shape functions, consistent mass). The clamped holder-face DOFs are removed
before the eigensolve, so both retained matrices are positive definite.
Damping is never assembled as a matrix: it cannot come out of a geometry-only
model, so FEM modes carry an assumed per-mode damping ratio that measured
modal data later overrides.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..errors import InvalidInputError, NumericError
from .geometry import BeamMesh, ToolMaterial

SYMMETRY_RTOL = 1e-12
EIGEN_RESIDUAL_RTOL = 1e-8
DEFAULT_DAMPING_RATIO = 0.02


@dataclass(frozen=True)
class SystemMatrices:
    """Clamped mass/stiffness matrices plus the tip translation DOF index."""

    mass: np.ndarray
    stiffness: np.ndarray
    tip_translation_dof: int

    def __post_init__(self):
        for name, m in (("mass", self.mass), ("stiffness", self.stiffness)):
            asym = np.linalg.norm(m - m.T)
            if asym > SYMMETRY_RTOL * np.linalg.norm(m):
                raise NumericError(f"{name} matrix asymmetry {asym:.3e} exceeds tolerance")

    @property
    def n_dof(self) -> int:
        return self.mass.shape[0]


@dataclass(frozen=True)
class Mode:
    natural_frequency: float  # Hz
    damping_ratio: float
    modal_stiffness: float  # N/m at the tool tip
    direction: str  # "X" | "Y"
    source: str  # "fem" | "ema" | "assumed"

    def __post_init__(self):
        if self.natural_frequency <= 0.0:
            raise InvalidInputError("natural_frequency must be positive")
        if not 0.0 < self.damping_ratio < 1.0:
            raise InvalidInputError("damping_ratio out of range (0, 1)")
        if self.modal_stiffness <= 0.0:
            raise InvalidInputError("modal_stiffness must be positive")
        if self.direction not in ("X", "Y"):
            raise InvalidInputError(f"direction must be X or Y, got '{self.direction}'")

    @property
    def omega(self) -> float:
        """Angular natural frequency, rad/s."""
        return 2.0 * np.pi * self.natural_frequency

    @property
    def modal_mass(self) -> float:
        """Tip-referred modal mass, kg."""
        return self.modal_stiffness / self.omega**2


ModeSet = tuple[Mode, ...]


def modes_in_direction(modes: ModeSet, direction: str) -> list[Mode]:
    return [m for m in modes if m.direction == direction]


def dominant_mode(modes: ModeSet, direction: str = "X") -> Mode:
    """Lowest-stiffness (most flexible) mode of one direction."""
    candidates = modes_in_direction(modes, direction)
    if not candidates:
        raise InvalidInputError(f"no modes in direction {direction}")
    return min(candidates, key=lambda m: m.modal_stiffness)


def _element_matrices(e_mod: float, density: float, area: float,
                      second_moment: float, length: float) -> tuple[np.ndarray, np.ndarray]:
    el = length
    el2 = el * el
    k = (e_mod * second_moment / el**3) * np.array(
        [
            [12.0, 6.0 * el, -12.0, 6.0 * el],
            [6.0 * el, 4.0 * el2, -6.0 * el, 2.0 * el2],
            [-12.0, -6.0 * el, 12.0, -6.0 * el],
            [6.0 * el, 2.0 * el2, -6.0 * el, 4.0 * el2],
        ]
    )
    m = (density * area * el / 420.0) * np.array(
        [
            [156.0, 22.0 * el, 54.0, -13.0 * el],
            [22.0 * el, 4.0 * el2, 13.0 * el, -3.0 * el2],
            [54.0, 13.0 * el, 156.0, -22.0 * el],
            [-13.0 * el, -3.0 * el2, -22.0 * el, 4.0 * el2],
        ]
    )
    return k, m


def assemble_system(mesh: BeamMesh, material: ToolMaterial) -> SystemMatrices:
    """Assemble clamped global matrices for planar bending of the overhang."""
    n_dof = 2 * mesh.n_nodes
    k_global = np.zeros((n_dof, n_dof))
    m_global = np.zeros((n_dof, n_dof))
    for el in mesh.elements:
        length = mesh.nodes[el.node_b] - mesh.nodes[el.node_a]
        k_e, m_e = _element_matrices(
            material.youngs_modulus, material.density, el.area, el.second_moment, length
        )
        dofs = np.array([2 * el.node_a, 2 * el.node_a + 1, 2 * el.node_b, 2 * el.node_b + 1])
        k_global[np.ix_(dofs, dofs)] += k_e
        m_global[np.ix_(dofs, dofs)] += m_e

    clamped = (2 * mesh.clamped_node, 2 * mesh.clamped_node + 1)
    free = np.setdiff1d(np.arange(n_dof), clamped)
    tip_dof_global = 2 * mesh.tip_node
    tip_dof = int(np.searchsorted(free, tip_dof_global))
    return SystemMatrices(
        mass=m_global[np.ix_(free, free)],
        stiffness=k_global[np.ix_(free, free)],
        tip_translation_dof=tip_dof,
    )


def solve_modes(system: SystemMatrices, n_modes: int,
                default_damping: float = DEFAULT_DAMPING_RATIO) -> ModeSet:
    """Lowest ``n_modes`` bending modes, replicated to X and Y.

    Modal stiffness is tip-referred: each shape is scaled to unit tip
    translation, then k_i = omega_i^2 * (phi^T M phi). An axisymmetric tool
    bends identically in both planes, so the planar solution is emitted once
    per direction.
    """
    if n_modes < 1:
        raise InvalidInputError("n_modes must be >= 1")
    if n_modes > system.n_dof:
        raise InvalidInputError(
            f"n_modes={n_modes} exceeds retained DOF count {system.n_dof}"
        )
    try:
        eigvals, eigvecs = scipy.linalg.eigh(system.stiffness, system.mass)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - scipy internal
        raise NumericError(f"generalized eigensolve failed: {exc}") from exc

    modes: list[Mode] = []
    for i in range(n_modes):
        lam, phi = eigvals[i], eigvecs[:, i]
        residual = np.linalg.norm(system.stiffness @ phi - lam * (system.mass @ phi))
        scale = np.linalg.norm(system.stiffness @ phi)
        if residual > EIGEN_RESIDUAL_RTOL * scale:
            raise NumericError(
                f"mode {i} residual {residual:.3e} exceeds {EIGEN_RESIDUAL_RTOL:.0e} "
                f"* ||K phi|| = {EIGEN_RESIDUAL_RTOL * scale:.3e}"
            )
        omega = float(np.sqrt(lam))
        tip = phi[system.tip_translation_dof]
        if abs(tip) < 1e-14 * np.max(np.abs(phi)):
            raise NumericError(f"mode {i} has a node at the tool tip; cannot tip-normalize")
        phi_tip = phi / tip
        modal_mass = float(phi_tip @ system.mass @ phi_tip)
        # geometry gives frequency and stiffness but never damping, hence "assumed"
        modes.append(
            Mode(
                natural_frequency=omega / (2.0 * np.pi),
                damping_ratio=default_damping,
                modal_stiffness=omega**2 * modal_mass,
                direction="X",
                source="assumed",
            )
        )
    # replicate to Y (axisymmetric): X modes first, then Y, each ascending
    mirrored = [
        Mode(m.natural_frequency, m.damping_ratio, m.modal_stiffness, "Y", m.source)
        for m in modes
    ]
    return tuple(modes) + tuple(mirrored)
