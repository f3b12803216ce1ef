"""Tool model tests: meshing, FEM assembly/modes, FRF synthesis, imports.

The modal oracle is the analytic Euler-Bernoulli clamped-free cantilever:
f_1 = (lambda_1^2 / 2 pi) * sqrt(E I / (rho A)) / L^2 with lambda_1 = 1.8751.
"""

import json
import math

import numpy as np
import pytest

from sldkit import (
    FRF,
    InvalidGeometryError,
    InvalidInputError,
    NumericError,
    ParseError,
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
from sldkit.toolmodel import Mode, dominant_mode

LAMBDA_1 = 1.8751040687119612  # first clamped-free root of cos(x)cosh(x) = -1

STEEL = ToolMaterial(youngs_modulus=210e9, density=7800.0, name="steel")


def cylinder(length_m=0.080, diameter_m=0.012, kind="shank", overhang=None):
    return ToolGeometry(
        segments=(ToolSegment(length_m, diameter_m, kind),),
        overhang_length=overhang if overhang is not None else length_m,
        n_flutes=2,
    )


def analytic_first_frequency(e_mod, rho, diameter, length):
    area = math.pi * diameter**2 / 4.0
    inertia = math.pi * diameter**4 / 64.0
    return (LAMBDA_1**2 / (2.0 * math.pi)) * math.sqrt(e_mod * inertia / (rho * area)) / length**2


class TestBeamMesh:
    def test_uniform_subdivision(self):
        mesh = build_beam_mesh(cylinder(), elements_per_segment=4)
        assert mesh.n_nodes == 5
        np.testing.assert_allclose(mesh.nodes, [0.0, 0.020, 0.040, 0.060, 0.080])
        assert mesh.clamped_node == 0

    def test_fluted_equivalent_diameter(self):
        geom = ToolGeometry(
            segments=(ToolSegment(0.040, 0.012, "shank"), ToolSegment(0.040, 0.012, "fluted")),
            overhang_length=0.080,
            n_flutes=2,
        )
        mesh = build_beam_mesh(geom, elements_per_segment=2)
        assert mesh.n_nodes == 5
        d_eff = 0.8 * 0.012
        for el in mesh.elements[2:]:
            assert el.area == pytest.approx(math.pi * d_eff**2 / 4.0, rel=1e-14)
            assert el.second_moment == pytest.approx(math.pi * d_eff**4 / 64.0, rel=1e-14)
        for el in mesh.elements[:2]:
            assert el.area == pytest.approx(math.pi * 0.012**2 / 4.0, rel=1e-14)

    def test_partial_segment_keeps_boundary_on_node(self):
        geom = ToolGeometry(
            segments=(ToolSegment(0.040, 0.012, "shank"), ToolSegment(0.060, 0.012, "fluted")),
            overhang_length=0.080,  # 20 mm of shank buried in the holder
            n_flutes=3,
        )
        mesh = build_beam_mesh(geom, elements_per_segment=2)
        assert 0.020 in [round(x, 12) for x in mesh.nodes]  # shank/flute boundary
        assert mesh.nodes[-1] == pytest.approx(0.080)

    def test_overhang_longer_than_tool_rejected(self):
        with pytest.raises(InvalidGeometryError):
            cylinder(length_m=0.090, overhang=0.100)

    def test_nonpositive_dimensions_rejected(self):
        with pytest.raises(InvalidGeometryError):
            ToolSegment(length=0.0, outer_diameter=0.012, kind="shank")
        with pytest.raises(InvalidGeometryError):
            ToolSegment(length=0.05, outer_diameter=-0.01, kind="fluted")


class TestAssembly:
    def test_symmetry(self):
        mesh = build_beam_mesh(cylinder(), elements_per_segment=6)
        system = assemble_system(mesh, STEEL)
        for m in (system.mass, system.stiffness):
            assert np.linalg.norm(m - m.T) <= 1e-12 * np.linalg.norm(m)

    def test_positive_definite_after_clamping(self):
        mesh = build_beam_mesh(cylinder(), elements_per_segment=5)
        system = assemble_system(mesh, STEEL)
        assert np.all(np.linalg.eigvalsh(system.mass) > 0.0)
        assert np.all(np.linalg.eigvalsh(system.stiffness) > 0.0)

    def test_density_scales_mass_only(self):
        mesh = build_beam_mesh(cylinder(), elements_per_segment=3)
        base = assemble_system(mesh, STEEL)
        doubled = assemble_system(mesh, ToolMaterial(STEEL.youngs_modulus, 2 * STEEL.density))
        np.testing.assert_allclose(doubled.mass, 2.0 * base.mass, rtol=1e-15)
        np.testing.assert_array_equal(doubled.stiffness, base.stiffness)

    def test_youngs_modulus_scales_stiffness_only(self):
        mesh = build_beam_mesh(cylinder(), elements_per_segment=3)
        base = assemble_system(mesh, STEEL)
        doubled = assemble_system(mesh, ToolMaterial(2 * STEEL.youngs_modulus, STEEL.density))
        np.testing.assert_allclose(doubled.stiffness, 2.0 * base.stiffness, rtol=1e-15)
        np.testing.assert_array_equal(doubled.mass, base.mass)

    def test_randomized_geometries_stay_symmetric(self):
        rng = np.random.default_rng(20240817)
        for _ in range(25):
            n_seg = rng.integers(1, 4)
            segments = tuple(
                ToolSegment(
                    length=float(rng.uniform(0.01, 0.06)),
                    outer_diameter=float(rng.uniform(0.004, 0.020)),
                    kind=("shank", "fluted")[int(rng.integers(0, 2))],
                )
                for _ in range(n_seg)
            )
            total = sum(s.length for s in segments)
            geom = ToolGeometry(
                segments=segments,
                overhang_length=float(rng.uniform(0.5, 1.0)) * total,
                n_flutes=int(rng.integers(1, 5)),
            )
            system = assemble_system(build_beam_mesh(geom, int(rng.integers(1, 4))), STEEL)
            for m in (system.mass, system.stiffness):
                assert np.linalg.norm(m - m.T) <= 1e-12 * np.linalg.norm(m)
            assert np.all(np.linalg.eigvalsh(system.mass) > 0.0)
            assert np.all(np.linalg.eigvalsh(system.stiffness) > 0.0)


class TestModes:
    def test_first_frequency_matches_analytic_cantilever(self):
        mesh = build_beam_mesh(cylinder(), elements_per_segment=16)
        modes = solve_modes(assemble_system(mesh, STEEL), n_modes=1)
        f_ref = analytic_first_frequency(210e9, 7800.0, 0.012, 0.080)
        assert modes[0].natural_frequency == pytest.approx(f_ref, rel=0.01)

    def test_consistent_mass_converges_from_above(self):
        freqs = []
        for n_el in (2, 4, 8, 16):
            mesh = build_beam_mesh(cylinder(), elements_per_segment=n_el)
            modes = solve_modes(assemble_system(mesh, STEEL), n_modes=1)
            freqs.append(modes[0].natural_frequency)
        assert all(a >= b for a, b in zip(freqs, freqs[1:]))
        f_ref = analytic_first_frequency(210e9, 7800.0, 0.012, 0.080)
        assert freqs[-1] == pytest.approx(f_ref, rel=0.01)

    def test_modulus_scaling_scales_frequencies_exactly(self):
        mesh = build_beam_mesh(cylinder(), elements_per_segment=8)
        base = solve_modes(assemble_system(mesh, STEEL), n_modes=3)
        stiff = solve_modes(
            assemble_system(mesh, ToolMaterial(4 * STEEL.youngs_modulus, STEEL.density)),
            n_modes=3,
        )
        for m_base, m_stiff in zip(base[:3], stiff[:3]):
            assert m_stiff.natural_frequency == pytest.approx(
                2.0 * m_base.natural_frequency, rel=1e-9
            )

    def test_single_mode_replicated_to_both_directions(self):
        mesh = build_beam_mesh(cylinder(), elements_per_segment=8)
        modes = solve_modes(assemble_system(mesh, STEEL), n_modes=1)
        assert len(modes) == 2
        x, y = modes
        assert (x.direction, y.direction) == ("X", "Y")
        assert x.natural_frequency == y.natural_frequency
        assert x.modal_stiffness == y.modal_stiffness
        assert x.source == "assumed" and x.damping_ratio == 0.02

    def test_eigen_residual_contract(self):
        mesh = build_beam_mesh(cylinder(), elements_per_segment=12)
        system = assemble_system(mesh, STEEL)
        modes = solve_modes(system, n_modes=4)
        for mode in modes[:4]:
            assert mode.natural_frequency > 0.0
            assert mode.modal_stiffness > 0.0

    def test_too_many_modes_rejected(self):
        mesh = build_beam_mesh(cylinder(), elements_per_segment=2)
        system = assemble_system(mesh, STEEL)
        with pytest.raises(InvalidInputError):
            solve_modes(system, n_modes=system.n_dof + 1)


ONE_MODE = (
    Mode(800.0, 0.02, 2e7, "X", "ema"),
    Mode(800.0, 0.02, 2e7, "Y", "ema"),
)


class TestFrfSynthesis:
    def test_static_compliance(self):
        frf = synthesize_frf(ONE_MODE, np.array([0.0, 100.0]))
        assert frf.g_xx[0] == pytest.approx(5.0e-8, rel=1e-12)
        assert frf.g_xx[0].imag == 0.0
        assert frf.provenance == "synthesized"

    def test_resonance_magnitude(self):
        frf = synthesize_frf(ONE_MODE, np.array([799.0, 800.0]))
        g = frf.g_xx[1]
        assert abs(g) == pytest.approx(1.0 / (2 * 0.02 * 2e7), rel=1e-12)
        assert g.real == pytest.approx(0.0, abs=1e-18)
        assert g.imag < 0.0

    def test_mass_line_rolloff(self):
        # independent evaluation of the superposition formula at 10x resonance
        w, wn, zeta, k = 2 * math.pi * 8000.0, 2 * math.pi * 800.0, 0.02, 2e7
        expected = (1 / k) * wn**2 / (wn**2 - w**2 + 2j * zeta * wn * w)
        frf = synthesize_frf(ONE_MODE, np.array([7999.0, 8000.0]))
        assert frf.g_xx[1] == pytest.approx(expected, rel=1e-12)
        assert abs(frf.g_xx[1]) < 1e-8

    def test_negative_imaginary_part_everywhere(self):
        grid = np.linspace(1.0, 5000.0, 400)
        frf = synthesize_frf(ONE_MODE, grid)
        assert np.all(frf.g_xx.imag < 0.0)
        assert np.all(frf.g_yy.imag < 0.0)

    def test_axisymmetric_reciprocity(self):
        mesh = build_beam_mesh(cylinder(), elements_per_segment=8)
        modes = solve_modes(assemble_system(mesh, STEEL), n_modes=2)
        frf = synthesize_frf(modes, np.linspace(10.0, 4000.0, 300))
        np.testing.assert_array_equal(frf.g_xx, frf.g_yy)

    def test_empty_mode_list_rejected(self):
        with pytest.raises(InvalidInputError):
            synthesize_frf((), np.array([1.0, 2.0]))

    def test_dominant_mode_is_lowest_stiffness(self):
        modes = ONE_MODE + (Mode(1200.0, 0.03, 5e6, "X", "ema"),)
        assert dominant_mode(modes, "X").modal_stiffness == 5e6


class TestModalImport:
    def test_round_trip(self):
        doc = json.dumps(
            {"modes": [{"direction": "X", "f_hz": 812.5, "zeta": 0.031, "k_n_per_m": 1.8e7}]}
        )
        modes = import_modal_table(doc)
        assert len(modes) == 1
        m = modes[0]
        assert (m.direction, m.natural_frequency, m.damping_ratio, m.modal_stiffness) == (
            "X", 812.5, 0.031, 1.8e7,
        )
        assert m.source == "ema"

    def test_zeta_out_of_range(self):
        doc = json.dumps(
            {"modes": [{"direction": "X", "f_hz": 800.0, "zeta": 1.5, "k_n_per_m": 2e7}]}
        )
        with pytest.raises(ParseError, match="damping_ratio out of range"):
            import_modal_table(doc)

    def test_empty_body(self):
        with pytest.raises(InvalidInputError, match="no modes"):
            import_modal_table(json.dumps({"modes": []}))

    def test_missing_field_names_row_and_field(self):
        doc = json.dumps({"modes": [{"direction": "Y", "f_hz": 700.0, "zeta": 0.02}]})
        with pytest.raises(ParseError, match=r"row 0.*k_n_per_m"):
            import_modal_table(doc)


class TestFrfImport:
    HEADER = "freq_hz,re_gxx,im_gxx,re_gyy,im_gyy"

    def test_round_trip(self):
        body = "\n".join(
            [
                self.HEADER,
                "100.0,1e-8,-2e-9,1e-8,-2e-9",
                "200.0,2e-8,-3e-9,2e-8,-3e-9",
                "300.0,1e-8,-4e-9,1e-8,-4e-9",
            ]
        )
        frf = import_frf_table(body)
        assert frf.frequencies.size == 3
        assert frf.provenance == "measured"
        assert frf.g_xx[1] == complex(2e-8, -3e-9)

    def test_duplicate_frequency(self):
        body = "\n".join([self.HEADER, "100,1e-8,-1e-9,1e-8,-1e-9", "100,2e-8,-1e-9,2e-8,-1e-9"])
        with pytest.raises(ParseError, match="not strictly increasing"):
            import_frf_table(body)

    def test_header_only(self):
        with pytest.raises(InvalidInputError, match="no samples"):
            import_frf_table(self.HEADER + "\n")

    def test_missing_column(self):
        with pytest.raises(ParseError):
            import_frf_table("freq_hz,re_gxx,im_gxx,re_gyy\n100,1,2,3\n")


class TestSolveModesNumericContract:
    def test_residual_is_reported_on_failure(self, monkeypatch):
        mesh = build_beam_mesh(cylinder(), elements_per_segment=4)
        system = assemble_system(mesh, STEEL)
        import sldkit.toolmodel.fem as fem_mod

        monkeypatch.setattr(fem_mod, "EIGEN_RESIDUAL_RTOL", 1e-30)
        with pytest.raises(NumericError, match="residual"):
            solve_modes(system, n_modes=1)
