"""Cutting mechanics tests.

The closed-form directional factors are checked against adaptive quadrature of
independently written integrands (the per-tooth force projections), never
against the library's own primitives.
"""

import json
import math

import numpy as np
import pytest
from scipy.integrate import quad

from sldkit import (
    CoefficientDatabase,
    CutSpec,
    InvalidInputError,
    NotFoundError,
    directional_factors,
    engagement_angles,
    resolve_coefficients,
)
from sldkit.distributions import Normal, Uniform


def quadrature_alpha(phi_st, phi_ex, kr):
    """Independent oracle: integrate the per-tooth force projections."""
    fxx = lambda p: -(math.sin(2 * p) + kr * (1 - math.cos(2 * p)))
    fxy = lambda p: -((1 + math.cos(2 * p)) + kr * math.sin(2 * p))
    fyx = lambda p: (1 - math.cos(2 * p)) - kr * math.sin(2 * p)
    fyy = lambda p: math.sin(2 * p) - kr * (1 + math.cos(2 * p))
    return tuple(
        quad(f, phi_st, phi_ex, epsabs=1e-13, epsrel=1e-13)[0] for f in (fxx, fxy, fyx, fyy)
    )


class TestEngagementAngles:
    def test_slot_full_arc(self):
        cut = CutSpec("slot", 1.0, 2)
        assert engagement_angles(cut) == (0.0, math.pi)

    def test_down_half_immersion(self):
        phi_st, phi_ex = engagement_angles(CutSpec("down", 0.5, 2))
        assert phi_st == pytest.approx(math.pi / 2, abs=1e-15)
        assert phi_ex == math.pi

    def test_up_quarter_immersion(self):
        phi_st, phi_ex = engagement_angles(CutSpec("up", 0.25, 2))
        assert phi_st == 0.0
        assert phi_ex == pytest.approx(math.acos(0.5), abs=1e-15)
        assert phi_ex == pytest.approx(math.pi / 3, abs=1e-15)

    def test_invalid_immersion_rejected(self):
        with pytest.raises(InvalidInputError):
            CutSpec("up", 0.0, 2)
        with pytest.raises(InvalidInputError):
            CutSpec("down", 1.2, 2)
        with pytest.raises(InvalidInputError):
            CutSpec("slot", 0.7, 2)

    def test_up_down_arcs_complementary(self):
        for r in (0.1, 0.25, 0.5, 0.75, 0.99):
            up_st, up_ex = engagement_angles(CutSpec("up", r, 2))
            dn_st, dn_ex = engagement_angles(CutSpec("down", r, 2))
            assert (up_ex - up_st) == pytest.approx(dn_ex - dn_st, abs=1e-12)


class TestDirectionalFactors:
    def test_slot_closed_forms(self):
        for kr in (0.05, 0.3, 0.7, 1.4, 1.99):
            a = directional_factors(0.0, math.pi, kr)
            assert a.axx == pytest.approx(-math.pi * kr, abs=1e-12)
            assert a.ayy == pytest.approx(-math.pi * kr, abs=1e-12)
            assert a.axy == pytest.approx(-math.pi, abs=1e-12)
            assert a.ayx == pytest.approx(math.pi, abs=1e-12)

    def test_slot_kr03_reference_values(self):
        a = directional_factors(0.0, math.pi, 0.3)
        assert a.axx == pytest.approx(-0.3 * math.pi, abs=1e-12)  # -0.9425
        assert a.axy == pytest.approx(-math.pi, abs=1e-12)

    def test_half_immersion_up_reference_values(self):
        a = directional_factors(0.0, math.pi / 2, 0.3)
        assert a.axx == pytest.approx(-1.0 - 0.15 * math.pi, abs=1e-12)  # -1.4712
        assert a.axy == pytest.approx(-math.pi / 2 - 0.3, abs=1e-12)  # -1.8708

    def test_kr_zero_slot(self):
        a = directional_factors(0.0, math.pi, 0.0)
        assert a.axx == pytest.approx(0.0, abs=1e-12)
        assert a.ayy == pytest.approx(0.0, abs=1e-12)
        assert a.axy == pytest.approx(-math.pi, abs=1e-12)
        assert a.ayx == pytest.approx(math.pi, abs=1e-12)

    def test_matches_quadrature_on_random_windows(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            phi_st = float(rng.uniform(0.0, math.pi - 0.05))
            phi_ex = float(rng.uniform(phi_st + 0.01, math.pi))
            kr = float(rng.uniform(0.01, 1.9))
            a = directional_factors(phi_st, phi_ex, kr)
            ref = quadrature_alpha(phi_st, phi_ex, kr)
            for got, want in zip((a.axx, a.axy, a.ayx, a.ayy), ref):
                assert got == pytest.approx(want, abs=1e-9)

    def test_additivity_over_subintervals(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            pts = np.sort(rng.uniform(0.0, math.pi, size=3))
            a, b, c = (float(p) for p in pts)
            if not (a < b < c):
                continue
            kr = float(rng.uniform(0.05, 1.5))
            whole = directional_factors(a, c, kr)
            left = directional_factors(a, b, kr)
            right = directional_factors(b, c, kr)
            for w, l, r in zip(
                (whole.axx, whole.axy, whole.ayx, whole.ayy),
                (left.axx, left.axy, left.ayx, left.ayy),
                (right.axx, right.axy, right.ayx, right.ayy),
            ):
                assert w == pytest.approx(l + r, abs=1e-12)

    def test_angle_ordering_enforced(self):
        with pytest.raises(InvalidInputError):
            directional_factors(1.0, 0.5, 0.3)


DB_DOC = json.dumps(
    {
        "materials": [
            {"name": "Al7075", "catalog": {"kt_mpa": 800.0, "kr": 0.3}},
            {
                "name": "Ti6Al4V",
                "tests": [
                    {"kt_mpa_mean": 1900.0, "kt_mpa_std": 60.0, "kr_mean": 0.33, "kr_std": 0.03}
                ],
            },
        ]
    }
)


class TestCoefficientResolution:
    def test_catalog_lookup_carries_default_wide_uncertainty(self):
        db = CoefficientDatabase.from_document(DB_DOC)
        coeffs = resolve_coefficients("Al7075", "catalog", db)
        assert coeffs.kt == 8.0e8
        assert coeffs.kr == 0.3
        assert coeffs.provenance == "catalog"
        assert coeffs.uncertainty["kt"] == Uniform(8.0e8 * 0.7, 8.0e8 * 1.3)
        assert coeffs.uncertainty["kr"] == Uniform(0.3 * 0.7, 0.3 * 1.3)

    def test_test_record_maps_to_normal(self):
        db = CoefficientDatabase.from_document(DB_DOC)
        coeffs = resolve_coefficients("Ti6Al4V", "test", db)
        assert coeffs.kt == 1.9e9
        assert coeffs.provenance == "test"
        assert coeffs.uncertainty["kt"] == Normal(1.9e9, 6.0e7)

    def test_unknown_material_lists_names(self):
        db = CoefficientDatabase.from_document(DB_DOC)
        with pytest.raises(NotFoundError, match="Al7075"):
            resolve_coefficients("Unobtainium", "catalog", db)

    def test_missing_source_for_material(self):
        db = CoefficientDatabase.from_document(DB_DOC)
        with pytest.raises(NotFoundError, match="no test records"):
            resolve_coefficients("Al7075", "test", db)
