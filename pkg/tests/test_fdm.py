"""Full-discretization oracle tests.

The air-cut limit is the hard oracle: with no cutting force the transition
matrix is the exact matrix exponential, so the spectral radius must equal the
damped-oscillator Floquet multiplier magnitude e^(-zeta*w_n*T).
"""

import math

import numpy as np
import pytest

from sldkit import (
    CoefficientSet,
    CutSpec,
    InvalidInputError,
    Mode,
    OperatingPoint,
    SweepConfig,
    synthesize_frf,
    zoa_lobes,
)
from sldkit.stability.fdm import cross_check_agreement, fdm_spectral_radius

MODES = (Mode(800.0, 0.02, 2e7, "X", "ema"), Mode(800.0, 0.02, 2e7, "Y", "ema"))
CUT = CutSpec("slot", 1.0, 2)
COEFFS = CoefficientSet(kt=6.0e8, kr=0.3)


def reference_sld():
    frf = synthesize_frf(MODES, np.linspace(400.0, 1200.0, 2000))
    return zoa_lobes(frf, CUT, COEFFS, SweepConfig(400.0, 1200.0, 2000), k_max=5)


class TestFreeVibrationLimit:
    def test_spectral_radius_is_floquet_multiplier(self):
        # n = 9600 rpm, N = 2 -> tooth period 3.125e-3 s
        point = OperatingPoint(9600.0, 0.0)
        rho = fdm_spectral_radius(point, MODES, CUT, COEFFS, m_intervals=40)
        period = 60.0 / (9600.0 * 2)
        assert period == pytest.approx(3.125e-3, rel=1e-12)
        expected = math.exp(-0.02 * 2 * math.pi * 800.0 * period)
        assert expected == pytest.approx(0.7304, abs=5e-5)
        assert abs(rho - expected) <= 0.005 * expected

    def test_holds_across_speeds_and_interval_counts(self):
        for n_rpm in (6000.0, 12000.0, 20000.0):
            for m in (40, 60):
                rho = fdm_spectral_radius(OperatingPoint(n_rpm, 0.0), MODES, CUT, COEFFS, m)
                period = 60.0 / (n_rpm * 2)
                expected = math.exp(-0.02 * 2 * math.pi * 800.0 * period)
                assert abs(rho - expected) <= 0.005 * expected


class TestStabilityConsistency:
    def test_well_below_envelope_is_stable(self):
        sld = reference_sld()
        n = 12000.0
        limit = float(sld.envelope_at(n))
        rho = fdm_spectral_radius(OperatingPoint(n, 0.2 * limit), MODES, CUT, COEFFS, 40)
        assert rho < 1.0

    def test_well_above_envelope_is_unstable(self):
        sld = reference_sld()
        n = 12000.0
        limit = float(sld.envelope_at(n))
        rho = fdm_spectral_radius(OperatingPoint(n, 5.0 * limit), MODES, CUT, COEFFS, 40)
        assert rho > 1.0

    def test_cross_check_agreement_zone_c(self):
        sld = reference_sld()
        speeds = np.linspace(7000.0, 22000.0, 5)
        agree, total = cross_check_agreement(sld, MODES, CUT, COEFFS, speeds, (0.7, 1.3), 40)
        assert total == 10
        assert agree >= 8

    def test_half_immersion_up_milling_also_agrees(self):
        cut = CutSpec("up", 0.5, 2)
        frf = synthesize_frf(MODES, np.linspace(400.0, 1200.0, 2000))
        sld = zoa_lobes(frf, cut, COEFFS, SweepConfig(400.0, 1200.0, 2000), k_max=5)
        speeds = np.linspace(8000.0, 20000.0, 4)
        agree, total = cross_check_agreement(sld, MODES, cut, COEFFS, speeds, (0.7, 1.3), 40)
        assert agree >= 0.8 * total


class TestPreconditions:
    def test_minimum_interval_count_enforced(self):
        with pytest.raises(InvalidInputError):
            fdm_spectral_radius(OperatingPoint(9600.0, 1e-3), MODES, CUT, COEFFS, m_intervals=10)

    def test_negative_depth_rejected(self):
        with pytest.raises(InvalidInputError):
            OperatingPoint(9600.0, -1e-3)
