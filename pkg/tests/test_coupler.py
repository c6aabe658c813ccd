import math
import warnings

import numpy as np
import pytest

from conftest import GHZ, MHZ
from tunablezz.coupler import (
    ModulationDrive,
    ROOT_TOLERANCE,
    default_operating_point,
    effective_drive_strength,
    find_zero_zeta,
    flux_of_omega_minus,
    flux_slope,
    modulation_amplitude_for,
    omega_minus_of_flux,
    zeta_slope,
)
from tunablezz.errors import PoleError
from tunablezz.hilbert import DeviceParams
from tunablezz.perturbation import exchange_J_slope, zeta_perturbative
from tunablezz.spectrum import zeta_exact

TWO_PI = 2 * math.pi


class TestFluxMap:
    def test_sweet_spot_maximum(self, device_a):
        assert omega_minus_of_flux(device_a, 0.0) == device_a.omega_minus_max

    def test_half_quantum_zero(self, device_a):
        assert omega_minus_of_flux(device_a, 0.5) == pytest.approx(0.0, abs=1e-3)

    def test_third_quantum_closed_form(self, device_a):
        expected = device_a.omega_minus_max * math.sqrt(0.5)
        assert omega_minus_of_flux(device_a, 1.0 / 3.0) == pytest.approx(expected, rel=1e-12)

    def test_periodicity(self, device_a):
        for phi in (0.1, 0.37, 0.49, 0.8):
            assert omega_minus_of_flux(device_a, phi) == pytest.approx(
                omega_minus_of_flux(device_a, phi + 1.0), rel=1e-12
            )

    def test_slope_zero_at_sweet_spot(self, device_a):
        assert flux_slope(device_a, 0.0) == 0.0

    def test_slope_negative_on_first_branch(self, device_a):
        for phi in (0.05, 0.2, 0.4):
            assert flux_slope(device_a, phi) < 0.0

    def test_slope_matches_finite_difference(self, device_a):
        phi, h = 0.25, 1e-7
        fd = (
            omega_minus_of_flux(device_a, phi + h) - omega_minus_of_flux(device_a, phi - h)
        ) / (2 * h)
        assert flux_slope(device_a, phi) == pytest.approx(fd, rel=1e-6)

    def test_inverse_round_trip(self, device_b):
        for phi in (0.05, 0.2, 0.45):
            w = omega_minus_of_flux(device_b, phi)
            assert flux_of_omega_minus(device_b, w) == pytest.approx(phi, abs=1e-12)

    def test_inverse_rejects_out_of_range(self, device_b):
        with pytest.raises(ValueError):
            flux_of_omega_minus(device_b, device_b.omega_minus_max * 1.01)


class TestModulationDrive:
    def test_negative_amplitude_rejected(self):
        with pytest.raises(ValueError):
            ModulationDrive(theta=0.3, delta=-0.01, omega_phi=TWO_PI * 200e6)

    def test_branch_crossing_rejected(self):
        with pytest.raises(ValueError, match="extremum"):
            ModulationDrive(theta=0.49, delta=0.05, omega_phi=TWO_PI * 200e6)
        with pytest.raises(ValueError, match="extremum"):
            ModulationDrive(theta=0.01, delta=0.05, omega_phi=TWO_PI * 200e6)

    def test_valid_drive(self):
        drive = ModulationDrive(theta=0.3, delta=0.02, omega_phi=TWO_PI * 275e6)
        assert drive.delta == 0.02


class TestFindZeroZeta:
    def test_device_a_roots(self, device_a):
        roots = find_zero_zeta(device_a, "exact")
        detunings = sorted((r.omega_minus - device_a.omega1) / GHZ for r in roots)
        assert len(roots) == 2
        assert detunings[0] == pytest.approx(-1.47, abs=0.06)
        assert detunings[1] == pytest.approx(-0.75, abs=0.06)

    def test_refinement_tolerance_and_flux(self, device_b):
        for root in find_zero_zeta(device_b, "exact"):
            assert abs(root.zeta) < ROOT_TOLERANCE
            assert abs(zeta_exact(device_b, root.omega_minus)) < ROOT_TOLERANCE
            assert omega_minus_of_flux(device_b, root.phi) == pytest.approx(
                root.omega_minus, rel=1e-9
            )

    def test_exact_and_perturbative_roots_close(self, device_a):
        exact = find_zero_zeta(device_a, "exact")
        pert = find_zero_zeta(device_a, "perturbative")
        assert len(exact) == len(pert) == 2
        for re, rp in zip(
            sorted(exact, key=lambda r: r.omega_minus),
            sorted(pert, key=lambda r: r.omega_minus),
        ):
            detuning = min(
                abs(device_a.omega1 - re.omega_minus), abs(device_a.omega2 - re.omega_minus)
            )
            assert abs(re.omega_minus - rp.omega_minus) < 0.05 * detuning

    def test_no_sign_change_returns_empty(self, device_a):
        roots = find_zero_zeta(
            device_a,
            "perturbative",
            (device_a.omega1 - 2.4 * GHZ, device_a.omega1 - 1.9 * GHZ),
            grid_points=40,
        )
        assert roots == []

    def test_pole_is_not_reported_as_root(self):
        # a single coupler swept through the two-photon resonance flips
        # the sign of the closed form without a zero crossing nearby
        params = DeviceParams(
            name="pole_case",
            omega1=5.25 * GHZ, omega2=5.0 * GHZ, omega_plus=8.5 * GHZ,
            omega_minus_max=8.0 * GHZ,
            alpha1=0.35 * GHZ, alpha2=0.35 * GHZ, alpha_plus=0.0, alpha_minus=0.75 * GHZ,
            g1_plus=0.0, g2_plus=0.0, g1_minus=0.12 * GHZ, g2_minus=0.12 * GHZ,
            t1_1=10e-6, t1_2=10e-6, t2_1=10e-6, t2_2=10e-6,
        )
        # window straddles the pole at 500 MHz above qubit 2 but not the
        # true crossing at ~729 MHz
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            roots = find_zero_zeta(
                params,
                "perturbative",
                (params.omega2 + 0.42 * GHZ, params.omega2 + 0.60 * GHZ),
                grid_points=50,
            )
        assert roots == []

    def test_default_operating_point_prefers_flat_slope(self, device_b):
        roots = find_zero_zeta(device_b, "exact")
        chosen = default_operating_point(device_b, roots)
        slopes = {
            r.omega_minus: abs(zeta_slope(device_b, r.omega_minus)) for r in roots
        }
        assert slopes[chosen.omega_minus] == min(slopes.values())
        # for this device the flatter crossing is the lower-frequency one
        assert chosen.omega_minus == min(r.omega_minus for r in roots)


class TestDriveStrength:
    def test_zero_amplitude(self, device_b):
        drive = ModulationDrive(theta=0.3, delta=0.0, omega_phi=TWO_PI * 275e6)
        assert effective_drive_strength(device_b, drive) == 0.0

    def test_sweet_spot_bias_gives_zero(self, device_b):
        drive = ModulationDrive(theta=0.0, delta=0.01, omega_phi=TWO_PI * 275e6)
        assert effective_drive_strength(device_b, drive) == 0.0

    def test_amplitude_round_trip(self, device_b):
        # pick the flatter zero-crosstalk bias and solve for the
        # amplitude that yields a 1.32 MHz exchange rate
        roots = find_zero_zeta(device_b, "exact")
        theta = default_operating_point(device_b, roots).phi
        target = TWO_PI * 1.32e6
        delta = modulation_amplitude_for(device_b, theta, target)
        drive = ModulationDrive(theta=theta, delta=abs(delta), omega_phi=TWO_PI * 275e6)
        j_eff = effective_drive_strength(device_b, drive)
        assert abs(j_eff) == pytest.approx(target, rel=1e-9)

    def test_chain_rule_consistency(self, device_b):
        drive = ModulationDrive(theta=0.31, delta=0.004, omega_phi=TWO_PI * 275e6)
        w = omega_minus_of_flux(device_b, drive.theta)
        expected = 0.5 * drive.delta * exchange_J_slope(device_b, w) * flux_slope(
            device_b, drive.theta
        )
        assert effective_drive_strength(device_b, drive) == pytest.approx(expected)

    def test_sweet_spot_inversion_is_pole(self, device_b):
        with pytest.raises(PoleError):
            modulation_amplitude_for(device_b, 0.0, TWO_PI * 1e6)
