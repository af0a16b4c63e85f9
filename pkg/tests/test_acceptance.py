"""Acceptance criteria 1-13, one test per criterion at the stated tolerance.

A pass/fail line per criterion is printed in the terminal summary
(see ``conftest.py``).
"""

import math
import os
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from paddlesat import optics, orbit, power, rflink
from paddlesat.cli import main
from paddlesat.optics import JitterSpec, OpticalTxSpec, ReceiverSpec
from paddlesat.orbit import CentralBody, OrbitSpec, PropulsionSpec
from paddlesat.power import BatterySpec, PteChain, SolarPanelSpec
from paddlesat.rflink import RfLinkSpec

HERE = Path(__file__).parent
GOLDEN = HERE / "golden" / "baseline_report.json"
EARTH = CentralBody()
LEO = OrbitSpec(6878e3)
N = orbit.mean_motion(EARTH, LEO)
PERIOD = orbit.orbital_period(EARTH, LEO)
ECLIPSE = orbit.eclipse_duration(EARTH, LEO)


def criterion(number, title):
    return pytest.mark.criterion(number, title)


@criterion(1, "mean motion at a = 6878 km")
def test_c01_mean_motion(baseline_report):
    assert N == pytest.approx(1.1065e-3, rel=1e-3)
    assert baseline_report.value("orbit.mean_motion") == pytest.approx(N, rel=1e-11)


@criterion(2, "orbital period")
def test_c02_period(baseline_report):
    assert PERIOD == pytest.approx(5677.0, abs=5.0)
    assert PERIOD == pytest.approx(2 * math.pi / N, rel=1e-9)
    assert baseline_report.value("orbit.period") == pytest.approx(PERIOD, rel=1e-11)


@criterion(3, "eclipse duration")
def test_c03_eclipse(baseline_report):
    assert EARTH.equatorial_radius == 6378137.0
    assert ECLIPSE == pytest.approx(2146.0, abs=10.0)
    assert baseline_report.value("orbit.eclipse_duration") == pytest.approx(ECLIPSE, rel=1e-11)


@criterion(4, "along-track drift from semimajor-axis bias")
def test_c04_drift(baseline_report):
    assert orbit.drift_per_day(N, 1.0) == pytest.approx(143.0, rel=0.01)
    assert orbit.drift_per_day(N, 10.0) == pytest.approx(1430.0, rel=0.01)
    assert baseline_report.value("orbit.drift_per_day") == pytest.approx(1430.0, rel=0.01)


@criterion(5, "annual station-keeping delta-v")
def test_c05_stationkeeping(baseline_report):
    assert orbit.annual_stationkeeping_dv(N, 10.0, 86400.0) == pytest.approx(6.1, rel=0.02)
    assert baseline_report.value("orbit.annual_sk_dv") == pytest.approx(6.1, rel=0.02)


@criterion(6, "propellant mass, cold gas and electric")
def test_c06_propellant(baseline_report):
    assert orbit.propellant_mass(PropulsionSpec(11.0, 60.0), 5.0) == pytest.approx(0.093, rel=0.01)
    assert orbit.propellant_mass(PropulsionSpec(11.0, 1000.0), 5.0) == pytest.approx(0.0056, rel=0.02)
    assert baseline_report.value("orbit.propellant_cold_gas") == pytest.approx(0.093, rel=0.01)
    assert baseline_report.value("orbit.propellant_electric") == pytest.approx(0.0056, rel=0.02)


@criterion(7, "pointing displacement at 100 / 500 m")
def test_c07_pointing(baseline_report):
    assert orbit.pointing_displacement(20e-6, 100.0) == pytest.approx(2e-3, rel=1e-12)
    assert orbit.pointing_displacement(20e-6, 500.0) == pytest.approx(10e-3, rel=1e-12)
    assert baseline_report.value("orbit.pointing_displacement_min") == pytest.approx(2e-3, rel=1e-12)
    assert baseline_report.value("orbit.pointing_displacement_max") == pytest.approx(10e-3, rel=1e-12)


@criterion(8, "diffraction divergence and spot sizes")
def test_c08_divergence(baseline_report):
    tx = OpticalTxSpec(wavelength=980e-9, aperture_diameter=0.15)
    theta = optics.diffraction_divergence(tx)
    assert theta == pytest.approx(16e-6, rel=0.02)
    assert optics.spot_diameter(16e-6, 500.0) == pytest.approx(0.008, rel=0.02)
    assert optics.spot_diameter(theta, 500.0) == pytest.approx(0.008, rel=0.02)
    assert optics.spot_diameter(200e-6, 500.0) == pytest.approx(0.10, rel=1e-12)
    assert baseline_report.value("optics.diffraction_divergence") == pytest.approx(16.0, rel=0.02)


@criterion(9, "RSS jitter lateral error at 500 m")
def test_c09_jitter(baseline_report):
    sigma = optics.combined_jitter(JitterSpec(250e-6, 1000e-6))
    assert optics.lateral_error(sigma, 500.0) == pytest.approx(0.515, rel=0.005)
    assert baseline_report.value("optics.illustrative_lateral_error") == pytest.approx(0.515, rel=0.005)


@criterion(10, "RF crosslink chain")
def test_c10_rf(baseline_report):
    spec = RfLinkSpec()
    r = rflink.evaluate_rf_link(spec)
    assert r.fspl == pytest.approx(93.66, abs=0.01)
    assert r.n0 == -171.0
    assert r.c_req == pytest.approx(-109.0, abs=0.5)
    assert r.eirp_req_dbm == pytest.approx(-12.0, abs=0.5)
    assert r.eirp_req_w == pytest.approx(60e-6, rel=0.10)
    assert r.p_r == pytest.approx(-93.7, abs=0.1)
    assert r.noise_power == pytest.approx(-121.0, abs=0.1)
    assert r.cn == pytest.approx(27.0, abs=0.5)
    assert r.ebn0 == pytest.approx(34.0, abs=0.6)
    assert r.closes
    assert baseline_report.value("rf.fspl") == pytest.approx(93.66, abs=0.01)
    assert baseline_report.value("rf.ebn0") == pytest.approx(34.0, abs=0.6)


@criterion(11, "power chain")
def test_c11_power(baseline_report):
    panel = SolarPanelSpec()
    r = power.power_budget(panel, PERIOD, ECLIPSE, BatterySpec(), PteChain())
    assert power.panel_power(panel) == 340.5
    assert r.expendable_power == pytest.approx(212.0, abs=1.0)
    assert r.orbit_energy == pytest.approx(334.0, abs=1.0)
    assert r.derated_power == pytest.approx(176.0, abs=1.0)
    assert r.derated_energy == pytest.approx(278.0, abs=1.0)
    assert r.battery_mass == pytest.approx(1.4, abs=0.05)
    assert r.battery_capacity == pytest.approx(69.6, abs=0.3)
    assert r.pte_total == pytest.approx(0.104895, rel=1e-12)
    assert round(r.pte_total, 3) == 0.105
    assert power.delivered_power(175.0, 0.105) == 18.375
    assert power.display_precision_delivered(r.derated_power, 1.0, PteChain())[1] == 18.375
    assert power.delivered_power(175.0, PteChain()) == pytest.approx(18.36, abs=0.02)
    assert baseline_report.value("power.delivered_power_display") == 18.375
    assert baseline_report.value("power.delivered_power") == pytest.approx(18.36, abs=0.06)


def _hcw_rhs(n):
    def rhs(_, s):
        x, y, z, vx, vy, vz = s
        return [vx, vy, vz, 3 * n * n * x + 2 * n * vy, -2 * n * vx, -n * n * z]
    return rhs


@criterion(12, "property suites: HCW vs ODE, Monte Carlo vs Rayleigh, invariants, runtime < 60 s")
def test_c12_properties():
    # closed-form relative motion against an independent integrator
    s0 = orbit.HcwState(x=12.0, y=-300.0, z=5.0, vx=0.02, vy=-0.03, vz=0.01)
    sol = solve_ivp(_hcw_rhs(N), (0.0, 1000.0), s0.as_array(), method="DOP853", rtol=1e-12, atol=1e-12)
    closed = orbit.hcw_propagate(s0, N, 1000.0).as_array()
    assert np.max(np.abs(closed[:3] - sol.y[:3, -1])) < 1e-6

    # point beam on a disk under Rayleigh-distributed offset: P = 1 - exp(-R^2 / 2 s^2)
    rx = ReceiverSpec(0.5, 500.0)
    tx = OpticalTxSpec(wavelength=1e-9, aperture_diameter=10.0, design_divergence=2 * 0.5e-6 / 500.0)
    est = optics.capture_fraction_jittered(tx, rx, JitterSpec(0.5 / 500.0, 0.0), 100_000, seed=20251016)
    assert abs(est.mean_fraction - (1 - math.exp(-0.5))) <= 3 * est.stderr

    # every per-module invariant suite, timed as a whole
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(HERE),
         "--ignore", str(HERE / "test_acceptance.py")],
        capture_output=True, text=True, cwd=HERE.parent, env={**os.environ},
    )
    elapsed = time.perf_counter() - start
    assert proc.returncode == 0, proc.stdout[-3000:]
    assert elapsed < 60.0, f"suite took {elapsed:.1f} s"


@criterion(13, "end-to-end evaluate matches golden report byte-for-byte")
def test_c13_golden(capsysbinary):
    assert main(["evaluate", "--format", "machine"]) == 0
    out, _ = capsysbinary.readouterr()
    assert out == GOLDEN.read_bytes()
