import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad
from scipy.special import j0 as scipy_j0

from qslb.battery import (CavityBatteryParams, EffectiveDriveParams, HarmonicBatteryParams, bessel_j0,
                          cavity_battery_report, cavity_closed_form, cavity_trajectory, cavity_window,
                          discharge_window, effective_drive, harmonic_closed_form,
                          harmonic_reference_speed, harmonic_trajectory, power_report, sweep_fig3)
from qslb.bounds import sandwich_slack
from qslb.errors import DomainError
from qslb.geometry import curve_length, reference_section


def test_j0_special_values():
    assert bessel_j0(0.0) == 1.0
    assert bessel_j0(1.0) == pytest.approx(float(mpmath.besselj(0, 1)), abs=1e-15)
    assert bessel_j0(-3.0) == bessel_j0(3.0)


def test_j0_first_zero_by_bisection():
    lo, hi = 2.0, 3.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if bessel_j0(mid) > 0 else (lo, mid)
    assert lo == pytest.approx(2.404825557695773, abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(x=st.floats(-49.99, 49.99))
def test_j0_against_scipy(x):
    assert bessel_j0(x) == pytest.approx(float(scipy_j0(x)), abs=1e-12)


def test_j0_domain():
    for x in (50.0, -60.0, math.inf, math.nan):
        with pytest.raises(DomainError):
            bessel_j0(x)


def test_effective_drive():
    d = effective_drive(HarmonicBatteryParams(epsilon=3.0, A=2.0, omega=1.0, zeta=0.0))
    assert d.eps_bar == pytest.approx(2.0)
    assert d.a_bar == pytest.approx(1.0)
    d = effective_drive(HarmonicBatteryParams(epsilon=3.0, A=2.0, omega=1.0, zeta=1.0, N=4))
    assert d.eps_bar == pytest.approx(3.0 * float(scipy_j0(1.0)) - 1.0)
    assert d.a_bar == pytest.approx(0.5)


def test_parameter_validation():
    with pytest.raises(DomainError):
        HarmonicBatteryParams(epsilon=1, A=1, omega=1, zeta=1.5)
    with pytest.raises(DomainError):
        HarmonicBatteryParams(epsilon=1, A=1, omega=1, zeta=0.5, N=0)
    with pytest.raises(DomainError):
        CavityBatteryParams(omega=1, lam=0)
    with pytest.raises(DomainError):
        discharge_window(EffectiveDriveParams(0.0, 0.0))


@settings(max_examples=30, deadline=None)
@given(eps=st.floats(-3, 3), a=st.floats(0.1, 2))
def test_harmonic_closed_form_matches_propagation(eps, a):
    d = EffectiveDriveParams(eps, a)
    traj = harmonic_trajectory(d, discharge_window(d), 512)
    assert np.allclose(traj.states, harmonic_closed_form(d, traj.times), atol=1e-11)


def test_harmonic_speed_matches_trajectory_length():
    d = EffectiveDriveParams(1.3, 0.7)
    T = 0.9 * discharge_window(d)
    traj = harmonic_trajectory(d, T, 4096)
    direct = curve_length(traj.times, reference_section(traj).chi_states)
    assert direct == pytest.approx(quad(lambda t: harmonic_reference_speed(d, t), 0, T)[0], abs=1e-6)


def test_trajectory_window_enforced():
    d = EffectiveDriveParams(2.0, 1.0)
    with pytest.raises(DomainError):
        harmonic_trajectory(d, 1.01 * discharge_window(d), 256)


def test_work_from_trajectory():
    # full window from |e>: released energy is eps * 4 a_bar^2 / Omega_R^2
    d = EffectiveDriveParams(2.0, 1.0)
    pr = power_report(d, discharge_window(d), 4096, epsilon=2.0)
    omega_sq = 2.0**2 + 4 * 1.0**2
    assert pr.work == pytest.approx(4 * 2.0 * 1.0**2 / omega_sq, abs=1e-10)
    assert pr.work_signed == pytest.approx(-pr.work)


def test_emax_warning():
    with pytest.warns(UserWarning):
        power_report(EffectiveDriveParams(0.0, 5.0), 0.1, 1024, epsilon=1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        power_report(EffectiveDriveParams(0.0, 1.0), 0.5, 1024, epsilon=2.0)


@settings(max_examples=30, deadline=None)
@given(eps=st.floats(0, 4), a=st.floats(0.2, 2), frac=st.floats(0.01, 0.95))
def test_power_sandwich(eps, a, frac):
    d = EffectiveDriveParams(eps, a)
    T = frac * discharge_window(d)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        pr = power_report(d, T, 2048)
    assert pr.p_lower <= pr.p_avg * (1 + 1e-6)
    assert pr.p_avg <= pr.p_upper * (1 + 1e-6)


def test_sweep_shape_and_scaling():
    rows = sweep_fig3(points=10, n_steps=1024)
    single = sweep_fig3(points=10, n_steps=1024, N=1)
    assert len(rows) == 10
    assert all(r.t_rqsl == 100 * s.t_rqsl and r.t_qsl == 100 * s.t_qsl for r, s in zip(rows, single))
    assert [r.T for r in rows] == sorted(r.T for r in rows)
    for r in rows:
        slack = 100 * sandwich_slack(r.T)
        assert r.t_rqsl + slack >= r.t_actual >= r.t_qsl - slack


def test_sweep_parallel_is_identical():
    a = sweep_fig3(points=8, n_steps=512)
    b = sweep_fig3(points=8, n_steps=512, max_workers=4)
    assert a == b


def test_cavity_closed_form_and_window():
    p = CavityBatteryParams(omega=1.0, lam=1.0, n_photons=3)
    assert cavity_window(p) == pytest.approx(math.pi / 4)
    traj = cavity_trajectory(p, math.pi / 4, 1024)
    assert np.allclose(traj.states, cavity_closed_form(p, traj.times), atol=1e-12)
    with pytest.raises(DomainError):
        cavity_trajectory(p, math.pi / 2)


@pytest.mark.parametrize("n", [0, 1, 3, 8])
def test_cavity_saturates_inside_window(n):
    p = CavityBatteryParams(omega=0.7, lam=1.0, n_photons=n)
    for frac in (0.25, 0.5, 1.0):
        T = frac * cavity_window(p)
        rep = cavity_battery_report(p, T)
        assert rep.saturated
        assert rep.t_rqsl == pytest.approx(T, abs=1e-6)
