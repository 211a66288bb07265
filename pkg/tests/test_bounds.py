import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qslb.bounds import (BoundReport, assemble_report, bound_report, check_sandwich, mean_fluctuation,
                         qsl_time, rqsl_time, sandwich_slack)
from qslb.core import SIGMA_Z, Constant, basis_state, propagate, pure_state
from qslb.errors import DegenerateError, OrthogonalityError, SandwichViolation
from qslb.reproduce import spin_pure_trajectory

from conftest import random_hermitian, random_state


def test_spin_times():
    rep = bound_report(spin_pure_trajectory())
    assert rep.t_qsl == pytest.approx(math.pi / 4, abs=1e-9)
    assert rep.t_rqsl == pytest.approx(1.2526226757, abs=1e-6)
    assert rep.mean_fluctuation == pytest.approx(1.0, abs=1e-12)
    assert not rep.saturated


def test_geodesic_evolution_saturates():
    rep = bound_report(propagate(Constant(SIGMA_Z), pure_state([1, 1]), math.pi / 2, 4096))
    assert rep.saturated
    assert rep.t_qsl == pytest.approx(math.pi / 2, abs=1e-6)


def test_stationary_state_is_degenerate():
    traj = propagate(Constant(SIGMA_Z), basis_state(2, 0), 1.0, 64)
    rep = bound_report(traj)
    assert rep.degenerate and not rep.saturated
    assert rep.t_qsl == 0 and rep.t_rqsl == 0


def test_zero_fluctuation_with_motion_is_an_error():
    with pytest.raises(DegenerateError):
        assemble_report(1.0, 0.0, 0.5, 0.5, 1.0)


def test_sandwich_violation_reported():
    with pytest.raises(SandwichViolation):
        check_sandwich(1.1, 1.0, 2.0)
    with pytest.raises(SandwichViolation):
        check_sandwich(0.5, 1.0, 0.9)
    check_sandwich(1.0 + 0.5 * sandwich_slack(1.0), 1.0, 1.0)


def test_scaling():
    rep = bound_report(spin_pure_trajectory(256))
    big = rep.scaled(100)
    assert isinstance(big, BoundReport)
    assert big.t_rqsl == pytest.approx(100 * rep.t_rqsl, rel=1e-15)
    assert big.t_actual == pytest.approx(100 * rep.t_actual, rel=1e-15)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 4), T=st.floats(1e-3, 3.0))
def test_sandwich_holds(seed, d, T):
    rng = np.random.default_rng(seed)
    traj = propagate(Constant(random_hermitian(rng, d)), random_state(rng, d), T, 4096)
    try:
        rep = bound_report(traj)
    except OrthogonalityError:
        return
    slack = sandwich_slack(T)
    assert rep.t_qsl <= T + slack
    assert T <= rep.t_rqsl + slack
    assert rep.t_qsl == pytest.approx(qsl_time(traj), abs=1e-12)
    assert rep.t_rqsl == pytest.approx(rqsl_time(traj), abs=1e-12)
    assert rep.mean_fluctuation == pytest.approx(mean_fluctuation(traj), abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), hbar=st.floats(0.1, 10.0))
def test_hbar_units(seed, hbar):
    # H -> hbar*H with the same hbar leaves the dynamics and all times unchanged
    rng = np.random.default_rng(seed)
    H, psi = random_hermitian(rng, 2), random_state(rng, 2)
    try:
        a = bound_report(propagate(Constant(H), psi, 0.7, 2048))
    except OrthogonalityError:
        return
    b = bound_report(propagate(Constant(hbar * H, hbar=hbar), psi, 0.7, max(2048, 16 * math.ceil(
        hbar * np.linalg.norm(H, 2) * 0.7 / (hbar * math.pi))))) 
    assert b.t_qsl == pytest.approx(a.t_qsl, rel=1e-9)
    assert b.t_rqsl == pytest.approx(a.t_rqsl, rel=1e-9)
