import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qslb.core import SIGMA_X, SIGMA_Z, Constant, Trajectory, basis_state, propagate, pure_state
from qslb.errors import OrthogonalityError, ResolutionError, ShapeError
from qslb.geometry import (bargmann_half_distance, curve_length, dynamical_phase, geometric_phase,
                           geometry_report, horizontal_length_via_fluctuation, horizontal_lift,
                           pancharatnam_phase, reference_length_via_identity, reference_section,
                           reference_section_states, total_phase, wrap_phase)
from qslb.reproduce import SPIN_T, jc_trajectory, spin_pure_trajectory

from conftest import random_hermitian, random_state

seeds = st.integers(0, 2**32 - 1)


def test_bargmann_and_pancharatnam_examples():
    plus = pure_state([1, 1])
    assert math.isclose(bargmann_half_distance(basis_state(2, 0), plus), math.pi / 4)
    assert math.isclose(bargmann_half_distance(basis_state(2, 0), basis_state(2, 1)), math.pi / 2)
    assert math.isclose(pancharatnam_phase(plus, 1j * plus), math.pi / 2)
    with pytest.raises(OrthogonalityError):
        pancharatnam_phase(basis_state(2, 0), basis_state(2, 1))


def test_wrap_phase_range():
    assert wrap_phase(math.pi) == pytest.approx(math.pi)
    assert wrap_phase(-math.pi) == pytest.approx(math.pi)
    assert wrap_phase(3 * math.pi / 2) == pytest.approx(-math.pi / 2)


def test_grid_checks():
    t = np.linspace(0, 1, 33)
    with pytest.raises(ResolutionError):
        curve_length(t, np.ones((33, 2)))
    t = np.linspace(0, 1, 101) ** 2
    with pytest.raises(ShapeError):
        curve_length(t, np.ones((101, 2)))


def test_great_circle_length():
    # sigma_z from |+>: the ray moves along a great circle at rate Delta H = 1
    traj = propagate(Constant(SIGMA_Z), pure_state([1, 1]), math.pi / 4, 4096)
    geo = geometry_report(traj)
    assert geo.l_horizontal == pytest.approx(math.pi / 4, abs=1e-7)
    assert geo.s0_half == pytest.approx(math.pi / 4, abs=1e-12)


def test_spin_reference_section_closed_form():
    traj = spin_pure_trajectory(1024)
    t = traj.times
    c, s = np.cos(np.sqrt(2) * t), np.sin(np.sqrt(2) * t)
    overlap = c - 1j * s / np.sqrt(2)
    psi = np.stack([overlap, -1j * s / np.sqrt(2)], axis=1)
    chi = (overlap.conj() / np.abs(overlap))[:, None] * psi
    assert np.allclose(reference_section(traj).chi_states, chi, atol=1e-12)


def test_spin_values():
    geo = geometry_report(spin_pure_trajectory())
    assert geo.s0_half == pytest.approx(math.pi / 4, abs=1e-12)
    assert geo.l_horizontal == pytest.approx(SPIN_T, abs=1e-7)
    assert geo.l_reference == pytest.approx(1.2526226757, abs=1e-6)


def test_phase_decomposition_spin():
    traj = spin_pure_trajectory()
    geo = geometry_report(traj)
    assert wrap_phase(geo.phase_total - geo.phase_dynamical - geo.phase_geometric) == pytest.approx(0, abs=1e-6)


def test_jc_reference_section_is_the_state():
    traj = jc_trajectory(T=1.2, n_steps=1024)
    assert np.allclose(reference_section(traj).chi_states, traj.states, atol=1e-12)
    assert geometric_phase(traj) == pytest.approx(0, abs=1e-10)


def test_terminal_orthogonality_uses_left_limit():
    traj = jc_trajectory(n_steps=1024)
    curve = reference_section(traj)
    assert curve.overlap_moduli[-1] < 1e-6
    assert np.all(np.isfinite(curve.chi_states))
    assert total_phase(traj) == pytest.approx(0, abs=1e-10)


def test_interior_orthogonality_raises():
    traj = propagate(Constant(SIGMA_X), basis_state(2, 0), math.pi, 1024)
    with pytest.raises(OrthogonalityError) as info:
        reference_section(traj)
    assert info.value.time == pytest.approx(math.pi / 2, abs=1e-2)


def test_lift_methods_agree():
    traj = spin_pure_trajectory()
    a = horizontal_lift(traj, "connection").bar_states
    b = horizontal_lift(traj, "energy").bar_states
    assert np.max(np.abs(a - b)) < 1e-6
    with pytest.raises(ValueError):
        horizontal_lift(traj, "nope")


def test_dynamical_phase_of_eigenstate():
    traj = propagate(Constant(2 * SIGMA_Z), basis_state(2, 0), 0.5, 64)
    assert dynamical_phase(traj) == pytest.approx(-1.0)
    assert geometric_phase(traj) == pytest.approx(0, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=seeds, d=st.integers(2, 4), T=st.floats(0.05, 2.0))
def test_length_ordering_and_identity(seed, d, T):
    rng = np.random.default_rng(seed)
    traj = propagate(Constant(random_hermitian(rng, d)), random_state(rng, d), T, 2048)
    try:
        geo = geometry_report(traj)
    except OrthogonalityError:
        return
    assert geo.s0_half <= geo.l_horizontal + 1e-6
    assert geo.l_horizontal <= geo.l_reference + 1e-6
    assert geo.l_horizontal == pytest.approx(horizontal_length_via_fluctuation(traj), rel=1e-5, abs=1e-9)
    assert reference_length_via_identity(traj) == pytest.approx(geo.l_reference, rel=1e-4, abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(seed=seeds, coeffs=st.lists(st.floats(-5, 5), min_size=4, max_size=4))
def test_gauge_invariance(seed, coeffs):
    rng = np.random.default_rng(seed)
    traj = propagate(Constant(random_hermitian(rng, 3)), random_state(rng, 3), 1.0, 1024)
    theta = np.polyval(coeffs, traj.times)
    gauged = Trajectory(traj.times, np.exp(1j * theta)[:, None] * traj.states, traj.model)
    try:
        chi0 = curve_length(traj.times, reference_section(traj).chi_states)
    except OrthogonalityError:
        return
    chi1 = curve_length(gauged.times, reference_section(gauged).chi_states)
    bar0 = curve_length(traj.times, horizontal_lift(traj).bar_states)
    bar1 = curve_length(gauged.times, horizontal_lift(gauged).bar_states)
    assert chi1 == pytest.approx(chi0, abs=1e-9)
    assert bar1 == pytest.approx(bar0, abs=1e-9)
    assert wrap_phase(geometric_phase(gauged) - geometric_phase(traj)) == pytest.approx(0, abs=1e-9)


@settings(max_examples=20, deadline=None)
@given(seed=seeds, a=st.floats(-0.5, 0.5))
def test_reparametrisation_invariance(seed, a):
    rng = np.random.default_rng(seed)
    H = random_hermitian(rng, 2)
    psi0 = random_state(rng, 2)
    w, v = np.linalg.eigh(H)
    T = 0.8
    u = np.linspace(0, 1, 4097)
    warped = T * (u + a * np.sin(np.pi * u) / np.pi)
    plain = T * u

    def states(ts):
        return (np.exp(-1j * np.outer(ts, w)) * (v.conj().T @ psi0)) @ v.T

    try:
        l_plain = curve_length(u, reference_section_states(u, states(plain)).chi_states)
    except OrthogonalityError:
        return
    l_warped = curve_length(u, reference_section_states(u, states(warped)).chi_states)
    assert l_warped == pytest.approx(l_plain, rel=5e-5)
