"""Gauge-invariant geometry of a trajectory.

Lengths are computed from sampled states only: derivatives by second-order
finite differences (``numpy.gradient`` with ``edge_order=2``) and integrals
by the composite Simpson rule.  Everything here is a pure function of an
immutable ``Trajectory`` or of plain arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid, simpson, trapezoid

from .core import Trajectory
from .errors import OrthogonalityError, ResolutionError, ShapeError

EPS_ORTH = 1e-6
MIN_POINTS = 65


@dataclass(frozen=True)
class ReferenceSectionCurve:
    times: np.ndarray
    chi_states: np.ndarray
    overlap_moduli: np.ndarray
    # continuous Arg<psi(0)|psi(t)>; the section is exp(-i*phase) * psi
    overlap_phase: np.ndarray


@dataclass(frozen=True)
class HorizontalCurve:
    times: np.ndarray
    bar_states: np.ndarray


@dataclass(frozen=True)
class GeometryReport:
    s0_half: float
    l_horizontal: float
    l_reference: float
    phase_total: float
    phase_dynamical: float
    phase_geometric: float
    mean_fluctuation: float


def wrap_phase(phi):
    """Map angles into (-pi, pi]."""
    wrapped = -np.remainder(-np.asarray(phi) + math.pi, 2 * math.pi) + math.pi
    return float(wrapped) if np.ndim(wrapped) == 0 else wrapped


def _overlap(a: np.ndarray, b: np.ndarray) -> complex:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ShapeError(f"states of shape {a.shape} and {b.shape} cannot be compared")
    return complex(np.vdot(a, b))


def pancharatnam_phase(a: np.ndarray, b: np.ndarray) -> float:
    """Relative phase Arg<a|b> of two non-orthogonal states, in (-pi, pi]."""
    ov = _overlap(a, b)
    if abs(ov) <= EPS_ORTH:
        raise OrthogonalityError(f"states are orthogonal to within {EPS_ORTH} (|<a|b>|={abs(ov):.3g})")
    return wrap_phase(math.atan2(ov.imag, ov.real))


def bargmann_half_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the geodesic (Bargmann) distance, arccos|<a|b>|, in [0, pi/2]."""
    return math.acos(min(1.0, abs(_overlap(a, b))))


# ---------------------------------------------------------------------------
# Lifts of the projected curve
# ---------------------------------------------------------------------------


def _section_phase(times: np.ndarray, overlaps: np.ndarray) -> np.ndarray:
    """Unwrapped phase of <psi(0)|psi(t_i)>, validated against orthogonality.

    A near-zero overlap at the final sample alone is allowed: the phase there
    is taken as the linear extrapolation of the two preceding samples, i.e.
    the left limit of the curve.
    """
    moduli = np.abs(overlaps)
    bad = np.flatnonzero(moduli <= EPS_ORTH)
    terminal = bad.size == 1 and bad[0] == len(times) - 1 and len(times) >= 3
    if bad.size and not terminal:
        t = float(times[bad[0]])
        raise OrthogonalityError(
            f"reference section undefined: |<psi(0)|psi(t)>| = {moduli[bad[0]]:.3g} at t = {t:.6g}", time=t)
    raw = np.angle(overlaps)
    if terminal:
        phase = np.unwrap(raw[:-1])
        return np.append(phase, 2 * phase[-1] - phase[-2])
    return np.unwrap(raw)


def reference_section_states(times: np.ndarray, states: np.ndarray) -> ReferenceSectionCurve:
    states = np.asarray(states)
    overlaps = states @ states[0].conj()
    phase = _section_phase(np.asarray(times), overlaps)
    chi = np.exp(-1j * phase)[:, None] * states
    chi[0] = states[0]
    return ReferenceSectionCurve(np.asarray(times), chi, np.abs(overlaps), phase)


def reference_section(traj: Trajectory) -> ReferenceSectionCurve:
    """Phase-adjusted curve that stays in phase with the initial state."""
    return reference_section_states(traj.times, traj.states)


def horizontal_lift(traj: Trajectory, method: str = "connection") -> HorizontalCurve:
    """Parallel-transported lift of the trajectory.

    ``method="connection"`` fixes each sample's phase so that consecutive
    overlaps are real and positive, which uses only the states and is
    therefore exactly gauge invariant.  ``method="energy"`` applies the
    counter-rotation exp(i/hbar * int <H> dt) with trapezoidal accumulation;
    the two agree to O(step^2) on genuine Schrodinger trajectories.
    """
    states = traj.states
    if method == "connection":
        links = np.einsum("ti,ti->t", states[:-1].conj(), states[1:])
        theta = np.concatenate([[0.0], -np.cumsum(np.angle(links))])
    elif method == "energy":
        theta = cumulative_trapezoid(traj.energies(), traj.times, initial=0.0) / traj.hbar
    else:
        raise ValueError(f"unknown method {method!r}")
    return HorizontalCurve(traj.times, np.exp(1j * theta)[:, None] * states)


# ---------------------------------------------------------------------------
# Lengths
# ---------------------------------------------------------------------------


def _uniform_step(times: np.ndarray) -> float:
    times = np.asarray(times, dtype=float)
    if times.size < MIN_POINTS:
        raise ResolutionError(f"need at least {MIN_POINTS} grid points, got {times.size}")
    diffs = np.diff(times)
    h = (times[-1] - times[0]) / (times.size - 1)
    if not h > 0 or np.max(np.abs(diffs - h)) > 1e-9 * max(h, abs(times[-1])):
        raise ShapeError("time grid must be uniform and ascending")
    return float(h)


def velocities(times: np.ndarray, states: np.ndarray) -> np.ndarray:
    """d/dt of sampled states: central differences inside, one-sided at the ends."""
    h = _uniform_step(times)
    return np.gradient(np.asarray(states), h, axis=0, edge_order=2)


def curve_length(times: np.ndarray, states: np.ndarray) -> float:
    """Length int ||d psi/dt|| dt of a sampled curve."""
    speed = np.linalg.norm(velocities(times, states), axis=1)
    return float(simpson(speed, x=np.asarray(times, dtype=float)))


def connection_rate(curve: ReferenceSectionCurve) -> np.ndarray:
    """c(t) = -Im<chi|d chi/dt>, the rate at which the geometric phase accrues."""
    vel = velocities(curve.times, curve.chi_states)
    return -np.einsum("ti,ti->t", curve.chi_states.conj(), vel).imag


def horizontal_length_via_fluctuation(traj: Trajectory) -> float:
    """int Delta H / hbar dt."""
    _uniform_step(traj.times)
    return float(simpson(traj.fluctuations(), x=traj.times)) / traj.hbar


def reference_length_via_identity(traj: Trajectory) -> float:
    """Reference-section length from ||d chi||^2 = ||d psi_bar||^2 + (i<chi|d chi>)^2.

    Uses Delta H from the Hamiltonian for the horizontal part, so it is an
    independent estimate of ``curve_length(reference_section(traj))``.
    """
    curve = reference_section(traj)
    c = connection_rate(curve)
    speed = np.sqrt((traj.fluctuations() / traj.hbar) ** 2 + c**2)
    return float(simpson(speed, x=traj.times))


# ---------------------------------------------------------------------------
# Phases
# ---------------------------------------------------------------------------


def dynamical_phase(traj: Trajectory) -> float:
    """-(1/hbar) int <psi|H|psi> dt, trapezoidal."""
    return -float(trapezoid(traj.energies(), traj.times)) / traj.hbar


def geometric_phase(traj: Trajectory, curve: ReferenceSectionCurve | None = None) -> float:
    """Geometric phase i int <chi|d chi>, wrapped to (-pi, pi].

    Since <chi|d chi> is purely imaginary, i<chi|d chi> = -Im<chi|d chi>;
    this sign makes the result equal to total minus dynamical phase.
    """
    if curve is None:
        curve = reference_section(traj)
    return wrap_phase(float(trapezoid(connection_rate(curve), curve.times)))


def total_phase(traj: Trajectory, curve: ReferenceSectionCurve | None = None) -> float:
    """Arg<psi(0)|psi(T)>, taken as the left limit when psi(T) is orthogonal to psi(0)."""
    if curve is None:
        curve = reference_section(traj)
    return wrap_phase(float(curve.overlap_phase[-1]))


def geometry_report(traj: Trajectory) -> GeometryReport:
    curve = reference_section(traj)
    lift = horizontal_lift(traj)
    return GeometryReport(
        s0_half=bargmann_half_distance(traj.states[0], traj.states[-1]),
        l_horizontal=curve_length(traj.times, lift.bar_states),
        l_reference=curve_length(traj.times, curve.chi_states),
        phase_total=total_phase(traj, curve),
        phase_dynamical=wrap_phase(dynamical_phase(traj)),
        phase_geometric=geometric_phase(traj, curve),
        mean_fluctuation=float(simpson(traj.fluctuations(), x=traj.times)) / traj.T,
    )
