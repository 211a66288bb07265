"""Mixed initial states: purify, evolve with U_S (x) I_A, measure the joint curve."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .core import (HamiltonianModel, Trajectory, density_matrix, evaluate_hamiltonian, propagate,
                   tensor_identity)
from .errors import DegenerateError, NumericsError
from .geometry import ReferenceSectionCurve, curve_length, reference_section_states
from .bounds import ZERO_FLUCTUATION

RANK_TOL = 1e-12


@dataclass(frozen=True)
class PurifiedTrajectory:
    base: Trajectory
    d_S: int
    d_A: int
    system_hamiltonian: np.ndarray
    initial_mixed: np.ndarray

    @property
    def T(self) -> float:
        return self.base.T

    def system_states(self) -> np.ndarray:
        """rho_S(t_i) = Tr_A |Psi(t_i)><Psi(t_i)| on every grid point."""
        m = self.base.states.reshape(-1, self.d_S, self.d_A)
        return np.einsum("tia,tja->tij", m, m.conj())


def purify(rho) -> np.ndarray:
    """Schmidt-form purification sum_k sqrt(p_k) |k>_S |k>_A.

    The ancilla dimension is rank(rho).  Eigenvectors are taken in order of
    descending eigenvalue, and each is rotated so that its first nonzero
    component is real and positive, which makes the output deterministic.
    """
    rho = density_matrix(rho)
    evals, evecs = np.linalg.eigh(rho)
    order = np.argsort(-evals, kind="stable")
    evals, evecs = evals[order], evecs[:, order]
    keep = evals > RANK_TOL
    evals, evecs = evals[keep], evecs[:, keep]
    for k in range(evecs.shape[1]):
        v = evecs[:, k]
        lead = v[np.flatnonzero(np.abs(v) > 1e-12)[0]]
        evecs[:, k] = v * (abs(lead) / lead)
    d_S, d_A = rho.shape[0], evals.size
    joint = np.zeros((d_S, d_A), dtype=complex)
    for k in range(d_A):
        joint[:, k] = math.sqrt(evals[k]) * evecs[:, k]
    joint = joint.reshape(-1)
    return joint / np.linalg.norm(joint)


def ancilla_dimension(joint: np.ndarray, d_S: int) -> int:
    return joint.size // d_S


def lift_and_propagate(rho0, model: HamiltonianModel, T: float, n_steps: int,
                       ancilla_unitary: np.ndarray | None = None) -> PurifiedTrajectory:
    """Evolve a purification of ``rho0`` under ``model`` (x) I_A.

    ``ancilla_unitary`` optionally applies I_S (x) V to the initial purification,
    giving another valid purification of the same state.
    """
    rho0 = density_matrix(rho0)
    d_S = rho0.shape[0]
    if model.dim != d_S:
        raise ValueError(f"model dimension {model.dim} does not match density matrix {d_S}")
    joint = purify(rho0)
    d_A = ancilla_dimension(joint, d_S)
    if ancilla_unitary is not None:
        joint = np.kron(np.eye(d_S), np.asarray(ancilla_unitary)) @ joint
    base = propagate(tensor_identity(model, d_A), joint, T, n_steps)
    H_S = evaluate_hamiltonian(model, 0.0, right_limit=True)
    return PurifiedTrajectory(base=base, d_S=d_S, d_A=d_A, system_hamiltonian=H_S, initial_mixed=rho0)


def entangled_reference_section(ptraj: PurifiedTrajectory) -> ReferenceSectionCurve:
    """Joint curve with phase Tr(U_SA(t) rho_SA(0)) / |.| removed.

    For rho_SA(0) = |Psi(0)><Psi(0)| the trace equals <Psi(0)|Psi(t)>.
    """
    return reference_section_states(ptraj.base.times, ptraj.base.states)


def mixed_fluctuation(ptraj: PurifiedTrajectory) -> float:
    """Time-averaged sqrt(Tr(rho_S H_S^2) - Tr(rho_S H_S)^2)."""
    rhos = ptraj.system_states()
    Hs = np.array([h.reshape(ptraj.d_S, ptraj.d_A, ptraj.d_S, ptraj.d_A)[:, 0, :, 0]
                   for h in ptraj.base.hamiltonians()])
    mean = np.einsum("tij,tji->t", rhos, Hs).real
    # Tr(rho (H - <H>)^2), a sum of non-negative terms up to rounding
    shifted = Hs - mean[:, None, None] * np.eye(ptraj.d_S)
    var = np.einsum("tij,tjk,tki->t", rhos, shifted, shifted).real
    if np.any(var < -1e-12):
        raise NumericsError(f"negative system energy variance {var.min()!r}")
    dH = np.sqrt(np.clip(var, 0.0, None))
    return float(simpson(dH, x=ptraj.base.times)) / ptraj.T


def rqsl_time_mixed(ptraj: PurifiedTrajectory) -> float:
    """hbar * l(chi_SA) / Delta H_S."""
    length = curve_length(ptraj.base.times, entangled_reference_section(ptraj).chi_states)
    dH = mixed_fluctuation(ptraj)
    if dH <= ZERO_FLUCTUATION:
        if length <= 1e-9:
            return 0.0
        raise DegenerateError("zero system fluctuation with a moving joint state")
    return ptraj.base.hbar * length / dH
