"""State vectors, Hamiltonian families and unitary propagation.

States are plain complex numpy vectors; density matrices are plain complex
numpy matrices.  The helpers here validate and normalise them.  Hamiltonians
come from a closed set of frozen dataclasses so that every model can be
written to and read back from the flat config format used by the CLI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Union

import numpy as np

from .errors import ModelError, NumericsError, ResolutionError, ShapeError

HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-12
MAX_DIM = 64

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


def basis_state(d: int, k: int) -> np.ndarray:
    """Computational basis vector |k> in dimension d."""
    v = np.zeros(d, dtype=complex)
    v[k] = 1.0
    return v


def pure_state(amplitudes, *, renormalize: bool = True) -> np.ndarray:
    """Return a unit-norm complex state vector of dimension >= 2.

    With ``renormalize=False`` the input must already have unit norm.
    """
    v = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if v.size < 2:
        raise ShapeError(f"state dimension must be >= 2, got {v.size}")
    if v.size > MAX_DIM:
        raise ShapeError(f"state dimension {v.size} exceeds {MAX_DIM}")
    norm = np.linalg.norm(v)
    if not np.isfinite(norm) or norm == 0.0:
        raise ShapeError("state vector has zero or non-finite norm")
    if renormalize:
        return v / norm
    if abs(norm - 1.0) > NORM_TOL:
        raise ShapeError(f"state vector not normalised (norm={norm!r})")
    return v


def density_matrix(matrix) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, positive semidefinite."""
    rho = np.asarray(matrix, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ShapeError(f"density matrix must be square, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_TOL:
        raise ShapeError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > 1e-12:
        raise ShapeError(f"density matrix trace is {np.trace(rho).real!r}, not 1")
    if np.linalg.eigvalsh(rho).min() < -1e-10:
        raise ShapeError("density matrix has a negative eigenvalue")
    return rho


def _hermitian(matrix, name: str) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ModelError(f"{name} must be a square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise ModelError(f"{name} dimension {m.shape[0]} exceeds {MAX_DIM}")
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL * scale:
        raise ModelError(f"{name} is not Hermitian")
    return _readonly(m)


def _check_hbar(hbar: float) -> float:
    hbar = float(hbar)
    if not hbar > 0 or not math.isfinite(hbar):
        raise ModelError(f"hbar must be positive and finite, got {hbar!r}")
    return hbar


# ---------------------------------------------------------------------------
# Hamiltonian families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Constant:
    """Time-independent Hamiltonian ``H0``."""

    H0: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "H0", _hermitian(self.H0, "H0"))
        object.__setattr__(self, "hbar", _check_hbar(self.hbar))

    @property
    def dim(self) -> int:
        return self.H0.shape[0]

    def evaluate(self, t: float) -> np.ndarray:
        return self.H0


@dataclass(frozen=True)
class Quench:
    """``H_base`` at t = 0, ``H_base + H_kick`` for every t > 0."""

    H_base: np.ndarray
    H_kick: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        base = _hermitian(self.H_base, "H_base")
        kick = _hermitian(self.H_kick, "H_kick")
        if base.shape != kick.shape:
            raise ModelError(f"H_base {base.shape} and H_kick {kick.shape} differ in shape")
        object.__setattr__(self, "H_base", base)
        object.__setattr__(self, "H_kick", kick)
        object.__setattr__(self, "hbar", _check_hbar(self.hbar))

    @property
    def dim(self) -> int:
        return self.H_base.shape[0]

    def evaluate(self, t: float) -> np.ndarray:
        if t > 0:
            return self.H_base + self.H_kick
        return self.H_base


@dataclass(frozen=True)
class RwaDrive:
    """Single-cell effective battery Hamiltonian (eps_bar/2) sigma_z + a_bar sigma_x.

    Basis order is (|e>, |g>).
    """

    eps_bar: float
    a_bar: float
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("eps_bar", "a_bar"):
            if not math.isfinite(getattr(self, name)):
                raise ModelError(f"{name} must be finite")
        object.__setattr__(self, "hbar", _check_hbar(self.hbar))

    @property
    def dim(self) -> int:
        return 2

    def evaluate(self, t: float) -> np.ndarray:
        return 0.5 * self.eps_bar * SIGMA_Z + self.a_bar * SIGMA_X


@dataclass(frozen=True)
class JaynesCummingsBlock:
    """The two-dimensional block {|e,n>, |g,n+1>} of the Jaynes-Cummings model.

    Both basis states have bare energy hbar*omega*(n + 1/2); the coupling
    matrix element is hbar*lam*sqrt(n+1).  Like the quench, the coupling is
    switched off at exactly t = 0 and on for t > 0.  Basis order is
    (|e,n>, |g,n+1>).
    """

    omega: float
    lam: float
    n: int = 0
    hbar: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ModelError(f"photon number must be a non-negative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        for name in ("omega", "lam"):
            if not math.isfinite(getattr(self, name)):
                raise ModelError(f"{name} must be finite")
        object.__setattr__(self, "hbar", _check_hbar(self.hbar))

    @property
    def dim(self) -> int:
        return 2

    def evaluate(self, t: float) -> np.ndarray:
        diag = self.hbar * self.omega * (self.n + 0.5) * np.eye(2, dtype=complex)
        if t > 0:
            return diag + self.hbar * self.lam * math.sqrt(self.n + 1) * SIGMA_X
        return diag


HamiltonianModel = Union[Constant, Quench, RwaDrive, JaynesCummingsBlock]


def evaluate_hamiltonian(model: HamiltonianModel, t: float, *, right_limit: bool = False) -> np.ndarray:
    """The model's Hermitian matrix at time ``t >= 0``.

    ``right_limit=True`` returns the t -> 0+ value at t = 0, which is the
    convention used for propagation and for every quantity sampled along a
    trajectory.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t!r}")
    if right_limit and t == 0:
        t = math.ulp(0.0)
    return model.evaluate(t)


def tensor_identity(model: HamiltonianModel, d_anc: int) -> HamiltonianModel:
    """Lift a system model to H (x) I on a system + ancilla space."""
    eye = np.eye(d_anc)
    if isinstance(model, Quench):
        return Quench(np.kron(model.H_base, eye), np.kron(model.H_kick, eye), hbar=model.hbar)
    if isinstance(model, JaynesCummingsBlock):
        # keep the t = 0 switch-off
        base = np.kron(model.evaluate(0.0), eye)
        kicked = np.kron(model.evaluate(1.0), eye)
        return Quench(base, kicked - base, hbar=model.hbar)
    return Constant(np.kron(model.evaluate(0.0), eye), hbar=model.hbar)


def spectral_norm(H: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvalsh(H))))


# ---------------------------------------------------------------------------
# Observables
# ---------------------------------------------------------------------------


def _check_pair(state: np.ndarray, M: np.ndarray):
    state = np.asarray(state)
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or state.shape[-1] != M.shape[0]:
        raise ShapeError(f"state of shape {state.shape} incompatible with operator {M.shape}")
    return state, M


def expectation(state: np.ndarray, M: np.ndarray) -> float:
    """<psi|M|psi> for Hermitian M; the imaginary part must be negligible."""
    state, M = _check_pair(state, M)
    val = np.vdot(state, M @ state)
    if abs(val.imag) > 1e-10 * max(1.0, float(np.max(np.abs(M)))):
        raise NumericsError(f"expectation has imaginary part {val.imag!r}; operator not Hermitian?")
    return float(val.real)


def energy_fluctuation(state: np.ndarray, H: np.ndarray) -> float:
    """Energy standard deviation sqrt(<H^2> - <H>^2).

    Evaluated as ||(H - <H>) psi||, which avoids the cancellation in the
    difference of second moments (an eigenstate gives exactly zero rather
    than sqrt(machine epsilon)).
    """
    state, H = _check_pair(state, H)
    Hpsi = H @ state
    mean = np.vdot(state, Hpsi).real
    return float(np.linalg.norm(Hpsi - mean * state))


def partial_trace_B(joint: np.ndarray, d_S: int, d_A: int) -> np.ndarray:
    """Reduced density matrix of the first factor of a pure joint state."""
    joint = np.asarray(joint, dtype=complex).reshape(-1)
    if d_S < 1 or d_A < 1 or joint.size != d_S * d_A:
        raise ShapeError(f"joint dimension {joint.size} does not factor as {d_S} x {d_A}")
    m = joint.reshape(d_S, d_A)
    return m @ m.conj().T


# ---------------------------------------------------------------------------
# Propagation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled solution of the Schrodinger equation.

    ``states[i]`` is the state at ``times[i]``; both arrays are read-only.
    """

    times: np.ndarray
    states: np.ndarray
    model: HamiltonianModel
    step: float = field(default=0.0)

    def __post_init__(self):
        times = _readonly(np.asarray(self.times, dtype=float))
        states = _readonly(np.asarray(self.states, dtype=complex))
        if states.ndim != 2 or states.shape[0] != times.size:
            raise ShapeError(f"{states.shape[0]} states for {times.size} times")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)
        if not self.step:
            object.__setattr__(self, "step", float(times[1] - times[0]))

    @property
    def T(self) -> float:
        return float(self.times[-1] - self.times[0])

    @property
    def hbar(self) -> float:
        return self.model.hbar

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    @cached_property
    def _hamiltonians(self) -> np.ndarray:
        # all model families are constant on t > 0
        H = np.array(evaluate_hamiltonian(self.model, 0.0, right_limit=True))
        H.setflags(write=False)
        return np.broadcast_to(H, (self.times.size,) + H.shape)

    def hamiltonians(self) -> np.ndarray:
        """H at every grid point, using the t -> 0+ value at t = 0."""
        return self._hamiltonians

    def energies(self) -> np.ndarray:
        """<psi|H|psi> at every grid point."""
        return np.einsum("ti,tij,tj->t", self.states.conj(), self._hamiltonians, self.states).real

    def fluctuations(self) -> np.ndarray:
        """Delta H at every grid point."""
        Hpsi = np.einsum("tij,tj->ti", self._hamiltonians, self.states)
        mean = np.einsum("ti,ti->t", self.states.conj(), Hpsi).real
        return np.linalg.norm(Hpsi - mean[:, None] * self.states, axis=1)


def required_steps(max_norm: float, T: float, hbar: float) -> int:
    """Smallest step count accepted by the resolution guard."""
    return 16 * max(1, math.ceil(max_norm * T / (hbar * math.pi)))


def _eigh(H: np.ndarray):
    try:
        evals, evecs = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericsError(f"eigendecomposition failed: {exc}") from exc
    return evals, evecs


def midpoint_exponential(hamiltonian_at: Callable[[float], np.ndarray], initial: np.ndarray,
                         times: np.ndarray, hbar: float = 1.0, static: bool = False) -> np.ndarray:
    """Exponential midpoint rule on an arbitrary grid.

    Each step multiplies by exp(-i dt H(t_mid) / hbar), computed from the
    Hermitian eigendecomposition of the midpoint Hamiltonian.  Runs of steps
    with an identical midpoint Hamiltonian are evaluated in closed form from
    the start of the run, which is exact and avoids accumulating rounding.
    ``static=True`` promises that H(t) is the same at every midpoint.
    """
    n = len(times) - 1
    out = np.empty((n + 1, initial.size), dtype=complex)
    out[0] = initial
    i = 0
    while i < n:
        H = hamiltonian_at(0.5 * (times[i] + times[i + 1]))
        j = i + 1
        if static:
            j = n
        while j < n and np.array_equal(hamiltonian_at(0.5 * (times[j] + times[j + 1])), H):
            j += 1
        evals, evecs = _eigh(H)
        coeffs = evecs.conj().T @ out[i]
        elapsed = times[i + 1:j + 1] - times[i]
        phases = np.exp(-1j * np.outer(elapsed, evals) / hbar)
        out[i + 1:j + 1] = (phases * coeffs) @ evecs.T
        i = j
    return out


def propagate(model: HamiltonianModel, initial, T: float, n_steps: int) -> Trajectory:
    """Evolve ``initial`` under ``model`` on a uniform grid of ``n_steps`` steps."""
    if not T > 0:
        raise ValueError(f"T must be positive, got {T!r}")
    if int(n_steps) != n_steps or n_steps < 64:
        raise ResolutionError(f"n_steps must be an integer >= 64, got {n_steps!r}")
    psi0 = pure_state(initial, renormalize=False)
    if psi0.size != model.dim:
        raise ShapeError(f"initial state has dimension {psi0.size}, model has {model.dim}")
    times = np.linspace(0.0, T, int(n_steps) + 1)

    max_norm = max(spectral_norm(evaluate_hamiltonian(model, t, right_limit=True)) for t in times[:2])
    if isinstance(model, Quench):
        max_norm = max(max_norm, spectral_norm(model.H_base))
    # every family is constant on t > 0, so one midpoint Hamiltonian serves all steps
    need = required_steps(max_norm, T, model.hbar)
    if n_steps < need:
        raise ResolutionError(f"n_steps={n_steps} too small; need >= {need} for |H|T/hbar={max_norm * T / model.hbar:.3g}")

    states = midpoint_exponential(lambda t: evaluate_hamiltonian(model, t, right_limit=True),
                                  psi0, times, model.hbar, static=True)
    return Trajectory(times, states, model, float(times[1] - times[0]))
