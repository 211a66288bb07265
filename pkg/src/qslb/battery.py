"""Discharging of two-level quantum batteries.

Two single-cell models, both discharged from the excited state:

* harmonic / square-wave drive, in its rotating-wave effective form
  (eps_bar/2) sigma_z + a_bar sigma_x;
* cavity-assisted discharge, a Jaynes-Cummings block {|e,n>, |g,n+1>}.

N cells discharged in parallel take N times the single-cell bound times.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bounds import BoundReport, bound_report
from .core import (SIGMA_X, SIGMA_Z, JaynesCummingsBlock, RwaDrive, Trajectory, basis_state,
                   expectation, propagate, spectral_norm)
from .errors import DomainError, NumericsError, SandwichViolation

BESSEL_DOMAIN = 50.0
_SERIES_CUTOFF = 8.0


def bessel_j0(x: float) -> float:
    """Bessel function of the first kind of order zero, |x| < 50.

    Power series for |x| <= 8.  Beyond that the series loses too many digits
    to cancellation and the large-argument expansion is not yet accurate
    enough, so Miller's backward recurrence normalised by
    J0 + 2 * sum J_2k = 1 is used instead.
    """
    x = float(x)
    if not math.isfinite(x) or abs(x) >= BESSEL_DOMAIN:
        raise DomainError(f"bessel_j0 supports |x| < {BESSEL_DOMAIN}, got {x!r}")
    x = abs(x)
    if x <= _SERIES_CUTOFF:
        q = -0.25 * x * x
        term = total = 1.0
        k = 0
        while True:
            k += 1
            term *= q / (k * k)
            total += term
            if abs(term) < 1e-15 * max(1.0, abs(total)):
                return total
    m = 2 * ((int(x) + int(math.sqrt(40.0 * x)) + 30) // 2)
    j_next, j, norm = 0.0, 1e-30, 0.0
    for k in range(m, 0, -1):
        j_next, j = j, 2.0 * k / x * j - j_next
        if abs(j) > 1e250:
            j_next *= 1e-250
            j *= 1e-250
            norm *= 1e-250
        if k > 1 and (k - 1) % 2 == 0:
            norm += 2.0 * j
    return j / (norm + j)


@dataclass(frozen=True)
class HarmonicBatteryParams:
    """Raw parameters of the harmonically driven N-cell battery."""

    epsilon: float
    A: float
    omega: float
    zeta: float
    N: int = 1
    hbar: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.zeta <= 1.0:
            raise DomainError(f"zeta must lie in [0, 1], got {self.zeta!r}")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N!r}")
        if self.A < 0:
            raise DomainError(f"drive amplitude must be >= 0, got {self.A!r}")
        if self.omega <= 0 or self.hbar <= 0:
            raise DomainError("omega and hbar must be positive")


@dataclass(frozen=True)
class EffectiveDriveParams:
    eps_bar: float
    a_bar: float


@dataclass(frozen=True)
class CavityBatteryParams:
    omega: float
    lam: float
    n_photons: int = 0
    N: int = 1
    hbar: float = 1.0

    def __post_init__(self):
        if self.lam <= 0:
            raise DomainError(f"coupling must be positive, got {self.lam!r}")
        if int(self.n_photons) != self.n_photons or self.n_photons < 0:
            raise DomainError(f"photon number must be a non-negative integer, got {self.n_photons!r}")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N!r}")


@dataclass(frozen=True)
class PowerReport:
    """Average discharging power and its two bounds.

    ``work`` is the energy released (positive on discharge); ``work_signed``
    is final minus initial battery energy.
    """

    T: float
    work: float
    work_signed: float
    p_avg: float
    p_lower: float
    p_upper: float
    bounds: BoundReport


# ---------------------------------------------------------------------------
# Harmonic / square-wave discharge
# ---------------------------------------------------------------------------


def effective_drive(p: HarmonicBatteryParams) -> EffectiveDriveParams:
    """Rotating-wave effective detuning and drive amplitude."""
    root_n = math.sqrt(p.N)
    eps_bar = p.epsilon * bessel_j0(p.A * p.zeta / (p.omega * root_n)) - p.omega
    a_bar = 0.5 * p.A * (1.0 - p.zeta / root_n)
    return EffectiveDriveParams(eps_bar=eps_bar, a_bar=a_bar)


def rabi_frequency(d: EffectiveDriveParams) -> float:
    return math.hypot(d.eps_bar, 2.0 * d.a_bar)


def discharge_window(d: EffectiveDriveParams, hbar: float = 1.0) -> float:
    """pi*hbar/Omega_R, the time to reach the point of maximal discharge."""
    if rabi_frequency(d) == 0:
        raise DomainError("undriven cell: eps_bar and a_bar are both zero")
    return math.pi * hbar / rabi_frequency(d)


def harmonic_model(d: EffectiveDriveParams, hbar: float = 1.0) -> RwaDrive:
    return RwaDrive(d.eps_bar, d.a_bar, hbar=hbar)


def harmonic_closed_form(d: EffectiveDriveParams, times, hbar: float = 1.0) -> np.ndarray:
    """Analytic single-cell states starting from |e>, basis (|e>, |g>)."""
    omega_r = rabi_frequency(d)
    phase = omega_r * np.asarray(times, dtype=float) / (2.0 * hbar)
    c, s = np.cos(phase), np.sin(phase)
    e = c - 1j * (d.eps_bar / omega_r) * s
    g = -1j * (2.0 * d.a_bar / omega_r) * s
    return np.stack([e, g], axis=-1)


def harmonic_reference_speed(d: EffectiveDriveParams, times, hbar: float = 1.0) -> np.ndarray:
    """Closed-form ||d chi/dt|| for the harmonic model (the reference-length integrand)."""
    omega_r = rabi_frequency(d)
    a = omega_r / (2.0 * hbar)
    b = d.eps_bar / omega_r
    cos2 = np.cos(a * np.asarray(times, dtype=float)) ** 2
    num = d.eps_bar**2 * (1 - 2 * b**2 - 2 * (1 - b**2) * cos2)
    den = 4 * (cos2 + b**2 * (1 - cos2)) ** 2
    return np.sqrt(omega_r**2 / 4 + num / den) / hbar


def harmonic_trajectory(d: EffectiveDriveParams, T: float, n_steps: int, hbar: float = 1.0) -> Trajectory:
    """Propagate one cell from |e> under the effective drive for T <= pi*hbar/Omega_R."""
    window = discharge_window(d, hbar)
    if T > window * (1 + 1e-12):
        raise DomainError(f"T={T!r} exceeds the discharge window {window!r}")
    return propagate(harmonic_model(d, hbar), basis_state(2, 0), T, n_steps)


def battery_hamiltonian(epsilon: float) -> np.ndarray:
    """Bare single-cell Hamiltonian (epsilon/2) sigma_z."""
    return 0.5 * epsilon * SIGMA_Z


def energy_change(traj: Trajectory, H0: np.ndarray) -> float:
    """<psi(T)|H0|psi(T)> - <psi(0)|H0|psi(0)>; negative on discharge."""
    return expectation(traj.states[-1], H0) - expectation(traj.states[0], H0)


def ergotropy_interval(traj: Trajectory, H0: np.ndarray) -> float:
    """Energy released to the load over the trajectory."""
    return abs(energy_change(traj, H0))


def _check_power_sandwich(p_lower: float, p_avg: float, p_upper: float) -> None:
    if p_lower > p_avg * (1 + 1e-6) or p_avg > p_upper * (1 + 1e-6):
        raise SandwichViolation(f"power ordering violated: {p_lower!r} <= {p_avg!r} <= {p_upper!r}")


def power_report(d: EffectiveDriveParams, T: float, n_steps: int = 4096, *,
                 epsilon: float = 2.0, hbar: float = 1.0) -> PowerReport:
    """Average discharging power W/T with its RQSL (lower) and QSL (upper) bounds.

    The bounds are W * mean(Delta H) / (hbar * l_chi) and
    W * mean(Delta H) / (hbar * S0/2), i.e. W / T_RQSL and W / T_QSL.
    """
    traj = harmonic_trajectory(d, T, n_steps, hbar)
    H0 = battery_hamiltonian(epsilon)
    gap = 2 * spectral_norm(H0)
    if spectral_norm(H0 + d.a_bar * SIGMA_X) > gap:
        warnings.warn(f"||H0 + H(t)|| exceeds the battery gap E_max={gap:g}", stacklevel=2)
    report = bound_report(traj)
    signed = energy_change(traj, H0)
    work = abs(signed)
    p_avg = work / T
    p_lower = work / report.t_rqsl if report.t_rqsl > 0 else math.nan
    p_upper = work / report.t_qsl if report.t_qsl > 0 else math.nan
    if not report.degenerate and report.t_qsl > 0:
        _check_power_sandwich(p_lower, p_avg, p_upper)
    return PowerReport(T=T, work=work, work_signed=signed, p_avg=p_avg, p_lower=p_lower,
                       p_upper=p_upper, bounds=report)


@dataclass(frozen=True)
class SweepRow:
    T: float
    t_qsl: float
    t_actual: float
    t_rqsl: float


def sweep_fig3(a_bar: float = 1.0, eps_bar: float = 2.0, N: int = 100, points: int = 100,
               n_steps: int = 4096, hbar: float = 1.0, T_max: float | None = None,
               max_workers: int | None = None) -> list[SweepRow]:
    """N-cell QSL/RQSL times on a uniform grid of horizons T in (0, T_max].

    ``T_max`` defaults to the discharge window pi*hbar/Omega_R.

    Defaults are a_bar = hbar and eps_bar = 2*hbar, N = 100.  Rows are
    independent and may be computed concurrently; output order is always
    ascending in T.
    """
    if points < 1:
        raise DomainError("points must be positive")
    d = EffectiveDriveParams(eps_bar=eps_bar * hbar, a_bar=a_bar * hbar)
    window = discharge_window(d, hbar) if T_max is None else T_max
    horizons = [window * k / points for k in range(1, points + 1)]

    def row(T: float) -> SweepRow:
        rep = bound_report(harmonic_trajectory(d, T, n_steps, hbar)).scaled(N)
        return SweepRow(T=T, t_qsl=rep.t_qsl, t_actual=rep.t_actual, t_rqsl=rep.t_rqsl)

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(row, horizons))
    else:
        rows = [row(T) for T in horizons]
    for prev, cur in zip(rows, rows[1:]):
        if not cur.t_rqsl > prev.t_rqsl:
            raise NumericsError(f"T_RQSL not increasing between T={prev.T!r} and T={cur.T!r}")
    return rows


# ---------------------------------------------------------------------------
# Cavity-assisted discharge
# ---------------------------------------------------------------------------


def cavity_model(p: CavityBatteryParams) -> JaynesCummingsBlock:
    return JaynesCummingsBlock(omega=p.omega, lam=p.lam, n=p.n_photons, hbar=p.hbar)


def cavity_window(p: CavityBatteryParams) -> float:
    """pi / (2 lambda sqrt(n+1)), the time for |e,n> to reach |g,n+1>."""
    return math.pi / (2.0 * p.lam * math.sqrt(p.n_photons + 1))


def cavity_closed_form(p: CavityBatteryParams, times) -> np.ndarray:
    """Analytic states from |e,n>, basis (|e,n>, |g,n+1>), including the bare-energy phase."""
    t = np.asarray(times, dtype=float)
    rate = p.lam * math.sqrt(p.n_photons + 1)
    bare = np.exp(-1j * p.omega * (p.n_photons + 0.5) * t)
    return np.stack([bare * np.cos(rate * t), -1j * bare * np.sin(rate * t)], axis=-1)


def cavity_trajectory(p: CavityBatteryParams, T: float, n_steps: int = 4096) -> Trajectory:
    window = cavity_window(p)
    if T > window * (1 + 1e-12):
        raise DomainError(f"T={T!r} exceeds the discharge window {window!r}")
    return propagate(cavity_model(p), basis_state(2, 0), T, n_steps)


def cavity_battery_report(p: CavityBatteryParams, T: float, n_steps: int = 4096) -> BoundReport:
    """Single-cell bound report; use ``.scaled(p.N)`` for the N-cell times."""
    return bound_report(cavity_trajectory(p, T, n_steps))
