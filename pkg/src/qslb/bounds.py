"""Lower (QSL) and upper (RQSL) bounds on the evolution time of a trajectory."""

from __future__ import annotations

from dataclasses import dataclass, replace

from scipy.integrate import simpson

from .core import Trajectory
from .errors import DegenerateError, SandwichViolation
from .geometry import bargmann_half_distance, curve_length, reference_section

# below this the energy fluctuation is treated as exactly zero
ZERO_FLUCTUATION = 1e-12


def sandwich_slack(t_actual: float) -> float:
    return 1e-6 * max(1.0, t_actual)


@dataclass(frozen=True)
class BoundReport:
    """T_QSL <= T <= T_RQSL together with the quantities they come from.

    ``degenerate`` marks a stationary trajectory (zero fluctuation): both
    bound times are reported as 0 and the sandwich is not checked.
    """

    t_actual: float
    t_qsl: float
    t_rqsl: float
    mean_fluctuation: float
    s0_half: float
    l_reference: float
    saturated: bool
    degenerate: bool = False

    def scaled(self, factor: float) -> "BoundReport":
        """All three times multiplied by ``factor`` (parallel N-cell protocol)."""
        return replace(self, t_actual=self.t_actual * factor, t_qsl=self.t_qsl * factor,
                       t_rqsl=self.t_rqsl * factor)


def mean_fluctuation(traj: Trajectory) -> float:
    """Time average of Delta H over [0, T]."""
    return float(simpson(traj.fluctuations(), x=traj.times)) / traj.T


def _time_from_length(length: float, dH: float, hbar: float) -> float:
    if dH <= ZERO_FLUCTUATION:
        if length <= 1e-9:
            return 0.0
        raise DegenerateError(f"zero energy fluctuation but the state moved (length {length:.3g})")
    return hbar * length / dH


def qsl_time(traj: Trajectory) -> float:
    """hbar * arccos|<psi(0)|psi(T)>| / mean Delta H."""
    s0_half = bargmann_half_distance(traj.states[0], traj.states[-1])
    return _time_from_length(s0_half, mean_fluctuation(traj), traj.hbar)


def rqsl_time(traj: Trajectory) -> float:
    """hbar * (reference-section length) / mean Delta H."""
    l_ref = curve_length(traj.times, reference_section(traj).chi_states)
    return _time_from_length(l_ref, mean_fluctuation(traj), traj.hbar)


def check_sandwich(t_qsl: float, t_actual: float, t_rqsl: float) -> None:
    slack = sandwich_slack(t_actual)
    if t_rqsl < t_actual - slack or t_actual < t_qsl - slack:
        raise SandwichViolation(
            f"ordering T_RQSL >= T >= T_QSL violated: {t_rqsl!r} >= {t_actual!r} >= {t_qsl!r}")


def assemble_report(t_actual: float, dH: float, s0_half: float, l_reference: float,
                    hbar: float) -> BoundReport:
    """Build and check a report from precomputed geometric quantities."""
    t_qsl = _time_from_length(s0_half, dH, hbar)
    t_rqsl = _time_from_length(l_reference, dH, hbar)
    degenerate = dH <= ZERO_FLUCTUATION
    if not degenerate:
        check_sandwich(t_qsl, t_actual, t_rqsl)
    saturated = not degenerate and (t_rqsl - t_qsl) < sandwich_slack(t_actual)
    return BoundReport(t_actual=t_actual, t_qsl=t_qsl, t_rqsl=t_rqsl, mean_fluctuation=dH,
                       s0_half=s0_half, l_reference=l_reference, saturated=saturated,
                       degenerate=degenerate)


def bound_report(traj: Trajectory) -> BoundReport:
    """Both bounds for a trajectory; raises SandwichViolation if they fail to bracket T."""
    return assemble_report(
        t_actual=traj.T,
        dH=mean_fluctuation(traj),
        s0_half=bargmann_half_distance(traj.states[0], traj.states[-1]),
        l_reference=curve_length(traj.times, reference_section(traj).chi_states),
        hbar=traj.hbar,
    )
