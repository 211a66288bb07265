"""Quantum speed limits and reverse quantum speed limits from state-space geometry."""

from .core import (Constant, JaynesCummingsBlock, Quench, RwaDrive, Trajectory, basis_state,
                   density_matrix, energy_fluctuation, evaluate_hamiltonian, expectation,
                   partial_trace_B, propagate, pure_state)
from .geometry import (GeometryReport, bargmann_half_distance, curve_length, dynamical_phase,
                       geometric_phase, geometry_report, horizontal_length_via_fluctuation,
                       horizontal_lift, pancharatnam_phase, reference_length_via_identity,
                       reference_section)
from .bounds import BoundReport, bound_report, mean_fluctuation, qsl_time, rqsl_time
from .purification import (PurifiedTrajectory, entangled_reference_section, lift_and_propagate,
                           mixed_fluctuation, purify, rqsl_time_mixed)

__version__ = "0.1.0"
