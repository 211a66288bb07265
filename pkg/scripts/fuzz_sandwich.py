"""Random Constant models: check T_QSL <= T <= T_RQSL and the length identity.

    python3 scripts/fuzz_sandwich.py [--draws 1000] [--dim 2] [--seed 0]
"""

import argparse

import numpy as np

from qslb.bounds import bound_report
from qslb.core import Constant, propagate
from qslb.errors import OrthogonalityError, SandwichViolation
from qslb.geometry import curve_length, reference_length_via_identity, reference_section


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--draws", type=int, default=1000)
    ap.add_argument("--dim", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n-steps", type=int, default=4096)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    d = args.dim
    skipped = violations = 0
    worst_identity, worst_overlap = 0.0, 1.0
    min_gap = np.inf
    for _ in range(args.draws):
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        psi = rng.normal(size=d) + 1j * rng.normal(size=d)
        traj = propagate(Constant((a + a.conj().T) / 2), psi / np.linalg.norm(psi),
                         float(rng.uniform(1e-3, 3.0)), args.n_steps)
        try:
            rep = bound_report(traj)
        except OrthogonalityError:
            skipped += 1
            continue
        except SandwichViolation:
            violations += 1
            continue
        curve = reference_section(traj)
        direct = curve_length(traj.times, curve.chi_states)
        err = abs(direct - reference_length_via_identity(traj)) / direct
        if err > worst_identity:
            # near-orthogonal passes make the connection term spiky and dominate this error
            worst_identity, worst_overlap = err, float(curve.overlap_moduli.min())
        min_gap = min(min_gap, rep.t_rqsl - rep.t_actual, rep.t_actual - rep.t_qsl)
    print(f"draws={args.draws} dim={d} skipped={skipped} violations={violations} "
          f"min ordering gap={min_gap:.3g} worst identity rel err={worst_identity:.3g} "
          f"(min |<psi0|psi_t>| on that draw {worst_overlap:.3g})")


if __name__ == "__main__":
    main()
