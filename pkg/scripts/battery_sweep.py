"""Write the 100-cell battery sweep (T_QSL, T, T_RQSL against T) as CSV.

    python3 scripts/battery_sweep.py out.csv [--points 100] [--cells 100] [--workers 4]
"""

import argparse

from qslb.battery import sweep_fig3
from qslb.cli import sweep_csv, write_atomic


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    ap.add_argument("--points", type=int, default=100)
    ap.add_argument("--cells", type=int, default=100)
    ap.add_argument("--a-bar", type=float, default=1.0)
    ap.add_argument("--eps-bar", type=float, default=2.0)
    ap.add_argument("--n-steps", type=int, default=4096)
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()
    rows = sweep_fig3(a_bar=args.a_bar, eps_bar=args.eps_bar, N=args.cells, points=args.points,
                      n_steps=args.n_steps, max_workers=args.workers)
    write_atomic(args.out, sweep_csv(rows))
    last = rows[-1]
    print(f"{len(rows)} rows -> {args.out}; last row T={last.T:.6g} "
          f"N*T_QSL={last.t_qsl:.6g} N*T={last.t_actual:.6g} N*T_RQSL={last.t_rqsl:.6g}")


if __name__ == "__main__":
    main()
