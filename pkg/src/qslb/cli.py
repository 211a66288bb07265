"""Command-line entry point ``qslb``.

Exit codes: 0 success, 1 a reproduced value is outside its tolerance,
2 configuration, I/O or numerics error.
"""

from __future__ import annotations

import argparse
import io
import os
import sys
import tempfile
from pathlib import Path

from .battery import sweep_fig3
from .bounds import BoundReport, assemble_report, bound_report
from .config import (DEFAULT_N_STEPS, RunConfig, as_matrix, build_initial, build_model, load_config,
                     sweep_settings)
from .core import density_matrix, propagate
from .errors import QslError
from .geometry import bargmann_half_distance, curve_length
from .purification import entangled_reference_section, lift_and_propagate, mixed_fluctuation
from .reproduce import TARGETS, reproduce

SWEEP_HEADER = "T,T_qsl,T_actual,T_rqsl"
REPORT_FIELDS = ("t_actual", "t_qsl", "t_rqsl", "mean_fluctuation", "s0_half", "l_reference", "saturated")


def _g6(x: float) -> str:
    return f"{x:.6g}"


def write_atomic(path: str | Path, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent or ".")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    buf.write(SWEEP_HEADER + "\n")
    for r in rows:
        buf.write(",".join(_g6(v) for v in (r.T, r.t_qsl, r.t_actual, r.t_rqsl)) + "\n")
    return buf.getvalue()


def render_report(report: BoundReport, fmt: str) -> str:
    values = [getattr(report, f) for f in REPORT_FIELDS]
    if fmt == "csv":
        cells = [str(v).lower() if isinstance(v, bool) else _g6(v) for v in values]
        return ",".join(REPORT_FIELDS) + "\n" + ",".join(cells) + "\n"
    lines = []
    for name, v in zip(REPORT_FIELDS, values):
        lines.append(f"{name:<18} {v}" if isinstance(v, bool) else f"{name:<18} {v:.10g}")
    if report.degenerate:
        lines.append("note               stationary state: zero energy fluctuation")
    return "\n".join(lines) + "\n"


def mixed_report(cfg: RunConfig, model, T: float, n_steps: int) -> BoundReport:
    rho = density_matrix(as_matrix(cfg, "rho", cfg.params["rho"]))
    ptraj = lift_and_propagate(rho, model, T, n_steps)
    base = ptraj.base
    return assemble_report(
        t_actual=T,
        dH=mixed_fluctuation(ptraj),
        # H_S (x) I_A has the same fluctuation on the joint state as H_S on rho_S
        s0_half=bargmann_half_distance(base.states[0], base.states[-1]),
        l_reference=curve_length(base.times, entangled_reference_section(ptraj).chi_states),
        hbar=base.hbar,
    )


def cmd_bounds(cfg: RunConfig) -> str:
    model = build_model(cfg)
    T = cfg.require("T")
    if isinstance(T, bool) or not isinstance(T, (int, float)) or T <= 0:
        raise QslError(f"{cfg.where('T')}: T must be a positive number")
    if "rho" in cfg.params:
        if "initial" in cfg.params:
            raise QslError(f"{cfg.where('initial')}: give either 'initial' or 'rho', not both")
        report = mixed_report(cfg, model, float(T), cfg.n_steps)
    else:
        traj = propagate(model, build_initial(cfg, model.dim), float(T), cfg.n_steps)
        report = bound_report(traj)
    return render_report(report, cfg.format)


def cmd_sweep(cfg: RunConfig) -> str:
    rows = sweep_fig3(n_steps=cfg.n_steps, **sweep_settings(cfg))
    return sweep_csv(rows)


def cmd_reproduce(target: str, n_steps: int, out) -> int:
    checks = reproduce(target, n_steps)
    out.write(f"reproduce {target} (n_steps={n_steps})\n")
    out.write(f"{'quantity':<36} {'computed':>14} {'reference':>12} {'|delta|':>10} {'tol':>8}  status\n")
    for c in checks:
        tol = f"{c.tol:g}" + ("r" if c.relative else "")
        out.write(f"{c.name:<36} {c.computed:>14.8f} {c.expected:>12.6f} {c.delta:>10.2e} {tol:>8}  "
                  f"{'ok' if c.ok else 'FAIL'}\n")
    failed = [c.name for c in checks if not c.ok]
    out.write("all within tolerance\n" if not failed else f"outside tolerance: {', '.join(failed)}\n")
    return 0 if not failed else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n-steps", type=int, default=None, help=f"time steps (default {DEFAULT_N_STEPS})")

    parser = argparse.ArgumentParser(prog="qslb", description="Quantum speed limit and reverse speed limit bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reproduce", parents=[common], help="recompute a worked example against its reference values")
    p.add_argument("target", choices=TARGETS)

    p = sub.add_parser("bounds", parents=[common], help="bound report for a configured model")
    p.add_argument("--config", required=True)
    p.add_argument("--format", choices=("table", "csv"))
    p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("sweep", parents=[common], help="N-cell battery sweep of T_QSL and T_RQSL against T")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv",), default="csv")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "reproduce":
            return cmd_reproduce(args.target, args.n_steps or DEFAULT_N_STEPS, out)
        cfg = load_config(args.config, args.command)
        if args.n_steps is not None:
            cfg.n_steps = args.n_steps
        if args.format:
            cfg.format = args.format
        if args.out:
            cfg.output_path = args.out
        text = cmd_bounds(cfg) if args.command == "bounds" else cmd_sweep(cfg)
        if cfg.output_path:
            write_atomic(cfg.output_path, text)
        else:
            out.write(text)
        return 0
    except (QslError, OSError) as exc:
        print(f"qslb: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
