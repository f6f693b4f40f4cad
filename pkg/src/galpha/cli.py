"""Command-line surface.

Every subcommand writes its artifacts into the output directory (default
./out, created if absent) and prints one machine-greppable summary line
of key=value pairs.  Output files are named by subcommand plus a short
hash of the parsed flags, so re-running with identical flags reproduces
byte-identical files and different flags never silently overwrite.

Exit codes: 0 success, 2 flag errors, 1 numerical errors.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import convergence, spectral
from .amplification import amplification_matrix, assemble_step_matrices
from .errors import SingularStepError
from .params import DissipationSpec, derive
from .stepper import OscillatorMode, StepConfig, Variant, integrate


def _parse_rho(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--rho expects comma-separated floats, got {text!r}")


def _parse_steps(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--steps expects comma-separated integers, got {text!r}")


def _parse_vary(text: str) -> spectral.ParameterAxis:
    parts = text.split(":")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"--vary expects NAME:lo:hi:n, got {text!r}")
    try:
        return spectral.ParameterAxis(parts[0], float(parts[1]), float(parts[2]), int(parts[3]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--vary expects NAME:lo:hi:n, got {text!r}")


def _parse_fix(items) -> dict:
    fixed = {}
    for item in items or []:
        for piece in item.split(","):
            if not piece:
                continue
            if "=" not in piece:
                raise argparse.ArgumentTypeError(f"--fix expects NAME=VALUE, got {piece!r}")
            name, val = piece.split("=", 1)
            try:
                fixed[name] = float(val)
            except ValueError:
                raise argparse.ArgumentTypeError(f"--fix value for {name!r} is not a number")
    return fixed


def _flag_hash(args: argparse.Namespace) -> str:
    payload = {k: repr(v) for k, v in sorted(vars(args).items()) if k != "func"}
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:8]


def _outfile(args, suffix: str) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out / f"{args.subcommand}_{_flag_hash(args)}{suffix}"


def _scheme(args):
    spec = DissipationSpec(args.k, tuple(args.rho))
    return derive(spec)


def _cmd_params(args) -> str:
    p = _scheme(args)
    path = _outfile(args, ".json")
    path.write_text(json.dumps(p.to_json_dict(), indent=2) + "\n")
    return f"subcommand=params k={args.k} file={path}"


def _cmd_simulate(args) -> str:
    p = _scheme(args)
    mode = OscillatorMode(lam=args.lam)
    cfg = StepConfig(tau=args.tau, variant=Variant(args.variant))
    traj = integrate(p, mode, cfg, args.u0, args.v0, args.steps)
    path = _outfile(args, ".csv")
    with open(path, "w", newline="") as fh:
        traj.write_csv(fh)
    final_u = traj.states[-1].d[0]
    return (
        f"subcommand=simulate k={args.k} steps={args.steps} "
        f"final_u={final_u!r} file={path}"
    )


def _cmd_converge(args) -> str:
    p = _scheme(args)
    mode = OscillatorMode(lam=args.lam)
    study = convergence.run_convergence(
        p, mode, args.u0, args.v0, args.T, args.steps, variant=Variant(args.variant)
    )
    csv_path = _outfile(args, ".csv")
    with open(csv_path, "w", newline="") as fh:
        study.write_csv(fh)
    json_path = _outfile(args, ".json")
    json_path.write_text(json.dumps(study.summary_dict(), indent=2) + "\n")
    return (
        f"subcommand=converge k={args.k} "
        f"fitted_order_u={study.fitted_order_u!r} "
        f"fitted_order_v={study.fitted_order_v!r} "
        f"discarded={study.discarded} file={csv_path} summary={json_path}"
    )


def _write_matrix_csv(path: Path, M: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"c{j}" for j in range(M.shape[1])])
        for row in M:
            w.writerow([repr(float(x)) for x in row])


def _cmd_spectrum(args) -> str:
    p = _scheme(args)
    samples = spectral.sweep_spectrum(
        p, args.sigma_min, args.sigma_max, args.points, log_spacing=True
    )
    path = _outfile(args, ".csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["sigma", "block", "idx", "re", "im", "abs"])
        for s in samples:
            for block, triple in enumerate(s.eigs.blocks()):
                for idx, z in enumerate(triple):
                    w.writerow(
                        [repr(s.sigma), block, idx, repr(z.real), repr(z.imag), repr(abs(z))]
                    )
    extra = ""
    if args.dump_matrices_sigma is not None:
        sm = assemble_step_matrices(p, args.dump_matrices_sigma)
        G = amplification_matrix(p, args.dump_matrices_sigma).G
        for name, M in (("A", sm.A), ("B", sm.B), ("G", G)):
            mpath = _outfile(args, f"_{name}.csv")
            _write_matrix_csv(mpath, M)
        extra = f" matrices={_outfile(args, '_A.csv').parent}"
    max_r = max(s.radius for s in samples)
    return (
        f"subcommand=spectrum k={args.k} points={args.points} "
        f"max_radius={max_r!r} file={path}{extra}"
    )


def _cmd_stability_map(args) -> str:
    fixed = _parse_fix(args.fix)
    if len(args.vary) != 2:
        raise FlagError("--vary must be given exactly twice")
    sweep = spectral.SweepConfig(n_points=args.sigma_points)
    smap = spectral.stability_map(args.k, fixed, args.vary[0], args.vary[1], sweep)
    path = _outfile(args, ".csv")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x_name", "x", "y_name", "y", "max_radius", "stable"])
        for pt in smap.points:
            w.writerow(
                [
                    smap.x_axis.name,
                    repr(pt.x),
                    smap.y_axis.name,
                    repr(pt.y),
                    repr(pt.max_radius),
                    int(pt.stable),
                ]
            )
    n_stable = sum(pt.stable for pt in smap.points)
    return (
        f"subcommand=stability-map k={args.k} points={len(smap.points)} "
        f"stable={n_stable} file={path}"
    )


def _cmd_limits(args) -> str:
    p = _scheme(args)
    data = {
        "k": args.k,
        "rho": list(args.rho),
        "sigma_zero": spectral.limit_eigs_sigma_zero(p),
        "sigma_inf": spectral.limit_eigs_sigma_inf(p),
    }
    path = _outfile(args, ".json")
    path.write_text(json.dumps(data, indent=2) + "\n")
    return f"subcommand=limits k={args.k} file={path}"


class FlagError(ValueError):
    """Flag-level validation failure after argparse (exit code 2)."""


def _validate_scheme_flags(args) -> None:
    if args.k < 1:
        raise FlagError(f"--k must be >= 1, got {args.k}")
    if len(args.rho) != args.k:
        raise FlagError(f"--rho needs exactly {args.k} values, got {len(args.rho)}")
    for i, r in enumerate(args.rho):
        if not 0.0 <= r <= 1.0:
            raise FlagError(f"--rho entry {i + 1} = {r} outside [0, 1]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="galpha",
        description="2k-order generalized-alpha integrators and spectral analysis",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def scheme_flags(sp):
        sp.add_argument("--k", type=int, required=True, help="half-order (accuracy 2k)")
        sp.add_argument("--rho", type=_parse_rho, required=True,
                        help="comma-separated dissipation controls in [0,1]")

    def out_flag(sp):
        sp.add_argument("--out", default="out", help="output directory (default ./out)")

    sp = sub.add_parser("params", help="derive scheme coefficients to JSON")
    scheme_flags(sp); out_flag(sp)
    sp.set_defaults(func=_cmd_params)

    sp = sub.add_parser("simulate", help="integrate one oscillator to CSV")
    scheme_flags(sp)
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--u0", type=float, required=True)
    sp.add_argument("--v0", type=float, required=True)
    sp.add_argument("--tau", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--variant", choices=["full", "printed"], default="full")
    out_flag(sp)
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("converge", help="convergence study to CSV + JSON summary")
    scheme_flags(sp)
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--u0", type=float, default=1.0)
    sp.add_argument("--v0", type=float, default=0.0)
    sp.add_argument("--T", type=float, required=True)
    sp.add_argument("--steps", type=_parse_steps, required=True,
                    help="comma-separated ascending step counts")
    sp.add_argument("--variant", choices=["full", "printed"], default="full")
    out_flag(sp)
    sp.set_defaults(func=_cmd_converge)

    sp = sub.add_parser("spectrum", help="eigenvalue sweep over sigma to CSV")
    scheme_flags(sp)
    sp.add_argument("--sigma-min", type=float, required=True)
    sp.add_argument("--sigma-max", type=float, required=True)
    sp.add_argument("--points", type=int, required=True)
    sp.add_argument("--dump-matrices-sigma", type=float, default=None,
                    help="debug: also dump A, B, G at this sigma as CSV")
    out_flag(sp)
    sp.set_defaults(func=_cmd_spectrum)

    sp = sub.add_parser("stability-map", help="classify a 2-D parameter grid")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--fix", action="append", default=[],
                    help="NAME=VALUE[,NAME=VALUE...] fixed parameters")
    sp.add_argument("--vary", action="append", type=_parse_vary, default=[],
                    help="NAME:lo:hi:n varied axis (give twice)")
    sp.add_argument("--sigma-points", type=int, default=60)
    out_flag(sp)
    sp.set_defaults(func=_cmd_stability_map)

    sp = sub.add_parser("limits", help="sigma->0 and sigma->inf eigenvalues to JSON")
    scheme_flags(sp); out_flag(sp)
    sp.set_defaults(func=_cmd_limits)
    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if hasattr(args, "rho"):
            _validate_scheme_flags(args)
        if hasattr(args, "tau") and args.tau <= 0.0:
            raise FlagError(f"--tau must be positive, got {args.tau}")
        if hasattr(args, "steps") and isinstance(args.steps, int) and args.steps < 1:
            raise FlagError(f"--steps must be >= 1, got {args.steps}")
    except FlagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        summary = args.func(args)
    except FlagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SingularStepError, ArithmeticError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(summary)
    return 0


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
