"""Command-line front end.

Exit codes: 0 success (a quantum or classical verdict is data, not an
error), 2 invalid arguments, 3 solver failure, 4 dimension cap exceeded,
5 unreadable or unusable input file.
"""
import argparse
import sys

from . import __version__, circuit, config, criticality, records
from .errors import (
    BracketError,
    RankDeficientError,
    ResourceCapExceeded,
    SolverError,
    TargetUnreachable,
)
from .states import Axis, embed, mixed_family
from .witness import Family, Pairing, assess, build_witness, tensor_power_witness

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_RESOURCE = 4
EXIT_INPUT = 5


class UsageError(Exception):
    pass


def _probability(text):
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not in [0, 1]")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} must be >= 1")
    return value


def _nonneg_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"{text} must be >= 0")
    return value


def _family(text):
    try:
        return Family.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown family {text!r}") from None


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _state_params(args):
    p_x = args.p_x if args.p_x is not None else args.p
    p_z = args.p_z if args.p_z is not None else args.p
    if p_x is None or p_z is None:
        raise UsageError("give --p or both --p-x and --p-z")
    return p_x, p_z


def cmd_witness_check(args):
    p_x, p_z = _state_params(args)
    n = args.n
    if args.family is Family.PLAIN and n != 1:
        raise UsageError("plain family is single-copy; use --n 1 or another family")
    w = build_witness(args.family, n, p_x, p_z, pairing=args.pairing)
    verdict = assess(w, args.tol)
    cfg = {
        "command": "witness-check", "family": args.family.value, "n": n, "p_x": p_x, "p_z": p_z,
        "tol": args.tol, "pairing": args.pairing.value,
    }
    doc = records.envelope("verdict", {"verdict": verdict.as_dict(), "dim": w.dim}, cfg)
    _emit(records.dumps(doc), args.output)
    return EXIT_OK


def cmd_sweep(args):
    if args.n_min > args.n_max:
        raise UsageError("--n-min exceeds --n-max")
    if args.family is Family.PLAIN and args.n_max != 1:
        raise UsageError("plain family only has n = 1")
    cap = config.dim_cap()
    if 2**args.n_max > cap:
        raise ResourceCapExceeded(f"n_max={args.n_max} needs dimension {2**args.n_max} > cap {cap}")
    recs = criticality.sweep(
        args.family, args.n_max, n_min=args.n_min, resolution=args.resolution,
        pairing=args.pairing, workers=args.workers,
    )
    cfg = {
        "command": "sweep", "family": args.family.value, "n_min": args.n_min, "n_max": args.n_max,
        "resolution": args.resolution, "pairing": args.pairing.value,
    }
    if args.format == "csv":
        text = records.sweep_to_csv(recs, cfg)
    else:
        doc = records.envelope("sweep", {"records": [records.sweep_record_dict(r) for r in recs]}, cfg)
        text = records.dumps(doc)
    _emit(text, args.output)
    if args.plot_data:
        _emit(records.plot_table(recs), args.plot_data)
    return EXIT_OK


def cmd_fit(args):
    try:
        recs = records.read_sweep(args.sweep)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: cannot read sweep file: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        fit = criticality.fit_inverse_poly(recs)
    except (ValueError, RankDeficientError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    family = fit.family
    zero_c0 = args.zero_c0 == "yes" or (args.zero_c0 == "auto" and family == Family.CORRELATED.value)
    used = fit.with_c0(0.0) if zero_c0 else fit
    try:
        n_required = criticality.extrapolate_n_required(used, args.target)
        reachable = True
    except TargetUnreachable:
        n_required, reachable = None, False
    cfg = {"command": "fit", "sweep": args.sweep, "target": args.target, "zero_c0": args.zero_c0}
    payload = {
        "fit": fit.as_dict(),
        "extrapolation": {
            "c0_zeroed": zero_c0,
            "coefficients": list(used.coefficients),
            "p_target": args.target,
            "reachable": reachable,
            "n_required": n_required,
        },
    }
    _emit(records.dumps(records.envelope("fit", payload, cfg)), args.output)
    return EXIT_OK


def cmd_circuit_sim(args):
    p_x, p_z = _state_params(args)
    rho_x, rho_z = mixed_family(p_x, Axis.X), mixed_family(p_z, Axis.Z)
    if args.embed_dim:
        if args.n != 1:
            raise UsageError("--embed-dim only applies to single-copy inputs")
        rho_x, rho_z = embed(rho_x, args.embed_dim), embed(rho_z, args.embed_dim)
    dim = rho_x.dim**args.n
    cfg = {
        "command": "circuit-sim", "p_x": p_x, "p_z": p_z, "n": args.n, "L": args.L,
        "shots": args.shots, "seed": args.seed, "spectrum": args.spectrum, "embed_dim": args.embed_dim,
    }
    mv = circuit.moments(rho_x, rho_z, args.L, shots=args.shots, seed=args.seed, copies=args.n)
    moment_rows = []
    for ev in mv.evaluations:
        row = ev.as_dict()
        row.pop("seed")
        moment_rows.append(row)
    payload = {"dim": dim, "j": list(mv.j), "moments": moment_rows}
    if args.spectrum:
        powers = circuit.witness_power_traces(rho_x, rho_z, dim, copies=args.n)
        rec = circuit.reconstruct_spectrum(powers, dim)
        w = tensor_power_witness(rho_x, rho_z, args.n)
        payload["witness_power_traces"] = powers
        payload["spectrum"] = {
            "reconstructed": rec.eigenvalues.tolist(),
            "residual": rec.residual,
            "ill_conditioned": rec.ill_conditioned,
            "dense": w.eigenvalues().tolist(),
        }
    _emit(records.dumps(records.envelope("circuit", payload, cfg)), args.output)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="quantumness", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def state_flags(p):
        p.add_argument("--p", type=_probability, help="mixedness of both states")
        p.add_argument("--p-x", type=_probability, help="mixedness of rho_X (overrides --p)")
        p.add_argument("--p-z", type=_probability, help="mixedness of rho_Z (overrides --p)")

    wc = sub.add_parser("witness-check", help="smallest witness eigenvalue and verdict")
    wc.add_argument("--family", type=_family, default=Family.PLAIN)
    wc.add_argument("--n", type=_positive_int, default=1)
    state_flags(wc)
    wc.add_argument("--tol", type=float, default=config.PSD_TOL)
    wc.add_argument("--pairing", type=Pairing, default=Pairing.GHZ)
    wc.add_argument("--output")
    wc.set_defaults(func=cmd_witness_check)

    sw = sub.add_parser("sweep", help="critical mixedness for n = n_min..n_max")
    sw.add_argument("--family", type=_family, required=True)
    sw.add_argument("--n-min", type=_positive_int, default=1)
    sw.add_argument("--n-max", type=_positive_int, required=True)
    sw.add_argument("--resolution", type=float, default=None,
                    help="bisection resolution (default 1e-6 for n <= 8, 1e-4 above)")
    sw.add_argument("--pairing", type=Pairing, default=Pairing.GHZ)
    sw.add_argument("--workers", type=_positive_int, default=1)
    sw.add_argument("--format", choices=("csv", "json"), default="csv")
    sw.add_argument("--output")
    sw.add_argument("--plot-data", help="also write a two-column (n, p_c) file")
    sw.set_defaults(func=cmd_sweep)

    ft = sub.add_parser("fit", help="fit p_c(n) = c0 + c1/n + c2/n^2 + c3/n^3 and extrapolate")
    ft.add_argument("--sweep", required=True, help="sweep CSV or JSON file")
    ft.add_argument("--target", type=float, default=1e-5, help="target critical mixedness")
    ft.add_argument("--zero-c0", choices=("auto", "yes", "no"), default="auto",
                    help="drop the constant term before extrapolating (auto: correlated family only)")
    ft.add_argument("--output")
    ft.set_defaults(func=cmd_fit)

    cs = sub.add_parser("circuit-sim", help="controlled-SHIFT moments and spectrum reconstruction")
    state_flags(cs)
    cs.add_argument("--n", type=_positive_int, default=1, help="tensor-power copies per register")
    cs.add_argument("--L", type=_positive_int, default=1, help="highest moment j_L")
    cs.add_argument("--shots", type=_nonneg_int, default=0)
    cs.add_argument("--seed", type=_nonneg_int, default=0)
    cs.add_argument("--spectrum", action="store_true", help="reconstruct the witness spectrum from power traces")
    cs.add_argument("--embed-dim", type=_positive_int, default=None,
                    help="zero-pad the qubit states into this dimension")
    cs.add_argument("--output")
    cs.set_defaults(func=cmd_circuit_sim)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except ResourceCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (SolverError, BracketError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except RankDeficientError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
