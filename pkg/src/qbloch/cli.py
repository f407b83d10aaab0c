"""Command-line surface.

Machine-first: every subcommand writes a JSON report to stdout and a
short human summary to stderr.  Exit codes: 0 on success, 1 when a
verification suite fails, 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .channels import (
    affine_rep,
    choi_min_eig,
    kraus_to_choi,
    tp_defect,
)
from .cloners import optimal_qubit_12, shrink_factor, werner_cloner
from .gbr import from_bloch, gellmann_basis, to_bloch
from .linalg import DEFAULT_SEED
from .merit import min_f1
from .serialize import (
    bloch_from_obj,
    bloch_to_obj,
    channel_from_obj,
    channel_to_obj,
    cloner_from_obj,
    cloner_to_obj,
    dump_json,
    jsonable,
    load_json_file,
    matrix_from_obj,
    matrix_to_obj,
)
from .symmetry import twirl_su
from .verify import SUITE_NAMES, run_suite


class InputError(Exception):
    """Malformed or inconsistent input; maps to exit code 2."""


def _emit(payload, summary: str) -> None:
    print(dump_json(payload))
    print(summary, file=sys.stderr)


def _load(path: str) -> dict:
    try:
        return load_json_file(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from exc


def _cmd_basis(args) -> int:
    mats = gellmann_basis(args.d)
    payload = {"d": args.d, "matrices": [matrix_to_obj(m) for m in mats]}
    _emit(payload, f"emitted {len(mats)} basis matrices for d={args.d}")
    return 0


def _cmd_bloch(args) -> int:
    obj = _load(args.infile)
    try:
        if args.direction == "to":
            rho = matrix_from_obj(obj)
            lam = to_bloch(rho)
            payload = bloch_to_obj(lam, rho.shape[0])
            summary = f"Bloch vector of a {rho.shape[0]}-level state"
        else:
            d, lam = bloch_from_obj(obj)
            payload = matrix_to_obj(from_bloch(lam, d))
            summary = f"operator for a d={d} Bloch vector"
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc
    _emit(payload, summary)
    return 0


def _cmd_channel_analyze(args) -> int:
    try:
        chan = channel_from_obj(_load(args.infile))
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc
    payload = {
        "d_in": chan.d_in,
        "d_out": chan.d_out,
        "kraus_count": len(chan.kraus),
        "tp_defect": tp_defect(chan),
        "choi_min_eigenvalue": choi_min_eig(chan),
    }
    if chan.d_in == chan.d_out:
        aff = affine_rep(chan)
        payload["affine"] = {
            "matrix": [[float(x) for x in row] for row in aff.matrix],
            "offset": [float(x) for x in aff.offset],
        }
        payload["merit"] = jsonable(
            min_f1(chan, n_samples=args.samples, seed=args.seed)
        )
    _emit(payload, f"analyzed channel {chan.d_in} -> {chan.d_out}")
    return 0


def _cmd_twirl(args) -> int:
    try:
        chan = channel_from_obj(_load(args.infile))
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc
    if args.d is not None and chan.d_in != args.d:
        raise InputError(
            f"channel dimension {chan.d_in} does not match requested --d {args.d}"
        )
    report = twirl_su(chan, n_samples=args.samples, seed=args.seed)
    payload = jsonable(report)
    _emit(
        payload,
        f"twirl: xi={report.xi_fit:.6f} offdiag={report.offdiag_norm:.3e} "
        f"c={report.c_norm:.3e} over {report.n_samples} samples",
    )
    return 0


def _cmd_cloner_werner(args) -> int:
    cloner = werner_cloner(args.d, args.n, args.m)
    payload = cloner_to_obj(cloner)
    if args.emit_choi:
        choi = kraus_to_choi(cloner.channel)
        with open(args.emit_choi, "w", encoding="utf-8") as fh:
            fh.write(dump_json(matrix_to_obj(choi.matrix)))
    _emit(payload, f"reference cloner d={args.d} {args.n} -> {args.m}")
    return 0


def _cmd_cloner_shrink(args) -> int:
    try:
        cloner = cloner_from_obj(_load(args.infile))
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc
    res = shrink_factor(cloner, n_samples=args.samples, seed=args.seed)
    _emit(
        jsonable(res),
        f"shrink xi={res.xi:.9f} (formula {res.factor_formula_xi:.9f}, "
        f"certified={res.certified})",
    )
    return 0


def _cmd_cloner_optimize(args) -> int:
    opt = optimal_qubit_12()
    lam = np.array([0.0, 0.0, 1.0])
    payload = {
        "t": opt.t,
        "xi": opt.xi,
        "spectrum_pure": list(opt.spectrum()),
        "output_state_z": matrix_to_obj(opt.output_state(lam)),
        "cloner": cloner_to_obj(opt.cloner),
    }
    _emit(payload, f"qubit 1->2 optimum: t={opt.t:.9f} xi={opt.xi:.9f}")
    return 0


def _cmd_verify(args) -> int:
    report = run_suite(args.suite, seed=args.seed)
    print(dump_json(report))
    for c in report["checks"]:
        print(
            f"[{c['status'].upper():4s}] {c['name']}: measured={c['measured']:.6e} "
            f"threshold={c['threshold']:.6e} ({c['runtime_ms']:.1f} ms)",
            file=sys.stderr,
        )
    print(f"suite {report['suite']}: {report['status']}", file=sys.stderr)
    return 0 if report["status"] == "pass" else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qbloch",
        description=(
            "Generalized Bloch representation toolkit: basis generation, "
            "channel analysis, Haar twirling, cloning machines, and "
            "verification suites."
        ),
    )
    parser.add_argument("--version", action="version", version=f"qbloch {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="emit the su(d) basis matrices")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=_cmd_basis)

    p = sub.add_parser("bloch", help="convert between operators and Bloch vectors")
    p.add_argument("direction", choices=("to", "from"))
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=_cmd_bloch)

    p = sub.add_parser("channel", help="channel tools")
    chan_sub = p.add_subparsers(dest="channel_command", required=True)
    pa = chan_sub.add_parser(
        "analyze", help="CPTP certificates, affine representation, merit"
    )
    pa.add_argument("--in", dest="infile", required=True)
    pa.add_argument("--samples", type=int, default=2000)
    pa.add_argument("--seed", type=int, default=DEFAULT_SEED)
    pa.set_defaults(func=_cmd_channel_analyze)

    p = sub.add_parser("twirl", help="Haar-average a channel over SU(d)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--d", type=int, default=None)
    p.set_defaults(func=_cmd_twirl)

    p = sub.add_parser("cloner", help="cloning machines")
    cl_sub = p.add_subparsers(dest="cloner_command", required=True)
    pw = cl_sub.add_parser("werner", help="emit the reference n -> m cloner")
    pw.add_argument("--d", type=int, required=True)
    pw.add_argument("--n", type=int, required=True)
    pw.add_argument("--m", type=int, required=True)
    pw.add_argument("--emit-choi", dest="emit_choi", default=None)
    pw.set_defaults(func=_cmd_cloner_werner)
    ps = cl_sub.add_parser("shrink", help="fit the Bloch contraction factor")
    ps.add_argument("--in", dest="infile", required=True)
    ps.add_argument("--samples", type=int, default=100)
    ps.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ps.set_defaults(func=_cmd_cloner_shrink)
    po = cl_sub.add_parser(
        "optimize-qubit-12", help="closed-form qubit 1 -> 2 optimum"
    )
    po.set_defaults(func=_cmd_cloner_optimize)

    p = sub.add_parser("verify", help="run a tolerance-checked suite")
    p.add_argument(
        "--suite", required=True, choices=SUITE_NAMES + ("all",)
    )
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
