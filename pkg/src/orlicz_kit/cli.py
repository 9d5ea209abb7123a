"""Command-line front end: ``orlicz-kit <subcommand> [options]``.

Exit codes: 0 success (mathematical non-membership is reported in-band),
1 when ``suite`` has a failing check, 2 for usage errors, 3 for malformed
input or configuration.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .io import InputError, dumps, read_density_csv, read_matrix, read_steps_csv

EXIT_MALFORMED = 3


def _grid(cfg: RunConfig) -> np.ndarray:
    lo, hi, n = cfg.grid
    return np.geomspace(lo, hi, int(n))


def _emit(text: str, output) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _threads(cfg: RunConfig) -> int:
    cap = os.environ.get("ORLICZ_KIT_THREADS")
    n = int(cfg.threads)
    if cap:
        n = min(n, max(1, int(cap)))
    return n


# ------------------------------------------------------------ subcommands

def cmd_young(args, cfg: RunConfig) -> int:
    from .young import (catalog, check_delta2, check_dominance, check_equivalence,
                        check_nabla2, complementary)
    psi = catalog(args.psi)
    target = complementary(psi, known=not args.numeric) if args.complementary else psi
    out = {"psi": target.name}
    if args.s:
        s = np.asarray(args.s, dtype=float)
        if np.any(s < 0):
            raise InputError("evaluation points must be nonnegative")
        out["values"] = [[float(a), float(b)] for a, b in zip(s, target.values(s))]
    grid = _grid(cfg)
    if args.probe == "delta2":
        out["probe"] = check_delta2(target, grid, globally=args.globally).to_dict()
    elif args.probe == "nabla2":
        out["probe"] = check_nabla2(target, grid, globally=args.globally).to_dict()
    elif args.probe in ("dominance", "equivalence"):
        if not args.other:
            raise InputError(f"--probe {args.probe} needs --other")
        other = catalog(args.other)
        if args.probe == "dominance":
            rep = check_dominance(target, other, args.b, grid)
        else:
            rep = check_equivalence(target, other, grid)
        out["probe"] = rep.to_dict()
    _emit(dumps(out), args.output)
    return 0


def cmd_norm(args, cfg: RunConfig) -> int:
    from .spaces import (OutsideSpaceError, amemiya_norm, embedding_report, luxemburg_norm)
    from .young import catalog
    data = read_steps_csv(args.steps) if args.steps else read_density_csv(args.input)
    psi = catalog(args.psi)
    out = {"psi": psi.name}
    kinds = ("luxemburg", "amemiya") if args.kind == "both" else (args.kind,)
    for kind in kinds:
        try:
            if kind == "luxemburg":
                rep = luxemburg_norm(data, psi, rtol=cfg.tolerance, cap=cfg.bracket_cap)
            else:
                rep = amemiya_norm(data, psi, cap=cfg.bracket_cap)
            out[kind] = dict(rep.to_dict(), outside_space=False)
        except OutsideSpaceError as exc:
            out[kind] = {"outside_space": True, "message": str(exc)}
    if args.embedding:
        if args.steps:
            raise InputError("--embedding needs a density (--input)")
        try:
            out["embedding"] = embedding_report(data, cfg.p_values).to_dict()
        except ValueError as exc:
            raise InputError(str(exc)) from None
    _emit(dumps(out), args.output)
    return 0


def cmd_entropy(args, cfg: RunConfig) -> int:
    from .entropy import continuous_entropy, membership_check
    f = read_density_csv(args.input)
    if np.any(f.values < 0):
        raise InputError("entropy needs a nonnegative density")
    eps = args.eps if args.eps else cfg.eps_ladder
    out = {"entropy": continuous_entropy(f, eps).to_dict(),
           "membership": membership_check(f).to_dict()}
    _emit(dumps(out), args.output)
    return 0


def cmd_quantum(args, cfg: RunConfig) -> int:
    from .quantum import (HermitianOperator, NotDensityMatrixError, llogl_membership,
                          regularized_entropy, sequence_orlicz_norm, singular_values,
                          von_neumann_entropy)
    from .spaces import OutsideSpaceError
    from .young import catalog
    interval = tuple(args.interval)
    out = {}
    if args.steps:
        s = read_steps_csv(args.steps)
        out["llogl_membership"] = llogl_membership(s, interval).to_dict()
        a = s.finite_part()
        whole = np.all(a.lengths == np.round(a.lengths))
        seq = np.repeat(a.values, a.lengths.astype(int)) if whole else None
    else:
        m = read_matrix(args.matrix)
        a_vals = singular_values(m)
        out["singular_values"] = a_vals.tolist()
        seq = a_vals
        try:
            op = HermitianOperator(m)
        except ValueError:
            op = None
        if op is not None:
            try:
                out["von_neumann_entropy"] = von_neumann_entropy(op)
                out["regularized_entropy"] = [[e, regularized_entropy(op, e)] for e in cfg.eps_ladder]
            except NotDensityMatrixError as exc:
                out["density_matrix"] = {"valid": False, "message": str(exc)}
            if np.all(op.eigenvalues >= -1e-12):
                out["llogl_membership"] = llogl_membership(op, interval).to_dict()
    if args.psi and seq is not None:
        try:
            out["sequence_norm"] = sequence_orlicz_norm(seq, catalog(args.psi)).to_dict()
        except OutsideSpaceError as exc:
            out["sequence_norm"] = {"outside_space": True, "message": str(exc)}
    _emit(dumps(out), args.output)
    return 0


def cmd_boltzmann(args, cfg: RunConfig) -> int:
    from .boltzmann import DiscreteKineticState, evolve
    model = args.model or cfg.model
    if args.f:
        dens = tuple(args.f)
    elif model == "carleman":
        dens = (args.u0, args.v0)
    else:
        dens = (1.5, 0.5, 1.0, 1.0)
    try:
        state = DiscreteKineticState(model, dens)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    tr = evolve(state, args.T if args.T is not None else cfg.T,
                args.dt if args.dt is not None else cfg.dt)
    _emit(tr.to_csv(every=args.every), args.output)
    return 0


def _drop_timings(obj):
    if isinstance(obj, dict):
        return {k: _drop_timings(v) for k, v in obj.items()
                if k not in ("seconds", "runtime_s")}
    if isinstance(obj, list):
        return [_drop_timings(v) for v in obj]
    return obj


def cmd_suite(args, cfg: RunConfig) -> int:
    from .acceptance import run_all
    results = run_all(threads=_threads(cfg), only=set(args.only) if args.only else None)
    for r in results:
        print(r.line(), file=sys.stderr if args.output in (None, "-") else sys.stdout)
    report = {"passed": all(r.passed for r in results),
              "checks": [r.to_dict() for r in results]}
    if not args.timings:
        report = _drop_timings(report)
    _emit(dumps(report), args.output)
    return 0 if report["passed"] else 1


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orlicz-kit", description="Orlicz-space numerics.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML or JSON run configuration")
    common.add_argument("--output", "-o", help="output file (default: stdout)")
    common.add_argument("--tolerance", type=float, help="relative norm tolerance")
    common.add_argument("--bracket-cap", type=float, dest="bracket_cap")
    common.add_argument("--p-values", type=float, nargs="+", dest="p_values")
    common.add_argument("--eps-ladder", type=float, nargs="+", dest="eps_ladder")
    common.add_argument("--grid", type=float, nargs=3, metavar=("LO", "HI", "N"))
    common.add_argument("--threads", type=int)
    sub = p.add_subparsers(dest="command", metavar="{young,norm,entropy,quantum,boltzmann,suite}")
    sub.required = True

    y = sub.add_parser("young", parents=[common], help="evaluate and probe Young functions")
    y.add_argument("--psi", required=True)
    y.add_argument("--s", type=float, nargs="+", help="points at which to evaluate")
    y.add_argument("--complementary", action="store_true", help="work with the complementary function")
    y.add_argument("--numeric", action="store_true", help="force the numeric complementary")
    y.add_argument("--probe", choices=("delta2", "nabla2", "dominance", "equivalence"))
    y.add_argument("--other", help="second function for dominance/equivalence")
    y.add_argument("--b", type=float, help="dominance scale (searched when omitted)")
    y.add_argument("--global", dest="globally", action="store_true")
    y.set_defaults(func=cmd_young)

    n = sub.add_parser("norm", parents=[common], help="Luxemburg/Amemiya norms")
    src = n.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="density CSV (label, weight, value)")
    src.add_argument("--steps", help="step CSV (value, length)")
    n.add_argument("--psi", required=True)
    n.add_argument("--kind", choices=("luxemburg", "amemiya", "both"), default="luxemburg")
    n.add_argument("--embedding", action="store_true", help="add the embedding-chain report")
    n.set_defaults(func=cmd_norm)

    e = sub.add_parser("entropy", parents=[common], help="entropy functionals of a density")
    e.add_argument("--input", required=True)
    e.add_argument("--eps", type=float, nargs="+")
    e.set_defaults(func=cmd_entropy)

    q = sub.add_parser("quantum", parents=[common], help="matrix or step-profile diagnostics")
    qs = q.add_mutually_exclusive_group(required=True)
    qs.add_argument("--matrix", help="dense CSV or JSON {re, im}")
    qs.add_argument("--steps", help="step CSV (value, length)")
    q.add_argument("--psi", help="Young function for the singular-sequence norm")
    q.add_argument("--interval", type=float, nargs=2, default=(0.25, 0.75))
    q.set_defaults(func=cmd_quantum)

    b = sub.add_parser("boltzmann", parents=[common], help="kinetic trajectory CSV")
    b.add_argument("--model", choices=("carleman", "broadwell"))
    b.add_argument("--u0", type=float, default=1.5)
    b.add_argument("--v0", type=float, default=0.5)
    b.add_argument("--f", type=float, nargs="+", help="all initial densities")
    b.add_argument("--T", type=float)
    b.add_argument("--dt", type=float)
    b.add_argument("--every", type=int, default=1, help="write every k-th sample")
    b.set_defaults(func=cmd_boltzmann)

    s = sub.add_parser("suite", parents=[common], help="run the acceptance battery")
    s.add_argument("--only", type=int, nargs="+", help="check numbers to run")
    s.add_argument("--timings", action="store_true", help="include run times in the report")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        cfg = cfg.updated(tolerance=args.tolerance, bracket_cap=args.bracket_cap,
                          p_values=args.p_values, eps_ladder=args.eps_ladder,
                          grid=args.grid, threads=args.threads)
        return args.func(args, cfg)
    except (InputError, ConfigError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"orlicz-kit: error: {msg}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
