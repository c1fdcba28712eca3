"""Command-line front end.

    grasspenta gen -n 1 -m 3 -N 5 --seed 42 -o poly.json
    grasspenta invariants -i poly.json -o chain.json
    grasspenta normalize -i poly.json -o normal.json      (also writes normal.gauge.json)
    grasspenta map -i poly.json --iters 3 -o out/
    grasspenta spectral -i poly.json --mus 0.5,2,1j
    grasspenta scaling-check -i poly.json --mus 0.5,2
    grasspenta verify -n 2 -m 3 -N 5 --iters 3
    grasspenta oracle-compare -n 1 -m 3 -N 5 --seed 1

Exit codes: 0 success, 1 domain error or failed check (error JSON on
stderr), 2 usage error.
"""

import argparse
import json
import os
import sys
from contextlib import contextmanager
from math import gcd
from pathlib import Path

import numpy as np

from . import io, linalg
from .core import COMPLEX, FIELDS, extract_invariants, random_chain, random_regular_lift, reconstruct_lift
from .errors import GrassPentaError
from .lax import anchor_check, degree_check_unnormalized, lambda_degree_check, scaling_commutation_check
from .lax import spectral_curve, spectral_samples
from .normalize import normalize_lift
from .oracle import cramer_map_unnormalized
from .pentamap import map_algebraic_unnormalized, map_moduli
from .verify import UNIT_MUS, classical_reduction_dev, run_suite


def _parse_mus(text):
    try:
        mus = [complex(t.strip().replace(" ", "")) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse mu list {text!r}")
    return [mu.real if mu.imag == 0 else mu for mu in mus]


def build_parser():
    parser = argparse.ArgumentParser(prog="grasspenta", description="Grassmannian pentagram maps and their invariants.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, dims=False, inp=False):
        if dims:
            p.add_argument("-n", type=int, default=1, help="subspace dimension")
            p.add_argument("-m", type=int, default=3, help="ambient dimension is m*n")
            p.add_argument("-N", type=int, default=5, help="polygon period")
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--field", choices=FIELDS, default=COMPLEX)
        if inp:
            p.add_argument("-i", "--input", help="lift or chain JSON file")
        p.add_argument("-o", "--output", help="output path (stdout when omitted)")
        p.add_argument("--tol", type=float, help="numerical tolerance (default 1e-9 or $GRASSPENTA_TOL)")
        return p

    common(sub.add_parser("gen", help="random regular twisted lift"), dims=True)
    common(sub.add_parser("invariants", help="invariant chain of a lift"), inp=True)
    common(sub.add_parser("normalize", help="normalized chain and gauge"), inp=True)
    p = common(sub.add_parser("map", help="iterate the map on moduli"), inp=True)
    p.add_argument("--iters", type=int, default=1)
    p.add_argument("--mus", type=_parse_mus, help="comma-separated spectral parameters for the drift CSV")
    p = common(sub.add_parser("spectral", help="spectral samples and interpolated curve"), inp=True)
    p.add_argument("--mus", type=_parse_mus)
    p.add_argument("--no-curve", action="store_true", help="skip the curve interpolation")
    p = common(sub.add_parser("scaling-check", help="degree, lambda, commutation and anchor checks"), inp=True)
    p.add_argument("--mus", type=_parse_mus, default=[0.5, 2.0])
    p = common(sub.add_parser("verify", help="property suite on random instances"), dims=True)
    p.add_argument("--iters", type=int, default=3, help="number of random cases")
    common(sub.add_parser("oracle-compare", help="float path against exact Cramer path"), dims=True, inp=True)
    return parser


def _validate(parser, args):
    if hasattr(args, "m") and getattr(args, "input", None) is None:
        if args.m < 3:
            parser.error(f"m must be at least 3 (got {args.m})")
        if args.n < 1 or args.N < 1:
            parser.error("n and N must be positive")
        if gcd(args.N, args.m) != 1:
            parser.error(f"gcd(N, m) = {gcd(args.N, args.m)} must be 1 (N={args.N}, m={args.m})")
    if getattr(args, "iters", 1) < 0:
        parser.error("--iters must be non-negative")
    if args.command in ("invariants", "normalize", "map", "spectral", "scaling-check") and not args.input:
        parser.error(f"{args.command} needs -i/--input")
    if any(mu == 0 for mu in getattr(args, "mus", None) or []):
        parser.error("spectral parameters must be nonzero")


@contextmanager
def _tolerance(tol):
    old = os.environ.get("GRASSPENTA_TOL")
    if tol is not None:
        os.environ["GRASSPENTA_TOL"] = repr(tol)
    try:
        yield
    finally:
        if tol is not None:
            if old is None:
                os.environ.pop("GRASSPENTA_TOL", None)
            else:
                os.environ["GRASSPENTA_TOL"] = old


def _emit(obj, path):
    text = io.dumps(obj) + "\n"
    if path:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _load_chain(path):
    kind, obj = io.load(path)
    return extract_invariants(obj) if kind == "lift" else obj


def _load_lift(path):
    kind, obj = io.load(path)
    if kind == "lift":
        return obj
    return reconstruct_lift(obj, linalg.eye(obj.m * obj.n, obj.exact))


def cmd_gen(args):
    lift = random_regular_lift(args.n, args.m, args.N, seed=args.seed, field=args.field)
    _emit(io.lift_to_dict(lift), args.output)


def cmd_invariants(args):
    _emit(io.chain_to_dict(_load_chain(args.input)), args.output)


def cmd_normalize(args):
    _, chain, gauge = normalize_lift(_load_lift(args.input))
    if args.output:
        _emit(io.chain_to_dict(chain), args.output)
        _emit(gauge.to_dict(), _gauge_path(args.output))
    else:
        _emit({"chain": io.chain_to_dict(chain), "gauge": gauge.to_dict()}, None)


def _gauge_path(path):
    p = Path(path)
    return p.with_name(p.stem + ".gauge.json")


def cmd_map(args):
    chain = _load_chain(args.input)
    mus = args.mus or list(UNIT_MUS)
    rows = [(0, spectral_samples(chain, mus))]
    chains = []
    for it in range(1, args.iters + 1):
        chain, _ = map_moduli(chain)
        chains.append(chain)
        rows.append((it, spectral_samples(chain, mus)))
    if not args.output:
        _emit(io.chain_to_dict(chains[-1]) if chains else io.chain_to_dict(chain), None)
        return
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    for it, c in enumerate(chains, start=1):
        _emit(io.chain_to_dict(c), out / f"chain_{it:03d}.json")
    io.write_drift_csv(out / "spectral_drift.csv", rows)
    drift = max(linalg.rel_dev(p, q) for _, polys in rows[1:] for p, q in zip(polys, rows[0][1])) if chains else 0.0
    sys.stdout.write(io.dumps({"iterations": args.iters, "max_spectral_drift": drift, "output": str(out)}) + "\n")


def cmd_spectral(args):
    chain = _load_chain(args.input)
    mus = args.mus or list(UNIT_MUS)
    curve = None if args.no_curve else spectral_curve(chain)
    report = io.spectral_report(mus, spectral_samples(chain, mus), curve)
    if curve is not None:
        report["curve"]["holdout_residual"] = curve.holdout_residual
    _emit(report, args.output)


def _reports_out(reports, path):
    _emit([r.to_dict() for r in reports], path)
    return 0 if all(r.passed for r in reports) else 1


def cmd_scaling_check(args):
    chain = _load_chain(args.input)
    reports = []
    for mu in args.mus:
        reports.append(degree_check_unnormalized(chain, mu))
        reports.append(anchor_check(chain, mu))
        if isinstance(mu, float) and mu > 0:
            reports.append(lambda_degree_check(chain, mu))
            reports.append(scaling_commutation_check(chain, mu))
    return _reports_out(reports, args.output)


def cmd_verify(args):
    return _reports_out(run_suite(args.n, args.m, args.N, seed=args.seed, cases=args.iters), args.output)


def cmd_oracle_compare(args):
    if args.input:
        chain = _load_chain(args.input)
    else:
        chain = random_chain(args.n, args.m, args.N, seed=args.seed, field="rational")
    exact = cramer_map_unnormalized(chain.as_rational() if not chain.exact else chain)
    floating = map_algebraic_unnormalized(chain.as_complex())
    dev = linalg.rel_dev(floating.a, linalg.as_complex(exact.a))
    out = {"check": "oracle_cramer", "max_dev": dev, "tol": 1e-10, "passed": dev <= 1e-10}
    if chain.n == 1 and chain.m == 3 and chain.N >= 5:
        cdev = classical_reduction_dev(reconstruct_lift(chain.as_complex(), np.eye(3)))
        out["classical_dev"] = cdev
        out["passed"] = out["passed"] and cdev <= 1e-9
    _emit(out, args.output)
    return 0 if out["passed"] else 1


COMMANDS = {
    "gen": cmd_gen,
    "invariants": cmd_invariants,
    "normalize": cmd_normalize,
    "map": cmd_map,
    "spectral": cmd_spectral,
    "scaling-check": cmd_scaling_check,
    "verify": cmd_verify,
    "oracle-compare": cmd_oracle_compare,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(parser, args)
    except SystemExit as exc:
        return int(exc.code or 0)
    with _tolerance(args.tol):
        try:
            return COMMANDS[args.command](args) or 0
        except GrassPentaError as exc:
            sys.stderr.write(json.dumps(exc.to_dict(), default=str) + "\n")
            return 1
        except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
            sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
            return 1


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
