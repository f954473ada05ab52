"""
Command-line front end.

Every command writes its configuration into the output (a ``# config:``
comment line for CSV, a ``config`` key for JSON) and produces byte-identical
output for identical arguments.  Exit status: 0 on success, 1 on internal
errors, 2 when the request is unsupported, violates a hypothesis or names
a point outside the domain.

    suita-lab eval --domain ball --z 0,0 --tau k --method exact
    suita-lab egg-bounds --mu 0.25 --p 0,0.5,0.999
    suita-lab scaling-run --domain ball --rate 0.5 --j-max 15 --N 1000000 --seed 0
    suita-lab ramadanov --family inflate-ball --j-max 50
    suita-lab indicatrix --oracle siegel --z=0,-1 --N 1000000 --seed 7
    suita-lab segment-scan --mu 0.1,0.25,0.4 --p-count 21

Negative coordinates need the ``--z=...`` form so they are not taken for
options.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback

import numpy as np

from . import __version__
from .bergman import (
    inflating_ball_family,
    kernel_oracle,
    ramadanov_run,
    translated_ball_family,
)
from .domains import DomainSpec
from .errors import CapabilityError, SuitaLabError
from .indicatrix import mc_volume
from .metrics import Ellipsoid2C, inscribed_ellipsoid, metric_oracle, wu_outer_ellipsoid
from .scaling import build_sequence, convergence_report, report_csv
from .suita import SEGMENT_HEADER, rows_to_csv, segment_scan, suita_invariant
from .transforms import homothety

EXIT_OK, EXIT_INTERNAL, EXIT_CAPABILITY = 0, 1, 2


class UsageError(Exception):
    pass


def _need_mu(args):
    if args.mu is None:
        raise UsageError("--mu is required for egg domains")
    return args.mu


def parse_point(text: str) -> list[complex]:
    """``"0,-1"`` or ``"0.1+0.2j,0.5"`` -> list of complex numbers."""
    return [complex(t.strip().replace(" ", "")) for t in text.split(",") if t.strip()]


def parse_floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    return x


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "output")}
    cfg["version"] = __version__
    return _jsonable(cfg)


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, payload: dict):
    payload = {"config": _config(args), **_jsonable(payload)}
    _emit(args, json.dumps(payload, indent=2, sort_keys=False) + "\n")


def _emit_csv(args, rows, header):
    if args.format == "json":
        _emit_json(args, {"rows": rows})
    else:
        _emit(args, rows_to_csv(rows, header, "config: " + json.dumps(_config(args), sort_keys=True)))


def _domain(args) -> DomainSpec:
    if args.domain == "ball":
        return DomainSpec.ball(args.n)
    if args.domain == "siegel":
        return DomainSpec.siegel(args.n)
    if args.domain == "egg":
        return DomainSpec.egg(_need_mu(args))
    raise UsageError(f"unknown domain {args.domain}")


def cmd_eval(args) -> int:
    spec = _domain(args)
    res = suita_invariant(spec, parse_point(args.z), args.tau, args.method, N=args.N, seed=args.seed)
    _emit_json(args, {"result": res.to_dict()})
    return EXIT_OK


def cmd_egg_bounds(args) -> int:
    _emit_csv(args, segment_scan(parse_floats(args.mu), parse_floats(args.p)), SEGMENT_HEADER)
    return EXIT_OK


def cmd_segment_scan(args) -> int:
    ps = np.linspace(0.0, args.p_max, args.p_count).tolist()
    _emit_csv(args, segment_scan(parse_floats(args.mu), ps), SEGMENT_HEADER)
    return EXIT_OK


def cmd_scaling_run(args) -> int:
    if args.domain != "ball":
        raise CapabilityError("scaling-run reports are only available for --domain ball")
    spec = _domain(args)
    seq = build_sequence(spec, parse_point(args.p0), args.j_max, args.rate)
    rows = convergence_report(seq, args.tau, N=args.N, seed=args.seed, n_dirs=args.n_dirs)
    if args.format == "json":
        _emit_json(args, {"rows": rows})
    else:
        _emit(args, report_csv(rows, "config: " + json.dumps(_config(args), sort_keys=True)))
    return EXIT_OK


def cmd_ramadanov(args) -> int:
    n = 2
    limit = kernel_oracle(DomainSpec.ball(n))
    w = parse_point(args.w)
    if args.family == "inflate-ball":
        seq = inflating_ball_family(args.j_max, n)
        # every (1 + 1/j) B contains B
        table = ramadanov_run(seq, limit, w, reference=limit, tol=args.tol)
    else:
        seq = translated_ball_family(args.j_max, parse_point(args.v))
        # the half ball lies in every translate B + v/j, j >= 2
        ref = kernel_oracle(DomainSpec.scaled(DomainSpec.ball(n), homothety(np.zeros(n), 2.0)))
        table = ramadanov_run(seq, limit, w, reference=ref, tol=args.tol)
    rows = [dict(zip(["j", "kernel", "limit", "abs_err"], r)) for r in table.rows]
    if args.format == "json":
        _emit_json(args, {"rows": rows, "monotone_ok": table.monotone_ok,
                          "converged": table.converged})
    else:
        _emit_csv(args, rows, ["j", "kernel", "limit", "abs_err"])
    return EXIT_OK


def cmd_indicatrix(args) -> int:
    z = parse_point(args.z)
    if args.oracle == "ellipsoid":
        oracle = Ellipsoid2C(args.A, args.B).oracle()
    elif args.oracle == "wu":
        oracle = wu_outer_ellipsoid(_need_mu(args), abs(z[1])).oracle()
    elif args.oracle == "inscribed":
        oracle = inscribed_ellipsoid(_need_mu(args), abs(z[1])).oracle()
    else:
        spec = {"ball": DomainSpec.ball, "siegel": DomainSpec.siegel}.get(args.oracle)
        spec = spec(args.n) if spec else DomainSpec.egg(_need_mu(args))
        oracle = metric_oracle(spec, z, args.tau)
    est = mc_volume(oracle, args.N, args.seed, n_dirs=args.n_dirs)
    _emit_json(args, {"estimate": est.__dict__})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="suita-lab", description="Bergman kernel, invariant metric "
                                "and indicatrix volume experiments.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, stochastic=False, fmt=True):
        sp.add_argument("--output", "-o", help="output file (default: stdout)")
        if fmt:
            sp.add_argument("--format", choices=["csv", "json"], default="csv")
        if stochastic:
            sp.add_argument("--N", type=int, default=1_000_000, help="Monte Carlo samples")
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--n-dirs", type=int, default=4096, help="directions for radius probes")

    def domain_args(sp, choices=("ball", "egg", "siegel")):
        sp.add_argument("--domain", choices=choices, default="ball")
        sp.add_argument("--mu", type=float, help="egg exponent parameter")
        sp.add_argument("--n", type=int, default=2, help="complex dimension")

    sp = sub.add_parser("eval", help="F at a point")
    domain_args(sp)
    sp.add_argument("--z", required=True)
    sp.add_argument("--tau", choices=["k", "c", "a"], default="k")
    sp.add_argument("--method", choices=["exact", "mc"], default="exact")
    common(sp, stochastic=True, fmt=False)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("egg-bounds", help="egg bound table at given (mu, p)")
    sp.add_argument("--mu", default="0.25", help="comma-separated mu values")
    sp.add_argument("--p", default="0,0.05,0.1,0.25,0.5,0.75,0.9,0.95,0.99,0.999",
                    help="comma-separated p values in [0, 1)")
    common(sp)
    sp.set_defaults(func=cmd_egg_bounds)

    sp = sub.add_parser("segment-scan", help="egg bounds along the segment {(0, p)}")
    sp.add_argument("--mu", default="0.1,0.2,0.25,0.3,0.4,0.49")
    sp.add_argument("--p-count", type=int, default=21)
    sp.add_argument("--p-max", type=float, default=0.99)
    common(sp)
    sp.set_defaults(func=cmd_segment_scan)

    sp = sub.add_parser("scaling-run", help="scaling convergence report at p* = (0, -1)")
    domain_args(sp)
    sp.add_argument("--p0", default="0,1")
    sp.add_argument("--rate", type=float, default=0.5)
    sp.add_argument("--j-max", type=int, default=15)
    sp.add_argument("--tau", choices=["k", "c", "a"], default="k")
    common(sp, stochastic=True)
    sp.set_defaults(func=cmd_scaling_run)

    sp = sub.add_parser("ramadanov", help="kernel stability along a domain sequence")
    sp.add_argument("--family", choices=["inflate-ball", "translate-ball"], default="inflate-ball")
    sp.add_argument("--j-max", type=int, default=50)
    sp.add_argument("--w", default="0,0", help="evaluation point")
    sp.add_argument("--v", default="0,1", help="translation direction for translate-ball")
    sp.add_argument("--tol", type=float, default=1e-3)
    common(sp)
    sp.set_defaults(func=cmd_ramadanov)

    sp = sub.add_parser("indicatrix", help="Monte Carlo indicatrix volume")
    sp.add_argument("--oracle", choices=["ball", "siegel", "egg", "ellipsoid", "wu", "inscribed"],
                    default="ball")
    sp.add_argument("--z", default="0,0")
    sp.add_argument("--mu", type=float)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--A", type=float, default=1.0)
    sp.add_argument("--B", type=float, default=1.0)
    sp.add_argument("--tau", choices=["k", "c", "a"], default="k")
    common(sp, stochastic=True, fmt=False)
    sp.set_defaults(func=cmd_indicatrix)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except SuitaLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
