"""Command-line entry point.

Exit codes: 0 when everything checked out, 2 when a certified
d-collapsible input violates a bound, 3 when a mandatory search ran out of
budget, 1 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal

from . import io
from .bounds import (
    PParams,
    alpha_k,
    alpha_monte_carlo,
    density_p,
    p_closed_form,
    verify_cfh,
    verify_kim,
    verify_tckp,
)
from .campaign import CampaignConfig, run_campaign
from .collapse import BudgetExhausted, find_collapse
from .exterior import certificate, generic_block_basis
from .extremal import ExtremalSpec, build_extremal, check_tightness
from .geometry import FaceCapExceeded, nerve

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION, EXIT_BUDGET = 0, 1, 2, 3


def _ints(text: str) -> list[int]:
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.replace(" ", "").split(",") if x]


def _int_range(text: str) -> list[int]:
    """"3", "1,2" or "1..3"."""
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return _ints(text)


def _grid(text: str) -> list[float]:
    """start:stop:step, inclusive of stop, computed in decimal to avoid drift."""
    start, stop, step = (Decimal(x) for x in text.split(":"))
    if step <= 0:
        raise argparse.ArgumentTypeError("grid step must be positive")
    out, x = [], start
    while x <= stop:
        out.append(float(x))
        x += step
    return out


def _collapse(args) -> int:
    cx = io.load_complex(args.complex)
    seq = find_collapse(cx, args.d, args.budget, special=args.special)
    if seq is None:
        io.emit_report({"result": "not_collapsible"}, args.out)
    else:
        io.emit_report({"steps": seq.to_dict()["steps"]}, args.out)
    return EXIT_OK


def _bounds_table(args) -> int:
    ds = _int_range(args.d)
    betas = [[b] * len(args.k[0]) for b in _grid(args.grid)] if args.grid else [args.beta]
    rows = [["params", "p", "density", "alpha_closed", "alpha_mc", "stderr"]]
    for k in args.k:
        for d in ds:
            for beta in betas:
                if beta is None or len(beta) != len(k):
                    raise ValueError("--beta (or --grid) must give one value per color of k")
                n = [args.m] * len(k)
                r = [min(args.m, int(Decimal(str(b)) * args.m)) for b in beta]
                params = PParams(n, d, r)
                p = p_closed_form(params, k)
                mc = alpha_monte_carlo(k, d, beta, args.samples, args.seed)
                label = f"k={','.join(map(str, k))};d={d};beta={','.join(f'{b:g}' for b in beta)};m={args.m};r={','.join(map(str, r))}"
                rows.append(
                    [label, p, f"{density_p(params, k):.12g}", f"{alpha_k(k, d, beta):.12g}", f"{mc.estimate:.12g}", f"{mc.stderr:.6g}"]
                )
    io.emit_table(rows, args.out)
    return EXIT_OK


def _bounds_verify(args) -> int:
    cx = io.load_complex(args.complex)
    status, collapsible = EXIT_OK, None
    try:
        collapsible = find_collapse(cx, args.d, args.budget) is not None
    except BudgetExhausted:
        status = EXIT_BUDGET
    out = {"collapsible": collapsible, "tckp": verify_tckp(cx, args.d, args.k).to_dict()}
    if cx.c == args.d + 1:
        out["cfh"] = verify_cfh(cx, args.d).to_dict()
        out["kim"] = verify_kim(cx, args.d).to_dict()
    io.emit_report(out, args.out)
    failed = any(not out[key]["holds"] for key in ("tckp", "cfh", "kim") if key in out)
    if collapsible and failed:
        return EXIT_VIOLATION
    return status


def _extremal(args) -> int:
    spec = ExtremalSpec.from_beta(args.c, args.d, args.m, args.beta_prime)
    ext = build_extremal(spec)
    out = {"complex": ext.complex.to_dict(), "labels": ext.labels(), "r": list(spec.r), "tightness": None}
    if args.k:
        out["tightness"] = check_tightness(spec, args.k).to_dict()
    if args.complex_out:
        io.emit_complex(ext.complex, args.complex_out)
    io.emit_report(out, args.out)
    return EXIT_OK


def _nerve(args) -> int:
    fam = io.load_family(args.family)
    cx = nerve(fam, args.max_face_size, helly=not args.no_helly_shortcut)
    io.emit_complex(cx, args.out)
    return EXIT_OK


def _certify(args) -> int:
    cx = io.load_complex(args.complex)
    basis = generic_block_basis(cx.n_per_color, seed=args.seed, mode=args.mode)
    collapsible = find_collapse(cx, args.d, args.budget) is not None
    report = certificate(cx, args.d, args.k, basis, budget=args.budget).to_dict()
    report["collapsible"] = collapsible
    io.emit_report(report, args.out)
    if collapsible and not (report["holds"] and report["steps_independent"] is not False):
        return EXIT_VIOLATION
    return EXIT_OK


def _campaign(args) -> int:
    if args.config:
        cfg = CampaignConfig(**io.load_json(args.config))
    else:
        vertices = _int_range(args.vertices)
        cfg = CampaignConfig(
            mode=args.mode,
            colors=args.colors,
            min_vertices=min(vertices),
            max_vertices=max(vertices),
            n_per_color=[_ints(x) for x in args.n] if args.n else None,
            d_values=_int_range(args.d),
            k=args.k,
            count=args.count,
            seed=args.seed,
            budget=args.budget,
            max_tries=args.max_tries,
            symmetry=not args.no_symmetry,
        )
    report = run_campaign(cfg, threads=args.threads)
    io.emit_report(report, args.out)
    if args.csv:
        io.emit_table(report.csv_rows(), args.csv)
    return EXIT_OK if report.ok else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    def global_flags(p: argparse.ArgumentParser, suppress: bool) -> argparse.ArgumentParser:
        # subcommands accept the flags too, without clobbering values given before the subcommand
        default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("--seed", type=int, default=default(0), help="random seed (default 0)")
        p.add_argument("--threads", type=int, default=default(1), help="worker processes for campaigns (default 1)")
        p.add_argument("--out", default=default(None), help="output path (default stdout)")
        return p

    common = global_flags(argparse.ArgumentParser(add_help=False), suppress=True)
    parser = global_flags(
        argparse.ArgumentParser(prog="cfhelly", description="Colorful fractional Helly bounds on d-collapsible complexes."),
        suppress=False,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("collapse", parents=[common], help="search for an elementary d-collapse sequence")
    p.add_argument("--complex", required=True, help="complex JSON file")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--special", action="store_true", help="only special collapses")
    p.add_argument("--budget", type=int, default=200_000, help="search node budget")
    p.set_defaults(func=_collapse)

    p = sub.add_parser("bounds", parents=[common], help="bound tables and verdicts")
    bsub = p.add_subparsers(dest="bounds_command", required=True)
    t = bsub.add_parser("table", parents=[common], help="CSV of p, density and alpha values")
    t.add_argument("--d", required=True, help="d, a list 1,2 or a range 1..3")
    t.add_argument("--k", type=_ints, action="append", required=True, help="k1,k2,...; repeatable")
    t.add_argument("--beta", type=_floats, help="b1,b2,...")
    t.add_argument("--grid", help="uniform beta grid start:stop:step, e.g. 0.1:1.0:0.1")
    t.add_argument("--m", type=int, default=20, help="vertices per color used for p and density (r_i = floor(beta_i m))")
    t.add_argument("--samples", type=int, default=100_000, help="Monte Carlo samples per row")
    t.set_defaults(func=_bounds_table)
    v = bsub.add_parser("verify", parents=[common], help="check the bounds on one complex")
    v.add_argument("--complex", required=True)
    v.add_argument("--d", type=int, required=True)
    v.add_argument("--k", type=_ints, required=True)
    v.add_argument("--budget", type=int, default=200_000)
    v.set_defaults(func=_bounds_verify)

    p = sub.add_parser("extremal", parents=[common], help="build the tightness construction")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--beta-prime", type=_floats, required=True)
    p.add_argument("--k", type=_ints)
    p.add_argument("--complex-out", help="also write the bare complex JSON here")
    p.set_defaults(func=_extremal)

    p = sub.add_parser("nerve", parents=[common], help="nerve of a family of convex polyhedra")
    p.add_argument("--family", required=True)
    p.add_argument("--max-face-size", type=int, default=None)
    p.add_argument("--no-helly-shortcut", action="store_true", help="decide every face by LP")
    p.set_defaults(func=_nerve)

    p = sub.add_parser("certify", parents=[common], help="run the exterior-algebra certificate")
    p.add_argument("--complex", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k", type=_ints, required=True)
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p.add_argument("--budget", type=int, default=200_000)
    p.set_defaults(func=_certify)

    p = sub.add_parser("campaign", parents=[common], help="verify the bounds over a suite of complexes")
    p.add_argument("--config", help="CampaignConfig as JSON; overrides the flags below")
    p.add_argument("--mode", choices=("enumerate", "random"), default="enumerate")
    p.add_argument("--colors", type=int, default=2)
    p.add_argument("--vertices", default="2..5", help="total vertex range, e.g. 2..6")
    p.add_argument("--n", action="append", help="explicit vertex vector n1,n2,...; repeatable")
    p.add_argument("--d", default="1")
    p.add_argument("--k", type=_ints)
    p.add_argument("--count", type=int, default=100, help="instances in random mode")
    p.add_argument("--budget", type=int, default=20_000)
    p.add_argument("--max-tries", type=int, default=50)
    p.add_argument("--no-symmetry", action="store_true", help="do not reduce by color-preserving relabelings")
    p.add_argument("--csv", help="also write a per-class CSV summary here")
    p.set_defaults(func=_campaign)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FaceCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
