"""Command-line front end.

    cmtype fermat analyze --m 5 --p 2 [--json] [--expand-disc] [--max-m N] [--list-orbits]
    cmtype fermat quotient --m 3 --p 2 --subgroup "1,2,0,0;0,0,1,2"
    cmtype orbit sigma0 --tau 2,1,1,1,1,0
    cmtype orbit dieudonne --tau 0,1,0,2,1,2
    cmtype oracle jacobi --m 5 --p 2 [--oracle-q-cap Q]

Exit codes: 0 when the computation completed (a "not supersingular" verdict
included), 1 for mathematical precondition failures, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .characters import DEFAULT_MAX_M, enumerate_characters, invariant_characters
from .crystal import FrobeniusOrbit, sigma0_orbit
from .dieudonne import formal_group_presentation
from .errors import CMTypeError
from .jacobi import DEFAULT_Q_CAP, slope_check
from .report import (
    dumps,
    envelope,
    render_dieudonne,
    render_oracle,
    render_quotient,
    render_sigma0,
    render_summary,
    slope_report_to_dict,
    summary_to_dict,
)
from .residues import _check_coprime
from .surface import summarize


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def _tau_list(text: str) -> list[int]:
    tau = _int_list(text)
    if not tau:
        raise argparse.ArgumentTypeError("--tau needs at least one value")
    if any(t not in (0, 1, 2) for t in tau):
        raise argparse.ArgumentTypeError(f"tau values must lie in {{0,1,2}}, got {text!r}")
    return tau


def _subgroup(text: str) -> list[list[int]]:
    gens = [_int_list(part) for part in text.split(";") if part.strip()]
    for g in gens:
        if len(g) != 4:
            raise argparse.ArgumentTypeError(f"subgroup generators are 4-tuples, got {g}")
    return gens


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmtype",
        description="Frobenius orbits, F-crystal invariants and Neron-Severi discriminants of Fermat surfaces.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)

    def common(p: argparse.ArgumentParser, mp: bool = True) -> None:
        if mp:
            p.add_argument("--m", type=_positive, required=True, help="degree of the Fermat surface")
            p.add_argument("--p", type=_positive, required=True, help="characteristic, prime to m")
        p.add_argument("--json", action="store_true", help="emit the JSON envelope instead of text")

    fermat = groups.add_parser("fermat", help="whole-surface computations").add_subparsers(dest="cmd", required=True)
    analyze = fermat.add_parser("analyze", help="b2, Hodge numbers, orbits, slopes, sigma0, disc NS")
    common(analyze)
    analyze.add_argument("--max-m", type=_positive, default=DEFAULT_MAX_M, help="enumeration cap on m")
    analyze.add_argument("--expand-disc", action="store_true", help="also print p^(2 sigma0) in full")
    analyze.add_argument("--list-orbits", action="store_true", help="include every orbit, not just types")

    quotient = fermat.add_parser("quotient", help="invariant part for a subgroup of the diagonal group")
    common(quotient)
    quotient.add_argument("--subgroup", type=_subgroup, default=[],
                          help='generators as 4-tuples, e.g. "1,2,0,0;0,0,1,2"')
    quotient.add_argument("--max-m", type=_positive, default=DEFAULT_MAX_M)
    quotient.add_argument("--expand-disc", action="store_true")

    orbit = groups.add_parser("orbit", help="single-orbit computations").add_subparsers(dest="cmd", required=True)
    for name, helptext in (("sigma0", "sigma0 trace of one orbit"),
                           ("dieudonne", "Dieudonne presentation of one orbit")):
        sp = orbit.add_parser(name, help=helptext)
        common(sp, mp=False)
        sp.add_argument("--tau", type=_tau_list, required=True, help="tau sequence, e.g. 0,1,2,1")

    oracle = groups.add_parser("oracle", help="independent checks").add_subparsers(dest="cmd", required=True)
    jac = oracle.add_parser("jacobi", help="Jacobi-sum valuations vs orbit slopes")
    common(jac)
    jac.add_argument("--oracle-q-cap", type=_positive, default=DEFAULT_Q_CAP, help="largest field size q")
    return parser


def run(args: argparse.Namespace) -> tuple[dict, str]:
    """Execute a parsed command; returns the envelope and its text rendering."""
    command = f"{args.group} {args.cmd}"
    if command == "fermat analyze":
        _check_coprime(args.p, args.m)
        s = summarize(enumerate_characters(args.m, args.max_m), args.p, keep_orbits=args.list_orbits)
        results = summary_to_dict(s, args.expand_disc)
        inputs = {"m": args.m, "p": args.p,
                  "flags": {"max_m": args.max_m, "expand_disc": args.expand_disc, "list_orbits": args.list_orbits}}
        return envelope(command, inputs, results), render_summary(results)
    if command == "fermat quotient":
        _check_coprime(args.p, args.m)
        cs = invariant_characters(enumerate_characters(args.m, args.max_m), args.subgroup)
        part = summary_to_dict(summarize(cs, args.p), args.expand_disc)
        subgroup = [[x % args.m for x in g] for g in args.subgroup]
        results = {
            "m": args.m,
            "p": args.p,
            "subgroup": subgroup,
            "invariant_count": len(cs),
            "invariant_characters": cs.table.tolist(),
            "exceptional_lattice": "not computed",
            "invariant_part": part,
        }
        inputs = {"m": args.m, "p": args.p, "subgroup": subgroup,
                  "flags": {"max_m": args.max_m, "expand_disc": args.expand_disc}}
        return envelope(command, inputs, results), render_quotient(results)
    if command == "orbit sigma0":
        results = sigma0_orbit(FrobeniusOrbit(tuple(args.tau))).as_dict()
        return envelope(command, {"tau": args.tau}, results), render_sigma0(results)
    if command == "orbit dieudonne":
        results = formal_group_presentation(args.tau).as_dict()
        return envelope(command, {"tau": args.tau}, results), render_dieudonne(results)
    if command == "oracle jacobi":
        results = slope_report_to_dict(slope_check(args.m, args.p, args.oracle_q_cap))
        inputs = {"m": args.m, "p": args.p, "flags": {"oracle_q_cap": args.oracle_q_cap}}
        return envelope(command, inputs, results), render_oracle(results)
    raise AssertionError(command)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        env, text = run(args)
    except CMTypeError as exc:
        print(f"cmtype: error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(dumps(env) if args.json else text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
