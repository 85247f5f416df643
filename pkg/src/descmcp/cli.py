"""Command line front end: ``descmcp {check,dm,mcp0,mcp1,reduce,gen}``.

Exit codes: 0 success (or verdict true), 1 verdict false (``check`` only),
2 usage or input error, 3 budget exhausted (the uncertified result is still
written).
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from .controllability import check_structural_controllability, explain
from .dm import dm_decompose, to_dot
from .mcp import UnsolvableError, solve_mcp0, solve_mcp1_exact, solve_mcp1_greedy
from .oracles import random_system
from .reduction import set_cover_to_descriptor
from .setcover import DEFAULT_BUDGET, InfeasibleError, SetCoverFormatError, parse_setcover
from .system import GraphView, SystemFormatError, build_bipartite, parse_system, serialize_system

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

log = logging.getLogger("descmcp")


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(args, text: str) -> None:
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_system(path: str):
    return parse_system(_read(path))


def _load_autonomous(path: str):
    sys_ = _load_system(path)
    if sys_.m:
        log.warning("ignoring the %d input column(s) of %s", sys_.m, path)
        sys_ = sys_.autonomous()
    return sys_


# -- commands ----------------------------------------------------------------

def cmd_check(args) -> int:
    report = check_structural_controllability(_load_system(args.input))
    if args.format == "json":
        _write(args, _dump(report.to_json()))
    else:
        _write(args, explain(report))
    return EXIT_OK if report.verdict else EXIT_FALSE


def cmd_dm(args) -> int:
    sys_ = _load_system(args.input)
    g = build_bipartite(sys_)
    dm = dm_decompose(g, GraphView(args.view))
    if args.format == "json":
        _write(args, _dump(dm.to_json()))
    elif args.format == "dot":
        _write(args, to_dot(dm, g))
    else:
        _write(args, dm.to_text())
    return EXIT_OK


def cmd_mcp0(args) -> int:
    sol = solve_mcp0(_load_autonomous(args.input))
    amended = serialize_system(sol.system, _mcp0_comments(sol))
    if args.system_output:
        with open(args.system_output, "w", encoding="utf-8") as fh:
            fh.write(amended)
    if args.format == "json":
        out = sol.to_json()
        out["amendedSystem"] = amended
        _write(args, _dump(out))
    else:
        _write(args, amended)
    return EXIT_OK


def _mcp0_comments(sol) -> list:
    lines = [f"mcp0: n_D = {sol.n_d}"]
    for k, (rep, cov) in enumerate(zip(sol.repair, sol.coverage), start=1):
        rep_s = ",".join(str(c) for c in rep) or "-"
        cov_s = ",".join(str(c) for c in cov) or "-"
        lines.append(f"u{k}: repair {rep_s}; coverage {cov_s}")
    return lines


def cmd_mcp1(args) -> int:
    sys_ = _load_autonomous(args.input)
    if args.mode == "greedy":
        sol = solve_mcp1_greedy(sys_)
    else:
        sol = solve_mcp1_exact(sys_, args.budget)
    if args.format == "json":
        _write(args, _dump(sol.to_json()))
    else:
        S = ", ".join(str(c) for c in sol.sorted_S()) or "(empty)"
        lines = [f"|S| = {sol.size}", f"S = {{{S}}}",
                 f"mode: {sol.mode}; certified: {'yes' if sol.certified else 'no'}",
                 f"certificate: {sol.certificate}"]
        if sol.empty_support:
            lines.append("note: the autonomous system already passes every condition")
        _write(args, "\n".join(lines) + "\n")
    if args.mode == "exact" and not sol.certified:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_reduce(args) -> int:
    red = set_cover_to_descriptor(parse_setcover(_read(args.input)))
    labels = red.label_map()
    if args.format == "json":
        _write(args, _dump({"system": serialize_system(red.sys), "labelMap": labels}))
    else:
        comments = ["labels: " + json.dumps(labels, separators=(",", ":"))]
        _write(args, serialize_system(red.sys, comments))
    return EXIT_OK


def cmd_gen(args) -> int:
    sys_ = random_system(args.n, args.density_a, args.density_f, args.seed,
                         ensure_solvable=not args.allow_unsolvable,
                         m=args.m, density_b=args.density_b)
    comment = (f"gen n={args.n} density-a={args.density_a} density-f={args.density_f} "
               f"seed={args.seed}")
    _write(args, serialize_system(sys_, [comment]))
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def _density(text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= val <= 1.0:
        raise argparse.ArgumentTypeError("density must lie in [0, 1]")
    return val


def _count(text: str) -> int:
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if val < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return val


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="descmcp",
        description="Structural controllability and minimal input problems "
                    "for descriptor systems F x' = A x + B u.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="output file (default: stdout)")

    def add(name, help_, formats, default="text"):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--format", choices=formats, default=default)
        return p

    p = add("check", "test structural controllability", ["text", "json"])
    p.add_argument("input", help="system file ('-' for stdin)")
    p.set_defaults(func=cmd_check)

    p = add("dm", "DM decomposition of one graph view", ["text", "json", "dot"])
    p.add_argument("input", help="system file ('-' for stdin)")
    p.add_argument("--view", choices=[v.value for v in GraphView], default=GraphView.GFull.value)
    p.set_defaults(func=cmd_dm)

    p = add("mcp0", "fewest input columns; text output is the amended system",
            ["text", "json"])
    p.add_argument("input", help="autonomous system file ('-' for stdin)")
    p.add_argument("--system-output", help="also write the amended system file here")
    p.set_defaults(func=cmd_mcp0)

    p = add("mcp1", "smallest set of equations driven by dedicated inputs", ["text", "json"])
    p.add_argument("input", help="autonomous system file ('-' for stdin)")
    p.add_argument("--mode", choices=["exact", "greedy"], default="exact")
    p.add_argument("--budget", type=_count, default=DEFAULT_BUDGET,
                   help="search expansions for exact mode (default %(default)s)")
    p.set_defaults(func=cmd_mcp1)

    p = add("reduce", "set-cover instance to descriptor system", ["text", "json"])
    p.add_argument("input", help="set-cover file ('-' for stdin)")
    p.set_defaults(func=cmd_reduce)

    p = add("gen", "random structural system", ["text"])
    p.add_argument("--n", type=_count, required=True)
    p.add_argument("--density-a", type=_density, default=0.2)
    p.add_argument("--density-f", type=_density, default=0.2)
    p.add_argument("--m", type=_count, default=0, help="input columns")
    p.add_argument("--density-b", type=_density, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-unsolvable", action="store_true",
                   help="skip the planted permutation that guarantees solvability")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, SystemFormatError, SetCoverFormatError, InfeasibleError,
            UnsolvableError) as exc:
        print(f"descmcp {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"descmcp {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
