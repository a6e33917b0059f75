"""Command line entry point.

Exit codes: 0 success, 1 usage or input error, 2 a solver status other
than Optimal, 3 a violated bound sandwich (or, for ``check``, any failed
invariant).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .checks import run_checks
from .core_model import BipInstance, augment_with_bounds
from .formats import ParseError, emit_sdpa, format_instance, parse_instance
from .lifting import build_cut_system
from .oracles import (INFEASIBLE, BoundsReport, brute_force_bip, ls_bound, random_instance,
                      sandwich_check)
from .sdp_solver import SolverOptions
from .standard_form import to_standard_form

EXIT_OK, EXIT_USAGE, EXIT_STATUS, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _fixed(v: float | None, digits: int = 6) -> str:
    if v is None:
        return "n/a"
    return f"{round(v, digits) + 0.0:.{digits}f}"


def _load(path: str) -> BipInstance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot open {path}: {exc.strerror}") from None
    try:
        return parse_instance(text)
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _options(args) -> SolverOptions:
    kw = {"max_iterations": args.max_iter}
    if args.tol is not None:
        kw.update(gap_tol=args.tol, feas_tol=args.tol)
    try:
        return SolverOptions(**kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def report_json(rep: BoundsReport, timings: bool = False) -> dict:
    return {
        "n": rep.n,
        "m": rep.m,
        "nbar": rep.nbar,
        "vBip": rep.v_bip,
        "vLp": rep.v_lp,
        "vLs": rep.v_ls,
        "gaps": list(rep.gaps),
        "status": {"lp": rep.lp_status.value, "ls": rep.ls_status.value,
                   "sandwich": "violated" if rep.violation else "ok"},
        "iterations": {"lp": rep.lp_iterations, "ls": rep.ls_iterations},
        "seed": rep.seed,
        "timings": dict(rep.timings) if timings else None,
    }


def _report_text(rep: BoundsReport, name: str) -> str:
    bip = "infeasible" if rep.v_bip is None else _fixed(rep.v_bip)
    lines = [f"instance: {name}  (n={rep.n}, m={rep.m}, nbar={rep.nbar})",
             f"BIP optimum: {bip}",
             f"LS bound:    {_fixed(rep.v_ls)}  [{rep.ls_status.value}, {rep.ls_iterations} it]",
             f"LP bound:    {_fixed(rep.v_lp)}  [{rep.lp_status.value}, {rep.lp_iterations} it]",
             "gaps (lp-bip, lp-ls, ls-bip): " + ", ".join(_fixed(g) for g in rep.gaps),
             "sandwich: " + ("VIOLATED" if rep.violation else "ok")]
    return "\n".join(lines)


def _exit_for(reports: list[BoundsReport]) -> int:
    if any(r.violation for r in reports):
        return EXIT_VIOLATION
    if any(not r.clean for r in reports):
        return EXIT_STATUS
    return EXIT_OK


def cmd_lift(args) -> int:
    inst = _load(args.file)
    prob = to_standard_form(build_cut_system(augment_with_bounds(inst, args.bounds)), inst.c)
    text = emit_sdpa(prob)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = _load(args.file)
    ls = ls_bound(inst, _options(args), args.bounds)
    res = ls.result
    if args.format == "json":
        print(json.dumps({
            "n": inst.n, "m": ls.problem.m, "nbar": ls.problem.nbar,
            "vLs": ls.value, "x": ls.decomposition.x.tolist() if res.optimal else None,
            "status": res.status.value, "iterations": res.iterations,
            "primalObj": res.primal_obj, "dualObj": res.dual_obj,
        }, indent=2))
    else:
        print(f"LS bound: {_fixed(ls.value)}")
        print(f"status: {res.status.value}, iterations: {res.iterations}")
    return EXIT_OK if res.optimal else EXIT_STATUS


def cmd_compare(args) -> int:
    opts = _options(args)
    if args.batch:
        folder = Path(args.batch)
        if not folder.is_dir():
            raise UsageError(f"cannot open directory {args.batch}")
        paths = sorted(str(p) for p in folder.glob("*.bip"))
    elif args.file:
        paths = [args.file]
    else:
        raise UsageError("compare needs a file or --batch DIR")
    reports = []
    for path in paths:
        reports.append((path, sandwich_check(_load(path), opts, seed=args.seed, bounds=args.bounds)))
    if args.format == "json":
        if args.batch:
            payload = [{"file": Path(p).name, **report_json(r, args.timings)} for p, r in reports]
        else:
            payload = report_json(reports[0][1], args.timings)
        print(json.dumps(payload, indent=2))
    else:
        print("\n\n".join(_report_text(r, p) for p, r in reports))
    return _exit_for([r for _, r in reports])


def cmd_oracle(args) -> int:
    inst = _load(args.file)
    try:
        res = brute_force_bip(inst)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        if res is INFEASIBLE:
            out = {"n": inst.n, "mUser": inst.m_user, "vBip": None, "argmax": []}
        else:
            out = {"n": inst.n, "mUser": inst.m_user, "vBip": res[0], "argmax": [list(p) for p in res[1]]}
        print(json.dumps(out, indent=2))
    elif res is INFEASIBLE:
        print("BIP infeasible")
    else:
        print(f"BIP optimum: {_fixed(res[0])}")
        for p in res[1]:
            print("argmax: " + " ".join(map(str, p)))
    return EXIT_OK


def cmd_gen(args) -> int:
    if (args.n is not None and args.n < 1) or (args.m is not None and args.m < 0):
        raise UsageError("gen needs --n >= 1 and --m >= 0")
    sys.stdout.write(format_instance(random_instance(args.seed, args.n, args.m)))
    return EXIT_OK


def cmd_check(args) -> int:
    inst = _load(args.file)
    results = run_checks(inst, _options(args), seed=args.seed, bounds=args.bounds)
    if args.format == "json":
        print(json.dumps([{"name": r.name, "passed": r.passed, "detail": r.detail}
                          for r in results], indent=2))
    else:
        print("\n".join(r.line() for r in results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="solver gap and feasibility tolerance (default 1e-7)")
    common.add_argument("--max-iter", type=int, default=200, help="solver iteration cap")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--no-augment-bounds", dest="bounds", action="store_false",
                        help="do not append 0 <= x <= 1 to the user rows")

    parser = argparse.ArgumentParser(
        prog="lsrelax", description="Lifted SDP bounds for 0-1 programs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lift", parents=[common], help="write the relaxation in SDPA sparse format")
    p.add_argument("file")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("solve", parents=[common], help="solve the lifted relaxation")
    p.add_argument("file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", parents=[common], help="report BIP, LS and LP bounds")
    p.add_argument("file", nargs="?")
    p.add_argument("--batch", metavar="DIR", help="compare every *.bip file in DIR")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("oracle", parents=[common], help="brute-force the 0-1 optimum")
    p.add_argument("file")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", parents=[common], help="emit a random instance")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", parents=[common], help="run the invariant suite on one instance")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
