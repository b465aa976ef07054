"""``dualmat`` command-line front end.

Every verb prints one JSON report to stdout.  Exit status: 0 when the
report passes, 1 when the mathematics says no (an inverse does not exist,
an order does not hold, a check fails), 2 for unreadable input or bad flags.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import generators, ginv, hsd, io, relations
from .config import Tolerance, default_tolerance
from .dmatrix import DualMatrix, max_deviation, relative_deviation
from .dsvd import dual_svd
from .errors import DualMatError, ParseError, ShapeMismatch

EXIT_OK, EXIT_MATH, EXIT_INPUT = 0, 1, 2
INPUT_ERRORS = (ParseError, ShapeMismatch)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _matrix_json(A: DualMatrix) -> dict:
    return io.matrix_to_json(A)


# ----------------------------------------------------------------- verbs


def cmd_svd(args, tol: Tolerance) -> dict:
    A = io.load_matrix(args.file)
    svd = dual_svd(A, tol)
    n_u, n_v = svd.U.shape[0], svd.V.shape[0]
    residuals = {
        "reconstruction": relative_deviation(svd.reconstruct(), A),
        "U_unitary": max_deviation(svd.U @ svd.U.H, DualMatrix.identity(n_u)),
        "V_unitary": max_deviation(svd.V @ svd.V.H, DualMatrix.identity(n_v)),
    }
    results = {
        "sigma": [io.scalar_to_json(mu) for mu in svd.sigma],
        "appreciable_rank": svd.r,
        "dual_rank": svd.t,
        "U": _matrix_json(svd.U),
        "V": _matrix_json(svd.V),
    }
    return {"results": results, "residuals": residuals}


def cmd_hsd(args, tol: Tolerance) -> dict:
    A = io.load_matrix(args.file)
    svd = dual_svd(A, tol)
    form = args.form
    if form == "basic":
        h = hsd.hs_basic(A, tol, svd)
        blocks = {"K0": h.K0, "L0": h.L0}
        results = {"Sigma0": [io.scalar_to_json(mu) for mu in h.Sigma0], "dual_rank": h.t}
    elif form == "partitioned":
        h = hsd.hs_partitioned(A, tol, svd)
        blocks = {"K": h.K, "L": h.L, "M": h.M, "N": h.N}
        results = {"Sigma1": [io.scalar_to_json(mu) for mu in h.Sigma1],
                   "Sigma2": [io.scalar_to_json(mu) for mu in h.Sigma2], "appreciable_rank": h.r}
    else:
        h = hsd.hs_refined(A, tol, svd)
        blocks = {name: DualMatrix.of(getattr(h, name))
                  for name in ("K1", "K2", "L1", "L2", "M1", "M2", "N1", "N2")}
        results = {"Sigma1s": io.complex_to_json(h.Sigma1s), "Sigma1d": io.complex_to_json(h.Sigma1d),
                   "Sigma2d": io.complex_to_json(h.Sigma2d), "appreciable_rank": h.r}
    results["form"] = form
    results["U"] = _matrix_json(h.U)
    results["blocks"] = {k: _matrix_json(v) for k, v in blocks.items()}
    residuals = dict(h.constraint_residuals())
    residuals["reconstruction"] = relative_deviation(h.reconstruct(), A)
    if form == "refined":
        residuals["reconstruction_split"] = relative_deviation(h.reconstruct_split(), A)
    return {"results": results, "residuals": residuals}


def cmd_inv(args, tol: Tolerance) -> dict:
    A = io.load_matrix(args.file)
    res = ginv.compute(args.kind, A, args.method, tol)
    results = {"kind": res.kind, "method": res.method, "value": _matrix_json(res.value),
               "R": io.complex_to_json(res.R)}
    return {"results": results, "residuals": res.residuals}


def _suite_residuals(reports) -> dict:
    return {f"{rep.kind}:{c.name}": c.residual for rep in reports for c in rep.checks}


def cmd_check(args, tol: Tolerance) -> dict:
    A = io.load_matrix(args.file)
    if args.suite == "existence":
        reports = [ginv.dmpgi_exists(A, tol)]
        if A.shape[0] == A.shape[1]:
            reports.append(ginv.dual_index_is_one(A, tol))
        return {"results": {"reports": [r.to_dict() for r in reports]}, "residuals": {},
                "passed": all(r.agree for r in reports)}
    if args.suite == "identities":
        reports = [relations.identity_suite_group(A, tol), relations.identity_suite_core(A, tol),
                   relations.coincidence(A, tol), relations.self_inverse_checks(A, tol)]
        suites, equivalences = reports[:2], reports[2:]
        passed = all(r.passed for r in suites) and all(r.consistent for r in equivalences)
        return {"results": {"reports": [r.to_dict() for r in reports]},
                "residuals": _suite_residuals(reports), "passed": passed}
    # orders: reflexivity, and the dominator with P = I implies both orders
    hs = hsd.hs_partitioned(A, tol)
    n = A.shape[0]
    B = relations.dcore_dominator(A, DualMatrix.identity(n - hs.r), tol)
    verdicts = {
        "dcore_reflexive": relations.dcore_leq(A, A, tol),
        "dminus_reflexive": relations.dminus_leq(A, A, tol),
        "dcore_dominator": relations.dcore_leq(A, B, tol),
        "dminus_dominator": relations.dminus_leq(A, B, tol),
    }
    return {"results": {k: v.to_dict() for k, v in verdicts.items()}, "residuals": {},
            "passed": all(v.holds for v in verdicts.values())}


def cmd_order(args, tol: Tolerance) -> dict:
    A, B = io.load_matrix(args.file), io.load_matrix(args.file_b)
    if args.kind == "dcore":
        verdict = relations.dcore_leq(A, B, tol)
    elif args.kind == "dminus":
        verdict = relations.dminus_leq(A, B, tol)
    else:
        raise ParseError(f"order --kind must be dcore or dminus, got {args.kind}")
    return {"results": verdict.to_dict(), "residuals": {}, "passed": verdict.holds}


def _pair_paths(output: str) -> list[Path]:
    p = Path(output)
    return [p.with_name(f"{p.stem}_A{p.suffix}"), p.with_name(f"{p.stem}_B{p.suffix}")]


def cmd_gen(args, tol: Tolerance) -> dict:
    mats = generators.generate(args.gen_kind, args.n, args.seed)
    results: dict = {"kind": args.gen_kind, "n": args.n}
    if args.output:
        paths = _pair_paths(args.output) if len(mats) == 2 else [Path(args.output)]
        for A, path in zip(mats, paths):
            io.save_matrix(A, path)
        results["files"] = [str(p) for p in paths]
    else:
        results["matrices"] = [_matrix_json(A) for A in mats]
    return {"results": results, "residuals": {}}


COMMANDS = {"svd": cmd_svd, "hsd": cmd_hsd, "inv": cmd_inv, "check": cmd_check, "order": cmd_order, "gen": cmd_gen}


# ------------------------------------------------------------ parsing


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="pass/fail tolerance for residuals (default 1e-9, or $DUALMAT_TOL)")
    common.add_argument("--seed", type=int, default=None, help="random seed (gen)")
    common.add_argument("--output", default=None,
                        help="gen: where to write the matrix file(s); other verbs: also write the report here")

    parser = _Parser(prog="dualmat", description="Dual matrix decompositions and generalized inverses.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("svd", parents=[common], help="dual singular value decomposition")
    p.add_argument("file")

    p = sub.add_parser("hsd", parents=[common], help="dual Hartwig-Spindelboeck decomposition")
    p.add_argument("file")
    p.add_argument("--form", choices=("basic", "partitioned", "refined"), default="partitioned")

    p = sub.add_parser("inv", parents=[common], help="dual generalized inverse")
    p.add_argument("file")
    p.add_argument("--kind", choices=ginv.KINDS, required=True)
    p.add_argument("--method", choices=ginv.METHODS, default="formula")

    p = sub.add_parser("check", parents=[common], help="run a verification suite on one matrix")
    p.add_argument("file")
    p.add_argument("--suite", choices=("identities", "orders", "existence"), default="identities")

    p = sub.add_parser("order", parents=[common], help="test a dual partial order between two matrices")
    p.add_argument("file")
    p.add_argument("file_b", metavar="file-b")
    p.add_argument("--kind", choices=("dcore", "dminus"), required=True)

    p = sub.add_parser("gen", parents=[common], help="generate a random instance with a known property")
    p.add_argument("--kind", dest="gen_kind", choices=generators.GEN_KINDS, required=True)
    p.add_argument("-n", "--n", type=int, default=4, help="matrix size")
    return parser


def _tolerance(args) -> Tolerance:
    base = default_tolerance()
    return base if getattr(args, "tol", None) is None else base.with_residual(args.tol)


def run(argv: list[str] | None = None) -> tuple[dict, int]:
    """Execute one invocation and return ``(report, exit_code)``."""
    start = time.perf_counter()
    report: dict = {"command": None, "args": {}, "config": {}, "results": None,
                    "residuals": {}, "passed": False, "error": None}
    args = None
    try:
        args = build_parser().parse_args(argv)
        tol = _tolerance(args)
        if args.command == "gen" and args.seed is None:
            raise ParseError("gen needs --seed")
        report["command"] = args.command
        report["args"] = {k: v for k, v in sorted(vars(args).items()) if k != "command"}
        report["config"] = {"tolerance": tol.as_dict(), "seed": args.seed}
        out = COMMANDS[args.command](args, tol)
        report["results"] = out["results"]
        report["residuals"] = out["residuals"]
        report["passed"] = out.get("passed", all(v < tol.residual for v in out["residuals"].values()))
        code = EXIT_OK if report["passed"] else EXIT_MATH
    except INPUT_ERRORS as exc:
        report["error"] = {"code": exc.code, "message": str(exc)}
        code = EXIT_INPUT
    except DualMatError as exc:
        report["error"] = {"code": exc.code, "message": str(exc)}
        code = EXIT_MATH
    except ValueError as exc:
        report["error"] = {"code": "invalid_argument", "message": str(exc)}
        code = EXIT_INPUT
    report["exit_code"] = code
    report["wall_time"] = time.perf_counter() - start
    if args is not None and args.command != "gen" and getattr(args, "output", None):
        Path(args.output).write_text(dumps_report(report) + "\n")
    return report, code


def dumps_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def main(argv: list[str] | None = None) -> int:
    report, code = run(argv)
    sys.stdout.write(dumps_report(report) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
