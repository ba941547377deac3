"""Command-line front end.

Exit codes: 0 success, 1 verification failures, 2 malformed input or
usage, 3 numerical precondition failure, 4 enumeration overflow.
"""
import argparse
import json
import os
import sys
import warnings

import numpy as np

from . import verify as verify_mod
from .core_linalg import INSTANCE_KINDS, Tolerance, opnorm, polar, random_instance
from .errors import (
    BadParams,
    DimensionMismatch,
    EnumerationOverflow,
    MalformedInput,
    MultiplicityWarning,
    WPolarError,
)
from .fibration import alpha, pi, weighted_polar
from .matrixio import load_matrix, matrix_to_pairs, save_matrix, to_json_obj
from .pt_solver import DEFAULT_CAP, all_solutions, solve_pt
from .structure_sets import classify_union
from .weighted_calculus import a_orthogonal_projection, classify_weighted, make_weight

EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC, EXIT_OVERFLOW = 1, 2, 3, 4


class UsageError(Exception):
    pass


def _default_tol():
    env = os.environ.get("WPOLAR_TOL")
    if env is None:
        return 1e-9
    try:
        return float(env)
    except ValueError:
        raise UsageError(f"WPOLAR_TOL is not a number: {env!r}") from None


def _fmt(x):
    x = np.asarray(x)
    if np.all(np.abs(x.imag) <= 1e-15 * max(1.0, np.abs(x).max())):
        x = x.real
    return np.array2string(x, precision=6, suppress_small=True, max_line_width=120)


def _emit(args, report, lines):
    for line in lines:
        print(line)
    if args.json:
        text = json.dumps(report, indent=1, sort_keys=True) + "\n"
        if args.json == "-":
            sys.stdout.write(text)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)


def _same_dim(x, y, label):
    if x.shape != y.shape:
        raise DimensionMismatch(label, f"shape {y.shape} does not match {x.shape}")


def cmd_decompose(args, tol):
    g = load_matrix(args.input, "input")
    report = {"tol": tol.rtol}
    if args.weight:
        a = load_matrix(args.weight, "weight")
        _same_dim(g, a, "weight")
        w = make_weight(a, tol)
        f = weighted_polar(w, g, tol)
        u, left, right = f.a_unitary_part, f.a_positive_left, f.a_positive_right
        verdict = classify_weighted(w, u, tol)
        names = ("a_unitary_part", "a_positive_left", "a_positive_right")
        report["a_unitary_residual"] = verdict.residuals["a_unitary"]
    else:
        f = polar(g, tol)
        u, left, right = f.unitary_part, f.left_positive, f.right_positive
        names = ("unitary_part", "left_positive", "right_positive")
        report["unitary_residual"] = opnorm(u.conj().T @ u - np.eye(g.shape[0]))
    scale = max(1.0, opnorm(g))
    report["left_residual"] = opnorm(left @ u - g) / scale
    report["right_residual"] = opnorm(u @ right - g) / scale
    for nm, m in zip(names, (u, left, right)):
        report[nm] = matrix_to_pairs(m)
    lines = [f"mode: {'weighted' if args.weight else 'classical'}"]
    for nm, m in zip(names, (u, left, right)):
        lines += [f"{nm} =", _fmt(m)]
    lines += [f"{k}: {v:.3e}" for k, v in report.items() if k.endswith("residual")]
    if args.save:
        os.makedirs(args.save, exist_ok=True)
        for nm, m in zip(names, (u, left, right)):
            save_matrix(os.path.join(args.save, f"{nm}.json"), m, nm)
    _emit(args, report, lines)
    return 0


def cmd_solve(args, tol):
    h = load_matrix(args.h, "h")
    k = load_matrix(args.k, "k")
    _same_dim(h, k, "k")
    t = solve_pt(h, k, tol)
    res = opnorm(t @ h @ t - k) / opnorm(k)
    report = {"tol": tol.rtol, "T": matrix_to_pairs(t), "residual": res}
    lines = ["T =", _fmt(t), f"residual ||THT - K||/||K||: {res:.3e}"]
    if args.all:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", MultiplicityWarning)
            fam = all_solutions(h, k, enumerate=True, cap=args.cap, tol=tol)
        report["family"] = {
            "m": matrix_to_pairs(fam.m),
            "eigenspace_blocks": [[v, mult] for v, mult in fam.eigenspace_blocks],
            "multiplicity_warning": fam.multiplicity_warning,
            "solutions": [
                {"signs": list(s), "x": matrix_to_pairs(x), "residual": r}
                for s, x, r in zip(fam.signs, fam.enumerated, fam.residuals)
            ],
        }
        lines.append(f"eigenspace blocks of m: {fam.eigenspace_blocks}")
        if fam.multiplicity_warning:
            lines.append("warning: repeated eigenvalues of m, listed solutions are representatives of a continuum")
        lines.append(f"{len(fam.enumerated)} enumerated solutions")
        for s, x, r in zip(fam.signs, fam.enumerated, fam.residuals):
            lines += [f"signs {s}  residual {r:.3e}", _fmt(x)]
    _emit(args, report, lines)
    return 0


def cmd_alpha(args, tol):
    a = load_matrix(args.weight, "weight")
    u = load_matrix(args.u, "u")
    _same_dim(a, u, "u")
    w = make_weight(a, tol)
    g = alpha(w, u, tol)
    verdict = classify_weighted(w, g, tol)
    report = {
        "tol": tol.rtol,
        "alpha": matrix_to_pairs(g),
        "pi_residual": opnorm(pi(g, tol) - u),
        "a_unitary_residual": verdict.residuals["a_unitary"],
    }
    lines = ["alpha(u) =", _fmt(g), f"pi residual: {report['pi_residual']:.3e}",
             f"a-unitary residual: {report['a_unitary_residual']:.3e}"]
    _emit(args, report, lines)
    return 0


def cmd_project(args, tol):
    a = load_matrix(args.weight, "weight")
    m = load_matrix(args.basis, "basis", square=False)
    w = make_weight(a, tol)
    pr = a_orthogonal_projection(w, m, tol)
    n = a.shape[0]
    report = {
        "tol": tol.rtol,
        "q": matrix_to_pairs(pr.q),
        "reflection": matrix_to_pairs(pr.reflection),
        "idempotent_residual": opnorm(pr.q @ pr.q - pr.q),
        "reflection_residual": opnorm(pr.reflection @ pr.reflection - np.eye(n)),
    }
    lines = ["q =", _fmt(pr.q), "reflection =", _fmt(pr.reflection),
             f"idempotent residual: {report['idempotent_residual']:.3e}"]
    _emit(args, report, lines)
    return 0


def cmd_classify(args, tol):
    x = load_matrix(args.x, "x")
    if args.weight:
        a = load_matrix(args.weight, "weight")
        _same_dim(x, a, "weight")
        v = classify_weighted(make_weight(a, tol), x, tol)
        report = {
            "tol": tol.rtol,
            "a_unitary": v.a_unitary,
            "a_hermitian": v.a_hermitian,
            "a_positive": v.a_positive,
            "residuals": v.residuals,
            "spectrum": [[float(z.real), float(z.imag)] for z in v.spectrum],
        }
        lines = [f"a_unitary: {v.a_unitary}", f"a_hermitian: {v.a_hermitian}", f"a_positive: {v.a_positive}"]
        lines += [f"{k}: {r:.3e}" for k, r in v.residuals.items()]
    else:
        v = classify_union(x, tol)
        report = {
            "tol": tol.rtol,
            "in_union_unitary": v.in_union_unitary,
            "in_union_positive": v.in_union_positive,
            "in_union_hermitian": v.in_union_hermitian,
            "diagonalizable": v.diagonalizable,
            "residuals": v.residuals,
            "witness_weight": None if v.witness_weight is None else matrix_to_pairs(v.witness_weight),
        }
        lines = [f"in_union_unitary: {v.in_union_unitary}", f"in_union_positive: {v.in_union_positive}",
                 f"in_union_hermitian: {v.in_union_hermitian}"]
        if not (v.in_union_unitary or v.in_union_positive or v.in_union_hermitian):
            lines.append("not in any weighted class union")
        if v.witness_weight is not None:
            lines += ["witness weight =", _fmt(v.witness_weight)]
    _emit(args, report, lines)
    return 0


def cmd_sample(args, tol):
    x = random_instance(args.kind, args.dim, args.seed, args.cond)
    if args.output:
        save_matrix(args.output, x, args.kind)
    else:
        print(json.dumps(to_json_obj(x, args.kind)))
    return 0


def cmd_verify(args, tol):
    names = list(verify_mod.SUITES) if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in verify_mod.SUITES:
        print(f"unknown suite {args.suite!r}; known: all, {', '.join(verify_mod.SUITES)}", file=sys.stderr)
        return EXIT_INPUT
    try:
        dims = [int(d) for d in args.dims.split(",") if d.strip()]
    except ValueError:
        raise UsageError(f"--dims must be a comma-separated list of integers, got {args.dims!r}") from None
    if not dims or min(dims) < 1:
        raise UsageError("--dims needs positive integers")
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    reports = verify_mod.run_suites(names, seed=args.seed, trials=args.trials, dims=dims, tol=tol, jobs=args.jobs)
    total_fail = 0
    for r in reports:
        nf = len(r["failures"])
        total_fail += nf
        print(f"{r['suite']:<11} passes {r['passes']}/{r['trials']}  max_residual {r['max_residual']:.3e}")
        for f in r["failures"]:
            print(f"  FAIL {f['case']} dim={f['dim']} {f['error'] or ''} {f['residuals']}", file=sys.stderr)
    doc = reports[0] if len(reports) == 1 else {"suites": reports}
    if args.json:
        text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
        if args.json == "-":
            sys.stdout.write(text)
        else:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
    return EXIT_FAIL if total_fail else 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="relative tolerance (default 1e-9 or $WPOLAR_TOL)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", metavar="PATH", help="write a JSON report ('-' for stdout)")

    p = argparse.ArgumentParser(prog="wpolar", description="Polar decomposition under weighted scalar products.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("decompose", parents=[common], help="classical or weighted polar decomposition")
    s.add_argument("input")
    s.add_argument("--weight")
    s.add_argument("--save", metavar="DIR", help="write the factors as matrix files")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("solve", parents=[common], help="solve T H T = K")
    s.add_argument("h")
    s.add_argument("k")
    s.add_argument("--all", action="store_true", help="enumerate the solution family")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("alpha", parents=[common], help="a-unitary point over a unitary")
    s.add_argument("weight")
    s.add_argument("u")
    s.set_defaults(func=cmd_alpha)

    s = sub.add_parser("project", parents=[common], help="a-orthogonal projection onto span(basis)")
    s.add_argument("weight")
    s.add_argument("basis")
    s.set_defaults(func=cmd_project)

    s = sub.add_parser("classify", parents=[common], help="weighted class membership or union membership")
    s.add_argument("x")
    s.add_argument("--weight")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("verify", parents=[common], help="run seeded property suites")
    s.add_argument("suite", help=f"one of: all, {', '.join(verify_mod.SUITES)}")
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--dims", default="2,4,8")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("sample", parents=[common], help="write a random test matrix")
    s.add_argument("kind", choices=INSTANCE_KINDS)
    s.add_argument("--dim", type=int, default=3)
    s.add_argument("--cond", type=float, default=100.0)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_sample)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rtol = args.tol if args.tol is not None else _default_tol()
        tol = Tolerance(rtol=rtol)
        return args.func(args, tol)
    except (UsageError, MalformedInput, DimensionMismatch, BadParams) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EnumerationOverflow as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OVERFLOW
    except WPolarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
