"""Command-line interface: ``bvtp <command> <problem-file> [options]``.

Commands: validate, charfn, eigs, eigenfunction, green, solve, expand,
verify.  Data goes to stdout or --out; diagnostics go to stderr.  Every
output embeds a run manifest (problem path, command, options, version,
wall-clock duration) as a header so results are reproducible.  Exit codes:
0 success, 1 input error, 2 numerical failure; verify exits with the number
of failed checks (capped at 125).
"""

import argparse
import json
import sys
import time

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import __version__, hilbert, resolvent, spectrum, verify
from .errors import BvtpError, ProblemDefinitionError, ProblemFileError
from .problem import validate_problem
from .problemfile import read_problem_file
from .solutions import characteristic_detail

_EXIT_INPUT = 1
_EXIT_NUMERIC = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(_EXIT_INPUT)


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _manifest(args, command, options, started):
    return {
        "problem": args.problem,
        "command": command,
        "options": options,
        "output": args.out or "-",
        "format": args.format,
        "version": __version__,
        "duration_s": round(time.monotonic() - started, 6),
    }


def _emit(args, columns, rows, manifest):
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        if args.format == "csv":
            out.write("# manifest: " + json.dumps(manifest, sort_keys=True) + "\n")
            out.write(",".join(columns) + "\n")
            for row in rows:
                out.write(",".join(_fmt(v) for v in row) + "\n")
        else:
            out.write(json.dumps({"manifest": manifest}, sort_keys=True) + "\n")
            for row in rows:
                rec = {c: (int(v) if isinstance(v, (int, np.integer)) else float(v))
                       for c, v in zip(columns, row)}
                out.write(json.dumps(rec, sort_keys=True) + "\n")
    finally:
        if args.out:
            out.close()


def _load(args):
    spec = read_problem_file(args.problem)
    return validate_problem(spec)


def _parse_f(text):
    kind, _, rest = text.partition(":")
    if kind == "const":
        v = float(rest)
        return lambda xs: np.full(np.asarray(xs, dtype=float).shape, v)
    if kind == "poly":
        coeffs = np.asarray([float(p) for p in rest.split(",")], dtype=float)
        return lambda xs: npoly.polyval(np.asarray(xs, dtype=float), coeffs)
    raise ProblemFileError(
        f"bad function specifier {text!r}; use 'const:v' or 'poly:c0,c1,...'")


def _off_interface_grid(problem, count):
    span = problem.b - problem.a
    xs = np.linspace(problem.a + 1e-6 * span, problem.b - 1e-6 * span, count)
    for xi in problem.xi:
        near = np.abs(xs - xi) < 1e-9 * span
        xs[near] += 1.3e-4 * span
    return xs


# ---------------------------------------------------------------- commands

def cmd_validate(args):
    try:
        problem = _load(args)
    except (ProblemFileError, ProblemDefinitionError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return _EXIT_INPUT
    print(f"kappa1={problem.kappa1:g} kappa2={problem.kappa2:g}")
    for i in range(1, problem.n + 1):
        minors = " ".join(
            f"{j}{k}={problem.theta(i, j, k):g}"
            for (j, k) in ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)))
        print(f"theta {i}: {minors}")
    print("V = " + " ".join(f"{v:g}" for v in problem.interval_weights))
    return 0


def cmd_charfn(args):
    started = time.monotonic()
    problem = _load(args)
    samples = spectrum.sample_characteristic(
        problem, (args.window[0], args.window[1]), args.grid, args.tol)
    rows = [(lam, w) for lam, w in samples]
    man = _manifest(args, "charfn", {"window": list(args.window),
                                     "grid": args.grid, "tol": args.tol}, started)
    _emit(args, ("lambda", "omega"), rows, man)
    return 0


def cmd_eigs(args):
    started = time.monotonic()
    problem = _load(args)
    spec = spectrum.eigenvalues(problem, tuple(args.window), args.grid,
                                tol=args.tol, ivp_tol=args.ivp_tol)
    rows = [
        (k, lam, d.abs_omega, d.bracket[0], d.bracket[1], d.iterations)
        for k, (lam, d) in enumerate(zip(spec.eigenvalues, spec.diagnostics), start=1)
    ]
    man = _manifest(args, "eigs", {"window": list(args.window), "grid": args.grid,
                                   "tol": args.tol, "ivp_tol": args.ivp_tol}, started)
    _emit(args, ("index", "lambda", "abs_omega", "bracket_lo", "bracket_hi",
                 "iterations"), rows, man)
    return 0


def cmd_eigenfunction(args):
    started = time.monotonic()
    problem = _load(args)
    spec = spectrum.eigenvalues(problem, tuple(args.window), args.grid,
                                tol=args.tol, ivp_tol=args.ivp_tol)
    if args.index < 1 or args.index > len(spec.eigenvalues):
        print(f"index {args.index} outside the {len(spec.eigenvalues)} "
              "eigenvalues found in the window", file=sys.stderr)
        return _EXIT_INPUT
    lam = spec.eigenvalues[args.index - 1]
    psi = spectrum.eigenfunction(problem, lam, args.tol, ivp_tol=args.ivp_tol)
    rows = []
    for i in range(1, problem.n + 2):
        lo, hi = problem.subinterval(i)
        xs = np.linspace(lo, hi, args.points)
        vals = psi.f.eval_piece(i, xs)
        for x, u, du in zip(xs, vals[0], vals[1]):
            rows.append((x, u.real, du.real))
    man = _manifest(args, "eigenfunction",
                    {"window": list(args.window), "index": args.index,
                     "lambda": lam, "f1": complex(psi.f1).real,
                     "f2": complex(psi.f2).real, "points": args.points,
                     "tol": args.tol}, started)
    _emit(args, ("x", "u", "du"), rows, man)
    return 0


def cmd_green(args):
    started = time.monotonic()
    problem = _load(args)
    xs = _off_interface_grid(problem, args.grid)
    detail = characteristic_detail(problem, args.lam, args.tol)
    resolvent._check_away_from_spectrum(detail.omega, args.lam)
    rows = []
    for x in xs:
        for y in xs:
            g = resolvent.greens(problem, args.lam, float(x), float(y), args.tol)
            rows.append((x, y, complex(g).real))
    man = _manifest(args, "green", {"lambda": args.lam, "grid": args.grid,
                                    "tol": args.tol}, started)
    _emit(args, ("x", "y", "g"), rows, man)
    return 0


def cmd_solve(args):
    started = time.monotonic()
    problem = _load(args)
    f = _parse_f(args.f)
    sol = resolvent.solve_resolvent(problem, args.lam, f, tol=args.tol)
    rows = []
    for i in range(1, problem.n + 2):
        lo, hi = problem.subinterval(i)
        xs = np.linspace(lo, hi, args.points)
        u, du = sol.u.eval_pair_piece(i, xs)
        for x, uv, duv in zip(xs, u, du):
            rows.append((x, complex(uv).real, complex(duv).real))
    man = _manifest(args, "solve",
                    {"lambda": args.lam, "f": args.f, "points": args.points,
                     "tol": args.tol,
                     "residual_ode": sol.residual_ode,
                     "residual_bc": sol.residual_bc,
                     "residual_trans": sol.residual_trans}, started)
    _emit(args, ("x", "u", "du"), rows, man)
    return 0


def cmd_expand(args):
    started = time.monotonic()
    problem = _load(args)
    f = _parse_f(args.f)
    result = hilbert.expand(problem, f, args.n, tuple(args.window),
                            tol=args.tol, grid=args.grid)
    F = hilbert.as_augmented(f)
    psis = [spectrum.eigenfunction(problem, lam, args.tol)
            for lam in result.eigenvalues]
    rows = []
    for s in range(1, args.n + 1):
        terms = [(1.0, F)] + [(-c, p) for c, p in
                              zip(result.coefficients[:s], psis[:s])]
        diff = spectrum.AugmentedFunction(
            f=hilbert.CombinedPieces(terms, mesh_source=psis[s - 1]),
            f1=-sum(c * p.f1 for c, p in zip(result.coefficients[:s], psis[:s])),
            f2=-sum(c * p.f2 for c, p in zip(result.coefficients[:s], psis[:s])))
        resid = hilbert.norm_h(problem, diff)
        rows.append((s, result.eigenvalues[s - 1],
                     complex(result.coefficients[s - 1]).real, resid))
    man = _manifest(args, "expand", {"n": args.n, "window": list(args.window),
                                     "f": args.f, "tol": args.tol,
                                     "l2_residual": result.l2_residual}, started)
    _emit(args, ("s", "lambda", "coeff", "residual"), rows, man)
    return 0


def cmd_verify(args):
    started = time.monotonic()
    problem = _load(args)
    results = verify.run_all(problem, fast=args.fast)
    failures = sum(0 if r["passed"] else 1 for r in results)
    payload = {
        "manifest": _manifest(args, "verify", {"fast": args.fast}, started),
        "checks": results,
        "failures": failures,
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if not args.quiet:
        for r in results:
            status = "pass" if r["passed"] else "FAIL"
            print(f"{status} {r['name']}: {r['detail']}", file=sys.stderr)
    return min(failures, 125)


# ------------------------------------------------------------------ parser

def _build_parser():
    p = _Parser(prog="bvtp", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, window=False):
        sp.add_argument("problem", help="problem-definition file")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--format", choices=("csv", "jsonl"), default="csv")
        sp.add_argument("--quiet", action="store_true",
                        help="suppress progress diagnostics on stderr")
        sp.add_argument("--tol", type=float, default=1e-10)
        if window:
            sp.add_argument("--window", type=float, nargs=2, required=True,
                            metavar=("LO", "HI"))

    sp = sub.add_parser("validate", help="check a problem file; print derived data")
    common(sp)
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("charfn", help="sample the characteristic function")
    common(sp, window=True)
    sp.add_argument("--grid", type=int, default=201)
    sp.set_defaults(fn=cmd_charfn)

    sp = sub.add_parser("eigs", help="eigenvalue table over a window")
    common(sp, window=True)
    sp.add_argument("--grid", type=int, default=None)
    sp.add_argument("--ivp-tol", dest="ivp_tol", type=float, default=1e-12)
    sp.set_defaults(fn=cmd_eigs)

    sp = sub.add_parser("eigenfunction", help="dump one normalized eigenfunction")
    common(sp, window=True)
    sp.add_argument("--index", type=int, required=True,
                    help="1-based index within the window")
    sp.add_argument("--grid", type=int, default=None)
    sp.add_argument("--points", type=int, default=201,
                    help="sample points per subinterval")
    sp.add_argument("--ivp-tol", dest="ivp_tol", type=float, default=1e-12)
    sp.set_defaults(fn=cmd_eigenfunction)

    sp = sub.add_parser("green", help="Green's kernel on a grid")
    common(sp)
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--grid", type=int, default=21)
    sp.set_defaults(fn=cmd_green)

    sp = sub.add_parser("solve", help="resolvent solve (lambda I - L) u = f")
    common(sp)
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--f", required=True, help="'const:v' or 'poly:c0,c1,...'")
    sp.add_argument("--points", type=int, default=201)
    sp.set_defaults(fn=cmd_solve)

    sp = sub.add_parser("expand", help="eigenfunction expansion of f")
    common(sp, window=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--f", required=True)
    sp.add_argument("--grid", type=int, default=None)
    sp.set_defaults(fn=cmd_expand)

    sp = sub.add_parser("verify", help="run the full invariant suite")
    common(sp)
    sp.add_argument("--fast", action="store_true")
    sp.set_defaults(fn=cmd_verify)
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ProblemFileError, ProblemDefinitionError, FileNotFoundError,
            PermissionError, ValueError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return _EXIT_INPUT
    except BvtpError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return _EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
