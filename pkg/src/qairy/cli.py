"""Command-line front end.

Exit codes: 0 success, 1 negative verdict (a JSON body is still written),
2 usage error, 3 internal inconsistency (failed residual or verification).
Options may also come from a flat ``key=value`` file given with --config;
flags on the command line win.  Set QAIRY_VERBOSE=1 (or 2) for logging.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from . import __version__
from .airy_solver import (
    AiryStructure,
    InconsistentStructure,
    residual_check,
    solve,
    structure_from_spec,
)
from .classify import (
    append_one_cycle,
    classification_table,
    classify,
    structure_bounds,
)
from .dilaton import (
    NotAiryForm,
    ShiftedModes,
    Singular,
    determinant,
    invert_matrix,
    root_of_unity_shifts,
    shift_matrix,
)
from .scalar import CycloScalar, rational
from .speccurve import NotAdmissible, curve_for, render
from .verify import SUITES, run_suite
from .weyl import Window
from .wmodes import TwistSpec, UnsupportedRho, WindowTooSmall

log = logging.getLogger("qairy")

OK, REJECTED, USAGE, INCONSISTENT = 0, 1, 2, 3

# options that may be supplied by a config file, with their types
CONFIG_KEYS = {
    "rho": int, "n": int, "s": int, "shifts": str, "degree": int, "window": int,
    "r_max": int, "suite": str, "format": str, "output": str, "i": int, "m": int,
    "input": str,
}
DEFAULTS = {"shifts": "roots", "degree": 5, "r_max": 12, "format": "json", "suite": "all"}


class UsageError(Exception):
    pass


def _parse_scalar(x, order: int) -> CycloScalar:
    if isinstance(x, dict):
        return CycloScalar.from_json(x)
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        if isinstance(x, float) and not x.is_integer():
            raise UsageError(f"non-integer float shift {x!r}; give it as a fraction string")
        return rational(int(x), order)
    if isinstance(x, str):
        return rational(Fraction(x), order)
    raise UsageError(f"cannot read shift {x!r}")


def parse_shifts(text: str, rho: int, n: int) -> tuple:
    if text == "roots":
        return root_of_unity_shifts(rho, n)[0]
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--shifts must be 'roots' or a JSON list: {exc}") from None
    if not isinstance(data, list) or len(data) != n:
        raise UsageError(f"--shifts must list exactly n={n} values")
    try:
        orders = {int(d["N"]) for d in data if isinstance(d, dict)}
        order = max(orders, default=1)
        return tuple(_parse_scalar(d, order) for d in data)
    except (ValueError, KeyError, ZeroDivisionError) as exc:
        raise UsageError(f"bad shift value: {exc}") from None


def read_config(path: str) -> dict:
    out = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for num, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key=value")
        key, value = (t.strip() for t in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{num}: unknown key {key!r}")
        try:
            out[key] = CONFIG_KEYS[key](value)
        except ValueError:
            raise UsageError(f"{path}:{num}: bad value for {key}") from None
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qairy", description="Higher quantum Airy structures from twisted W(gl_r) modules.")
    p.add_argument("--version", action="version", version=f"qairy {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value file; flags override it")
    common.add_argument("--format", choices=["json", "text"])
    common.add_argument("--output", help="write to this path instead of stdout")

    twist = argparse.ArgumentParser(add_help=False)
    twist.add_argument("--rho", type=int, help="cycle length")
    twist.add_argument("--n", type=int, help="number of cycles")
    twist.add_argument("--s", type=int, help="shifted mode index")
    twist.add_argument("--shifts", help="'roots' or a JSON list of n scalars")

    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("construct", parents=[common, twist], help="build shifted modes or the Airy-form operators")
    c.add_argument("--degree", type=int, help="degree cutoff of the materialization")
    c.add_argument("--window", type=int, help="largest mode index kept")
    c.add_argument("--i", type=int, help="emit only H^i_m")
    c.add_argument("--m", type=int)
    c.add_argument("--append", action="store_true", help="append an unshifted one-cycle")
    sub.add_parser("classify", parents=[common, twist], help="decide admissibility")
    e = sub.add_parser("enumerate", parents=[common], help="list admissible data")
    e.add_argument("--r-max", dest="r_max", type=int)
    e.add_argument("--all", dest="show_all", action="store_true", help="include rejected rows")
    sub.add_parser("shift-matrix", parents=[common, twist], help="shift matrix, determinant and inverse")
    so = sub.add_parser("solve", parents=[common, twist], help="free energy up to a degree cutoff")
    so.add_argument("--degree", type=int, help="cutoff D_F")
    so.add_argument("--append", action="store_true")
    so.add_argument("--input", help="Airy structure JSON written by 'construct'")
    sub.add_parser("append", parents=[common, twist], help="try to append an unshifted one-cycle")
    sub.add_parser("curve", parents=[common, twist], help="spectral curve of a family")
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", choices=sorted(SUITES) + ["all"])
    return p


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    conf = read_config(args.config) if getattr(args, "config", None) else {}
    for key in CONFIG_KEYS:
        if getattr(args, key, None) is None and hasattr(args, key):
            setattr(args, key, conf.get(key, DEFAULTS.get(key)))
    for key in ("rho", "n", "s", "degree", "r_max", "window"):
        val = getattr(args, key, None)
        if val is not None and val < 1:
            raise UsageError(f"--{key.replace('_', '-')} must be positive")
    return args


def _need(args, *keys):
    missing = [k for k in keys if getattr(args, k, None) is None]
    if missing:
        raise UsageError("missing " + ", ".join(f"--{k}" for k in missing))


# ---------------------------------------------------------------------------
# commands: each returns (exit code, json payload, text rendering)
# ---------------------------------------------------------------------------

def cmd_classify(args):
    _need(args, "rho", "n", "s")
    Q = parse_shifts(args.shifts, args.rho, args.n)
    v = classify(args.rho, args.n, args.s, Q)
    body = v.to_json()
    text = (f"admissible: case ({v.case_label}), partition {v.partition}" if v.admissible
            else f"rejected: {v.reason}")
    return (OK if v.admissible else REJECTED), body, text


def cmd_enumerate(args):
    rows = classification_table(args.r_max)
    if not args.show_all:
        rows = [r for r in rows if r.admissible]
    lines = [r.to_json() for r in rows]
    text = "\n".join(
        f"rho={r['rho']} n={r['n']} s={r['s']} "
        + (f"case {r['case_label']} {r['partition']}" if r["admissible"] else f"rejected {r['reason']}")
        for r in lines
    )
    return OK, lines, text


def cmd_shift_matrix(args):
    _need(args, "rho", "n")
    Q = parse_shifts(args.shifts, args.rho, args.n)
    M = shift_matrix(args.rho, Q)
    inv = invert_matrix(M)
    ok = not isinstance(inv, Singular)
    body = {
        "rho": args.rho,
        "n": args.n,
        "matrix": M.to_json(),
        "det": determinant(M).to_json(),
        "invertible": ok,
        "inverse": [[c.to_json() for c in row] for row in inv] if ok else None,
    }
    text = "\n".join(" ".join(str(c) for c in row) for row in M.rows) + f"\ndet = {determinant(M)}"
    return (OK if ok else REJECTED), body, text


def cmd_construct(args):
    _need(args, "rho", "n", "s")
    Q = parse_shifts(args.shifts, args.rho, args.n)
    if args.i is not None:
        _need(args, "m")
        spec = TwistSpec(args.rho, args.n, args.s, Q)
        window = Window(args.window or 8, args.degree)
        op = ShiftedModes(spec, window)(args.i, args.m)
        return OK, {"i": args.i, "m": args.m, "operator": op.to_json()}, repr(op)
    v = classify(args.rho, args.n, args.s, Q)
    if not v.admissible:
        return REJECTED, {"verdict": v.to_json()}, f"rejected: {v.reason}"
    A = structure_from_spec(args.rho, args.n, args.s, Q, D_F=args.degree, append=args.append)
    if args.window is not None and args.window != A.window.W:
        log.info("window is fixed by the degree cutoff; ignoring --window %s", args.window)
    text = "\n".join(f"{var}: {A.operators[var]!r}" for var in A.variables)
    return OK, A.to_json(), text


def cmd_solve(args):
    if args.input:
        try:
            with open(args.input) as fh:
                A = AiryStructure.from_json(json.load(fh))
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot load structure: {exc}") from None
    else:
        _need(args, "rho", "n", "s")
        Q = parse_shifts(args.shifts, args.rho, args.n)
        v = classify(args.rho, args.n, args.s, Q)
        if not v.admissible:
            return REJECTED, {"verdict": v.to_json()}, f"rejected: {v.reason}"
        A = structure_from_spec(args.rho, args.n, args.s, Q, D_F=args.degree, append=args.append)
    A.validate()
    F = solve(A, args.degree)
    res = residual_check(A, F, args.degree)
    body = F.to_json()
    body["residual"] = res
    text = "\n".join(f"h={h} {list(vs)}: {c}" for (h, vs), c in F.items())
    return (OK if res["clean"] else INCONSISTENT), body, text


def cmd_append(args):
    _need(args, "rho", "n", "s")
    Q = parse_shifts(args.shifts, args.rho, args.n)
    v = classify(args.rho, args.n, args.s, Q)
    if not v.admissible:
        return REJECTED, {"verdict": v.to_json()}, f"base rejected: {v.reason}"
    av = append_one_cycle(v.partition, [args.s] * args.n, Q, structure_bounds(args.rho, args.n, args.s))
    text = (f"accepted: partition {av.partition}" if av.accepted
            else f"rejected: {av.reason} {av.witness}")
    return (OK if av.accepted else REJECTED), av.to_json(), text


def cmd_curve(args):
    _need(args, "rho", "n", "s")
    try:
        c = curve_for(args.rho, args.n, args.s)
    except NotAdmissible as exc:
        return REJECTED, {"error": "NotAdmissible", "detail": str(exc)}, f"not admissible: {exc}"
    body = c.to_json()
    text = render(c.polynomial) + " = " + " * ".join(f"({render(f)})" for f in c.factors)
    return (OK if body["verified"] else INCONSISTENT), body, text


def cmd_verify(args):
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    reports = [run_suite(name) for name in names]
    body = {"suites": [r.to_json() for r in reports], "ok": all(r.ok for r in reports)}
    text = "\n".join(f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.passed} passed, {r.failed} failed" for r in reports)
    return (OK if body["ok"] else INCONSISTENT), body, text


COMMANDS = {
    "construct": cmd_construct,
    "classify": cmd_classify,
    "enumerate": cmd_enumerate,
    "shift-matrix": cmd_shift_matrix,
    "solve": cmd_solve,
    "append": cmd_append,
    "curve": cmd_curve,
    "verify": cmd_verify,
}


def _emit(payload, fmt: str, text: str, path: str | None) -> None:
    if fmt == "text":
        out = text + "\n"
    elif isinstance(payload, list):
        out = "".join(json.dumps({"version": __version__, **row}, sort_keys=True) + "\n" for row in payload)
    else:
        out = json.dumps({"version": __version__, **payload}, sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def main(argv=None) -> int:
    level = {"1": logging.INFO, "2": logging.DEBUG}.get(os.environ.get("QAIRY_VERBOSE", ""), logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else OK
    try:
        args = resolve(args)
        code, payload, text = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"qairy: error: {exc}", file=sys.stderr)
        return USAGE
    except UnsupportedRho as exc:
        _emit({"error": "UnsupportedRho", "detail": str(exc)}, args.format, str(exc), args.output)
        return REJECTED
    except (InconsistentStructure, NotAiryForm, WindowTooSmall) as exc:
        _emit({"error": type(exc).__name__, "detail": str(exc)}, args.format, str(exc), args.output)
        return INCONSISTENT
    _emit(payload, args.format, text, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
