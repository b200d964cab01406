"""Command-line interface.

Exit codes: 0 pass, 1 negative result (the mathematics says no), 2 input
error, 3 internal inconsistency, 4 refused at the summability gate.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile

from . import jsonio
from .fourier import char_fn
from .groups import coset_labels, is_corwin, power_subgroup, torsion_subgroup
from .kb import (
    DecompositionError,
    InconsistencyError,
    NotKacBernsteinError,
    TheoremViolation,
    check_eq3,
    decompose,
    oracle_equivalence,
    remark3_check,
    theorem_b_check,
)
from .measures import DEFAULT_TOL
from .torus import Case1Params, GateRefused, Remark2Config, case1_verify, remark2_verify

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_INTERNAL, EXIT_GATE = 0, 1, 2, 3, 4


def _emit(report: dict, out: str | None) -> None:
    text = jsonio.dumps(report)
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    with tempfile.NamedTemporaryFile("w", dir=directory, delete=False, encoding="utf-8") as fh:
        fh.write(text)
        tmp = fh.name
    os.replace(tmp, out)


def _elements(sub) -> list:
    return [list(e) for e in sub.elements()]


def _load_pair(args):
    mu1 = jsonio.load_measure(args.mu1, args.tol)
    mu2 = jsonio.load_measure(args.mu2, args.tol)
    if mu1.group != mu2.group:
        raise jsonio.InputError("the two measures live on different groups")
    return mu1, mu2


def cmd_info(args) -> int:
    g = jsonio.load_group(args.group)
    _, reps = coset_labels(g, power_subgroup(g, 2))
    report = {
        "command": "info",
        "group": jsonio.group_to_json(g),
        "order": len(g),
        "torsion_2": _elements(torsion_subgroup(g, 2)),
        "power_2": _elements(power_subgroup(g, 2)),
        "corwin": is_corwin(g),
        "dual_cosets_of_power_2": [list(r) for r in reps],
    }
    _emit(report, args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    mu1, mu2 = _load_pair(args)
    signed = not (mu1.is_probability(args.tol) and mu2.is_probability(args.tol))
    try:
        eq = oracle_equivalence(mu1, mu2, args.tol, allow_signed=signed)
    except ValueError as exc:
        raise jsonio.InputError(str(exc)) from None
    report = {
        "command": "check",
        "group": jsonio.group_to_json(mu1.group),
        "independent": eq.holds,
        "exact": eq.exact,
        "witness": None if eq.witness is None else {"u": list(eq.witness[0]), "v": list(eq.witness[1])},
        "max_residual": eq.max_residual,
    }
    _emit(report, args.out)
    return EXIT_OK if eq.holds else EXIT_NO


def cmd_decompose(args) -> int:
    mu1, mu2 = _load_pair(args)
    try:
        rep = decompose(mu1, mu2, args.tol, args.residual_tol, args.extension)
    except NotKacBernsteinError as exc:
        u, v = exc.witness
        _emit({"command": "decompose", "independent": False, "witness": {"u": list(u), "v": list(v)}}, args.out)
        return EXIT_NO
    except DecompositionError as exc:
        _emit({"command": "decompose", "independent": True, "error": {"stage": exc.stage, "message": str(exc)}}, args.out)
        return EXIT_INTERNAL
    except ValueError as exc:
        raise jsonio.InputError(str(exc)) from None
    body = {"command": "decompose", "independent": True}
    body.update(rep.to_dict())
    body["tolerance"] = rep.tolerance
    _emit(body, args.out)
    return EXIT_OK if rep.ok else EXIT_INTERNAL


def cmd_theorem_b(args) -> int:
    mu1, mu2 = _load_pair(args)
    g = mu1.group
    if len(g) % 2 == 0:
        raise jsonio.InputError(f"{g} has elements of order 2")
    eq = check_eq3(char_fn(mu1), char_fn(mu2), args.tol)
    if not eq:
        u, v = eq.witness
        _emit({"command": "theorem-b", "independent": False, "witness": {"u": list(u), "v": list(v)}}, args.out)
        return EXIT_NO
    try:
        w = theorem_b_check(mu1, mu2, args.tol)
    except TheoremViolation as exc:
        _emit({"command": "theorem-b", "independent": True, "error": str(exc)}, args.out)
        return EXIT_INTERNAL
    except ValueError as exc:
        raise jsonio.InputError(str(exc)) from None
    _emit({
        "command": "theorem-b",
        "independent": True,
        "K": _elements(w.K),
        "x1": list(w.x1),
        "x2": list(w.x2),
        "shift": list(w.shift),
    }, args.out)
    return EXIT_OK


def cmd_remark3(args) -> int:
    mu = jsonio.load_measure(args.mu, args.tol)
    eq = check_eq3(char_fn(mu), char_fn(mu), args.tol)
    if not eq:
        u, v = eq.witness
        _emit({"command": "remark3", "independent": False, "witness": {"u": list(u), "v": list(v)}}, args.out)
        return EXIT_NO
    try:
        ok = remark3_check(mu, args.tol)
    except DecompositionError as exc:
        _emit({"command": "remark3", "independent": True, "error": {"stage": exc.stage, "message": str(exc)}}, args.out)
        return EXIT_INTERNAL
    except ValueError as exc:
        raise jsonio.InputError(str(exc)) from None
    _emit({"command": "remark3", "independent": True, "holds": ok}, args.out)
    return EXIT_OK if ok else EXIT_INTERNAL


def cmd_torus_case1(args) -> int:
    try:
        p = Case1Params(sigma=args.sigma, m=args.m, q=args.q, t1=args.t1, t2=args.t2, nmax=args.nmax)
        rep = case1_verify(p, window=args.window, grid=args.grid)
    except ValueError as exc:
        raise jsonio.InputError(str(exc)) from None
    body = {"command": "torus-case1"}
    body.update(rep.to_dict())
    _emit(body, args.out)
    return EXIT_OK if rep.ok else EXIT_NO


def cmd_remark2(args) -> int:
    try:
        c = Remark2Config(sigma=args.sigma, nmax=args.nmax, grid=args.grid)
        rep = remark2_verify(c)
    except GateRefused as exc:
        _emit({"command": "remark2", "refused": True, "gate_sum": exc.gate_sum, "tail_bound": exc.tail_bound}, args.out)
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_GATE
    except ValueError as exc:
        raise jsonio.InputError(str(exc)) from None
    body = {"command": "remark2", "refused": False}
    body.update(rep.to_dict())
    _emit(body, args.out)
    return EXIT_OK if rep.ok else EXIT_NO


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sumdiff", description="Independence of sum and difference on finite Abelian groups.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, tol=True):
        if tol:
            p.add_argument("--tol", type=_positive, default=DEFAULT_TOL, help="comparison tolerance (default 1e-9)")
        p.add_argument("--out", help="write the JSON report here instead of stdout")

    p = sub.add_parser("info", help="describe a group")
    p.add_argument("group")
    common(p, tol=False)
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("check", help="test a pair for independent sum and difference")
    p.add_argument("mu1")
    p.add_argument("mu2")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("decompose", help="factor a pair with independent sum and difference")
    p.add_argument("mu1")
    p.add_argument("mu2")
    common(p)
    p.add_argument("--residual-tol", type=_positive, default=1e-8)
    p.add_argument("--extension", choices=("minimal", "coset"), default="minimal")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("theorem-b", help="odd-order groups: recover m_K * E_x factors")
    p.add_argument("mu1")
    p.add_argument("mu2")
    common(p)
    p.set_defaults(func=cmd_theorem_b)

    p = sub.add_parser("remark3", help="identically distributed pair: pi on 2-torsion with pi*pi = E_0")
    p.add_argument("mu")
    common(p)
    p.set_defaults(func=cmd_remark3)

    p = sub.add_parser("torus-case1", help="the V = Z(m) family on the circle")
    p.add_argument("--sigma", type=float, default=0.5)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--q", type=float, default=0.7)
    p.add_argument("--t1", type=float, default=0.0)
    p.add_argument("--t2", type=float, default=0.0)
    p.add_argument("--nmax", type=int, default=64)
    p.add_argument("--window", type=int, default=32)
    p.add_argument("--grid", type=int, default=1024)
    common(p, tol=False)
    p.set_defaults(func=cmd_torus_case1)

    p = sub.add_parser("remark2", help="the sign-table pair on the 2-torus")
    p.add_argument("--sigma", type=float, default=2.0)
    p.add_argument("--nmax", type=int, default=16)
    p.add_argument("--grid", type=int, default=256)
    common(p, tol=False)
    p.set_defaults(func=cmd_remark2)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except jsonio.InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
