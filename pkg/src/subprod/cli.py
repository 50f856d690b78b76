"""Command-line interface: JSON in, JSON out.

Exit codes: 0 pass, 1 check failed, 2 input error, 3 numerical error,
4 two independent routes disagree.
"""
from __future__ import annotations

import argparse
import sys
import warnings

import numpy as np

from . import cpsg, fock, jsonio, reps, sampling, systems
from .checks import Check
from .kernel import CHECK_TOL, InvalidInput, NumericalFailure, orthonormalize
from .ncpoly import HomogeneousIdeal, contains, membership_residual, parse_poly, parse_word

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NUMERIC, EXIT_DISAGREE = 0, 1, 2, 3, 4

CHECKS = ("standard", "cuntz", "subshift", "rep", "vn", "piece")


def _word(w, d: int):
    if isinstance(w, str):
        return parse_word(w, d)
    return tuple(int(a) for a in w)


def build_system(spec: dict, N: int | None = None) -> systems.SubproductSystem:
    """Construct a system from a spec object; ``N`` overrides spec["N"]."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise InvalidInput("system spec needs a 'kind'")
    kind = spec["kind"]
    d = spec.get("d")
    if N is None:
        N = spec.get("N")
    try:
        d = None if d is None else int(d)
        N = None if N is None else int(N)
    except (TypeError, ValueError):
        raise InvalidInput("d and N must be integers") from None
    if kind in ("q", "matrixA"):
        d = 2 if kind == "matrixA" else len(spec.get("q", []))
    if kind == "fibers" and d is None and spec.get("fibers"):
        d = jsonio.decode_matrix(spec["fibers"][0]).shape[0]
    if d is None or d < 1:
        raise InvalidInput("spec needs a positive 'd'")
    if N is None:
        N = systems.default_N(d)
    if N < 1:
        raise InvalidInput("N must be >= 1")

    if kind == "ideal":
        gens = spec.get("generators")
        if not gens:
            raise InvalidInput("ideal spec needs 'generators'")
        return systems.from_ideal(HomogeneousIdeal.parse(d, gens), N)
    if kind == "forbidden":
        W = [_word(w, d) for w in spec.get("words", [])]
        return systems.from_forbidden_words(W, d, N, bool(spec.get("prune", False)))
    if kind == "symmetric":
        return systems.symmetric(d, N)
    if kind == "full":
        return systems.full(d, N)
    if kind == "q":
        return systems.q_commuting(jsonio.decode_matrix(spec["q"]), N)
    if kind == "matrixA":
        if "A" not in spec:
            raise InvalidInput("matrixA spec needs 'A'")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return systems.from_matrix_A(jsonio.decode_matrix(spec["A"]), N)
    if kind == "fibers":
        frames = [orthonormalize(jsonio.decode_matrix(f)) for f in spec.get("fibers", [])]
        if not frames:
            raise InvalidInput("fibers spec needs a non-empty 'fibers' list")
        return systems.maximal_from_fibers(frames, N, d)
    raise InvalidInput(f"unknown system kind {kind!r}")


def _emit(out, obj):
    out.write(jsonio.dumps(obj) + "\n")


def _tol(args) -> float:
    return CHECK_TOL if args.tol is None else args.tol


def _system(args):
    if not args.spec:
        raise InvalidInput("--spec is required")
    spec = jsonio.load_json(args.spec)
    return spec, build_system(spec, args.N)


# ---------------------------------------------------------------------------

def cmd_dims(args, out) -> int:
    _, X = _system(args)
    obj = {"dims": X.dims}
    if args.frames:
        obj["frames"] = [jsonio.encode_matrix(f.frame) for f in X.fibers]
    _emit(out, obj)
    return EXIT_OK


def _load_rep(args, X):
    if args.rep:
        return jsonio.decode_rep(jsonio.load_json(args.rep))
    raise InvalidInput("--rep is required for this check")


def _random_polys(args, d: int, N: int):
    rng = sampling.rng_from(args.seed)
    deg = max(0, min(2, (N - 4) // 2))
    return sampling.random_poly(d, deg, rng), sampling.random_poly(d, deg, rng)


def run_check(args, X) -> list:
    tol = _tol(args)
    name = args.check
    if name == "standard":
        rep = systems.validate_standard(X, tol)
        return [Check("standard", rep.max_residual, tol, (1, X.N))]
    if name == "cuntz":
        return [fock.cuntz_check(fock.build(X), args.k or 1, tol)]
    if name == "subshift":
        return fock.subshift_relations_check(fock.build(X), args.k, tol)
    if name == "rep":
        report = reps.is_representation(X, _load_rep(args, X), tol)
        return [Check(f"rep_n{n}", r, tol, (n, n)) for n, r in report.residuals.items()]
    if name == "vn":
        T = _load_rep(args, X)
        if args.p is not None or args.q is not None:
            p = parse_poly(args.p or "1", X.d)
            q = parse_poly(args.q or "1", X.d)
        else:
            p, q = _random_polys(args, X.d, X.N)
        res = reps.vn_inequality_check(X, T, p, q)
        return [Check("vn", max(0.0, res.lhs - res.rhs), res.slack, (0, X.N))]
    if name == "piece":
        Y = _outer(args, X)
        T = _load_rep(args, Y) if args.rep else reps.shift_tuple(fock.build(Y))
        piece = reps.maximal_piece(X, Y, T, tol)
        return [Check("piece", reps.piece_residual(X, T, piece.space), tol, (1, X.N))]
    raise InvalidInput(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")


def cmd_check(args, out) -> int:
    if args.check not in CHECKS:
        raise InvalidInput(f"unknown check {args.check!r}; choose from {', '.join(CHECKS)}")
    _, X = _system(args)
    results = run_check(args, X)
    for c in results:
        _emit(out, c.as_dict())
    return EXIT_OK if all(c.passed for c in results) else EXIT_FAIL


def cmd_membership(args, out) -> int:
    spec, X = _system(args)
    if spec.get("kind") != "ideal":
        raise InvalidInput("membership needs a spec of kind 'ideal'")
    if args.poly is None:
        raise InvalidInput("--poly is required")
    J = HomogeneousIdeal.parse(X.d, spec["generators"])
    p = parse_poly(args.poly, X.d)
    if not p.is_homogeneous():
        raise InvalidInput("polynomial must be homogeneous")
    if p.degree > X.N:
        raise InvalidInput(f"degree {p.degree} exceeds N = {X.N}")
    tol = _tol(args)
    F = fock.build(X)
    via_shift = fock.membership_via_shift(F, p, tol)
    via_linear = contains(J, p, tol)
    r_shift = 0.0 if p.is_zero() else fock.shift_membership_residual(F, p)
    r_linear = 0.0 if p.is_zero() else membership_residual(J, p)
    _emit(out, {
        "in_ideal": bool(via_linear and via_shift),
        "via_shift": bool(via_shift),
        "via_linear": bool(via_linear),
        "residuals": {"shift": r_shift, "linear": r_linear},
    })
    return EXIT_OK if via_shift == via_linear else EXIT_DISAGREE


def cmd_shift(args, out) -> int:
    _, X = _system(args)
    F = fock.build(X)
    obj = {
        "dims": X.dims,
        "offsets": list(F.offsets),
        "total_dim": F.total_dim,
        "row_norm": fock.row_norm(F),
    }
    if args.matrices:
        obj["matrices"] = [jsonio.encode_matrix(S) for S in F.shifts]
    _emit(out, obj)
    return EXIT_OK


def cmd_iso_q(args, out) -> int:
    if args.q is None or args.r is None:
        raise InvalidInput("--q and --r are required")
    q = jsonio.decode_matrix(jsonio.load_json(args.q))
    r = jsonio.decode_matrix(jsonio.load_json(args.r))
    N = args.N
    res = systems.iso_q(q, r, N)
    if res is None:
        _emit(out, {"isomorphic": False, "sigma": None})
        return EXIT_OK
    tol = 1e-9 if args.tol is None else args.tol
    obj = {
        "isomorphic": True,
        "sigma": [s + 1 for s in res.sigma],
        "fiber_residual": res.check.fiber_residual,
        "product_residual": res.check.product_residual,
        "pass": res.check.residual <= tol,
    }
    _emit(out, obj)
    return EXIT_OK if obj["pass"] else EXIT_FAIL


def cmd_classify_a(args, out) -> int:
    if args.A is None:
        raise InvalidInput("--A is required")
    inv = systems.classify_A(jsonio.decode_matrix(jsonio.load_json(args.A)))
    _emit(out, {
        "rank_sym": inv.rank_sym,
        "rank_antisym": inv.rank_antisym,
        "ratio": list(inv.ratio),
        "phase": inv.phase,
    })
    return EXIT_OK


def cmd_cp(args, out) -> int:
    if args.cp is None:
        raise InvalidInput("--cp is required")
    theta = jsonio.decode_cp(jsonio.load_json(args.cp))
    N = args.N or 4
    tol = _tol(args)
    dims = [cpsg.arveson_fiber(theta, n).dim for n in range(1, N + 1)]
    cois = {}
    for m in range(1, N):
        for n in range(1, N - m + 1):
            cois[f"{m},{n}"] = cpsg.coisometry_check(theta, m, n)
    worst = max(cois.values(), default=0.0)
    _emit(out, {"dims": dims, "coisometry": cois, "residual": worst, "pass": worst <= tol})
    return EXIT_OK if worst <= tol else EXIT_FAIL


def _outer(args, X):
    if args.outer is None:
        raise InvalidInput("--outer is required")
    return build_system(jsonio.load_json(args.outer), X.N)


def cmd_piece(args, out) -> int:
    _, X = _system(args)
    Y = _outer(args, X)
    T = jsonio.decode_rep(jsonio.load_json(args.rep)) if args.rep else reps.shift_tuple(fock.build(Y))
    tol = _tol(args)
    piece = reps.maximal_piece(X, Y, T, tol)
    res = reps.piece_residual(X, T, piece.space)
    obj = {"dim": piece.space.dim, "iterations": piece.iterations, "dims": piece.dims,
           "residual": res, "pass": res <= tol}
    if args.frames:
        obj["frame"] = jsonio.encode_matrix(piece.space.frame)
    _emit(out, obj)
    return EXIT_OK if res <= tol else EXIT_FAIL


COMMANDS = {
    "dims": cmd_dims,
    "check": cmd_check,
    "membership": cmd_membership,
    "shift": cmd_shift,
    "iso-q": cmd_iso_q,
    "classify-a": cmd_classify_a,
    "cp": cmd_cp,
    "piece": cmd_piece,
}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subprod", description="Standard subproduct systems toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--spec", help="system spec: JSON file or inline JSON")
        p.add_argument("--N", type=int, help="truncation degree (overrides the spec)")
        p.add_argument("--tol", type=float, help="residual tolerance")
        p.add_argument("--seed", type=int, default=0)
        return p

    common(sub.add_parser("dims", help="fiber dimensions")).add_argument("--frames", action="store_true")
    p = common(sub.add_parser("check", help="run a named check"))
    p.add_argument("--check", required=True, help=", ".join(CHECKS))
    p.add_argument("--k", type=int)
    p.add_argument("--rep", help="representation JSON")
    p.add_argument("--outer", help="outer system spec for the piece check")
    p.add_argument("--p")
    p.add_argument("--q")
    p = common(sub.add_parser("membership", help="ideal membership by two routes"))
    p.add_argument("--poly")
    common(sub.add_parser("shift", help="X-shift matrices")).add_argument("--matrices", action="store_true")
    p = common(sub.add_parser("iso-q", help="isomorphism of q-commuting systems"))
    p.add_argument("--q")
    p.add_argument("--r")
    p = common(sub.add_parser("classify-a", help="invariants of a 2 x 2 matrix system"))
    p.add_argument("--A")
    p = common(sub.add_parser("cp", help="Kraus-space fibers and coisometry residuals"))
    p.add_argument("--cp", help="CP map JSON")
    p = common(sub.add_parser("piece", help="maximal piece of a representation"))
    p.add_argument("--outer", help="outer system spec")
    p.add_argument("--rep", help="representation JSON (default: shift of the outer system)")
    p.add_argument("--frames", action="store_true")
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return COMMANDS[args.command](args, out)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalFailure, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
