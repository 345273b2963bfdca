"""Command-line front end.

Subcommands: ``factor``, ``verify``, ``reconstruct``, ``random``, ``expand-k``
and ``split``.  Results go to stdout (or ``--output``) as JSON.

Exit codes: 0 success, 1 I/O or validation error, 2 contract violation
(residual above ``--tol`` or an algorithmic error such as a non-unit pivot).
Errors are reported as ``{"error": {"kind": ..., "detail": ...}}``.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import jsonio
from .core import check_symplectic, expand_K, multiply_word, random_word, relative_frobenius
from .elimination import NeighborhoodSpec, factor_near_identity, factor_stable_rank_one
from .errors import SymplecticError
from .homotopy import factor_constant_complex, factor_continuous_family, split_path
from .rings import ComplexApprox, parse_ring

ALGORITHMS = ("near-identity", "bsr1", "complex-pipeline", "family")


class UsageError(Exception):
    pass


def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    return json.loads(Path(path).read_text())


def _emit(obj, args) -> None:
    text = jsonio.dumps(obj) + "\n"
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _ring(args):
    return parse_ring(args.ring) if getattr(args, "ring", None) else None


def _check_algorithm(algorithm: str, ctx) -> None:
    if algorithm == "near-identity" and not (ctx.has_norm or ctx.exact):
        raise UsageError(f"near-identity elimination is not available over {ctx}")
    if algorithm == "bsr1" and not ctx.has_bsr1_witness:
        raise UsageError(f"{ctx} has no stable-rank-one witness")
    if algorithm == "complex-pipeline" and not isinstance(ctx, ComplexApprox):
        raise UsageError("complex-pipeline needs a ComplexApprox matrix")


def cmd_verify(args) -> int:
    M = jsonio.matrix_from_json(_read_json(args.input), _ring(args))
    report = check_symplectic(M, tol=args.tol)
    worst = max(report.residuals.values())
    ok = report.ok and (M.ctx.exact or worst <= args.tol)
    _emit({"symplectic": ok, "residuals": report.residuals}, args)
    return 0 if ok else 2


def cmd_factor(args) -> int:
    data = _read_json(args.input)
    V = NeighborhoodSpec(args.radius)
    if args.algorithm == "family":
        if "x" not in data:
            raise UsageError("family algorithm expects a SampledFamily JSON with an x grid")
        fam = jsonio.family_from_json(data)
        result = factor_continuous_family(fam, V)
        worst = max(
            relative_frobenius(result.reconstruct_at(k), fam.at(k)) for k in range(fam.ctx.grid_size)
        )
        out = result.to_json()
        out["residual"] = worst
        _emit(out, args)
        return 0 if worst <= args.tol else 2

    M = jsonio.matrix_from_json(data, _ring(args))
    _check_algorithm(args.algorithm, M.ctx)
    trace = None
    if args.algorithm == "near-identity":
        word, trace = factor_near_identity(M, V, return_trace=True)
    elif args.algorithm == "bsr1":
        word, trace = factor_stable_rank_one(M, return_trace=True)
    else:
        word = factor_constant_complex(M, V, seed=args.seed, samples=args.samples)
    R = multiply_word(word, M.n, M.ctx)
    if M.ctx.exact:
        residual = 0.0 if R.equals(M) else math.inf
    else:
        residual = relative_frobenius(R, M)
    out = jsonio.word_to_json(word, M.ctx, M.n)
    out["algorithm"] = args.algorithm
    out["residual"] = residual
    if args.emit_trace and trace is not None:
        out["trace"] = trace.to_json(M.ctx)
    _emit(out, args)
    return 0 if residual <= args.tol else 2


def cmd_reconstruct(args) -> int:
    word, ctx, n = jsonio.word_from_json(_read_json(args.input), _ring(args))
    n = args.n or n
    if n is None:
        raise UsageError("word JSON has no n; pass --n")
    _emit(jsonio.matrix_to_json(multiply_word(word, int(n), ctx)), args)
    return 0


def cmd_random(args) -> int:
    ctx = parse_ring(args.ring)
    kinds = tuple(args.kinds.split(","))
    word = random_word(args.n, args.length, ctx, seed=args.seed, radius=args.radius, kinds=kinds)
    if args.matrix:
        _emit(jsonio.matrix_to_json(multiply_word(word, args.n, ctx)), args)
    else:
        _emit(jsonio.word_to_json(word, ctx, args.n), args)
    return 0


def cmd_expand_k(args) -> int:
    ctx = parse_ring(args.ring)
    n = args.n or max(args.i, args.j)
    word = expand_K(args.i, args.j, ctx.parse(args.a), ctx)
    _emit(jsonio.word_to_json(word, ctx, n), args)
    return 0


def cmd_split(args) -> int:
    path = jsonio.path_from_json(_read_json(args.input))
    quots = split_path(path, NeighborhoodSpec(args.radius))
    _emit({"k": len(quots), "quotients": [jsonio.matrix_to_json(Q) for Q in quots]}, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symplectic-factor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, ring_required=False):
        p.add_argument("--ring", required=ring_required, help="Q, F7, Z12, C, C(1e-12), S65 ...")
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--output", help="write JSON here instead of stdout")

    p = sub.add_parser("verify", help="check the symplectic block identities")
    p.add_argument("--input", required=True)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("factor", help="factor a matrix (or family) into elementary factors")
    p.add_argument("--input", required=True)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="bsr1")
    p.add_argument("--radius", type=float, default=0.1)
    p.add_argument("--emit-trace", action="store_true")
    p.add_argument("--samples", type=int, default=129, help="minimum log-path samples for complex-pipeline")
    common(p)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("reconstruct", help="multiply out a word")
    p.add_argument("--input", required=True)
    p.add_argument("--n", type=int)
    common(p)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("random", help="seeded random word or matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--length", type=int, default=10)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--kinds", default="E,F")
    p.add_argument("--matrix", action="store_true", help="emit the product instead of the word")
    common(p, ring_required=True)
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("expand-k", help="write K(i, j, a) as elementary factors")
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--n", type=int)
    common(p, ring_required=True)
    p.set_defaults(func=cmd_expand_k)

    p = sub.add_parser("split", help="telescoping split of a sampled path")
    p.add_argument("--input", required=True)
    p.add_argument("--radius", type=float, default=0.1)
    common(p)
    p.set_defaults(func=cmd_split)
    return parser


def _error(kind: str, detail: str) -> None:
    sys.stdout.write(jsonio.dumps({"error": {"kind": kind, "detail": detail}}) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SymplecticError as exc:
        _error(exc.kind, str(exc))
        return 2
    except (UsageError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        _error(type(exc).__name__, str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
