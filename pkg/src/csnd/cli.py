"""Command-line interface.

Exit codes: 0 on success, 2 when a mathematical hypothesis of the requested
operation does not hold (a JSON object with a ``reason`` field goes to
stdout), 1 on usage, I/O or validation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import io as fmt
from .continuous import circle_kernel, euclidean_kernel, fourier_identity_check, weighted_tree_kernel
from .demo import format_table, run_demo
from .embedding import constant_shift_decompose, kernel_of_config, quadratic_embed
from .errors import CSNDError, HypothesisNotMet
from .graphs import even_cycle_certificate, girth, parse_expression, path_metric
from .groups import amalgam_cyclic_ball, coxeter_cayley_ball, free_group_ball, word_metric_verdict
from .kernels import (
    KernelMatrix,
    TolerancePolicy,
    classify,
    cnd_decompose,
    csnd_by_bordered_determinant,
    csnd_by_invertibility,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _tol(args) -> TolerancePolicy:
    return TolerancePolicy(args.tol)


def _kernel_output(K: KernelMatrix, args) -> str:
    if getattr(args, "report", False):
        return fmt.canonical_json(classify(K, _tol(args)).to_dict())
    return fmt.canonical_json(fmt.kernel_to_dict(K))


def _exact_block(K: KernelMatrix, tol: TolerancePolicy) -> dict:
    if not K.is_integral:
        return {"applicable": False, "reason": "non-integer entries"}
    try:
        det = csnd_by_invertibility(K, tol, exact=True)
        bordered = csnd_by_bordered_determinant(K, tol, exact=True)
    except HypothesisNotMet as exc:
        return {"applicable": False, "reason": exc.hypothesis}
    return {
        "applicable": True,
        "determinant": str(det.determinant),
        "bordered_determinant": str(bordered.determinant),
        "csnd": bordered.verdict,
    }


def cmd_classify(args) -> int:
    K = fmt.load_kernel(args.infile)
    tol = _tol(args)
    out = classify(K, tol).to_dict()
    if args.exact:
        out["exact"] = _exact_block(K, tol)
    _emit(fmt.canonical_json(out), args.out)
    return 0


def cmd_embed(args) -> int:
    K = fmt.load_kernel(args.infile)
    P = quadratic_embed(K, _tol(args), pivot=args.pivot)
    _emit(fmt.canonical_json(fmt.points_to_dict(P)), args.out)
    return 0


def cmd_kernel_of(args) -> int:
    P = fmt.load_points(args.infile)
    _emit(_kernel_output(kernel_of_config(P), args), args.out)
    return 0


def cmd_decompose(args) -> int:
    K = fmt.load_kernel(args.infile)
    if args.base is not None:
        A, F = cnd_decompose(K, args.base, _tol(args))
        out = {"A": fmt.kernel_to_dict(A), "F": F.tolist(), "base": args.base}
    else:
        dec = constant_shift_decompose(K, _tol(args))
        out = {"A": fmt.kernel_to_dict(dec.A), "c": dec.c, "radius": dec.radius, "shift": dec.shift}
    _emit(fmt.canonical_json(out), args.out)
    return 0


def cmd_graph(args) -> int:
    G = parse_expression(args.expression)
    if args.certificate:
        g, cycle = girth(G)
        cert = even_cycle_certificate(G)
        out = {
            "girth": g,
            "cycle": cycle,
            "certificate": None if cert is None else cert.to_dict(),
        }
        if cert is not None:
            out["value"] = cert.evaluate(path_metric(G))
        _emit(fmt.canonical_json(out), args.out)
    elif args.metric or args.report:
        _emit(_kernel_output(path_metric(G), args), args.out)
    else:
        _emit(fmt.write_edge_list(G), args.out)
    return 0


def cmd_cayley(args) -> int:
    sources = [args.infile is not None, args.free is not None, args.amalgam is not None]
    if sum(sources) != 1:
        raise UsageError("give exactly one of --in, --free, --amalgam")
    if args.verdict:
        if args.infile is None:
            raise UsageError("--verdict needs a presentation file (--in)")
        P = fmt.load_presentation(args.infile)
        v = word_metric_verdict(P, cross_check=args.cross_check, ball_radius=args.radius)
        _emit(fmt.canonical_json(v.to_dict()), args.out)
        return 0
    if args.infile is not None:
        P = fmt.load_presentation(args.infile)
        if P.kind == "coxeter":
            ball = coxeter_cayley_ball(P, args.radius)
        elif P.is_free:
            ball = free_group_ball(len(P.generators), args.radius)
        else:
            raise HypothesisNotMet("free-artin", "Cayley balls are generated only for free Artin presentations")
    elif args.free is not None:
        ball = free_group_ball(args.free, args.radius)
    else:
        m, n, d = args.amalgam
        ball = amalgam_cyclic_ball(m, n, d, args.radius)
    if args.metric or args.report:
        K = ball.interior_metric() if args.interior else path_metric(ball.graph)
        _emit(_kernel_output(K, args), args.out)
    else:
        _emit(fmt.write_edge_list(ball.graph), args.out)
    return 0


def cmd_continuous(args) -> int:
    if args.kind == "fourier":
        lhs, rhs, err = fourier_identity_check(args.t, args.xi, nodes=args.nodes)
        _emit(fmt.canonical_json({"t": args.t, "xi": args.xi, "lhs": lhs, "rhs": rhs, "error": err}), args.out)
        return 0
    if args.infile is None:
        raise UsageError(f"continuous {args.kind} needs --in")
    if args.kind == "euclidean":
        K = euclidean_kernel(fmt.load_points(args.infile))
    elif args.kind == "circle":
        angles, L = fmt.load_circle(args.infile)
        K = circle_kernel(angles, L)
    else:
        K = weighted_tree_kernel(fmt.load_edge_list(args.infile))
    _emit(_kernel_output(K, args), args.out)
    return 0


def cmd_demo(args) -> int:
    rows = run_demo()
    _emit(format_table(rows), args.out)
    return 0 if all(r.passed for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS, help="relative eigenvalue tolerance")
    common.add_argument("--exact", action="store_true", default=argparse.SUPPRESS, help="use exact integer determinants")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write output to a file instead of stdout")

    parser = _Parser(prog="csnd", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="PD/SPD/CND/CSND report for a kernel file")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("embed", parents=[common], help="quadratic embedding of a CND kernel")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--pivot", help="label placed at the origin (default: last)")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("kernel-of", parents=[common], help="squared-distance kernel of a point file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--report", action="store_true", help="print a classification report instead")
    p.set_defaults(func=cmd_kernel_of)

    p = sub.add_parser("decompose", parents=[common], help="write a CSND kernel as -A + c")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--base", help="instead write a CND kernel as -A + F(x) + F(y) about this label")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("graph", parents=[common], help="build a graph from an expression")
    p.add_argument("expression", help='e.g. "wedge(K3@0, C5@2)"')
    g = p.add_mutually_exclusive_group()
    g.add_argument("--metric", action="store_true", help="print the path metric as a kernel")
    g.add_argument("--report", action="store_true", help="classify the path metric")
    g.add_argument("--certificate", action="store_true", help="girth and even-cycle certificate")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("cayley", parents=[common], help="Cayley ball of a group")
    p.add_argument("--in", dest="infile", help="presentation JSON")
    p.add_argument("--free", type=int, metavar="N", help="free group on N generators")
    p.add_argument("--amalgam", type=int, nargs=3, metavar=("M", "N", "D"), help="C_M *_{C_D} C_N")
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--interior", action="store_true", help="restrict --metric/--report to the safe interior")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--metric", action="store_true")
    g.add_argument("--report", action="store_true")
    g.add_argument("--verdict", action="store_true", help="decide CSND of the word metric from the presentation")
    p.add_argument("--cross-check", action="store_true", help="with --verdict, confirm by explicit computation")
    p.set_defaults(func=cmd_cayley)

    p = sub.add_parser("continuous", parents=[common], help="samples of continuous metrics")
    p.add_argument("kind", choices=["euclidean", "circle", "tree", "fourier"])
    p.add_argument("--in", dest="infile", help="points JSON, circle JSON or edge list")
    p.add_argument("--report", action="store_true", help="classify instead of printing the kernel")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--xi", type=float, default=0.0)
    p.add_argument("--nodes", type=int, default=20)
    p.set_defaults(func=cmd_continuous)

    p = sub.add_parser("demo", parents=[common], help="recompute the example catalogue")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.tol = getattr(args, "tol", 1e-9)
    args.exact = getattr(args, "exact", False)
    args.out = getattr(args, "out", None)
    try:
        return args.func(args)
    except HypothesisNotMet as exc:
        sys.stdout.write(fmt.canonical_json({"error": "hypothesis-not-met", "reason": exc.hypothesis, "message": str(exc)}))
        return 2
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"csnd: error: {exc}\n")
        return 1
    except (CSNDError, OSError, ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(f"csnd: error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
