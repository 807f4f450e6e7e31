"""Command-line front end.

One verb per engine operation; expressions, points, fields and
operators are passed as quoted DSL strings.  Exit status is 0 on
success, 1 on domain errors (including QueerAtPoint, WitnessNotFound
and AxiomViolation), 2 on syntax errors.  Error messages go to stderr
with a machine-greppable reason code as the first token.  Output on
stdout is byte-identical for identical (command, seed, precision);
report verbs can additionally render a figure with --figures DIR.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
from fractions import Fraction

from .errors import EngineError, ParseError
from .expr import Lin, eval_expr, print_expr
from .jets import delta_ell, gradient, hessian
from .parser import (
    parse_expr,
    parse_field,
    parse_mu,
    parse_operator,
    parse_point,
)
from .poisson import (
    bracket,
    bracket_spec,
    check_axioms,
    format_field,
    hamiltonian_field,
    order_at,
    queer_witness,
    sharp,
    tensor_at,
    extension_obstruction_demo,
)
from .truncation import ell_convergence, fd_check, ill_posedness_demo, truncate

log = logging.getLogger("opbrackets")


def _fnum(x: float, precision: int) -> str:
    return format(float(x), f".{precision}g")


def _csv_lines(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _dsl_args(args, expected: int, what: str) -> list[str]:
    """Collect DSL strings from positionals plus any --file contents."""
    texts = list(args.dsl or [])
    for path in args.file or []:
        with open(path, "r", encoding="utf-8") as fh:
            texts.append(fh.read().strip())
    if len(texts) != expected:
        raise ParseError(
            f"expected {expected} {what} argument(s), got {len(texts)}", 0
        )
    return texts


def _spec_from_args(args, *, check: bool = True):
    return bracket_spec(parse_field(args.d1), parse_field(args.d2), check=check)


# ---------------------------------------------------------------------------
# verb handlers


def _cmd_eval(args) -> int:
    (text,) = _dsl_args(args, 1, "expression")
    value = eval_expr(parse_expr(text), parse_point(args.at))
    print(value)
    return 0


def _cmd_grad(args) -> int:
    (text,) = _dsl_args(args, 1, "expression")
    g = gradient(parse_expr(text), parse_point(args.at))
    print(f"v: {g.vpart}")
    print(f"x: {g.xpart}")
    return 0


def _cmd_hess(args) -> int:
    (text,) = _dsl_args(args, 1, "expression")
    h = hessian(parse_expr(text), parse_point(args.at))
    print(f"vv: {h.vv}")
    print(f"vx: {h.vx}")
    print(f"xx: {h.xx}")
    return 0


def _cmd_delta(args) -> int:
    (text,) = _dsl_args(args, 1, "expression")
    print(print_expr(delta_ell(parse_expr(text))))
    return 0


def _cmd_bracket(args) -> int:
    f_text, g_text = _dsl_args(args, 2, "expression")
    spec = _spec_from_args(args)
    result = bracket(spec, parse_expr(f_text), parse_expr(g_text))
    if args.at is not None:
        print(eval_expr(result, parse_point(args.at)))
    else:
        print(print_expr(result))
    return 0


def _cmd_hamfield(args) -> int:
    (h_text,) = _dsl_args(args, 1, "expression")
    spec = _spec_from_args(args)
    print(format_field(hamiltonian_field(spec, parse_expr(h_text))))
    return 0


def _cmd_axioms(args) -> int:
    spec = _spec_from_args(args)
    report = check_axioms(spec, trials=args.trials, seed=args.seed)
    if args.format == "csv":
        print(
            _csv_lines(
                ["axiom", "trials", "failures"],
                [[r.axiom, str(r.trials), str(r.failures)] for r in report.rows],
            )
        )
    else:
        for r in report.rows:
            print(f"{r.axiom}: {r.failures} failure(s) in {r.trials} trials")
        print("all axioms hold" if report.ok else "axioms violated")
    if args.figures:
        from . import figures

        path = figures.save_axioms(report, args.figures)
        log.info("figure written to %s", path)
    if not report.ok:
        report.raise_if_failed()
    return 0


def _cmd_order(args) -> int:
    d = parse_field(args.field)
    print(order_at(d, parse_point(args.at)).value)
    return 0


def _cmd_tensor(args) -> int:
    spec = _spec_from_args(args, check=False)
    print(tensor_at(spec, parse_point(args.at)))
    return 0


def _cmd_witness(args) -> int:
    spec = _spec_from_args(args, check=False)
    w = queer_witness(spec, parse_point(args.at))
    print(f"h: {print_expr(w.h)}")
    print(f"f: {print_expr(w.f)}")
    print(f"value: {w.value}")
    return 0


def _cmd_sharp(args) -> int:
    spec = _spec_from_args(args, check=False)
    tensor = tensor_at(spec, parse_point(args.at))
    image = sharp(tensor, parse_mu(args.mu))
    print(f"v: {image.vpart}")
    print(f"x: {image.xpart}")
    return 0


def _cmd_truncate(args) -> int:
    (text,) = _dsl_args(args, 1, "expression")
    print(truncate(parse_expr(text), args.size))
    return 0


def _cmd_fdcheck(args) -> int:
    (text,) = _dsl_args(args, 1, "expression")
    report = fd_check(
        parse_expr(text), parse_point(args.at), n=args.size, step=args.step
    )
    if args.format == "csv":
        print(
            _csv_lines(
                ["block", "max_rel_err"],
                [[block, _fnum(err, args.precision)] for block, err in report.rows],
            )
        )
    else:
        for block, err in report.rows:
            print(f"{block}: max relative error {_fnum(err, args.precision)}")
    if args.figures:
        from . import figures

        path = figures.save_fdcheck(report, args.figures)
        log.info("figure written to %s", path)
    return 0


def _cmd_ellconv(args) -> int:
    op = parse_operator(args.op)
    try:
        ns = [int(s) for s in args.ns.split(",") if s.strip()]
    except ValueError:
        raise ParseError(f"--ns must be a comma list of integers, got {args.ns!r}", 0)
    rows = ell_convergence(op, ns)
    if args.format == "csv":
        print(
            _csv_lines(
                ["n", "ell_n", "target", "abs_err"],
                [
                    [
                        str(r.n),
                        _fnum(r.ell_n_float, args.precision),
                        str(r.target),
                        _fnum(r.abs_err_float, args.precision),
                    ]
                    for r in rows
                ],
            )
        )
    else:
        for r in rows:
            print(
                f"n={r.n}: diagonal entry {r.ell_n} target {r.target} "
                f"abs err {r.abs_err}"
            )
    if args.figures:
        from . import figures

        path = figures.save_ellconv(rows, args.figures)
        log.info("figure written to %s", path)
    return 0


def _cmd_demo(args) -> int:
    if args.which == "no-extension":
        lhs, rhs = extension_obstruction_demo()
        print(f"lhs = {lhs}")
        print(f"rhs = {rhs}")
        print("the derivation applied to the squared norm does not factor")
        print("through pairings of first derivatives: 2 != 0")
        return 0
    if args.which == "ill-posed":
        report = ill_posedness_demo()
        if args.format == "csv":
            rows = [
                ["bracket_rho_rate", "", print_expr(report.rho_rate)],
                ["kinematic_rho_rate", "", print_expr(report.kinematic_rho_rate)],
                ["consistent", "", "yes" if report.consistent else "no"],
            ]
            for w, rate in report.basis_rates:
                rows.append(["coordinate_rate", str(w.entries[0][0]), print_expr(rate)])
            for row in report.rows:
                rows.append(
                    ["flow_rho_rate", str(row.n), _fnum(row.mean_rho_rate, args.precision)]
                )
            print(_csv_lines(["quantity", "n", "value"], rows))
        else:
            print(f"hamiltonian field: {format_field(report.hamiltonian)}")
            print(f"bracket rate for the squared norm: {print_expr(report.rho_rate)}")
            print(
                "rate from the kinematic part alone: "
                f"{print_expr(report.kinematic_rho_rate)}"
            )
            for w, rate in report.basis_rates:
                print(f"rate of {print_expr(Lin(w))}: {print_expr(rate)}")
            print(f"symbolically consistent: {'yes' if report.consistent else 'no'}")
            for row in report.rows:
                print(
                    f"truncated flow n={row.n}: mean squared-norm rate "
                    f"{_fnum(row.mean_rho_rate, args.precision)}"
                )
        if args.figures:
            from . import figures

            path = figures.save_illposed(report, args.figures)
            log.info("figure written to %s", path)
        return 0
    raise ParseError(f"unknown demo {args.which!r}", 0)


# ---------------------------------------------------------------------------
# argument plumbing


class _Parser(argparse.ArgumentParser):
    """argparse with the usage dump replaced by the one-line error contract."""

    def error(self, message: str):
        raise ParseError(message, 0)


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(
        prog="opb",
        description="Poisson brackets from operational vector fields, exactly.",
    )
    sub = top.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def add(name: str, handler, help_text: str, *, dsl: int = 0):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
        p.add_argument("--trials", type=int, default=100, help="random trials (default 100)")
        p.add_argument(
            "--format", choices=("text", "csv"), default="text", help="report format"
        )
        p.add_argument(
            "--precision", type=int, default=12, help="significant digits for floats"
        )
        p.add_argument(
            "--figures", metavar="DIR", default=None, help="also render figures into DIR"
        )
        if dsl:
            p.add_argument("dsl", nargs="*", help="DSL expression(s)")
            p.add_argument(
                "--file",
                action="append",
                metavar="PATH",
                help="read a DSL argument from a file (repeatable)",
            )
        return p

    p = add("eval", _cmd_eval, "evaluate an expression at a point", dsl=1)
    p.add_argument("--at", required=True, help="point literal")

    p = add("grad", _cmd_grad, "gradient (first jet) at a point", dsl=1)
    p.add_argument("--at", required=True)

    p = add("hess", _cmd_hess, "hessian blocks at a point", dsl=1)
    p.add_argument("--at", required=True)

    add("delta", _cmd_delta, "apply the second-order vector delta_ell", dsl=1)

    p = add("bracket", _cmd_bracket, "bracket of two expressions", dsl=2)
    p.add_argument("--d1", required=True, help="first field literal")
    p.add_argument("--d2", required=True, help="second field literal")
    p.add_argument("--at", default=None, help="optional evaluation point")

    p = add("hamfield", _cmd_hamfield, "hamiltonian field of h", dsl=1)
    p.add_argument("--d1", required=True)
    p.add_argument("--d2", required=True)

    p = add("axioms", _cmd_axioms, "check skew, Leibniz, Jacobi on random inputs")
    p.add_argument("--d1", required=True)
    p.add_argument("--d2", required=True)

    p = add("order", _cmd_order, "order of a field at a point")
    p.add_argument("--field", required=True, help="field literal")
    p.add_argument("--at", required=True)

    p = add("tensor", _cmd_tensor, "bivector of the bracket at a point")
    p.add_argument("--d1", required=True)
    p.add_argument("--d2", required=True)
    p.add_argument("--at", required=True)

    p = add("witness", _cmd_witness, "queerness certificate at a point")
    p.add_argument("--d1", required=True)
    p.add_argument("--d2", required=True)
    p.add_argument("--at", required=True)

    p = add("sharp", _cmd_sharp, "contract the bivector with a covector")
    p.add_argument("--d1", required=True)
    p.add_argument("--d2", required=True)
    p.add_argument("--at", required=True)
    p.add_argument("--mu", required=True, help="covector literal mu(vec,rational)")

    p = add("truncate", _cmd_truncate, "project onto n coordinates plus x", dsl=1)
    p.add_argument("-n", "--size", type=int, default=4, help="truncation size")

    p = add("fdcheck", _cmd_fdcheck, "finite differences vs symbolic jets", dsl=1)
    p.add_argument("--at", required=True)
    p.add_argument("-n", "--size", type=int, default=6)
    p.add_argument("--step", type=float, default=1e-4)

    p = add("ellconv", _cmd_ellconv, "diagonal convergence table for an operator")
    p.add_argument("--op", required=True, help="operator literal")
    p.add_argument("--ns", default="10,100,1000", help="comma list of sizes")

    p = add("demo", _cmd_demo, "canned demonstrations")
    p.add_argument("which", choices=("ill-posed", "no-extension"))

    return top


def _configure_logging() -> None:
    level_name = os.environ.get("LOG_LEVEL", "error")
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    if level_name not in levels:
        raise EngineError(
            f"LOG_LEVEL must be one of error, info, debug; got {level_name!r}"
        )
    logging.basicConfig(
        level=levels[level_name], stream=sys.stderr, format="%(levelname)s %(message)s"
    )


def main(argv=None) -> int:
    try:
        _configure_logging()
        args = build_parser().parse_args(argv)
        return args.handler(args)
    except ParseError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return 2
    except EngineError as exc:
        print(f"{exc.code}: {exc}", file=sys.stderr)
        return exc.exit_status
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
