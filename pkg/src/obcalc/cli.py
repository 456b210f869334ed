"""Command-line front end: ``obcalc <subcommand> ...``.

Exit status is 0 on success, 1 when a computation fails (or a verification
claim fails), and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from obcalc import klassen, mcg
from obcalc.mcg import MCGElement, parse_mcg
from obcalc.murasugi import connected_sum, h1_expression, parse_expression
from obcalc.openbook import (
    h1_open_book,
    identify_total_space,
    mapping_torus_presentation,
    parse_monodromy_spec,
    total_space_presentation,
)
from obcalc.pages import KLEIN, MOBIUS, PageDescriptor
from obcalc.presentation import format_presentation, tietze_simplify
from obcalc.verify import verify_paper

__all__ = ["run", "main", "build_parser"]


class UsageError(Exception):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _parse_page(text: str) -> PageDescriptor:
    key = text.strip()
    if key.upper() == "K":
        return KLEIN
    if key.upper() == "M":
        return MOBIUS
    m = re.fullmatch(r"N(\d+),(\d+)", key.replace(" ", ""))
    if not m:
        raise UsageError(f"page must be K, M or N<genus>,<boundary>, got {text!r}")
    return PageDescriptor(int(m[1]), int(m[2]))


def _element(text: str) -> MCGElement:
    try:
        return parse_mcg(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _monodromy_source(args):
    """(page, monodromy) from ``--spec FILE`` or ``--page P [--mcg WORD]``."""
    if args.spec:
        if args.page or args.mcg:
            raise UsageError("--spec excludes --page and --mcg")
        try:
            text = Path(args.spec).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {args.spec}: {exc.strerror}") from None
        try:
            spec = parse_monodromy_spec(text)
        except ValueError as exc:
            raise UsageError(f"{args.spec}: {exc}") from None
        return spec.page, spec
    if not args.page:
        raise UsageError("give --spec FILE or --page P")
    page = _parse_page(args.page)
    if args.mcg is None:
        return page, None
    return page, _element(args.mcg)


# -- subcommands -------------------------------------------------------------


def _cmd_mcg(args) -> str:
    elems = [_element(w) for w in args.words]
    op = args.op
    if op in ("mul", "normalize"):
        out = MCGElement(0, 0)
        for g in elems:
            out = out * g
        return _dumps({"m": out.m, "n": out.n}) if args.json else str(out)
    if len(elems) != 1 and op in ("inv", "parity"):
        raise UsageError(f"mcg {op} takes one word")
    if op == "inv":
        g = mcg.inv(elems[0])
        return _dumps({"m": g.m, "n": g.n}) if args.json else str(g)
    if op == "parity":
        p = mcg.twist_parity(elems[0])
        if args.json:
            return _dumps({"parity": p, "twist_product": p == 0})
        return f"{p} (product of Dehn twists)" if p == 0 else f"{p} (not a product of Dehn twists)"
    # conj
    if len(elems) == 1:
        r = mcg.conjugacy_representative(elems[0])
        return _dumps({"m": r.m, "n": r.n}) if args.json else str(r)
    if len(elems) != 2:
        raise UsageError("mcg conj takes one word (representative) or two (test)")
    same = mcg.is_conjugate(*elems)
    return _dumps({"conjugate": same}) if args.json else ("conjugate" if same else "not conjugate")


def _cmd_pi1(args) -> str:
    page, mono = _monodromy_source(args)
    if args.mapping_torus:
        p = mapping_torus_presentation(page, mono)
    else:
        p = total_space_presentation(page, mono, boundary_relations=not args.no_boundary_relations)
    if args.simplify:
        p = tietze_simplify(p)
    if args.json:
        return _dumps({"generators": list(p.generators), "relators": [r.letters for r in p.relators]})
    return str(p) if args.compact else format_presentation(p).rstrip("\n")


def _cmd_h1(args) -> str:
    page, mono = _monodromy_source(args)
    return _dumps(h1_open_book(page, mono).to_json())


def _cmd_identify(args) -> str:
    page, mono = _monodromy_source(args)
    r = identify_total_space(page, mono)
    if args.json:
        return _dumps(r.to_json())
    lines = [
        f"manifold: {r.manifold_name}",
        f"pi1: {r.recognition.name}" + (f"  witness {r.recognition.witness}" if r.recognition.witness else ""),
        f"H1: {r.h1}",
    ]
    if r.downgraded:
        lines.append("note: rewriting did not complete; only H1 is certain")
    return "\n".join(lines)


def _expr(text: str):
    try:
        return parse_expression(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _cmd_expr(args) -> str:
    exprs = [_expr(e) for e in args.exprs]
    if args.op == "h1":
        if len(exprs) != 1:
            raise UsageError("expr h1 takes one expression")
        return _dumps(h1_expression(exprs[0]).to_json())
    if args.op == "normalize" and len(exprs) != 1:
        raise UsageError("expr normalize takes one expression")
    out = exprs[0]
    for e in exprs[1:]:
        out = connected_sum(out, e)
    return _dumps({"expression": str(out)}) if args.json else str(out)


def _cmd_klassen(args) -> str:
    report = klassen.cross_section(args.t, args.samples)
    if args.csv:
        return klassen.report_to_csv(report).rstrip("\n")
    if args.json:
        return klassen.report_to_json(report)
    count = "n/a" if report.component_count is None else report.component_count
    return f"t={report.t} points={len(report)} components={count} max_residual={report.max_residual:.2e}"


def _cmd_derive(args) -> str:
    cat = mcg.derive_catalog(args.max_len)
    checks = mcg.check_catalog(cat)
    if args.write:
        mcg.save_catalog(cat, args.write)
    if args.json:
        return _dumps(
            {
                "boundary": cat.boundary_word.letters,
                "t_star": {"a": cat.t_star["a"].letters, "b": cat.t_star["b"].letters},
                "h": cat.h.letters,
                "epsilon": cat.epsilon,
                "constraints": checks,
            }
        )
    status = " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in checks.items())
    return mcg.format_catalog(cat) + status


def _cmd_verify(args):
    try:
        report = verify_paper(args.only or None)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    return (report.to_json() if args.json else report.table()), report.exit_status


# -- parser ------------------------------------------------------------------


def _source_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", help="monodromy file (page header plus generator images)")
    p.add_argument("--page", help="K, M or N<genus>,<boundary>")
    p.add_argument("--mcg", help="mapping class of K as a word in t, T, y, Y")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="obcalc", description="Algebra of nonorientable open books.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mcg", parents=[common], help="arithmetic in Map(K) = <t, y | tyt = y>")
    p.add_argument("op", choices=["mul", "inv", "normalize", "conj", "parity"])
    p.add_argument("words", nargs="+")
    p.set_defaults(func=_cmd_mcg)

    p = sub.add_parser("pi1", parents=[common], help="presentation of pi_1 of the total space")
    _source_args(p)
    p.add_argument("--simplify", action="store_true", help="apply Tietze moves")
    p.add_argument("--compact", action="store_true", help="one-line <gens | rels> form")
    p.add_argument("--mapping-torus", action="store_true", help="mapping torus instead of total space")
    p.add_argument("--no-boundary-relations", action="store_true", help="omit c_j = phi(c_j)")
    p.set_defaults(func=_cmd_pi1)

    p = sub.add_parser("h1", parents=[common], help="first homology of the total space (JSON)")
    _source_args(p)
    p.set_defaults(func=_cmd_h1)

    p = sub.add_parser("identify", parents=[common], help="recognize pi_1 and name the total space")
    _source_args(p)
    p.set_defaults(func=_cmd_identify)

    p = sub.add_parser("expr", parents=[common], help="connected sums of prime manifolds")
    p.add_argument("op", choices=["sum", "normalize", "h1"])
    p.add_argument("exprs", nargs="+", help="e.g. 'S2xS1 + L(3)'")
    p.set_defaults(func=_cmd_expr)

    p = sub.add_parser("klassen", parents=[common], help="sample a level slice of the page F_0")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--samples", type=int, default=klassen.DEFAULT_RESOLUTION)
    p.add_argument("--csv", action="store_true", help="CSV with columns x, y, t, residual")
    p.set_defaults(func=_cmd_klassen)

    p = sub.add_parser("derive-catalog", parents=[common], help="search for the automorphism catalog")
    p.add_argument("--max-len", type=int, default=8)
    p.add_argument("--write", metavar="PATH", help="save the result as a fixture")
    p.set_defaults(func=_cmd_derive)

    p = sub.add_parser("verify-paper", parents=[common], help="re-run every verification claim")
    p.add_argument("--only", action="append", metavar="ID", help="claim id or location tag (repeatable)")
    p.set_defaults(func=_cmd_verify)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"obcalc: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, LookupError) as exc:
        print(f"obcalc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    code = 0
    if isinstance(out, tuple):
        out, code = out
    print(out)
    return code


def main(argv: list[str] | None = None) -> None:
    try:
        code = run(argv)
    except SystemExit as exc:  # argparse usage errors
        code = exc.code if isinstance(exc.code, int) else 2
    sys.exit(code)


if __name__ == "__main__":
    main()
