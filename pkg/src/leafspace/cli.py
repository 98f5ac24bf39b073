"""Command-line interface.

Subcommands: analyze, density, dual, autgroup, diffgroup, equivalent,
moebius, cf.  Reports go to stdout, diagnostics to stderr.  Exit codes:
0 success, 2 parse error, 3 precondition failure, 4 resource cap exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .algebraic import AlgebraicReal, set_degree_cap
from .autgroup import (AutGroupReport, DiffGroupReport, aut_group,
                       diff_group_report)
from .equivalence import cf_expand, leaf_space_equivalent, moebius_apply
from .errors import (DegenerateInputError, DegreeCapError, LeafspaceError,
                     ModelError, NonDenseError, SpecParseError,
                     ZeroDivisionLeafError)
from .foliation import (LinearFoliation, classify, holonomy, is_dense,
                        orthogonal_foliation)
from .specfile import (FoliationSpec, SpecOptions, load_spec, parse_expression,
                       parse_spec, render_spec)
from .tagged import EMPTY, TaggedReal, coerce, mono_str

SCHEMA = "leafspace.report/1"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_RESOURCE = 4


# ---------------------------------------------------------------------------
# Number formatting
# ---------------------------------------------------------------------------

def _poly_str(coeffs) -> str:
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        elif i == 1:
            body = "x" if mag == 1 else f"{mag}x"
        else:
            body = f"x^{i}" if mag == 1 else f"{mag}x^{i}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts) if parts else "0"


def fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q}"


def fmt_algebraic(a: AlgebraicReal) -> str:
    if a.is_rational:
        return fmt_fraction(a.as_fraction())
    return f"{a.decimal(12)} (root of {_poly_str(a.minpoly)})"


def fmt_tagged(x) -> str:
    x = coerce(x)
    if x.is_zero:
        return "0"
    parts = []
    for mono in x.monomials():
        c = x.terms[mono]
        cs = fmt_fraction(c.as_fraction()) if c.is_rational else fmt_algebraic(c)
        if mono == EMPTY:
            parts.append(cs)
        elif cs == "1":
            parts.append(mono_str(mono))
        else:
            sep = "*" if c.is_rational else " * "
            parts.append(f"{cs}{sep}{mono_str(mono)}")
    return " + ".join(parts)


def fmt_vector(v) -> str:
    return "(" + ", ".join(fmt_tagged(x) for x in v) + ")"


def json_fraction(q: Fraction) -> dict:
    return {"type": "rational", "num": q.numerator, "den": q.denominator,
            "exactness": "exact"}


def json_algebraic(a: AlgebraicReal, digits: int) -> dict:
    if a.is_rational:
        return json_fraction(a.as_fraction())
    a.refine_to(Fraction(1, 10 ** (digits + 2)))
    lo, hi = a.interval()
    return {"type": "algebraic",
            "minpoly": list(a.minpoly),
            "interval": [str(lo), str(hi)],
            "approx": a.decimal(12),
            "exactness": "exact"}


def json_tagged(x, digits: int) -> dict:
    x = coerce(x)
    if x.is_algebraic:
        return json_algebraic(x.algebraic_part(), digits)
    terms = [{"monomial": mono_str(m),
              "coeff": json_algebraic(x.terms[m], digits)}
             for m in x.monomials()]
    return {"type": "tagged", "terms": terms, "exactness": "exact"}


def json_generator(g, digits: int) -> object:
    if isinstance(g, AlgebraicReal):
        return json_algebraic(g, digits)
    if isinstance(g, tuple) and g and isinstance(g[0], tuple):
        return [[json_tagged(x, digits) for x in row] for row in g]
    return json_tagged(g, digits)


# ---------------------------------------------------------------------------
# Group-structure pretty printing
# ---------------------------------------------------------------------------

def pretty_structure(aut: AutGroupReport) -> str:
    if aut.free_rank == 0:
        return "ℤ₂"
    if aut.free_rank == 1:
        return "ℤ₂ × ℤ"
    return f"ℤ₂ × ℤ^{aut.free_rank}"


def pretty_presentation(aut: AutGroupReport, ambient_dim: int) -> str:
    core = pretty_structure(aut)
    if aut.free_rank > 0:
        core = f"({core})"
    return f"{core} ⋉ (T^{ambient_dim}/F)"


# ---------------------------------------------------------------------------
# Report assembly
# ---------------------------------------------------------------------------

def _holonomy_lines(G) -> list[str]:
    lines = [f"holonomy rank: {G.rank} (ambient R^{G.ambient_dim})"]
    for g in G.generators:
        lines.append(f"  generator {fmt_vector(g)}")
    return lines


def _flag_str(v) -> str:
    return "unknown" if v is None else ("yes" if v else "no")


def _flags_lines(flags) -> list[str]:
    return [
        f"dense leaves:            {_flag_str(flags.dense)}",
        f"simply connected leaves: {_flag_str(flags.simply_connected_leaves)}",
        f"transcendent:            {_flag_str(flags.transcendent)}",
        f"non-quadratic:           {_flag_str(flags.non_quadratic)}",
    ]


def _aut_lines(aut: AutGroupReport) -> list[str]:
    exact = "exact" if aut.rank_is_exact else "lower bound only"
    lines = [f"Aut(R^n : Gamma) = {pretty_structure(aut)}  "
             f"[method: {aut.method}, rank {exact}]"]
    if aut.dirichlet is not None:
        d = aut.dirichlet
        lines.append(f"  Dirichlet data: s={d.complex_pairs}, "
                     f"t={d.real_roots}, unit rank bound {d.bound}")
    for g in aut.generators:
        if isinstance(g, AlgebraicReal):
            lines.append(f"  generator lambda = {fmt_algebraic(g)}")
        else:
            lines.append("  generator matrix:")
            for row in g:
                lines.append(f"    {fmt_vector(row)}")
    for note in aut.notes:
        lines.append(f"  note: {note}")
    return lines


def _aut_json(aut: AutGroupReport, digits: int) -> dict:
    out = {
        "structure": aut.structure,
        "torsion_order": aut.torsion_order,
        "free_rank": aut.free_rank,
        "rank_exactness": "exact" if aut.rank_is_exact else "bounded",
        "method": aut.method,
        "generators": [json_generator(g, digits) for g in aut.generators],
        "notes": list(aut.notes),
    }
    if aut.dirichlet is not None:
        out["dirichlet"] = {"s": aut.dirichlet.complex_pairs,
                            "t": aut.dirichlet.real_roots,
                            "bound": aut.dirichlet.bound,
                            "exactness": "exact"}
    return out


def _flags_json(flags) -> dict:
    return {"dense": flags.dense,
            "simply_connected_leaves": flags.simply_connected_leaves,
            "transcendent": flags.transcendent,
            "non_quadratic": flags.non_quadratic,
            "exactness": "exact"}


def _emit(args, text_lines: list[str], machine: dict) -> None:
    if args.format == "json":
        machine = {"schema": SCHEMA, **machine}
        print(json.dumps(machine, sort_keys=True, indent=2))
    else:
        print("\n".join(text_lines))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _load(args, attr="spec") -> tuple[FoliationSpec, LinearFoliation]:
    spec = load_spec(getattr(args, attr))
    if args.max_degree:
        set_degree_cap(args.max_degree)
    elif spec.options.max_degree:
        set_degree_cap(spec.options.max_degree)
    return spec, spec.build()


def _height(args, spec: FoliationSpec) -> int:
    return args.height if args.height else spec.options.height


def _digits(args, spec: FoliationSpec) -> int:
    return args.precision if args.precision else spec.options.precision


def cmd_analyze(args) -> int:
    spec, F = _load(args)
    G = holonomy(F)
    flags = classify(F)
    lines = [f"foliation: dim {F.leaf_dim} in T^{F.ambient_dim} "
             f"(codimension {F.codim})"]
    lines += _holonomy_lines(G) + _flags_lines(flags)
    digits = _digits(args, spec)
    machine = {
        "command": "analyze",
        "foliation": {"ambient_dim": F.ambient_dim, "leaf_dim": F.leaf_dim},
        "holonomy": {"rank": G.rank,
                     "generators": [[json_tagged(x, digits) for x in g]
                                    for g in G.generators],
                     "exactness": "exact"},
        "flags": _flags_json(flags),
    }
    if not flags.dense:
        lines.append("leaves are not dense: the diffeomorphism group "
                     "formula does not apply")
        _emit(args, lines, machine)
        print("error: leaves are not dense", file=sys.stderr)
        return EXIT_PRECONDITION
    report = diff_group_report(F, _height(args, spec))
    lines += _aut_lines(report.aut)
    lines.append(f"Diff(T^{F.ambient_dim}/F) = "
                 f"{pretty_presentation(report.aut, F.ambient_dim)}")
    machine["aut"] = _aut_json(report.aut, digits)
    machine["diff"] = {"presentation": report.presentation,
                       "exactness": "exact" if report.aut.rank_is_exact
                       else "bounded"}
    _emit(args, lines, machine)
    return EXIT_OK


def cmd_density(args) -> int:
    spec, F = _load(args)
    G = holonomy(F)
    dense = is_dense(G)
    verdict = "dense" if dense else "not dense"
    lines = [verdict] + _holonomy_lines(G)
    digits = _digits(args, spec)
    _emit(args, lines, {
        "command": "density",
        "dense": dense,
        "holonomy": {"rank": G.rank,
                     "generators": [[json_tagged(x, digits) for x in g]
                                    for g in G.generators],
                     "exactness": "exact"},
    })
    return EXIT_OK


def cmd_dual(args) -> int:
    spec, F = _load(args)
    D = orthogonal_foliation(F)
    sys.stdout.write(render_spec(D, spec.options))
    return EXIT_OK


def cmd_autgroup(args) -> int:
    spec, F = _load(args)
    aut = aut_group(F, _height(args, spec))
    _emit(args, _aut_lines(aut),
          {"command": "autgroup", "aut": _aut_json(aut, _digits(args, spec))})
    return EXIT_OK


def cmd_diffgroup(args) -> int:
    spec, F = _load(args)
    report = diff_group_report(F, _height(args, spec))
    lines = _aut_lines(report.aut)
    lines.append(f"Diff(T^{F.ambient_dim}/F) = "
                 f"{pretty_presentation(report.aut, F.ambient_dim)}")
    for note in report.notes:
        if note not in report.aut.notes:
            lines.append(f"note: {note}")
    _emit(args, lines, {
        "command": "diffgroup",
        "aut": _aut_json(report.aut, _digits(args, spec)),
        "diff": {"presentation": report.presentation,
                 "exactness": "exact" if report.aut.rank_is_exact
                 else "bounded"},
    })
    return EXIT_OK


def cmd_equivalent(args) -> int:
    spec1, F1 = _load(args, "spec")
    spec2 = load_spec(args.other)
    F2 = spec2.build()
    height = args.height if args.height else max(spec1.options.height,
                                                 spec2.options.height)
    verdict = leaf_space_equivalent(F1, F2, height)
    lines = [verdict.status]
    if verdict.reason:
        lines.append(f"reason: {verdict.reason}")
    machine = {"command": "equivalent", "status": verdict.status,
               "reason": verdict.reason, "exactness": "exact"}
    if verdict.certificate is not None:
        lines.append(f"certificate matrix: {verdict.certificate.A}")
        machine["certificate"] = {
            "matrix": [list(row) for row in verdict.certificate.A],
            "kind": verdict.certificate.kind,
            "exactness": "exact"}
    if verdict.status == "unknown":
        machine["exactness"] = "heuristic"
        if args.exact_only:
            machine.pop("reason", None)
        _emit(args, lines, machine)
        print("error: search budget exhausted without a decision",
              file=sys.stderr)
        return EXIT_RESOURCE
    _emit(args, lines, machine)
    return EXIT_OK


def _read_document(path: str | None) -> dict:
    text = sys.stdin.read() if path in (None, "-") else \
        open(path, "r", encoding="utf-8").read()
    from .specfile import _toml
    try:
        return _toml.loads(text)
    except _toml.TOMLDecodeError as exc:
        raise SpecParseError(f"not a valid document: {exc}")


def _document_constants(doc: dict) -> dict:
    from .specfile import _parse_constant
    return {name: _parse_constant(name, table)
            for name, table in doc.get("constants", {}).items()}


def cmd_moebius(args) -> int:
    doc = _read_document(args.file)
    constants = _document_constants(doc)
    table = doc.get("moebius")
    if not isinstance(table, dict):
        raise SpecParseError("missing [moebius] table")
    A = table.get("matrix")
    raw_v = table.get("vector")
    if (not isinstance(A, list) or not A
            or not all(isinstance(r, list) and len(r) == len(A)
                       and all(isinstance(x, int) for x in r) for r in A)):
        raise SpecParseError("moebius.matrix must be a square integer matrix")
    if not isinstance(raw_v, list) or len(raw_v) != len(A) - 1:
        raise SpecParseError("moebius.vector must have matrix size - 1 entries")
    v = tuple(parse_expression(str(x), constants, f"moebius.vector[{i}]")
              for i, x in enumerate(raw_v))
    w = moebius_apply(tuple(tuple(r) for r in A), v)
    digits = args.precision if args.precision else 40
    _emit(args, [fmt_vector(w)],
          {"command": "moebius",
           "image": [json_tagged(x, digits) for x in w]})
    return EXIT_OK


def cmd_cf(args) -> int:
    doc = _read_document(args.file)
    constants = _document_constants(doc)
    table = doc.get("cf")
    if not isinstance(table, dict) or "value" not in table:
        raise SpecParseError("missing [cf] table with a value key")
    x = parse_expression(str(table["value"]), constants, "cf.value")
    terms = args.terms if args.terms else int(table.get("terms", 24))
    cf = cf_expand(x, max_terms=terms)
    lines = [f"partial quotients: {list(cf.partial_quotients)}"]
    if cf.period:
        lines.append(f"periodic part: {list(cf.period)}")
    lines.append(f"exactness: {cf.exactness}")
    machine = {"command": "cf", "exactness": cf.exactness}
    if not (args.exact_only and cf.exactness != "exact"):
        machine["partial_quotients"] = list(cf.partial_quotients)
        if cf.period:
            machine["period"] = list(cf.period)
    elif args.exact_only and cf.exactness != "exact":
        lines = ["no exact expansion available for this value"]
    _emit(args, lines, machine)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--height", type=int, default=0,
                   help="search height bound (overrides the spec)")
    p.add_argument("--max-degree", type=int, default=0,
                   help="algebraic degree cap (overrides the spec)")
    p.add_argument("--precision", type=int, default=0,
                   help="digits carried in machine-block approximations")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--exact-only", action="store_true",
                   help="omit heuristic-derived fields from reports")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leafspace",
        description="Exact calculator for linear foliations on tori")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, doc in [
            ("analyze", cmd_analyze, "full pipeline report"),
            ("density", cmd_density, "decide leaf density"),
            ("dual", cmd_dual, "emit the orthogonal foliation as a spec"),
            ("autgroup", cmd_autgroup, "transverse automorphism group"),
            ("diffgroup", cmd_diffgroup, "diffeomorphism group of the "
                                         "leaf space")]:
        p = sub.add_parser(name, help=doc)
        p.add_argument("spec", help="foliation spec file")
        _add_common(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("equivalent", help="leaf-space equivalence of two specs")
    p.add_argument("spec", help="first foliation spec file")
    p.add_argument("other", help="second foliation spec file")
    _add_common(p)
    p.set_defaults(fn=cmd_equivalent)

    p = sub.add_parser("moebius", help="apply an integer matrix by the "
                                       "Moebius action")
    p.add_argument("file", nargs="?", default=None,
                   help="document with [moebius] matrix/vector; stdin if "
                        "omitted")
    _add_common(p)
    p.set_defaults(fn=cmd_moebius)

    p = sub.add_parser("cf", help="continued-fraction expansion")
    p.add_argument("file", nargs="?", default=None,
                   help="document with [cf] value; stdin if omitted")
    p.add_argument("--terms", type=int, default=0,
                   help="number of partial quotients to produce")
    _add_common(p)
    p.set_defaults(fn=cmd_cf)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (NonDenseError, DegenerateInputError, ModelError,
            ZeroDivisionLeafError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except DegreeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except LeafspaceError as exc:  # pragma: no cover - internal consistency
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
