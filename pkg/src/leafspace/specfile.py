"""Foliation spec files.

A spec is a TOML document with three tables:

    [constants.a]
    kind = "algebraic"
    minpoly = [-2, 0, 0, 1]        # ascending coefficients: -2 + x^3
    interval = ["1.2", "1.3"]      # must isolate exactly one real root

    [constants.e]
    kind = "transcendental"
    approx = "2.718281828459045"   # declared algebraically independent

    [constants.q]
    kind = "rational"
    value = "3/2"

    [foliation]
    ambient_dim = 3
    tangent_basis = [["1", "0", "a"], ["0", "1", "b"]]
    # or, exclusively: form_coefficients = [["a", "b"]]   (n x m matrix)

    [options]
    height = 12
    max_degree = 24
    precision = 40

Matrix entries are expressions over the declared constants with +, -, *, /,
integer powers (^), parentheses, and integer or decimal literals.  All
expressions are evaluated exactly at load time; errors carry a location.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

try:
    import tomllib as _toml
except ModuleNotFoundError:  # Python < 3.11
    import tomli as _toml

from .algebraic import AlgebraicReal
from .errors import (DegreeCapError, LeafspaceError, ModelError,
                     SpecParseError, ZeroDivisionLeafError)
from .foliation import LinearFoliation
from .tagged import EMPTY, TaggedReal, TranscendentalSymbol, coerce, mono_str

DEFAULT_HEIGHT = 12
DEFAULT_MAX_DEGREE = 32
DEFAULT_PRECISION = 40


# ---------------------------------------------------------------------------
# Expression language
# ---------------------------------------------------------------------------

class _Tokens:
    """Tokenizer over a single expression string; keeps column positions."""

    def __init__(self, text: str, where: str):
        self.text = text
        self.where = where
        self.items: list[tuple[str, object, int]] = []
        i, n = 0, len(text)
        while i < n:
            c = text[i]
            if c.isspace():
                i += 1
                continue
            if c in "+-*/^()":
                self.items.append(("op", c, i))
                i += 1
                continue
            if c.isdigit():
                j = i
                while j < n and (text[j].isdigit() or text[j] == "."):
                    j += 1
                lit = text[i:j]
                try:
                    val = Fraction(lit)
                except ValueError:
                    raise SpecParseError(
                        f"{where}: bad numeric literal {lit!r} at column {i}")
                self.items.append(("num", val, i))
                i = j
                continue
            if c.isalpha() or c == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.items.append(("name", text[i:j], i))
                i = j
                continue
            raise SpecParseError(
                f"{where}: unexpected character {c!r} at column {i}")
        self.pos = 0

    def peek(self):
        if self.pos < len(self.items):
            return self.items[self.pos]
        return ("end", None, len(self.text))

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def error(self, msg: str, col: int):
        raise SpecParseError(f"{self.where}: {msg} at column {col}")


def parse_expression(text: str, constants: dict, where: str = "expression"):
    """Evaluate an expression over the declared constants to a TaggedReal."""
    toks = _Tokens(text, where)

    def atom() -> TaggedReal:
        kind, val, col = toks.take()
        if kind == "num":
            return TaggedReal.from_fraction(val)
        if kind == "name":
            if val not in constants:
                toks.error(f"undeclared constant {val!r}", col)
            return constants[val]
        if kind == "op" and val == "(":
            v = expr()
            kind2, val2, col2 = toks.take()
            if not (kind2 == "op" and val2 == ")"):
                toks.error("expected ')'", col2)
            return v
        toks.error(f"expected a value, found {val!r}"
                   if kind != "end" else "unexpected end of expression", col)

    def power() -> TaggedReal:
        base = atom()
        kind, val, col = toks.peek()
        if kind == "op" and val == "^":
            toks.take()
            sign = 1
            kind, val, col = toks.take()
            if kind == "op" and val == "-":
                sign = -1
                kind, val, col = toks.take()
            if kind != "num" or val.denominator != 1:
                toks.error("exponent must be an integer literal", col)
            try:
                return base ** (sign * val.numerator)
            except (ZeroDivisionLeafError, ModelError) as exc:
                toks.error(str(exc), col)
        return base

    def unary() -> TaggedReal:
        kind, val, col = toks.peek()
        if kind == "op" and val in "+-":
            toks.take()
            v = unary()
            return -v if val == "-" else v
        return power()

    def term() -> TaggedReal:
        v = unary()
        while True:
            kind, val, col = toks.peek()
            if kind == "op" and val in "*/":
                toks.take()
                rhs = unary()
                try:
                    v = v * rhs if val == "*" else v / rhs
                except (ZeroDivisionLeafError, ModelError) as exc:
                    toks.error(str(exc), col)
            else:
                return v

    def expr() -> TaggedReal:
        v = term()
        while True:
            kind, val, col = toks.peek()
            if kind == "op" and val in "+-":
                toks.take()
                rhs = term()
                v = v + rhs if val == "+" else v - rhs
            else:
                return v

    value = expr()
    kind, val, col = toks.peek()
    if kind != "end":
        toks.error(f"trailing input {val!r}", col)
    return value


# ---------------------------------------------------------------------------
# Spec structure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpecOptions:
    height: int = DEFAULT_HEIGHT
    max_degree: int = DEFAULT_MAX_DEGREE
    precision: int = DEFAULT_PRECISION


@dataclass(frozen=True)
class FoliationSpec:
    constants: dict
    ambient_dim: int
    tangent_basis: tuple | None
    form_coefficients: tuple | None
    options: SpecOptions = field(default_factory=SpecOptions)

    def build(self) -> LinearFoliation:
        try:
            if self.tangent_basis is not None:
                return LinearFoliation(self.ambient_dim, self.tangent_basis)
            return LinearFoliation.from_form(self.ambient_dim,
                                             self.form_coefficients)
        except LeafspaceError:
            raise
        except ValueError as exc:  # pragma: no cover - defensive
            raise SpecParseError(str(exc))


def _require(table: dict, key: str, where: str):
    if key not in table:
        raise SpecParseError(f"{where}: missing required key {key!r}")
    return table[key]


def _parse_constant(name: str, table: dict) -> TaggedReal:
    where = f"constants.{name}"
    if not isinstance(table, dict):
        raise SpecParseError(f"{where}: expected a table")
    kind = _require(table, "kind", where)
    if kind == "rational":
        raw = _require(table, "value", where)
        try:
            return TaggedReal.from_fraction(Fraction(str(raw)))
        except (ValueError, ZeroDivisionError):
            raise SpecParseError(f"{where}: bad rational literal {raw!r}")
    if kind == "algebraic":
        minpoly = _require(table, "minpoly", where)
        interval = _require(table, "interval", where)
        if (not isinstance(minpoly, list) or len(minpoly) < 2
                or not all(isinstance(c, int) for c in minpoly)):
            raise SpecParseError(
                f"{where}: minpoly must be a list of >= 2 integers")
        if not (isinstance(interval, list) and len(interval) == 2):
            raise SpecParseError(
                f"{where}: interval must be a pair of endpoints")
        try:
            lo, hi = (Fraction(str(interval[0])), Fraction(str(interval[1])))
        except (ValueError, ZeroDivisionError):
            raise SpecParseError(f"{where}: bad interval endpoints {interval!r}")
        try:
            return TaggedReal.from_algebraic(AlgebraicReal(minpoly, lo, hi))
        except DegreeCapError:
            raise
        except ValueError as exc:
            raise SpecParseError(f"{where}: {exc}")
    if kind == "transcendental":
        approx = _require(table, "approx", where)
        try:
            sym = TranscendentalSymbol(name, str(approx))
        except ValueError:
            raise SpecParseError(
                f"{where}: approx must be a finite decimal, got {approx!r}")
        return TaggedReal.from_symbol(sym)
    raise SpecParseError(
        f"{where}: unknown kind {kind!r} "
        f"(expected rational, algebraic or transcendental)")


def _parse_matrix(raw, constants: dict, where: str) -> tuple:
    if not isinstance(raw, list) or not all(
            isinstance(row, list) and row for row in raw):
        raise SpecParseError(f"{where}: expected a matrix of non-empty rows")
    if not raw:
        return ()
    width = len(raw[0])
    if any(len(row) != width for row in raw):
        raise SpecParseError(f"{where}: rows have inconsistent lengths")
    out = []
    for i, row in enumerate(raw):
        entries = []
        for j, cell in enumerate(row):
            cell_where = f"{where}[{i}][{j}]"
            if isinstance(cell, bool):
                raise SpecParseError(f"{cell_where}: expected an expression")
            if isinstance(cell, int):
                entries.append(TaggedReal.from_fraction(cell))
            elif isinstance(cell, str):
                entries.append(parse_expression(cell, constants, cell_where))
            else:
                raise SpecParseError(
                    f"{cell_where}: expected an expression string or integer")
        out.append(tuple(entries))
    return tuple(out)


def parse_spec(text: str) -> FoliationSpec:
    """Parse and exactly evaluate a foliation spec document."""
    try:
        doc = _toml.loads(text)
    except _toml.TOMLDecodeError as exc:
        raise SpecParseError(f"not a valid spec document: {exc}")
    constants: dict[str, TaggedReal] = {}
    for name, table in doc.get("constants", {}).items():
        constants[name] = _parse_constant(name, table)
    fol = doc.get("foliation")
    if not isinstance(fol, dict):
        raise SpecParseError("missing [foliation] table")
    dim = _require(fol, "ambient_dim", "foliation")
    if not isinstance(dim, int) or dim < 1:
        raise SpecParseError("foliation: ambient_dim must be a positive integer")
    has_basis = "tangent_basis" in fol
    has_form = "form_coefficients" in fol
    if has_basis == has_form:
        raise SpecParseError(
            "foliation: exactly one of tangent_basis or form_coefficients "
            "is required")
    basis = form = None
    if has_basis:
        basis = _parse_matrix(fol["tangent_basis"], constants,
                              "foliation.tangent_basis")
    else:
        form = _parse_matrix(fol["form_coefficients"], constants,
                             "foliation.form_coefficients")
    opts = doc.get("options", {})
    if not isinstance(opts, dict):
        raise SpecParseError("options: expected a table")
    fields = {}
    for key in ("height", "max_degree", "precision"):
        if key in opts:
            val = opts[key]
            if not isinstance(val, int) or val < 1:
                raise SpecParseError(
                    f"options.{key}: expected a positive integer")
            fields[key] = val
    unknown = set(opts) - {"height", "max_degree", "precision"}
    if unknown:
        raise SpecParseError(f"options: unknown keys {sorted(unknown)}")
    return FoliationSpec(constants, dim, basis, form, SpecOptions(**fields))


def load_spec(path: str) -> FoliationSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_spec(fh.read())


# ---------------------------------------------------------------------------
# Spec emission (used by the `dual` subcommand)
# ---------------------------------------------------------------------------

def _fraction_expr(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q}"


def render_spec(F: LinearFoliation, options: SpecOptions | None = None) -> str:
    """Serialize a foliation back into spec-document text.

    Irrational algebraic coefficients become named algebraic constants;
    transcendental symbols keep their declared names and approximations."""
    alg_names: list[tuple[AlgebraicReal, str]] = []
    symbols: dict[str, TranscendentalSymbol] = {}

    def alg_name(a: AlgebraicReal) -> str:
        for known, nm in alg_names:
            if known == a:
                return nm
        nm = f"c{len(alg_names) + 1}"
        alg_names.append((a, nm))
        return nm

    def entry_expr(x: TaggedReal) -> str:
        if x.is_zero:
            return "0"
        parts = []
        for mono in x.monomials():
            coeff = x.terms[mono]
            if coeff.is_rational:
                cs = _fraction_expr(coeff.as_fraction())
            else:
                cs = alg_name(coeff)
            ms = mono_str(mono)
            parts.append(cs if mono == EMPTY
                         else (ms if cs == "1" else f"{cs}*{ms}"))
        return " + ".join(parts)

    cells = []
    for row in F.tangent_basis:
        for x in row:
            symbols.update(x.symbols)
        cells.append([entry_expr(coerce(x)) for x in row])

    lines = []
    for a, nm in alg_names:
        a.refine_to(Fraction(1, 10 ** 16))
        lo, hi = a.interval()
        lines += [f"[constants.{nm}]",
                  'kind = "algebraic"',
                  f"minpoly = [{', '.join(str(c) for c in a.minpoly)}]",
                  f'interval = ["{lo}", "{hi}"]',
                  ""]
    for nm in sorted(symbols):
        lines += [f"[constants.{nm}]",
                  'kind = "transcendental"',
                  f'approx = "{symbols[nm].approx}"',
                  ""]
    lines += ["[foliation]", f"ambient_dim = {F.ambient_dim}"]
    rows = ", ".join("[" + ", ".join(f'"{c}"' for c in row) + "]"
                     for row in cells)
    lines.append(f"tangent_basis = [{rows}]")
    if options is not None:
        lines += ["", "[options]",
                  f"height = {options.height}",
                  f"max_degree = {options.max_degree}",
                  f"precision = {options.precision}"]
    return "\n".join(lines) + "\n"
