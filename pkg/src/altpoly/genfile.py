"""Parser and elaborator for the bundled generator recursion table.

The on-disk grammar mirrors how the recursive generators are written:
every entry is either the base element X(1) or an outer projection of a
bracket of two projected references,

    R[2][1] = PI [1,2] JC( PI [1] R[1][1], PI [2] R[1][1] )

`PI [t1,..,tk]` always maps the ordered support of its operand onto the
listed targets.  Inner targets must be strictly increasing (relabelings)
with disjoint images; the outer list may repeat targets, which is how
variable multiplicities are combed into the support.  Whitespace is free,
`#` comments run to end of line, duplicate names are rejected.

Entries with index >= 900 are alternate presentations kept for tests; the
structural invariants tied to the family index (q = n and friends) apply
to canonical entries only.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources

from .algebra import Element, MonotoneMap, ScaledElement, scaled_jacobi, single

ALTERNATE_INDEX = 900


class GenfileError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        if line is not None:
            message = f"line {line}" + (f", col {col}" if col is not None else "") \
                      + f": {message}"
        super().__init__(message)
        self.line = line
        self.col = col


@dataclass(frozen=True)
class GenRef:
    targets: tuple
    name: tuple  # (n, i)


@dataclass(frozen=True)
class GenExpr:
    """Base when bracket is None, else outer targets around JC(arg1, arg2)."""

    targets: tuple | None
    bracket: tuple | None  # (GenRef, GenRef)

    @staticmethod
    def base() -> "GenExpr":
        return GenExpr(None, None)

    def is_base(self) -> bool:
        return self.bracket is None


@dataclass(frozen=True)
class GenDef:
    name: tuple
    expr: GenExpr
    line: int


_TOKEN = re.compile(r"\s*(R\[|PI|JC\(|X\(1\)|\[|\]|\(|\)|,|=|\d+)")


class _Parser:
    def __init__(self, text: str):
        self.defs: list = []

    @staticmethod
    def _tokenize(line: str, lineno: int):
        pos = 0
        out = []
        while pos < len(line):
            m = _TOKEN.match(line, pos)
            if not m:
                if line[pos:].strip():
                    raise GenfileError(f"unexpected input {line[pos:].strip()!r}",
                                       lineno, pos + 1)
                break
            out.append((m.group(1), pos + 1))
            pos = m.end()
        return out


def _parse_int_list(tokens, idx, lineno):
    tok, col = tokens[idx]
    if tok != "[":
        raise GenfileError(f"expected '[' before target list, got {tok!r}", lineno, col)
    idx += 1
    values = []
    while True:
        tok, col = tokens[idx]
        if not tok.isdigit():
            raise GenfileError(f"expected index, got {tok!r}", lineno, col)
        value = int(tok)
        if value < 1:
            raise GenfileError("indices must be positive", lineno, col)
        values.append(value)
        idx += 1
        tok, col = tokens[idx]
        if tok == ",":
            idx += 1
            continue
        if tok == "]":
            return tuple(values), idx + 1
        raise GenfileError(f"expected ',' or ']', got {tok!r}", lineno, col)


def _parse_name(tokens, idx, lineno):
    tok, col = tokens[idx]
    if tok != "R[":
        raise GenfileError(f"expected generator name, got {tok!r}", lineno, col)
    n_tok, n_col = tokens[idx + 1]
    if not n_tok.isdigit():
        raise GenfileError("expected family index", lineno, n_col)
    closing, c_col = tokens[idx + 2]
    if closing != "]":
        raise GenfileError("expected ']'", lineno, c_col)
    opening, o_col = tokens[idx + 3]
    if opening != "[":
        raise GenfileError("expected '['", lineno, o_col)
    i_tok, i_col = tokens[idx + 4]
    if not i_tok.isdigit():
        raise GenfileError("expected entry index", lineno, i_col)
    closing, c_col = tokens[idx + 5]
    if closing != "]":
        raise GenfileError("expected ']'", lineno, c_col)
    return (int(n_tok), int(i_tok)), idx + 6


def _parse_arg(tokens, idx, lineno) -> tuple:
    tok, col = tokens[idx]
    if tok != "PI":
        raise GenfileError(f"expected PI in bracket argument, got {tok!r}", lineno, col)
    targets, idx = _parse_int_list(tokens, idx + 1, lineno)
    if any(targets[k] >= targets[k + 1] for k in range(len(targets) - 1)):
        raise GenfileError("inner target lists must be strictly increasing", lineno)
    name, idx = _parse_name(tokens, idx, lineno)
    return GenRef(targets, name), idx


def parse(text: str) -> list:
    """Parse generator definitions; returns GenDefs in file order."""
    defs = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = _Parser._tokenize(line, lineno)
        name, idx = _parse_name(tokens, 0, lineno)
        if name in seen:
            raise GenfileError(f"duplicate definition R[{name[0]}][{name[1]}]", lineno)
        seen.add(name)
        tok, col = tokens[idx]
        if tok != "=":
            raise GenfileError(f"expected '=', got {tok!r}", lineno, col)
        idx += 1
        tok, col = tokens[idx]
        if tok == "X(1)":
            if idx + 1 != len(tokens):
                raise GenfileError("trailing input after X(1)", lineno)
            defs.append(GenDef(name, GenExpr.base(), lineno))
            continue
        if tok != "PI":
            raise GenfileError(f"expected PI or X(1), got {tok!r}", lineno, col)
        targets, idx = _parse_int_list(tokens, idx + 1, lineno)
        if any(targets[k] > targets[k + 1] for k in range(len(targets) - 1)):
            raise GenfileError("outer target list must be nondecreasing", lineno)
        tok, col = tokens[idx]
        if tok != "JC(":
            raise GenfileError(f"expected JC(, got {tok!r}", lineno, col)
        arg1, idx = _parse_arg(tokens, idx + 1, lineno)
        tok, col = tokens[idx]
        if tok != ",":
            raise GenfileError(f"expected ',' between bracket arguments", lineno, col)
        arg2, idx = _parse_arg(tokens, idx + 1, lineno)
        tok, col = tokens[idx]
        if tok != ")":
            raise GenfileError(f"expected ')', got {tok!r}", lineno, col)
        if idx + 1 != len(tokens):
            raise GenfileError("trailing input after definition", lineno)
        if set(arg1.targets) & set(arg2.targets):
            raise GenfileError("bracket argument targets must be disjoint", lineno)
        defs.append(GenDef(name, GenExpr(targets, (arg1, arg2)), lineno))
    return defs


@dataclass(frozen=True)
class GenTable:
    values: dict  # (n, i) -> ScaledElement
    defs: dict    # (n, i) -> GenExpr
    order: tuple  # file order of names

    def value(self, n: int, i: int) -> ScaledElement:
        return self.values[(n, i)]


def _support_map(elem: Element, targets: tuple, lineno: int) -> MonotoneMap:
    support = sorted(elem.support())
    if len(support) != len(targets):
        raise GenfileError(
            f"target list length {len(targets)} does not match operand support "
            f"size {len(support)}", lineno)
    return MonotoneMap.from_lists(support, targets)


def elaborate(defs: list) -> GenTable:
    """Evaluate definitions bottom-up; references must be acyclic."""
    by_name = {d.name: d for d in defs}
    values: dict = {}
    in_progress: set = set()

    def eval_name(name: tuple, lineno: int) -> ScaledElement:
        if name in values:
            return values[name]
        if name not in by_name:
            raise GenfileError(f"undefined reference R[{name[0]}][{name[1]}]", lineno)
        if name in in_progress:
            raise GenfileError(f"cyclic reference through R[{name[0]}][{name[1]}]", lineno)
        in_progress.add(name)
        d = by_name[name]
        if d.expr.is_base():
            value = ScaledElement(Element({single(1): 1}), 1)
        else:
            arg1, arg2 = d.expr.bracket
            v1 = eval_name(arg1.name, d.line)
            v2 = eval_name(arg2.name, d.line)
            p1 = v1.elem.project(_support_map(v1.elem, arg1.targets, d.line))
            p2 = v2.elem.project(_support_map(v2.elem, arg2.targets, d.line))
            bracket = scaled_jacobi(ScaledElement(p1, v1.q), ScaledElement(p2, v2.q))
            outer = _support_map(bracket.elem, d.expr.targets, d.line)
            value = ScaledElement(bracket.elem.project(outer), bracket.q)
        in_progress.discard(name)
        values[name] = value
        return value

    for d in defs:
        eval_name(d.name, d.line)
    return GenTable(values, {d.name: d.expr for d in defs}, tuple(d.name for d in defs))


def serialize(table: GenTable) -> str:
    """Canonical re-emission; parse(serialize(t)) elaborates to the same table."""
    lines = []
    for name in table.order:
        expr = table.defs[name]
        head = f"R[{name[0]}][{name[1]}] ="
        if expr.is_base():
            lines.append(f"{head} X(1)")
        else:
            a1, a2 = expr.bracket
            lines.append(
                f"{head} PI [{','.join(map(str, expr.targets))}] "
                f"JC( PI [{','.join(map(str, a1.targets))}] R[{a1.name[0]}][{a1.name[1]}], "
                f"PI [{','.join(map(str, a2.targets))}] R[{a2.name[0]}][{a2.name[1]}] )")
    return "\n".join(lines) + ("\n" if lines else "")


# -- bundled data ------------------------------------------------------------


def _data_text(filename: str) -> str:
    return resources.files("altpoly.data").joinpath(filename).read_text()


def load_bundled_table() -> GenTable:
    return elaborate(parse(_data_text("generators.alt")))


def load_bundled_systems() -> dict:
    """Part lists: which entries make up each recursive family, plus the
    generated-out membership claims and the asymptotic subfamilies."""
    raw = json.loads(_data_text("systems.json"))

    def names(seq):
        out = []
        for item in seq:
            n, i = item.split(":")
            out.append((int(n), int(i)))
        return tuple(out)

    def name(item):
        n, i = item.split(":")
        return (int(n), int(i))

    return {
        "systems": {int(k): names(v) for k, v in raw["systems"].items()},
        "generated_out": {int(k): names(v) for k, v in raw["generated_out"].items()},
        "asymptotic": {k: names(v) for k, v in raw["asymptotic"].items()},
        "alternates": {name(k): (name(v["canonical"]), v["context"])
                       for k, v in raw["alternates"].items()},
    }
