"""Text formats for algebras and modules.

Algebra file (``.alg``)::

    # the quiver 1 -> 2 -> 3 with alpha*beta = 0
    field: 2
    vertices: 1 2 3
    arrows:
      alpha: 1 -> 2
      beta: 2 -> 3
    relations:
      alpha*beta

Module file (``.mod``), constructor form: one expression such as ``S(2)``,
``P(1)``, ``I(3)``, ``0`` or ``sum[P(2), S(3)]``.  Explicit form::

    dims: 1=0 2=1 3=1
    maps:
      beta: [1]
      alpha: [ ]

Matrices are written row by row, rows separated by ``;``, entries by
spaces or commas.  A map may be omitted when it is zero.  ``#`` starts a
comment anywhere on a line.
"""

from __future__ import annotations

import re

import numpy as np

from . import linalg
from .algebra import AlgebraError, Arrow, BoundQuiverAlgebra, Quiver, Relation, build_algebra
from .rep import Representation, direct_sum, standard_module, zero_module


class FormatError(ValueError):
    """Malformed input file; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.message = message
        self.line = line
        self.source = source
        where = ":".join(x for x in (source, None if line is None else f"line {line}") if x)
        super().__init__(f"{where}: {message}" if where else message)


_TERM = re.compile(r"^(?:(\d+)\s*\*?\s*)?([^\d\s*][^\s*]*(?:\s*\*\s*[^\d\s*][^\s*]*)*)$")


def parse_relation(text: str, quiver: Quiver | None = None, line: int | None = None) -> Relation:
    """Parse ``"alpha*beta - 2*gamma*delta"`` into a :class:`Relation`."""
    s = text.strip()
    if not s:
        raise FormatError("empty relation", line)
    chunks = re.findall(r"([+-]?)\s*([^+-]+)", s)
    if "".join(sign + body for sign, body in chunks).replace(" ", "") != s.replace(" ", ""):
        raise FormatError(f"cannot parse relation {text!r}", line)
    terms = []
    for sign, body in chunks:
        m = _TERM.match(body.strip())
        if not m:
            raise FormatError(f"cannot parse relation term {body.strip()!r}", line)
        coef = int(m.group(1)) if m.group(1) else 1
        if sign == "-":
            coef = -coef
        names = tuple(n.strip() for n in m.group(2).split("*"))
        if len(names) < 2:
            raise FormatError(
                f"relation term {m.group(2)!r} has length {len(names)}; "
                "admissible relations need paths of length >= 2", line)
        if quiver is not None:
            for n in names:
                if n not in quiver.arrow_index:
                    raise FormatError(f"unknown arrow {n!r} in relation", line)
        terms.append((coef, names))
    return Relation(tuple(terms))


_HEADERS = ("field", "vertices", "arrows", "relations")
_ARROW = re.compile(r"^([^\s:]+)\s*:\s*([^\s]+)\s*->\s*([^\s]+)$")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _split_names(s: str) -> list[str]:
    return [x for x in re.split(r"[\s,]+", s.strip()) if x]


def parse_algebra(text: str, field: int | None = None) -> BoundQuiverAlgebra:
    """Parse an algebra file; ``field`` overrides the file's ``field:`` line."""
    sections: dict[str, int] = {}
    p_file = None
    vertices: list[str] | None = None
    arrows: list[tuple[str, str, str, int]] = []
    rel_lines: list[tuple[str, int]] = []
    current = None
    for no, line in _lines(text):
        head, sep, rest = line.partition(":")
        key = head.strip().lower()
        if sep and key in _HEADERS and "->" not in rest:
            if key in sections:
                raise FormatError(f"section {key!r} appears twice (first on line {sections[key]})", no)
            sections[key] = no
            current = key
            rest = rest.strip()
            if key == "field":
                try:
                    p_file = int(rest)
                except ValueError:
                    raise FormatError(f"field must be a prime number, got {rest!r}", no) from None
            elif key == "vertices":
                vertices = _split_names(rest)
            elif rest:
                raise FormatError(f"entries of {key!r} go on the following lines", no)
            continue
        if current == "arrows":
            m = _ARROW.match(line)
            if not m:
                raise FormatError(f"expected 'name: source -> target', got {line!r}", no)
            arrows.append((m.group(1), m.group(2), m.group(3), no))
        elif current == "relations":
            rel_lines.append((line, no))
        elif current == "vertices":
            vertices = (vertices or []) + _split_names(line)
        else:
            raise FormatError(f"unexpected line {line!r}", no)
    if not vertices:
        raise FormatError("no vertices given", sections.get("vertices"))
    p = field if field is not None else (p_file if p_file is not None else 2)
    try:
        linalg.FieldPrime(p)
    except ValueError as exc:
        raise FormatError(str(exc), sections.get("field")) from None
    vset = set(vertices)
    for name, s, t, no in arrows:
        for v in (s, t):
            if v not in vset:
                raise FormatError(f"arrow {name!r} uses unknown vertex {v!r}", no)
    try:
        quiver = Quiver(tuple(vertices), tuple(Arrow(n, s, t) for n, s, t, _ in arrows))
    except AlgebraError as exc:
        raise FormatError(str(exc), sections.get("arrows") or sections.get("vertices")) from None
    rels = []
    for line, no in rel_lines:
        rels.append((parse_relation(line, quiver, no), no))
    try:
        return build_algebra(quiver, [r for r, _ in rels], p)
    except AlgebraError as exc:
        line = _blame_relation(quiver, rels, p)
        raise FormatError(str(exc), line if line is not None else sections.get("relations")) from None


def _blame_relation(quiver: Quiver, rels, p: int) -> int | None:
    """Line of the first relation whose terms do not share ends."""
    from .algebra import _path_from_names

    for rel, no in rels:
        ends = set()
        try:
            for _, names in rel.terms:
                pth = _path_from_names(quiver, names)
                ends.add((pth.source, pth.target))
        except AlgebraError:
            return no
        if len(ends) > 1:
            return no
    return None


def read_algebra(path, field: int | None = None) -> BoundQuiverAlgebra:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse_algebra(text, field)
    except FormatError as exc:
        raise FormatError(exc.message, exc.line, str(path)) from None


def emit_algebra(alg: BoundQuiverAlgebra) -> str:
    q = alg.quiver
    out = [f"field: {alg.p}", "vertices: " + " ".join(q.vertices), "arrows:"]
    out += [f"  {a.name}: {a.source} -> {a.target}" for a in q.arrows]
    out.append("relations:")
    out += [f"  {r.text()}" for r in alg.relations]
    return "\n".join(out) + "\n"


# -- modules

_CALL = re.compile(r"^([SPI])\s*\(\s*([^()\s]+)\s*\)$")


def _split_top_level(s: str, line: int | None) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
            if depth < 0:
                raise FormatError("unbalanced brackets", line)
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise FormatError("unbalanced brackets", line)
    parts.append("".join(cur))
    return [x.strip() for x in parts]


def module_expression(expr: str, alg: BoundQuiverAlgebra, line: int | None = None) -> Representation:
    """Evaluate ``S(v)``, ``P(v)``, ``I(v)``, ``0`` or ``sum[e1, e2, ...]``."""
    e = expr.strip()
    if e == "0":
        return zero_module(alg)
    m = _CALL.match(e)
    if m:
        kind, v = m.groups()
        if v not in alg.quiver.vertex_index:
            raise FormatError(f"unknown vertex {v!r}", line)
        return standard_module(alg, kind, v)
    if e.startswith("sum[") and e.endswith("]"):
        inner = e[4:-1].strip()
        parts = _split_top_level(inner, line) if inner else []
        return direct_sum([module_expression(x, alg, line) for x in parts], alg)
    if e.count("[") != e.count("]") or e.count("(") != e.count(")"):
        raise FormatError(f"unbalanced brackets in {expr!r}", line)
    raise FormatError(f"cannot parse module expression {expr!r}", line)


def _parse_matrix(s: str, rows: int, cols: int, line: int) -> np.ndarray:
    s = s.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise FormatError(f"matrix must be written in brackets, got {s!r}", line)
    body = s[1:-1].strip()
    if not body:
        data = []
    else:
        try:
            data = [[int(x) for x in re.split(r"[\s,]+", r.strip()) if x] for r in body.split(";")]
        except ValueError:
            raise FormatError(f"matrix entries must be integers: {s!r}", line) from None
    if rows * cols == 0:
        if any(data):
            raise FormatError(f"expected a {rows}x{cols} matrix", line)
        return np.zeros((rows, cols), dtype=np.int64)
    if len(data) != rows or any(len(r) != cols for r in data):
        raise FormatError(f"expected a {rows}x{cols} matrix, got {s!r}", line)
    return np.array(data, dtype=np.int64)


def parse_module(text: str, alg: BoundQuiverAlgebra) -> Representation:
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty module file")
    first_no, first = lines[0]
    if not first.lower().startswith("dims"):
        if len(lines) > 1:
            raise FormatError("constructor form takes a single expression", lines[1][0])
        return module_expression(first, alg, first_no)
    q = alg.quiver
    dims: dict[str, int] = {}
    maps: dict[str, tuple[str, int]] = {}
    section = None
    dims_line = first_no
    for no, line in lines:
        head, sep, rest = line.partition(":")
        key = head.strip().lower()
        if sep and key == "dims" and section is None:
            section = "dims"
            for tok in _split_names(rest):
                v, eq, d = tok.partition("=")
                if not eq or v not in q.vertex_index:
                    raise FormatError(f"bad dimension entry {tok!r}", no)
                try:
                    dims[v] = int(d)
                except ValueError:
                    raise FormatError(f"bad dimension entry {tok!r}", no) from None
                if dims[v] < 0:
                    raise FormatError(f"negative dimension at {v!r}", no)
            continue
        if sep and key == "maps" and not rest.strip():
            section = "maps"
            continue
        if section != "maps" or not sep:
            raise FormatError(f"unexpected line {line!r}", no)
        name = head.strip()
        if name not in q.arrow_index:
            raise FormatError(f"unknown arrow {name!r}", no)
        if name in maps:
            raise FormatError(f"arrow {name!r} given twice", no)
        maps[name] = (rest, no)
    dv = tuple(dims.get(v, 0) for v in q.vertices)
    mats = []
    for a, (s, t) in zip(q.arrows, q.arrow_ends):
        if a.name in maps:
            txt, no = maps[a.name]
            mats.append(_parse_matrix(txt, dv[t], dv[s], no))
        else:
            mats.append(np.zeros((dv[t], dv[s]), dtype=np.int64))
    m = Representation(alg, dv, tuple(mats))
    if not m.relations_hold():
        raise FormatError("the maps do not satisfy the relations of the algebra", dims_line)
    return m


def read_module(path, alg: BoundQuiverAlgebra) -> Representation:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return parse_module(text, alg)
    except FormatError as exc:
        raise FormatError(exc.message, exc.line, str(path)) from None


def _matrix_text(m: np.ndarray) -> str:
    if m.size == 0:
        return "[]"
    return "[" + "; ".join(" ".join(str(int(x)) for x in row) for row in m) + "]"


def emit_module(m: Representation) -> str:
    q = m.algebra.quiver
    out = ["dims: " + " ".join(f"{v}={d}" for v, d in zip(q.vertices, m.dims)), "maps:"]
    out += [f"  {a.name}: {_matrix_text(x)}" for a, x in zip(q.arrows, m.maps)]
    return "\n".join(out) + "\n"
