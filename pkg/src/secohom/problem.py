"""Line-oriented problem files.

See ``docs/problem-format.md`` for the grammar. Parsing happens in two
stages: the text is read into declarations (syntax errors and unresolved
names raise :class:`ParseError`), then every object is built and validated
(dimension mismatches and failed axioms raise :class:`ProblemValidationError`).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from .algebra import (
    AlgebraMorphism,
    AlgebraTable,
    Bimodule,
    GroupError,
    InvalidAlgebra,
    InvalidBimodule,
    MorphismError,
    StructureAlgebra,
    Triple,
    ValidationReport,
    cyclic_group_table,
    direct_product_table,
    group_algebra,
    ground_field,
    matrix_algebra,
    regular_bimodule,
    truncated_polynomial_algebra,
    validate_algebra,
)
from .complex import Cochain, CochainSpace
from .deformation import DeformationFamily
from .field import QQ, Field, FieldMismatch, parse_field
from .simplicial import FiniteAbelianGroup

__all__ = ["ParseError", "ProblemValidationError", "Task", "Problem", "parse", "parse_text"]


class ParseError(ValueError):
    """Syntax error or unresolved name, with the offending line number."""

    def __init__(self, line: int | None, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line else message)


class ProblemValidationError(ValueError):
    """A declared object violates its axioms or a dimension constraint."""

    def __init__(self, line: int | None, message: str, report: ValidationReport | None = None):
        self.line = line
        self.message = message
        self.report = report
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass
class Task:
    command: str
    params: dict
    line: int


@dataclass
class _Decl:
    kind: str
    name: str
    line: int
    header: dict
    body: list = dc_field(default_factory=list)  # (line, text)


@dataclass
class Problem:
    """Everything a problem file declares, fully built and validated."""

    field: Field = QQ
    algebras: dict = dc_field(default_factory=dict)
    algebra_kinds: dict = dc_field(default_factory=dict)
    raw_algebras: dict = dc_field(default_factory=dict)
    algebra_reports: dict = dc_field(default_factory=dict)
    morphisms: dict = dc_field(default_factory=dict)
    bimodules: dict = dc_field(default_factory=dict)
    triples: dict = dc_field(default_factory=dict)
    cochains: dict = dc_field(default_factory=dict)
    families: dict = dc_field(default_factory=dict)
    groups: dict = dc_field(default_factory=dict)
    tasks: list = dc_field(default_factory=list)
    source: str = "<string>"


_NAME = r"[A-Za-z_][A-Za-z0-9_']*"
_BLOCK_KINDS = ("algebra", "morphism", "bimodule", "cochain", "family")
_ENTRY = re.compile(r"^\((?P<idx>[^)]*)\)\s*=\s*(?P<val>\S+)$")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _header(kind: str, rest: str, ln: int) -> tuple[str, dict, bool]:
    """Parse the text after the keyword; return (name, header fields, is_block)."""
    if kind == "algebra":
        m = re.fullmatch(rf"({_NAME})\s*=\s*(.+)", rest)
        if m:
            return m.group(1), {"builtin": m.group(2).split()}, False
        m = re.fullmatch(rf"({_NAME})(\s+commutative)?", rest)
        if m:
            return m.group(1), {"commutative": bool(m.group(2))}, True
    elif kind == "morphism":
        m = re.fullmatch(rf"({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})(?:\s*=\s*({_NAME}))?", rest)
        if m:
            hdr = {"source": m.group(2), "target": m.group(3), "builtin": m.group(4)}
            return m.group(1), hdr, m.group(4) is None
    elif kind == "bimodule":
        m = re.fullmatch(rf"({_NAME})\s+over\s+({_NAME})(?:\s*=\s*(regular))?", rest)
        if m:
            return m.group(1), {"algebra": m.group(2), "regular": bool(m.group(3))}, not m.group(3)
    elif kind == "triple":
        m = re.fullmatch(rf"({_NAME})\s*=\s*\(\s*({_NAME})\s*,\s*({_NAME})\s*,\s*({_NAME})\s*\)", rest)
        if m:
            return m.group(1), {"A": m.group(2), "B": m.group(3), "eps": m.group(4)}, False
    elif kind == "cochain":
        m = re.fullmatch(rf"({_NAME})\s*:\s*({_NAME})(?:\s+module\s+({_NAME}))?\s+degree\s+(\d+)", rest)
        if m:
            return m.group(1), {"triple": m.group(2), "module": m.group(3), "degree": int(m.group(4))}, True
    elif kind == "family":
        m = re.fullmatch(rf"({_NAME})\s*:\s*({_NAME})", rest)
        if m:
            return m.group(1), {"triple": m.group(2)}, True
    elif kind == "group":
        m = re.fullmatch(rf"({_NAME})\s*=\s*(.+)", rest)
        if m:
            return m.group(1), {"spec": m.group(2)}, False
    raise ParseError(ln, f"malformed {kind} declaration: {rest!r}")


def _read(text: str) -> tuple[str | None, int, list[_Decl], list[Task]]:
    field_spec, field_line = None, 0
    decls: list[_Decl] = []
    tasks: list[Task] = []
    current: _Decl | None = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        if current is not None:
            if line == "end":
                decls.append(current)
                current = None
            else:
                current.body.append((ln, line))
            continue
        kw, _, rest = line.partition(" ")
        rest = rest.strip()
        if kw == "field":
            if decls or field_spec is not None:
                raise ParseError(ln, "the field must be declared once, before any object")
            field_spec, field_line = rest, ln
        elif kw == "task":
            parts = rest.split()
            if not parts:
                raise ParseError(ln, "task needs a command")
            params = {}
            for p in parts[1:]:
                if "=" not in p:
                    raise ParseError(ln, f"task parameter {p!r} is not key=value")
                k, v = p.split("=", 1)
                params[k] = v
            tasks.append(Task(parts[0], params, ln))
        elif kw in _BLOCK_KINDS or kw in ("triple", "group"):
            name, hdr, is_block = _header(kw, rest, ln)
            d = _Decl(kw, name, ln, hdr)
            if is_block:
                current = d
            else:
                decls.append(d)
        elif kw == "end":
            raise ParseError(ln, "'end' without an open block")
        else:
            raise ParseError(ln, f"unknown keyword {kw!r}")
    if current is not None:
        raise ParseError(current.line, f"{current.kind} block {current.name!r} is not closed with 'end'")
    return field_spec, field_line, decls, tasks


class _Builder:
    def __init__(self, field: Field, source: str):
        self.p = Problem(field=field, source=source)
        self.names: dict[str, str] = {}

    # helpers

    def scalar(self, text: str, ln: int):
        try:
            return self.p.field.parse(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(ln, str(exc)) from None

    def lookup(self, table: dict, kind: str, name: str, ln: int):
        if name not in table:
            raise ParseError(ln, f"unknown {kind} {name!r}")
        return table[name]

    def index(self, token: str, labels, ln: int, what: str) -> int:
        token = token.strip()
        if token in labels:
            return labels.index(token)
        if re.fullmatch(r"\d+", token) and int(token) < len(labels):
            return int(token)
        raise ParseError(ln, f"{token!r} is not a basis element of {what}")

    def declare(self, name: str, kind: str, ln: int):
        if name in self.names:
            raise ParseError(ln, f"name {name!r} already declared as a {self.names[name]}")
        self.names[name] = kind

    # builders

    def algebra(self, d: _Decl):
        f = self.p.field
        if "builtin" in d.header:
            words = d.header["builtin"]
            try:
                if words[0] == "ground" and len(words) == 1:
                    alg, kind = ground_field(f), "ground"
                elif words[0] == "truncated" and len(words) == 2:
                    alg, kind = truncated_polynomial_algebra(int(words[1]), f, name=d.name), "truncated"
                elif words[0] == "matrix" and len(words) == 2:
                    alg, kind = matrix_algebra(int(words[1]), f), "matrix"
                elif words[0] == "group":
                    G = self.group_spec(" ".join(words[1:]), d.line)
                    alg, kind = group_algebra(G.table, field=f, name=d.name), "group"
                else:
                    raise ParseError(d.line, f"unknown algebra constructor {' '.join(words)!r}")
            except ValueError as exc:
                if isinstance(exc, ParseError):
                    raise
                raise ParseError(d.line, str(exc)) from None
            alg.name = d.name
            self.p.algebras[d.name] = alg
            self.p.algebra_kinds[d.name] = kind
            self.p.algebra_reports[d.name] = ValidationReport()
            return
        labels, unit, structure = None, None, {}
        for ln, text in d.body:
            if text.startswith("basis"):
                labels = text.split()[1:]
                if not labels or len(set(labels)) != len(labels):
                    raise ParseError(ln, "basis needs distinct labels")
            elif text.startswith("unit"):
                unit = (ln, text[4:].strip().lstrip("=").strip())
            elif text.startswith("("):
                if labels is None:
                    raise ParseError(ln, "declare the basis before structure constants")
                m = _ENTRY.match(text)
                if not m:
                    raise ParseError(ln, f"expected '(i, j, k) = value', got {text!r}")
                parts = m.group("idx").split(",")
                if len(parts) != 3:
                    raise ParseError(ln, "structure constants take three indices")
                key = tuple(self.index(t, labels, ln, d.name) for t in parts)
                if key in structure:
                    raise ParseError(ln, f"structure constant {key} given twice")
                structure[key] = self.scalar(m.group("val"), ln)
            else:
                raise ParseError(ln, f"unexpected line in algebra block: {text!r}")
        if labels is None:
            raise ParseError(d.line, f"algebra {d.name!r} has no basis line")
        if unit is None:
            raise ParseError(d.line, f"algebra {d.name!r} has no unit line")
        uln, utext = unit
        dim = len(labels)
        if utext.startswith("["):
            coords = [c for c in utext.strip("[]").split(",") if c.strip()]
            if len(coords) != dim:
                raise ProblemValidationError(uln, f"unit has {len(coords)} coordinates, algebra has dimension {dim}")
            unit_vec = [self.scalar(c.strip(), uln) for c in coords]
        else:
            i = self.index(utext, labels, uln, d.name)
            unit_vec = [f.one if k == i else f.zero for k in range(dim)]
        table = [[[f.zero] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j, k), v in structure.items():
            table[i][j][k] = v
        raw = AlgebraTable(
            dim, tuple(tuple(tuple(r) for r in plane) for plane in table), tuple(unit_vec), f, d.header["commutative"]
        )
        report = validate_algebra(raw)
        self.p.raw_algebras[d.name] = raw
        self.p.algebra_reports[d.name] = report
        if not report.ok:
            raise ProblemValidationError(d.line, f"algebra {d.name!r} is invalid: {report.summary()}", report)
        self.p.algebras[d.name] = StructureAlgebra(
            dim, table, unit_vec, labels=labels, field=f, commutative=d.header["commutative"], name=d.name
        )
        self.p.algebra_kinds[d.name] = "table"

    def group_spec(self, spec: str, ln: int) -> FiniteAbelianGroup:
        factors = [s.strip() for s in spec.split(" x ")]
        table = None
        for fac in factors:
            m = re.fullmatch(r"cyclic\s+(\d+)", fac)
            if not m or int(m.group(1)) < 1:
                raise ParseError(ln, f"unknown group {fac!r} (expected 'cyclic N', joined by ' x ')")
            t = cyclic_group_table(int(m.group(1)))
            table = t if table is None else direct_product_table(table, t)
        try:
            return FiniteAbelianGroup(table)
        except GroupError as exc:
            raise ProblemValidationError(ln, str(exc)) from None

    def morphism(self, d: _Decl):
        h = d.header
        B = self.lookup(self.p.algebras, "algebra", h["source"], d.line)
        A = self.lookup(self.p.algebras, "algebra", h["target"], d.line)
        f = self.p.field
        if h["builtin"]:
            kind = h["builtin"]
            if kind == "identity":
                if B is not A:
                    raise ProblemValidationError(d.line, "identity needs source = target")
                matrix = [[f.one if i == j else f.zero for j in range(B.dim)] for i in range(A.dim)]
            elif kind == "unit":
                if B.dim != 1:
                    raise ProblemValidationError(d.line, "'unit' is the map k -> A; the source must be 1-dimensional")
                matrix = [[u] for u in A.unit]
            elif kind == "augmentation":
                bkind = self.p.algebra_kinds[h["source"]]
                if bkind == "group":
                    images = [list(A.unit)] * B.dim
                elif bkind in ("truncated", "ground"):
                    images = [list(A.unit)] + [[f.zero] * A.dim] * (B.dim - 1)
                else:
                    raise ProblemValidationError(
                        d.line, "'augmentation' is defined for group, truncated and ground algebras"
                    )
                matrix = [[images[j][i] for j in range(B.dim)] for i in range(A.dim)]
            else:
                raise ParseError(d.line, f"unknown morphism constructor {kind!r}")
        else:
            matrix = [[f.zero] * B.dim for _ in range(A.dim)]
            for ln, text in d.body:
                m = _ENTRY.match(text)
                if not m:
                    raise ParseError(ln, f"expected '(target, source) = value', got {text!r}")
                parts = m.group("idx").split(",")
                if len(parts) != 2:
                    raise ParseError(ln, "morphism entries take (target, source)")
                t = self.index(parts[0], A.labels, ln, A.name)
                s = self.index(parts[1], B.labels, ln, B.name)
                matrix[t][s] = self.scalar(m.group("val"), ln)
        try:
            self.p.morphisms[d.name] = AlgebraMorphism(B, A, matrix, name=d.name)
        except MorphismError as exc:
            raise ProblemValidationError(d.line, f"morphism {d.name!r}: {exc} (witness {exc.witness})") from None

    def bimodule(self, d: _Decl):
        A = self.lookup(self.p.algebras, "algebra", d.header["algebra"], d.line)
        if d.header["regular"]:
            M = regular_bimodule(A)
            M.name = d.name
            self.p.bimodules[d.name] = M
            return
        f = self.p.field
        labels = None
        left, right = {}, {}
        for ln, text in d.body:
            if text.startswith("basis"):
                labels = text.split()[1:]
                continue
            side, _, rest = text.partition(" ")
            if side not in ("left", "right") or labels is None:
                raise ParseError(ln, "expected 'basis ...' then 'left (a, m, m') = v' or 'right (m, a, m') = v'")
            m = _ENTRY.match(rest.strip())
            if not m or len(m.group("idx").split(",")) != 3:
                raise ParseError(ln, f"malformed action entry {text!r}")
            x, y, z = m.group("idx").split(",")
            if side == "left":
                key = (self.index(x, A.labels, ln, A.name), self.index(y, labels, ln, d.name), self.index(z, labels, ln, d.name))
                left[key] = self.scalar(m.group("val"), ln)
            else:
                key = (self.index(x, labels, ln, d.name), self.index(y, A.labels, ln, A.name), self.index(z, labels, ln, d.name))
                right[key] = self.scalar(m.group("val"), ln)
        if labels is None:
            raise ParseError(d.line, f"bimodule {d.name!r} has no basis line")
        m_dim, a_dim = len(labels), A.dim
        L = [[[f.zero] * m_dim for _ in range(m_dim)] for _ in range(a_dim)]
        R = [[[f.zero] * m_dim for _ in range(a_dim)] for _ in range(m_dim)]
        for (i, s, t), v in left.items():
            L[i][s][t] = v
        for (s, i, t), v in right.items():
            R[s][i][t] = v
        try:
            self.p.bimodules[d.name] = Bimodule(A, m_dim, L, R, labels=labels, name=d.name)
        except InvalidBimodule as exc:
            raise ProblemValidationError(d.line, f"bimodule {d.name!r} is invalid: {exc}", exc.report) from None

    def triple(self, d: _Decl):
        h = d.header
        A = self.lookup(self.p.algebras, "algebra", h["A"], d.line)
        B = self.lookup(self.p.algebras, "algebra", h["B"], d.line)
        eps = self.lookup(self.p.morphisms, "morphism", h["eps"], d.line)
        try:
            self.p.triples[d.name] = Triple(A, B, eps, name=d.name)
        except (InvalidAlgebra, MorphismError) as exc:
            raise ProblemValidationError(d.line, f"triple {d.name!r}: {exc}") from None

    def cochain(self, d: _Decl):
        h = d.header
        T = self.lookup(self.p.triples, "triple", h["triple"], d.line)
        M = self.lookup(self.p.bimodules, "bimodule", h["module"], d.line) if h["module"] else None
        if M is not None and M.algebra is not T.A:
            raise ProblemValidationError(d.line, f"bimodule {M.name!r} is not over {T.A.name!r}")
        sp = CochainSpace(T, M, h["degree"])
        coeffs = [self.p.field.zero] * sp.dim
        m_labels = (M or sp.M).labels
        for ln, text in d.body:
            m = _ENTRY.match(text)
            if not m:
                raise ParseError(ln, f"expected '(s; a...; b...) = value', got {text!r}")
            parts = m.group("idx").split(";")
            if len(parts) != 3:
                raise ParseError(ln, "cochain entries look like (s; a1, ..., an; b1, ...)")
            s = self.index(parts[0], m_labels, ln, "the module")
            ia = [self.index(t, T.A.labels, ln, T.A.name) for t in parts[1].split(",") if t.strip()]
            ib = [self.index(t, T.B.labels, ln, T.B.name) for t in parts[2].split(",") if t.strip()]
            if len(ia) != sp.n or len(ib) != sp.nb:
                raise ProblemValidationError(
                    ln, f"degree {sp.n} entries need {sp.n} A-indices and {sp.nb} B-indices"
                )
            coeffs[sp.index(s, ia, ib)] = self.scalar(m.group("val"), ln)
        self.p.cochains[d.name] = Cochain(sp, coeffs)

    def family(self, d: _Decl):
        T = self.lookup(self.p.triples, "triple", d.header["triple"], d.line)
        given = {}
        for ln, text in d.body:
            m = re.fullmatch(rf"c(\d+)\s*=\s*({_NAME})", text)
            if not m:
                raise ParseError(ln, f"expected 'cN = COCHAIN', got {text!r}")
            r = int(m.group(1))
            if r < 1 or r in given:
                raise ParseError(ln, f"bad or repeated order c{r}")
            c = self.lookup(self.p.cochains, "cochain", m.group(2), ln)
            if c.space.triple is not T or c.degree != 2:
                raise ProblemValidationError(ln, f"cochain {m.group(2)!r} is not a degree-2 cochain over {T.name!r}")
            given[r] = c
        order = max(given, default=0)
        if sorted(given) != list(range(1, order + 1)):
            raise ProblemValidationError(d.line, f"family {d.name!r} must list c1..c{order} without gaps")
        self.p.families[d.name] = DeformationFamily(T, [given[r] for r in range(1, order + 1)])

    def group(self, d: _Decl):
        self.p.groups[d.name] = self.group_spec(d.header["spec"], d.line)


def parse_text(text: str, *, field: Field | None = None, source: str = "<string>") -> Problem:
    """Parse and validate a problem given as a string.

    ``field`` overrides the file's ``field`` line.
    """
    field_spec, field_line, decls, tasks = _read(text)
    if field is None:
        try:
            field = parse_field(field_spec) if field_spec else QQ
        except ValueError as exc:
            raise ParseError(field_line, str(exc)) from None
    b = _Builder(field, source)
    for d in decls:
        b.declare(d.name, d.kind, d.line)
        try:
            getattr(b, d.kind)(d)
        except FieldMismatch as exc:
            raise ProblemValidationError(d.line, str(exc)) from None
    b.p.tasks = tasks
    return b.p


def parse(path: str | Path, *, field: Field | None = None) -> Problem:
    path = Path(path)
    return parse_text(path.read_text(), field=field, source=str(path))
