"""Finite-dimensional algebras given by structure constants.

An algebra of dimension ``d`` is described by ``table[i][j][k]``, the
coefficient of ``e_k`` in ``e_i * e_j``, together with the coordinates of its
unit. Elements are tuples of field scalars. Every object here is validated
when it is constructed; an invalid table never becomes a
:class:`StructureAlgebra`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Mapping, NamedTuple, Sequence

from .field import QQ, Field, FieldMismatch

__all__ = [
    "AlgebraTable",
    "Violation",
    "ValidationReport",
    "InvalidAlgebra",
    "MorphismError",
    "InvalidBimodule",
    "GroupError",
    "StructureAlgebra",
    "AlgebraMorphism",
    "Bimodule",
    "Triple",
    "validate_algebra",
    "epsilon_map",
    "unit_morphism",
    "identity_morphism",
    "regular_bimodule",
    "ground_field",
    "truncated_polynomial_algebra",
    "matrix_algebra",
    "group_algebra",
    "cyclic_group_table",
    "symmetric_group_table",
    "direct_product_table",
    "check_group_table",
]


class InvalidAlgebra(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(report.summary())


class MorphismError(ValueError):
    """An algebra morphism failed one of its axioms.

    ``kind`` is ``"unital"``, ``"multiplicative"``, ``"central"`` or
    ``"shape"``; ``witness`` holds the basis indices where it fails.
    """

    def __init__(self, kind: str, witness: tuple, message: str):
        self.kind = kind
        self.witness = witness
        super().__init__(message)


class InvalidBimodule(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__(report.summary())


class GroupError(ValueError):
    pass


class Violation(NamedTuple):
    kind: str
    indices: tuple

    def __str__(self):
        return f"{self.kind} at {self.indices}"


@dataclass
class ValidationReport:
    violations: list[Violation] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def summary(self, limit: int = 5) -> str:
        if self.ok:
            return "valid"
        shown = ", ".join(str(v) for v in self.violations[:limit])
        more = len(self.violations) - limit
        return f"{len(self.violations)} violation(s): {shown}" + (f" (+{more} more)" if more > 0 else "")


class AlgebraTable(NamedTuple):
    """Raw, unvalidated algebra data."""

    dim: int
    table: tuple  # table[i][j] is a tuple of length dim
    unit: tuple
    field: Field = QQ
    commutative: bool = False


def _dense_table(dim: int, structure, field: Field) -> tuple:
    z = field.zero
    if isinstance(structure, Mapping):
        t = [[[z] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j, k), v in structure.items():
            if not all(0 <= x < dim for x in (i, j, k)):
                raise IndexError(f"structure constant index ({i}, {j}, {k}) out of range")
            t[i][j][k] = field(v)
        return tuple(tuple(tuple(row) for row in plane) for plane in t)
    if len(structure) != dim or any(len(p) != dim or any(len(r) != dim for r in p) for p in structure):
        raise ValueError("structure constants must be a dim x dim x dim array")
    return tuple(tuple(tuple(field(v) for v in row) for row in plane) for plane in structure)


def _tmul(table, dim, x, y, zero):
    out = [zero] * dim
    for i, xi in enumerate(x):
        if not xi:
            continue
        plane = table[i]
        for j, yj in enumerate(y):
            if not yj:
                continue
            c = xi * yj
            for k, v in enumerate(plane[j]):
                if v:
                    out[k] = out[k] + c * v
    return tuple(out)


def validate_algebra(a: StructureAlgebra | AlgebraTable) -> ValidationReport:
    """Exhaustively check associativity, unit laws and (if flagged) commutativity.

    Associativity violations are reported as ``("associativity", (i, j, l))``
    meaning ``(e_i e_j) e_l != e_i (e_j e_l)``.
    """
    if isinstance(a, StructureAlgebra):
        a = a.raw
    d, table, unit, field, commutative = a
    z = field.zero
    report = ValidationReport()
    basis = [tuple(field.one if k == i else z for k in range(d)) for i in range(d)]
    for i, j, l in itertools.product(range(d), repeat=3):
        lhs = _tmul(table, d, table[i][j], basis[l], z)
        rhs = _tmul(table, d, basis[i], table[j][l], z)
        if lhs != rhs:
            report.violations.append(Violation("associativity", (i, j, l)))
    if len(unit) != d:
        report.violations.append(Violation("unit-shape", (len(unit),)))
        return report
    for i in range(d):
        if _tmul(table, d, unit, basis[i], z) != basis[i]:
            report.violations.append(Violation("left-unit", (i,)))
        if _tmul(table, d, basis[i], unit, z) != basis[i]:
            report.violations.append(Violation("right-unit", (i,)))
    if commutative:
        for i in range(d):
            for j in range(i + 1, d):
                if table[i][j] != table[j][i]:
                    report.violations.append(Violation("commutativity", (i, j)))
    return report


class StructureAlgebra:
    """A validated finite-dimensional associative unital algebra."""

    def __init__(
        self,
        dim: int,
        structure,
        unit: Sequence,
        *,
        labels: Sequence[str] | None = None,
        field: Field = QQ,
        commutative: bool = False,
        name: str = "A",
    ):
        if dim < 1:
            raise ValueError("an algebra with unit has dimension at least 1")
        self.dim = dim
        self.field = field
        self.name = name
        self.labels = tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(dim))
        if len(self.labels) != dim:
            raise ValueError(f"{len(self.labels)} labels for dimension {dim}")
        self.table = _dense_table(dim, structure, field)
        self.unit = tuple(field(v) for v in unit)
        self.commutative = bool(commutative)
        report = validate_algebra(self.raw)
        if not report.ok:
            raise InvalidAlgebra(report)
        # sparse products: sparse[i][j] = ((k, c), ...)
        self.sparse = tuple(
            tuple(tuple((k, c) for k, c in enumerate(self.table[i][j]) if c) for j in range(dim))
            for i in range(dim)
        )
        self.unit_sparse = tuple((k, c) for k, c in enumerate(self.unit) if c)

    @property
    def raw(self) -> AlgebraTable:
        return AlgebraTable(self.dim, self.table, self.unit, self.field, self.commutative)

    def __repr__(self):
        return f"StructureAlgebra({self.name!r}, dim={self.dim}, field={self.field!r})"

    # element helpers; elements are tuples of length dim

    def zero(self) -> tuple:
        return (self.field.zero,) * self.dim

    def basis_vector(self, i: int) -> tuple:
        z = self.field.zero
        return tuple(self.field.one if k == i else z for k in range(self.dim))

    def element(self, coords: Sequence) -> tuple:
        if len(coords) != self.dim:
            raise ValueError(f"element of length {len(coords)} in algebra of dimension {self.dim}")
        return tuple(self.field(c) for c in coords)

    def mul(self, x: Sequence, y: Sequence) -> tuple:
        return _tmul(self.table, self.dim, x, y, self.field.zero)

    def add(self, x: Sequence, y: Sequence) -> tuple:
        return tuple(a + b for a, b in zip(x, y))

    def scale(self, c, x: Sequence) -> tuple:
        return tuple(c * a for a in x)

    def is_central(self, x: Sequence) -> bool:
        return all(self.mul(x, self.basis_vector(i)) == self.mul(self.basis_vector(i), x) for i in range(self.dim))

    def is_commutative(self) -> bool:
        return all(self.table[i][j] == self.table[j][i] for i in range(self.dim) for j in range(self.dim))


def _vec_eq(x, y) -> bool:
    return all(a == b for a, b in zip(x, y))


class AlgebraMorphism:
    """A unital algebra map ``source -> target`` whose image is central.

    ``matrix[k][j]`` is the coefficient of ``e_k`` (target) in the image of the
    ``j``-th source basis element.
    """

    def __init__(self, source: StructureAlgebra, target: StructureAlgebra, matrix, *, name: str = "eps"):
        if source.field != target.field:
            raise FieldMismatch("source and target algebras are over different fields")
        self.source = source
        self.target = target
        self.name = name
        f = target.field
        if len(matrix) != target.dim or any(len(row) != source.dim for row in matrix):
            raise MorphismError(
                "shape", (target.dim, source.dim), f"matrix must be {target.dim}x{source.dim}"
            )
        self.matrix = tuple(tuple(f(v) for v in row) for row in matrix)
        self.images = tuple(tuple(self.matrix[k][j] for k in range(target.dim)) for j in range(source.dim))
        self._validate()

    def _validate(self):
        A, B = self.target, self.source
        if not _vec_eq(self.apply(B.unit), A.unit):
            raise MorphismError("unital", (), f"{self.name}(1) != 1")
        for i in range(B.dim):
            for j in range(B.dim):
                lhs = self.apply(B.table[i][j])
                rhs = A.mul(self.images[i], self.images[j])
                if not _vec_eq(lhs, rhs):
                    raise MorphismError(
                        "multiplicative",
                        (i, j),
                        f"{self.name}({B.labels[i]}*{B.labels[j]}) != {self.name}({B.labels[i]})*{self.name}({B.labels[j]})",
                    )
        for j in range(B.dim):
            x = self.images[j]
            for i in range(A.dim):
                e = A.basis_vector(i)
                if not _vec_eq(A.mul(x, e), A.mul(e, x)):
                    raise MorphismError(
                        "central",
                        (j, i),
                        f"{self.name}({B.labels[j]}) does not commute with {A.labels[i]}",
                    )

    def apply(self, x: Sequence) -> tuple:
        z = self.target.field.zero
        out = [z] * self.target.dim
        for j, c in enumerate(x):
            if c:
                for k, v in enumerate(self.images[j]):
                    if v:
                        out[k] = out[k] + c * v
        return tuple(out)

    def __repr__(self):
        return f"AlgebraMorphism({self.name}: {self.source.name} -> {self.target.name})"


def epsilon_map(B: StructureAlgebra, A: StructureAlgebra, matrix, *, name: str = "eps") -> AlgebraMorphism:
    """Build and verify ``eps: B -> A``; raises :class:`MorphismError` with a witness."""
    return AlgebraMorphism(B, A, matrix, name=name)


def unit_morphism(A: StructureAlgebra) -> AlgebraMorphism:
    """The inclusion ``k -> A`` sending 1 to the unit."""
    k = ground_field(A.field)
    return AlgebraMorphism(k, A, [[u] for u in A.unit], name="unit")


def identity_morphism(A: StructureAlgebra) -> AlgebraMorphism:
    one, z = A.field.one, A.field.zero
    return AlgebraMorphism(A, A, [[one if i == j else z for j in range(A.dim)] for i in range(A.dim)], name="id")


class Bimodule:
    """A finite-dimensional bimodule over a :class:`StructureAlgebra`.

    ``left[i][s]`` is the coordinate vector of ``e_i . f_s`` and ``right[s][i]``
    that of ``f_s . e_i``.
    """

    def __init__(self, algebra: StructureAlgebra, dim: int, left, right, *, labels=None, name: str = "M"):
        self.algebra = algebra
        self.dim = dim
        self.field = algebra.field
        self.name = name
        self.labels = tuple(labels) if labels is not None else tuple(f"f{s}" for s in range(dim))
        f = self.field
        d = algebra.dim
        if len(left) != d or any(len(r) != dim or any(len(v) != dim for v in r) for r in left):
            raise ValueError("left action must be dim(A) x dim(M) x dim(M)")
        if len(right) != dim or any(len(r) != d or any(len(v) != dim for v in r) for r in right):
            raise ValueError("right action must be dim(M) x dim(A) x dim(M)")
        self.left = tuple(tuple(tuple(f(x) for x in v) for v in r) for r in left)
        self.right = tuple(tuple(tuple(f(x) for x in v) for v in r) for r in right)
        self.left_sparse = tuple(
            tuple(tuple((t, c) for t, c in enumerate(self.left[i][s]) if c) for s in range(dim)) for i in range(d)
        )
        self.right_sparse = tuple(
            tuple(tuple((t, c) for t, c in enumerate(self.right[s][i]) if c) for i in range(d)) for s in range(dim)
        )
        report = self.validate()
        if not report.ok:
            raise InvalidBimodule(report)

    def act_left(self, a: Sequence, m: Sequence) -> tuple:
        z = self.field.zero
        out = [z] * self.dim
        for i, ai in enumerate(a):
            if not ai:
                continue
            for s, ms in enumerate(m):
                if not ms:
                    continue
                c = ai * ms
                for t, v in self.left_sparse[i][s]:
                    out[t] = out[t] + c * v
        return tuple(out)

    def act_right(self, m: Sequence, a: Sequence) -> tuple:
        z = self.field.zero
        out = [z] * self.dim
        for s, ms in enumerate(m):
            if not ms:
                continue
            for i, ai in enumerate(a):
                if not ai:
                    continue
                c = ai * ms
                for t, v in self.right_sparse[s][i]:
                    out[t] = out[t] + c * v
        return tuple(out)

    def validate(self) -> ValidationReport:
        A = self.algebra
        report = ValidationReport()
        z, one = self.field.zero, self.field.one
        fb = [tuple(one if t == s else z for t in range(self.dim)) for s in range(self.dim)]
        eb = [A.basis_vector(i) for i in range(A.dim)]
        for s in range(self.dim):
            v = fb[s]
            if self.act_left(A.unit, v) != v:
                report.violations.append(Violation("left-unit", (s,)))
            if self.act_right(v, A.unit) != v:
                report.violations.append(Violation("right-unit", (s,)))
            for i in range(A.dim):
                for j in range(A.dim):
                    if self.act_left(A.table[i][j], v) != self.act_left(eb[i], self.act_left(eb[j], v)):
                        report.violations.append(Violation("left-assoc", (i, j, s)))
                    if self.act_right(v, A.table[i][j]) != self.act_right(self.act_right(v, eb[i]), eb[j]):
                        report.violations.append(Violation("right-assoc", (s, i, j)))
                    if self.act_right(self.act_left(eb[i], v), eb[j]) != self.act_left(eb[i], self.act_right(v, eb[j])):
                        report.violations.append(Violation("middle-assoc", (i, s, j)))
        return report

    def __repr__(self):
        return f"Bimodule({self.name!r} over {self.algebra.name!r}, dim={self.dim})"


def regular_bimodule(A: StructureAlgebra) -> Bimodule:
    """``A`` as a bimodule over itself."""
    left = [[A.table[i][s] for s in range(A.dim)] for i in range(A.dim)]
    right = [[A.table[s][i] for i in range(A.dim)] for s in range(A.dim)]
    return Bimodule(A, A.dim, left, right, labels=A.labels, name=A.name)


@dataclass(frozen=True, eq=False)
class Triple:
    """``(A, B, eps)`` with ``B`` commutative and ``eps(B)`` central in ``A``."""

    A: StructureAlgebra
    B: StructureAlgebra
    eps: AlgebraMorphism
    name: str = "T"

    def __post_init__(self):
        if self.A.field != self.B.field:
            raise FieldMismatch("A and B are over different fields")
        if not self.B.commutative:
            raise InvalidAlgebra(ValidationReport([Violation("commutativity-flag", (self.B.name,))]))
        if self.eps.source is not self.B or self.eps.target is not self.A:
            raise MorphismError("shape", (), "eps must be a morphism B -> A of the given algebras")

    @property
    def field(self) -> Field:
        return self.A.field

    @classmethod
    def classical(cls, A: StructureAlgebra) -> Triple:
        """The triple ``(A, k, unit)`` whose cohomology is Hochschild cohomology."""
        eps = unit_morphism(A)
        return cls(A, eps.source, eps, name=f"({A.name},k)")


# -- standard algebras ------------------------------------------------------------


def ground_field(field: Field = QQ) -> StructureAlgebra:
    return StructureAlgebra(1, {(0, 0, 0): 1}, [1], labels=["1"], field=field, commutative=True, name="k")


def truncated_polynomial_algebra(d: int, field: Field = QQ, *, name: str | None = None) -> StructureAlgebra:
    """``k[x]/(x^d)`` with basis ``1, x, ..., x^(d-1)``."""
    if d < 1:
        raise ValueError("k[x]/(x^d) needs d >= 1")
    structure = {(i, j, i + j): 1 for i in range(d) for j in range(d) if i + j < d}
    labels = ["1"] + ["x" if i == 1 else f"x^{i}" for i in range(1, d)]
    return StructureAlgebra(
        d, structure, [1] + [0] * (d - 1), labels=labels, field=field, commutative=True, name=name or f"k[x]/(x^{d})"
    )


def matrix_algebra(n: int, field: Field = QQ) -> StructureAlgebra:
    """``M_n(k)`` with matrix units ``E_ij`` at index ``i*n + j``."""
    structure = {(i * n + j, j * n + l, i * n + l): 1 for i in range(n) for j in range(n) for l in range(n)}
    unit = [1 if (k // n == k % n) else 0 for k in range(n * n)]
    labels = [f"E{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    return StructureAlgebra(n * n, structure, unit, labels=labels, field=field, name=f"M_{n}")


# -- groups -------------------------------------------------------------------------


def check_group_table(table: Sequence[Sequence[int]]) -> int:
    """Validate a multiplication table; return the index of the identity."""
    n = len(table)
    if n == 0 or any(len(r) != n for r in table):
        raise GroupError("table must be square and nonempty")
    if any(not (0 <= x < n) for r in table for x in r):
        raise GroupError("table entries must be element indices")
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise GroupError(f"not associative at ({a}, {b}, {c})")
    ids = [e for e in range(n) if all(table[e][x] == x and table[x][e] == x for x in range(n))]
    if not ids:
        raise GroupError("no identity element")
    e = ids[0]
    for a in range(n):
        if not any(table[a][b] == e and table[b][a] == e for b in range(n)):
            raise GroupError(f"element {a} has no inverse")
    return e


def group_algebra(
    table: Sequence[Sequence[int]], labels: Sequence[str] | None = None, field: Field = QQ, *, name: str = "k[G]"
) -> StructureAlgebra:
    """The group algebra ``k[G]`` for a group given by its multiplication table."""
    e = check_group_table(table)
    n = len(table)
    abelian = all(table[a][b] == table[b][a] for a in range(n) for b in range(n))
    structure = {(g, h, table[g][h]): 1 for g in range(n) for h in range(n)}
    unit = [1 if g == e else 0 for g in range(n)]
    return StructureAlgebra(
        n, structure, unit, labels=labels or [f"g{g}" for g in range(n)], field=field, commutative=abelian, name=name
    )


def cyclic_group_table(m: int) -> list[list[int]]:
    return [[(a + b) % m for b in range(m)] for a in range(m)]


def symmetric_group_table(n: int) -> tuple[list[list[int]], list[tuple[int, ...]]]:
    """Table of S_n (composition ``(p*q)(x) = p(q(x))``) and its elements."""
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[x]] for x in range(n))] for q in perms] for p in perms]
    return table, perms


def direct_product_table(t1: Sequence[Sequence[int]], t2: Sequence[Sequence[int]]) -> list[list[int]]:
    n1, n2 = len(t1), len(t2)
    return [
        [t1[a // n2][b // n2] * n2 + t2[a % n2][b % n2] for b in range(n1 * n2)] for a in range(n1 * n2)
    ]
