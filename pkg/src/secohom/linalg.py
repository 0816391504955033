"""Sparse matrices over an exact field with rank, kernel and linear solving.

Elimination picks, at every step, the column with the fewest remaining
nonzeros (lowest column index on ties) and within it the shortest row
(lowest row index on ties). The coboundary matrices built elsewhere in the
package are extremely sparse, and this keeps fill-in small.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from typing import Iterable, Mapping, Sequence

from .field import QQ, Field, FieldMismatch

__all__ = [
    "SparseMatrix",
    "DimensionError",
    "rank",
    "kernel_basis",
    "solve",
]


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class SparseMatrix:
    """An immutable ``nrows x ncols`` matrix storing only nonzero entries.

    Entries are held row-wise as ``{row: {col: value}}``.
    """

    __slots__ = ("nrows", "ncols", "field", "_rows")

    def __init__(
        self,
        nrows: int,
        ncols: int,
        entries: Mapping[tuple[int, int], object] | None = None,
        field: Field = QQ,
    ):
        if nrows < 0 or ncols < 0:
            raise DimensionError("negative dimension")
        self.nrows = nrows
        self.ncols = ncols
        self.field = field
        rows: dict[int, dict[int, object]] = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < nrows and 0 <= c < ncols):
                raise IndexError(f"entry ({r}, {c}) outside {nrows}x{ncols}")
            v = field(v)
            if v:
                rows.setdefault(r, {})[c] = v
        self._rows = rows

    @classmethod
    def _wrap(cls, nrows: int, ncols: int, rows: dict, field: Field) -> SparseMatrix:
        # trusted constructor: rows must already be clean
        m = cls.__new__(cls)
        m.nrows, m.ncols, m.field, m._rows = nrows, ncols, field, rows
        return m

    @classmethod
    def from_rows(cls, nrows: int, ncols: int, rows: Mapping[int, Mapping[int, object]], field: Field = QQ):
        clean = {}
        for r, row in rows.items():
            if not 0 <= r < nrows:
                raise IndexError(f"row {r} outside {nrows}")
            crow = {}
            for c, v in row.items():
                if not 0 <= c < ncols:
                    raise IndexError(f"column {c} outside {ncols}")
                v = field(v)
                if v:
                    crow[c] = v
            if crow:
                clean[r] = crow
        return cls._wrap(nrows, ncols, clean, field)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Mapping[int, object]], field: Field = QQ):
        rows: dict[int, dict[int, object]] = {}
        for c, col in enumerate(columns):
            for r, v in col.items():
                rows.setdefault(r, {})[c] = v
        return cls.from_rows(nrows, len(columns), rows, field)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]], field: Field = QQ, ncols: int | None = None):
        nrows = len(data)
        if ncols is None:
            ncols = len(data[0]) if nrows else 0
        rows = {}
        for r, row in enumerate(data):
            if len(row) != ncols:
                raise DimensionError("ragged dense matrix")
            rows[r] = {c: v for c, v in enumerate(row)}
        return cls.from_rows(nrows, ncols, rows, field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> SparseMatrix:
        one = field.one
        return cls._wrap(n, n, {i: {i: one} for i in range(n)}, field)

    @classmethod
    def zero(cls, nrows: int, ncols: int, field: Field = QQ) -> SparseMatrix:
        return cls._wrap(nrows, ncols, {}, field)

    @classmethod
    def permutation(cls, perm: Sequence[int], field: Field = QQ) -> SparseMatrix:
        """Matrix sending basis vector ``j`` to basis vector ``perm[j]``."""
        n = len(perm)
        if sorted(perm) != list(range(n)):
            raise ValueError("not a permutation")
        one = field.one
        return cls._wrap(n, n, {perm[j]: {j: one} for j in range(n)}, field)

    # -- inspection ---------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, key: tuple[int, int]):
        r, c = key
        return self._rows.get(r, {}).get(c, self.field.zero)

    def rows(self) -> dict[int, dict[int, object]]:
        """Read-only view of the nonzero rows (do not mutate)."""
        return self._rows

    def items(self) -> Iterable[tuple[tuple[int, int], object]]:
        for r in sorted(self._rows):
            row = self._rows[r]
            for c in sorted(row):
                yield (r, c), row[c]

    def nnz(self) -> int:
        return sum(len(row) for row in self._rows.values())

    def is_zero(self) -> bool:
        return not self._rows

    def columns(self) -> list[dict[int, object]]:
        cols: list[dict[int, object]] = [{} for _ in range(self.ncols)]
        for r, row in self._rows.items():
            for c, v in row.items():
                cols[c][r] = v
        return cols

    def to_dense(self) -> list[list[object]]:
        z = self.field.zero
        out = [[z] * self.ncols for _ in range(self.nrows)]
        for r, row in self._rows.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.field == other.field and self._rows == other._rows

    __hash__ = None

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()}, field={self.field!r})"

    # -- arithmetic ---------------------------------------------------------

    def _check_field(self, other: SparseMatrix):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field!r} matrix combined with {other.field!r} matrix")

    def transpose(self) -> SparseMatrix:
        rows: dict[int, dict[int, object]] = {}
        for r, row in self._rows.items():
            for c, v in row.items():
                rows.setdefault(c, {})[r] = v
        return SparseMatrix._wrap(self.ncols, self.nrows, rows, self.field)

    @property
    def T(self) -> SparseMatrix:
        return self.transpose()

    def __matmul__(self, other: SparseMatrix) -> SparseMatrix:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        self._check_field(other)
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        orows = other._rows
        out: dict[int, dict[int, object]] = {}
        for r, row in self._rows.items():
            acc: dict[int, object] = {}
            for k, v in row.items():
                krow = orows.get(k)
                if not krow:
                    continue
                for c, w in krow.items():
                    acc[c] = acc.get(c, 0) + v * w
            acc = {c: x for c, x in acc.items() if x}
            if acc:
                out[r] = acc
        return SparseMatrix._wrap(self.nrows, other.ncols, out, self.field)

    def _combine(self, other: SparseMatrix, sign: int) -> SparseMatrix:
        self._check_field(other)
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        out = {r: dict(row) for r, row in self._rows.items()}
        for r, row in other._rows.items():
            acc = out.setdefault(r, {})
            for c, v in row.items():
                x = acc.get(c, 0) + sign * v
                if x:
                    acc[c] = x
                else:
                    acc.pop(c, None)
            if not acc:
                del out[r]
        return SparseMatrix._wrap(self.nrows, self.ncols, out, self.field)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        rows = {r: {c: -v for c, v in row.items()} for r, row in self._rows.items()}
        return SparseMatrix._wrap(self.nrows, self.ncols, rows, self.field)

    def scale(self, s) -> SparseMatrix:
        s = self.field(s)
        if not s:
            return SparseMatrix.zero(self.nrows, self.ncols, self.field)
        rows = {r: {c: s * v for c, v in row.items()} for r, row in self._rows.items()}
        return SparseMatrix._wrap(self.nrows, self.ncols, rows, self.field)

    def apply(self, vec: Sequence[object]) -> tuple:
        """Matrix-vector product with a dense vector."""
        if len(vec) != self.ncols:
            raise DimensionError(f"vector of length {len(vec)} for {self.ncols} columns")
        z = self.field.zero
        out = [z] * self.nrows
        for r, row in self._rows.items():
            acc = z
            for c, v in row.items():
                x = vec[c]
                if x:
                    acc = acc + v * x
            out[r] = acc
        return tuple(out)


# -- elimination ----------------------------------------------------------------


def _eliminate(rows: Mapping[int, Mapping[int, object]], field: Field, rhs: int | None = None):
    """Forward elimination.

    Returns ``(pivots, inconsistent)`` where ``pivots`` is the ordered list of
    ``(pivot_col, normalized_row)``. Column ``rhs`` (if given) is carried along
    but never chosen as a pivot.
    """
    work = {r: dict(row) for r, row in rows.items() if row}
    col_rows: dict[int, set[int]] = defaultdict(set)
    for r, row in work.items():
        for c in row:
            if c != rhs:
                col_rows[c].add(r)
    heap = [(len(s), c) for c, s in col_rows.items()]
    heapq.heapify(heap)
    pivots = []
    while heap:
        cnt, c = heapq.heappop(heap)
        s = col_rows.get(c)
        if not s:
            continue
        if cnt != len(s):
            heapq.heappush(heap, (len(s), c))
            continue
        pr = min(s, key=lambda r: (len(work[r]), r))
        prow = work.pop(pr)
        for cc in prow:
            if cc != rhs:
                col_rows[cc].discard(pr)
        inv = field.one / prow[c]
        prow = {cc: v * inv for cc, v in prow.items()}
        touched = set()
        for r in list(col_rows[c]):
            row = work[r]
            f = row[c]
            for cc, v in prow.items():
                nv = row.get(cc, 0) - f * v
                if nv:
                    if cc not in row and cc != rhs:
                        col_rows[cc].add(r)
                        touched.add(cc)
                    row[cc] = nv
                elif cc in row:
                    del row[cc]
                    if cc != rhs:
                        col_rows[cc].discard(r)
                        touched.add(cc)
            if not row:
                del work[r]
        del col_rows[c]
        for cc in touched:
            if cc in col_rows and col_rows[cc]:
                heapq.heappush(heap, (len(col_rows[cc]), cc))
        pivots.append((c, prow))
    # anything left can only hold the rhs column
    inconsistent = bool(work)
    return pivots, inconsistent


def _back_substitute(pivots):
    """Reduce each pivot row so it holds no other pivot column."""
    pivot_cols = {c for c, _ in pivots}
    reduced: dict[int, dict[int, object]] = {}
    for c, row in reversed(pivots):
        row = dict(row)
        for pc in [k for k in row if k != c and k in pivot_cols]:
            f = row.pop(pc)
            for cc, v in reduced[pc].items():
                if cc == pc:
                    continue
                nv = row.get(cc, 0) - f * v
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        reduced[c] = row
    return reduced


def rank(m: SparseMatrix) -> int:
    """Exact rank over ``m.field``."""
    pivots, _ = _eliminate(m.rows(), m.field)
    return len(pivots)


def kernel_basis(m: SparseMatrix) -> list[tuple]:
    """A basis of the null space of ``m``, one vector per free column (ascending)."""
    pivots, _ = _eliminate(m.rows(), m.field)
    reduced = _back_substitute(pivots)
    free = sorted(set(range(m.ncols)) - reduced.keys())
    zero, one = m.field.zero, m.field.one
    by_free: dict[int, list[tuple[int, object]]] = defaultdict(list)
    for pc, row in reduced.items():
        for cc, v in row.items():
            if cc != pc:
                by_free[cc].append((pc, v))
    basis = []
    for f in free:
        vec = [zero] * m.ncols
        vec[f] = one
        for pc, v in by_free.get(f, ()):
            vec[pc] = -v
        basis.append(tuple(vec))
    return basis


def solve(m: SparseMatrix, b: Sequence[object]) -> tuple | None:
    """Some ``x`` with ``m @ x == b``, or ``None`` when the system is inconsistent.

    Raises :class:`DimensionError` when ``len(b) != m.nrows``.
    """
    if len(b) != m.nrows:
        raise DimensionError(f"right-hand side of length {len(b)} for {m.nrows} rows")
    field = m.field
    rhs = m.ncols
    rows = {r: dict(row) for r, row in m.rows().items()}
    for r, v in enumerate(b):
        v = field(v)
        if v:
            rows.setdefault(r, {})[rhs] = v
    pivots, inconsistent = _eliminate(rows, field, rhs=rhs)
    if inconsistent:
        return None
    reduced = _back_substitute(pivots)
    x = [field.zero] * m.ncols
    for pc, row in reduced.items():
        if rhs in row:
            x[pc] = row[rhs]
    return tuple(x)
