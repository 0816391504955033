"""The secondary cochain complex of a triple and its cohomology.

A cochain of degree ``n`` is a linear map ``A^{(n)} (x) B^{(n(n-1)/2)} -> M``.
Its argument is an ``(n+1) x (n+1)`` upper-triangular "tensor matrix" when it
appears inside a coboundary: diagonal entries in ``A`` and entries ``b[u, v]``
(``u < v``) in ``B``.

Basis cochains are enumerated with the ``M``-index slowest, then the ``A``
indices lexicographically, then the ``B`` indices in lexicographic ``(u, v)``
order. Every matrix in this module uses that order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from .algebra import Bimodule, StructureAlgebra, Triple, regular_bimodule
from .linalg import DimensionError, SparseMatrix, rank

__all__ = [
    "DegreeError",
    "CochainSpace",
    "Cochain",
    "CohomologyResult",
    "pairs",
    "cochain_dim",
    "coboundary_matrix",
    "hochschild_coboundary_matrix",
    "apply_coboundary",
    "cohomology",
    "cohomology_dim",
    "classical_hochschild",
    "classical_hochschild_dim",
    "restriction_cochain_map",
    "restrict",
    "circle_product",
    "EXPENSIVE_DIM",
]

# spaces larger than this are allowed but flagged by the CLI
EXPENSIVE_DIM = 65536


class DegreeError(ValueError):
    """Cochains of the wrong degree (or over different spaces) were combined."""


def pairs(n: int) -> list[tuple[int, int]]:
    """Positions ``(u, v)``, ``0 <= u < v < n``, in lexicographic order."""
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def cochain_dim(triple: Triple, M: Bimodule, n: int) -> int:
    if n < 0:
        return 0
    return M.dim * triple.A.dim**n * triple.B.dim ** (n * (n - 1) // 2)


class CochainSpace:
    """The enumerated basis of ``C^n((A, B, eps); M)``."""

    def __init__(self, triple: Triple, M: Bimodule | None, n: int):
        if n < 0:
            raise DegreeError("cochain degree must be nonnegative")
        if M is None:
            M = _regular(triple.A)
        if M.algebra is not triple.A and M.algebra.raw != triple.A.raw:
            raise ValueError("coefficient bimodule is over a different algebra")
        self.triple, self.M, self.n = triple, M, n
        self.dA, self.dB, self.dM = triple.A.dim, triple.B.dim, M.dim
        self.nb = n * (n - 1) // 2
        self.block = self.dA**n * self.dB**self.nb  # columns per M-index
        self.dim = self.dM * self.block

    def __eq__(self, other):
        return (
            isinstance(other, CochainSpace)
            and self.triple is other.triple
            and self.M is other.M
            and self.n == other.n
        )

    def __hash__(self):
        return hash((id(self.triple), id(self.M), self.n))

    def __repr__(self):
        return f"CochainSpace(n={self.n}, dim={self.dim})"

    @property
    def field(self):
        return self.triple.field

    def index(self, s: int, ia: Sequence[int], ib: Sequence[int]) -> int:
        """Flat index of the basis cochain dual to ``(e_ia ; f_ib) -> m_s``."""
        if len(ia) != self.n or len(ib) != self.nb:
            raise DegreeError(f"degree {self.n} needs {self.n} A-indices and {self.nb} B-indices")
        r = s
        for i in ia:
            r = r * self.dA + i
        for j in ib:
            r = r * self.dB + j
        return r

    def decode(self, col: int) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
        rest = col
        ib = []
        for _ in range(self.nb):
            rest, j = divmod(rest, self.dB)
            ib.append(j)
        ia = []
        for _ in range(self.n):
            rest, i = divmod(rest, self.dA)
            ia.append(i)
        return rest, tuple(reversed(ia)), tuple(reversed(ib))

    def basis(self):
        """Iterate ``(s, ia, ib)`` in enumeration order."""
        for s in range(self.dM):
            for ia in itertools.product(range(self.dA), repeat=self.n):
                for ib in itertools.product(range(self.dB), repeat=self.nb):
                    yield s, ia, ib

    def weights(self):
        wa = [self.dA ** (self.n - 1 - k) * self.dB**self.nb for k in range(self.n)]
        wb = [self.dB ** (self.nb - 1 - p) for p in range(self.nb)]
        return wa, wb

    def expand(self, a_args: Sequence[dict], b_args: Sequence[dict]) -> dict[int, object]:
        """Multilinear expansion of an argument into ``{offset within block: coefficient}``.

        ``a_args`` and ``b_args`` are sparse coordinate dicts.
        """
        wa, wb = self.weights()
        acc = {0: self.field.one}
        for w, vec in itertools.chain(zip(wa, a_args), zip(wb, b_args)):
            if len(vec) == 1:
                ((k, c),) = vec.items()
                acc = {r + w * k: x * c for r, x in acc.items()}
                continue
            nxt: dict[int, object] = {}
            for r, x in acc.items():
                for k, c in vec.items():
                    key = r + w * k
                    nxt[key] = nxt.get(key, 0) + x * c
            acc = {r: x for r, x in nxt.items() if x}
            if not acc:
                break
        return acc

    def zero(self) -> Cochain:
        return Cochain(self, (self.field.zero,) * self.dim)

    def from_function(self, fn: Callable[[tuple, tuple], Sequence]) -> Cochain:
        """Tabulate ``fn(ia, ib)`` (an ``M``-vector) on every basis argument."""
        coeffs = [self.field.zero] * self.dim
        for ia in itertools.product(range(self.dA), repeat=self.n):
            for ib in itertools.product(range(self.dB), repeat=self.nb):
                value = fn(ia, ib)
                for s, c in enumerate(value):
                    if c:
                        coeffs[self.index(s, ia, ib)] = self.field(c)
        return Cochain(self, tuple(coeffs))


def _sparse(vec: Sequence) -> dict:
    return {k: c for k, c in enumerate(vec) if c}


class Cochain:
    """An element of ``C^n``: a coefficient vector over the enumerated basis."""

    __slots__ = ("space", "coeffs")

    def __init__(self, space: CochainSpace, coeffs: Sequence):
        if len(coeffs) != space.dim:
            raise DimensionError(f"degree-{space.n} cochain needs {space.dim} coefficients, got {len(coeffs)}")
        self.space = space
        self.coeffs = tuple(space.field(c) for c in coeffs)

    @property
    def degree(self) -> int:
        return self.space.n

    def _check(self, other: Cochain):
        if not isinstance(other, Cochain) or other.space != self.space:
            raise DegreeError("cochains live in different spaces")

    def __add__(self, other: Cochain) -> Cochain:
        self._check(other)
        return Cochain(self.space, [x + y for x, y in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: Cochain) -> Cochain:
        self._check(other)
        return Cochain(self.space, [x - y for x, y in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> Cochain:
        return Cochain(self.space, [-x for x in self.coeffs])

    def scale(self, c) -> Cochain:
        c = self.space.field(c)
        return Cochain(self.space, [c * x for x in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, Cochain) and other.space == self.space and other.coeffs == self.coeffs

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self):
        return f"Cochain(degree={self.degree}, nnz={sum(1 for c in self.coeffs if c)})"

    def evaluate(self, a_args: Sequence[Sequence], b_args: Sequence[Sequence] = ()) -> tuple:
        """Value on general elements ``a_1..a_n`` of ``A`` and ``b[u, v]`` of ``B``."""
        sp = self.space
        if len(a_args) != sp.n or len(b_args) != sp.nb:
            raise DegreeError(f"degree {sp.n} takes {sp.n} A-arguments and {sp.nb} B-arguments")
        return self._eval_sparse([_sparse(a) for a in a_args], [_sparse(b) for b in b_args])

    def _eval_sparse(self, a_args, b_args) -> tuple:
        sp = self.space
        out = [sp.field.zero] * sp.dM
        if any(not v for v in itertools.chain(a_args, b_args)):
            return tuple(out)
        expansion = sp.expand(a_args, b_args)
        for s in range(sp.dM):
            base = s * sp.block
            total = sp.field.zero
            for r, c in expansion.items():
                f = self.coeffs[base + r]
                if f:
                    total = total + c * f
            out[s] = total
        return tuple(out)


# -- coboundary ---------------------------------------------------------------------


class _Ops:
    """Sparse multiplication helpers shared by the assembly routines."""

    def __init__(self, triple: Triple, M: Bimodule):
        self.A, self.B, self.M = triple.A, triple.B, M
        self.field = triple.field
        self.eps = [_sparse(img) for img in triple.eps.images]
        self._bprod: dict[tuple, dict] = {}
        self._left: dict[tuple, list[dict]] = {}

    def a_mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        sp = self.A.sparse
        for i, xi in x.items():
            row = sp[i]
            for j, yj in y.items():
                c = xi * yj
                for k, v in row[j]:
                    out[k] = out.get(k, 0) + c * v
        return {k: v for k, v in out.items() if v}

    def b_prod(self, idx: tuple) -> dict:
        """Product of the listed ``B`` basis elements (the unit when empty)."""
        got = self._bprod.get(idx)
        if got is not None:
            return got
        if not idx:
            res = {k: c for k, c in self.B.unit_sparse}
        elif len(idx) == 1:
            res = {idx[0]: self.field.one}
        else:
            head = self.b_prod(idx[:-1])
            out: dict = {}
            for i, c in head.items():
                for k, v in self.B.sparse[i][idx[-1]]:
                    out[k] = out.get(k, 0) + c * v
            res = {k: v for k, v in out.items() if v}
        self._bprod[idx] = res
        return res

    def b_mul(self, i: int, j: int) -> dict:
        return {k: v for k, v in self.B.sparse[i][j]}

    def eps_of(self, bvec: dict) -> dict:
        out: dict = {}
        for j, c in bvec.items():
            for k, v in self.eps[j].items():
                out[k] = out.get(k, 0) + c * v
        return {k: v for k, v in out.items() if v}

    def left_matrix(self, x: dict) -> list[dict]:
        """``[s -> sparse(x . m_s)]`` for an ``A``-vector ``x``."""
        key = tuple(sorted(x.items()))
        got = self._left.get(key)
        if got is None:
            M = self.M
            got = []
            for s in range(M.dim):
                out: dict = {}
                for i, c in x.items():
                    for t, v in M.left_sparse[i][s]:
                        out[t] = out.get(t, 0) + c * v
                got.append({t: v for t, v in out.items() if v})
            self._left[key] = got
        return got

    def act_left(self, x: dict, m: dict) -> dict:
        out: dict = {}
        lm = self.M.left_sparse
        for i, c in x.items():
            for s, ms in m.items():
                for t, v in lm[i][s]:
                    out[t] = out.get(t, 0) + c * ms * v
        return {k: v for k, v in out.items() if v}

    def act_right(self, m: dict, a: int) -> dict:
        out: dict = {}
        rm = self.M.right_sparse
        for s, ms in m.items():
            for t, v in rm[s][a]:
                out[t] = out.get(t, 0) + ms * v
        return {k: v for k, v in out.items() if v}


def _transpose(cols: list[dict], dM: int) -> list[dict]:
    # cols[s] = {t: c}  ->  rows[t] = {s: c}
    rows = [dict() for _ in range(dM)]
    for s, col in enumerate(cols):
        for t, c in col.items():
            rows[t][s] = c
    return rows


def _assemble(triple: Triple, M: Bimodule, n: int) -> SparseMatrix:
    src = CochainSpace(triple, M, n)
    dA, dB, dM = src.dA, src.dB, src.dM
    field = triple.field
    ops = _Ops(triple, M)
    n1 = n + 1
    P1 = pairs(n1)
    pos = {p: k for k, p in enumerate(P1)}
    P = pairs(n)
    wa, wb = src.weights()
    K = src.block
    nrows = cochain_dim(triple, M, n1)
    row_block = dA**n1 * dB ** len(P1)
    one = field.one
    sign_last = one if n1 % 2 == 0 else -one

    # slot lists for the three kinds of term
    tail_pos = [pos[(u + 1, v + 1)] for (u, v) in P]  # term 0: rows/cols >= 1
    head_pos = [pos[p] for p in P]  # last term: rows/cols < n
    first_row = [pos[(0, v)] for v in range(1, n1)]
    last_col = [pos[(u, n)] for u in range(n)]
    merges = []
    for i in range(1, n1):
        keep = [k for k in range(n1) if k != i]
        slots = []
        for (u, v) in P:
            ou, ov = keep[u], keep[v]
            if ov == i - 1:
                slots.append(("m", pos[(ou, i - 1)], pos[(ou, i)]))
            elif ou == i - 1:
                slots.append(("m", pos[(i - 1, ov)], pos[(i, ov)]))
            else:
                slots.append(("c", pos[(ou, ov)], None))
        merges.append((i, keep, slots))

    rows: dict[int, dict] = {}
    term0_cache: dict = {}
    last_cache: dict = {}
    r_arg = 0
    for ia in itertools.product(range(dA), repeat=n1):
        for ib in itertools.product(range(dB), repeat=len(P1)):
            # merged terms contribute diagonally in the M-index
            diag: dict[int, object] = {}
            for i, keep, slots in merges:
                sgn = one if i % 2 == 0 else -one
                a_new = ops.a_mul(ops.eps[ib[pos[(i - 1, i)]]], ops.a_mul({ia[i - 1]: one}, {ia[i]: one}))
                if not a_new:
                    continue
                base = 0
                multi = []
                for k, orig in enumerate(keep):
                    if orig == i - 1:
                        multi.append((wa[k], a_new))
                    else:
                        base += wa[k] * ia[orig]
                dead = False
                for p, (kind, x, y) in enumerate(slots):
                    if kind == "c":
                        base += wb[p] * ib[x]
                    else:
                        prod = ops.b_mul(ib[x], ib[y])
                        if not prod:
                            dead = True
                            break
                        multi.append((wb[p], prod))
                if dead:
                    continue
                acc = {base: sgn}
                for w, vec in multi:
                    nxt: dict = {}
                    for r, c in acc.items():
                        for k, v in vec.items():
                            key = r + w * k
                            nxt[key] = nxt.get(key, 0) + c * v
                    acc = nxt
                for r, c in acc.items():
                    if c:
                        diag[r] = diag.get(r, 0) + c

            # term 0: a_0 eps(b01...b0n) . f(rest)
            key0 = (ia[0], tuple(ib[p] for p in first_row))
            t0 = term0_cache.get(key0)
            if t0 is None:
                x = ops.a_mul({ia[0]: one}, ops.eps_of(ops.b_prod(key0[1])))
                t0 = _transpose(ops.left_matrix(x), dM)
                term0_cache[key0] = t0
            r0 = sum(wa[k] * ia[k + 1] for k in range(n)) + sum(wb[p] * ib[q] for p, q in enumerate(tail_pos))

            # last term: eps(b0n...b_{n-1}n) . (f(head) . a_n)
            keyl = (ia[n], tuple(ib[p] for p in last_col))
            tl = last_cache.get(keyl)
            if tl is None:
                w = ops.eps_of(ops.b_prod(keyl[1]))
                cols = [ops.act_left(w, ops.act_right({s: one}, ia[n])) for s in range(dM)]
                tl = _transpose([{t: sign_last * c for t, c in col.items()} for col in cols], dM)
                last_cache[keyl] = tl
            rl = sum(wa[k] * ia[k] for k in range(n)) + sum(wb[p] * ib[q] for p, q in enumerate(head_pos))

            for t in range(dM):
                row: dict[int, object] = {}
                off = t * K
                for r, c in diag.items():
                    row[off + r] = c
                for s, c in t0[t].items():
                    col = s * K + r0
                    row[col] = row.get(col, 0) + c
                for s, c in tl[t].items():
                    col = s * K + rl
                    row[col] = row.get(col, 0) + c
                clean = {col: field(v) for col, v in row.items() if v}
                if clean:
                    rows[t * row_block + r_arg] = clean
            r_arg += 1
    return SparseMatrix._wrap(nrows, src.dim, rows, field)


@lru_cache(maxsize=64)
def _coboundary_cached(triple: Triple, M: Bimodule, n: int) -> SparseMatrix:
    return _assemble(triple, M, n)


def coboundary_matrix(triple: Triple, M: Bimodule | None = None, n: int = 0) -> SparseMatrix:
    """The matrix of ``delta^eps_n : C^n -> C^(n+1)``.

    For ``n = 0`` this is ``m -> (a -> a.m - m.a)``; with ``B = k`` it coincides
    entry for entry with the classical Hochschild coboundary.
    """
    if n < 0:
        raise DegreeError("degree must be nonnegative")
    if M is None:
        M = _regular(triple.A)
    return _coboundary_cached(triple, M, n)


@lru_cache(maxsize=32)
def _regular(A: StructureAlgebra) -> Bimodule:
    return regular_bimodule(A)


@lru_cache(maxsize=128)
def _rank_cached(triple: Triple, M: Bimodule, n: int) -> int:
    return rank(coboundary_matrix(triple, M, n))


def _hochschild_assemble(A: StructureAlgebra, M: Bimodule, n: int) -> SparseMatrix:
    # the classical (n+2)-term differential on Hom(A^n, M), written out directly
    dA, dM = A.dim, M.dim
    field = A.field
    K = dA**n
    row_block = dA ** (n + 1)
    rows: dict[int, dict] = {}

    def flat(ia):
        r = 0
        for i in ia:
            r = r * dA + i
        return r

    for r_arg, ia in enumerate(itertools.product(range(dA), repeat=n + 1)):
        acc: dict[tuple[int, int], object] = {}  # (t, col) -> value
        # a_0 . f(a_1..a_n)
        c0 = flat(ia[1:])
        for s in range(dM):
            for t, v in M.left_sparse[ia[0]][s]:
                acc[(t, s * K + c0)] = acc.get((t, s * K + c0), 0) + v
        for i in range(1, n + 1):
            sgn = (-1) ** i
            for k, v in A.sparse[ia[i - 1]][ia[i]]:
                merged = ia[: i - 1] + (k,) + ia[i + 1 :]
                c = flat(merged)
                for t in range(dM):
                    acc[(t, t * K + c)] = acc.get((t, t * K + c), 0) + sgn * v
        cl = flat(ia[:n])
        sgn = (-1) ** (n + 1)
        for s in range(dM):
            for t, v in M.right_sparse[s][ia[n]]:
                acc[(t, s * K + cl)] = acc.get((t, s * K + cl), 0) + sgn * v
        for (t, col), v in acc.items():
            if v:
                rows.setdefault(t * row_block + r_arg, {})[col] = field(v)
    return SparseMatrix._wrap(dM * row_block, dM * K, rows, field)


@lru_cache(maxsize=64)
def _hochschild_cached(A: StructureAlgebra, M: Bimodule, n: int) -> SparseMatrix:
    return _hochschild_assemble(A, M, n)


def hochschild_coboundary_matrix(A: StructureAlgebra, M: Bimodule | None = None, n: int = 0) -> SparseMatrix:
    """The classical Hochschild coboundary ``Hom(A^n, M) -> Hom(A^(n+1), M)``."""
    if n < 0:
        raise DegreeError("degree must be nonnegative")
    return _hochschild_cached(A, M if M is not None else _regular(A), n)


def apply_coboundary(f: Cochain) -> Cochain:
    sp = f.space
    target = CochainSpace(sp.triple, sp.M, sp.n + 1)
    return Cochain(target, coboundary_matrix(sp.triple, sp.M, sp.n).apply(f.coeffs))


@dataclass(frozen=True)
class CohomologyResult:
    """A cohomology dimension with the numbers it was computed from."""

    degree: int
    dim: int
    cochain_dim: int
    rank_out: int  # rank of the coboundary leaving degree n
    rank_in: int  # rank of the coboundary entering degree n
    kind: str = "secondary"

    @property
    def kernel_dim(self) -> int:
        return self.cochain_dim - self.rank_out

    def provenance(self) -> dict:
        return {
            "kind": self.kind,
            "degree": self.degree,
            "cochain_dim": self.cochain_dim,
            "rank_out": self.rank_out,
            "rank_in": self.rank_in,
            "kernel_dim": self.kernel_dim,
            "formula": "kernel_dim - rank_in",
        }


def cohomology(triple: Triple, M: Bimodule | None = None, n: int = 0) -> CohomologyResult:
    if n < 0:
        raise DegreeError("degree must be nonnegative")
    M = M if M is not None else _regular(triple.A)
    r_out = _rank_cached(triple, M, n)
    r_in = _rank_cached(triple, M, n - 1) if n > 0 else 0
    c = cochain_dim(triple, M, n)
    return CohomologyResult(n, c - r_out - r_in, c, r_out, r_in)


def cohomology_dim(triple: Triple, M: Bimodule | None = None, n: int = 0) -> int:
    return cohomology(triple, M, n).dim


def classical_hochschild(A: StructureAlgebra, M: Bimodule | None = None, n: int = 0) -> CohomologyResult:
    """Hochschild cohomology computed from the classical complex directly."""
    if n < 0:
        raise DegreeError("degree must be nonnegative")
    M = M if M is not None else _regular(A)
    r_out = rank(hochschild_coboundary_matrix(A, M, n))
    r_in = rank(hochschild_coboundary_matrix(A, M, n - 1)) if n > 0 else 0
    c = M.dim * A.dim**n
    return CohomologyResult(n, c - r_out - r_in, c, r_out, r_in, kind="hochschild")


def classical_hochschild_dim(A: StructureAlgebra, M: Bimodule | None = None, n: int = 0) -> int:
    return classical_hochschild(A, M, n).dim


# -- restriction and circle product --------------------------------------------------


def restriction_cochain_map(triple: Triple, M: Bimodule | None = None, n: int = 0) -> SparseMatrix:
    """``C^n((A,B,eps); M) -> C^n(A, M)``: set every ``B``-argument to ``1_B``."""
    M = M if M is not None else _regular(triple.A)
    src = CochainSpace(triple, M, n)
    field = triple.field
    unit = triple.B.unit
    Kc = triple.A.dim**n
    rows: dict[int, dict] = {}
    for s in range(src.dM):
        for ra, ia in enumerate(itertools.product(range(src.dA), repeat=n)):
            row = {}
            for ib in itertools.product(range(src.dB), repeat=src.nb):
                c = field.one
                for j in ib:
                    c = c * unit[j]
                    if not c:
                        break
                if c:
                    row[src.index(s, ia, ib)] = c
            if row:
                rows[s * Kc + ra] = row
    return SparseMatrix._wrap(M.dim * Kc, src.dim, rows, field)


def restrict(f: Cochain) -> tuple:
    """Coefficients of the restricted classical cochain."""
    sp = f.space
    return restriction_cochain_map(sp.triple, sp.M, sp.n).apply(f.coeffs)


def circle_product(f: Cochain, g: Cochain) -> Cochain:
    """``(f o g)(a, b, c; al, be, ga) = f(g(a,b,al), c, be*ga) - f(a, g(b,c,ga), al*be)``.

    Defined only for two degree-2 cochains with values in ``A``; the three
    ``B``-arguments of the result are ``b01 = al``, ``b02 = be``, ``b12 = ga``.
    """
    if f.degree != 2 or g.degree != 2:
        raise DegreeError("the circle product is defined on degree-2 cochains only")
    if f.space != g.space:
        raise DegreeError("cochains live in different spaces")
    sp = f.space
    if sp.dM != sp.dA:
        raise DegreeError("the circle product needs cochains with values in A")
    target = CochainSpace(sp.triple, sp.M, 3)
    field = sp.field
    one = field.one
    B = sp.triple.B
    coeffs = [field.zero] * target.dim
    g_vals: dict = {}

    def gv(i, j, al):
        key = (i, j, al)
        if key not in g_vals:
            g_vals[key] = _sparse(g._eval_sparse([{i: one}, {j: one}], [{al: one}]))
        return g_vals[key]

    for ia in itertools.product(range(sp.dA), repeat=3):
        a, b, c = ia
        for ib in itertools.product(range(sp.dB), repeat=3):
            al, be, ga = ib
            left = f._eval_sparse([gv(a, b, al), {c: one}], [{k: v for k, v in B.sparse[be][ga]}])
            right = f._eval_sparse([{a: one}, gv(b, c, ga)], [{k: v for k, v in B.sparse[al][be]}])
            for t in range(sp.dM):
                v = left[t] - right[t]
                if v:
                    coeffs[target.index(t, ia, ib)] = v
    return Cochain(target, coeffs)
