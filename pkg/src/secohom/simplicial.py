"""Two cyclic objects built from upper-triangular and square "tensor matrices".

``K(G, 2)`` for a finite abelian group ``G`` has ``K_q = G^{q(q-1)/2}``,
an element being a strictly upper-triangular array ``g[u, v]``
(``0 <= u < v <= q-1``). Faces multiply adjacent rows and columns,
degeneracies insert a row and column of identities, and the cyclic operator
rotates.

``2K(B)`` for a commutative algebra ``B`` with ``eps: B -> k`` has level ``n``
equal to ``B`` tensored over the index set ``I_n`` of off-diagonal positions
of an ``(n+1) x (n+1)`` array minus the wrapped subdiagonal. Its operators are
realized as sparse matrices on basis functions ``I_n -> basis(B)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Callable, Sequence

from .algebra import AlgebraMorphism, GroupError, StructureAlgebra, check_group_table, cyclic_group_table, direct_product_table
from .linalg import SparseMatrix

__all__ = [
    "FiniteAbelianGroup",
    "cyclic_group",
    "kg2_pairs",
    "kg2_face",
    "kg2_degeneracy",
    "kg2_cyclic",
    "IdentityReport",
    "verify_kg2",
    "CyclicIndexSet",
    "SecondaryCyclicModule",
    "tau_matrix",
    "face_last_matrix",
    "degeneracy_last_matrix",
    "face_matrix",
    "degeneracy_matrix",
    "verify_cyclic_module",
    "EXHAUSTIVE_LIMIT",
    "SAMPLE_SIZE",
]

EXHAUSTIVE_LIMIT = 10**6
SAMPLE_SIZE = 10**4


# -- K(G, 2) -------------------------------------------------------------------------


class FiniteAbelianGroup:
    """A finite abelian group given by a validated composition table."""

    def __init__(self, table: Sequence[Sequence[int]], labels: Sequence[str] | None = None):
        self.identity = check_group_table(table)
        n = len(table)
        if any(table[a][b] != table[b][a] for a in range(n) for b in range(n)):
            raise GroupError("group is not abelian")
        self.table = tuple(tuple(r) for r in table)
        self.order = n
        self.inverse = tuple(next(b for b in range(n) if table[a][b] == self.identity) for a in range(n))
        self.labels = tuple(labels) if labels else tuple(str(g) for g in range(n))

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def __mul__(self, other: FiniteAbelianGroup) -> FiniteAbelianGroup:
        """Direct product."""
        return FiniteAbelianGroup(direct_product_table(self.table, other.table))

    def __repr__(self):
        return f"FiniteAbelianGroup(order={self.order})"


def cyclic_group(m: int) -> FiniteAbelianGroup:
    """``Z/m`` with elements ``0..m-1`` under addition."""
    return FiniteAbelianGroup(cyclic_group_table(m))


@lru_cache(maxsize=None)
def kg2_pairs(q: int) -> tuple[tuple[int, int], ...]:
    return tuple((u, v) for u in range(q) for v in range(u + 1, q))


def _check_level(G: FiniteAbelianGroup, q: int, x: Sequence[int]) -> dict:
    ps = kg2_pairs(q)
    if len(x) != len(ps):
        raise ValueError(f"an element of K_{q} has {len(ps)} entries, got {len(x)}")
    return dict(zip(ps, x))


def kg2_face(G: FiniteAbelianGroup, i: int, q: int, x: Sequence[int]) -> tuple[int, ...]:
    """``d_i: K_q -> K_(q-1)``; merges rows and columns ``i-1`` and ``i``."""
    if q < 1 or not 0 <= i <= q:
        raise IndexError(f"face d_{i} undefined on K_{q}")
    g = _check_level(G, q, x)
    m = G.table
    out = []
    for (u, v) in kg2_pairs(q - 1):
        if v < i - 1:
            h = g[u, v]
        elif v == i - 1:
            h = m[g[u, v]][g[u, v + 1]]
        elif u < i - 1:
            h = g[u, v + 1]
        elif u == i - 1:
            h = m[g[u, v + 1]][g[u + 1, v + 1]]
        else:
            h = g[u + 1, v + 1]
        out.append(h)
    return tuple(out)


def kg2_degeneracy(G: FiniteAbelianGroup, i: int, q: int, x: Sequence[int]) -> tuple[int, ...]:
    """``s_i: K_q -> K_(q+1)``; inserts an identity row and column at ``i``."""
    if not 0 <= i <= q:
        raise IndexError(f"degeneracy s_{i} undefined on K_{q}")
    g = _check_level(G, q, x)
    e = G.identity
    out = []
    for (u, v) in kg2_pairs(q + 1):
        if v < i:
            k = g[u, v]
        elif v == i:
            k = e
        elif u < i:
            k = g[u, v - 1]
        elif u == i:
            k = e
        else:
            k = g[u - 1, v - 1]
        out.append(k)
    return tuple(out)


def kg2_cyclic(G: FiniteAbelianGroup, q: int, x: Sequence[int]) -> tuple[int, ...]:
    """The cyclic operator ``tau_q``.

    Row 0 of the result is ``g[v-1, v] ... g[v-1, q-1]`` times the inverses of
    the column entries ``g[0, v-1] ... g[v-2, v-1]``; the other rows shift
    down and to the right.
    """
    if q < 1:
        raise IndexError("tau_q needs q >= 1")
    g = _check_level(G, q, x)
    m, inv = G.table, G.inverse
    out = []
    for (u, v) in kg2_pairs(q):
        if u == 0:
            h = G.identity
            for w in range(v, q):
                h = m[h][g[v - 1, w]]
            for w in range(v - 1):
                h = m[h][inv[g[w, v - 1]]]
        else:
            h = g[u - 1, v - 1]
        out.append(h)
    return tuple(out)


@dataclass
class IdentityReport:
    """Pass/fail record of a family of identities.

    ``first_failure`` is ``(family, level, indices)`` for the earliest failing
    instance in (level, family, indices) order; ``failures`` counts failures
    per family and ``checked`` counts instances.
    """

    passed: bool = True
    checked: dict = dc_field(default_factory=dict)
    failures: dict = dc_field(default_factory=dict)
    first_failure: tuple | None = None
    sampled_levels: list = dc_field(default_factory=list)

    def record(self, family: str, level: int, indices: tuple, ok: bool):
        self.checked[family] = self.checked.get(family, 0) + 1
        if not ok:
            self.failures[family] = self.failures.get(family, 0) + 1
            if self.first_failure is None:
                self.first_failure = (family, level, indices)
            self.passed = False

    def __bool__(self):
        return self.passed


def _kg2_elements(G: FiniteAbelianGroup, q: int, rng: random.Random, report: IdentityReport):
    n_entries = q * (q - 1) // 2
    size = G.order**n_entries
    if size <= EXHAUSTIVE_LIMIT:
        return itertools.product(range(G.order), repeat=n_entries)
    report.sampled_levels.append(q)
    return (tuple(rng.randrange(G.order) for _ in range(n_entries)) for _ in range(SAMPLE_SIZE))


def verify_kg2(G: FiniteAbelianGroup, q_max: int, seed: int = 0) -> IdentityReport:
    """Check the simplicial and cyclic identities on ``K_q`` for ``1 <= q <= q_max``.

    A level is enumerated exhaustively when it has at most ``EXHAUSTIVE_LIMIT``
    elements, and otherwise sampled (``SAMPLE_SIZE`` elements, seeded).
    """
    rng = random.Random(seed)
    rep = IdentityReport()
    F = lambda i, q, x: kg2_face(G, i, q, x)
    S = lambda i, q, x: kg2_degeneracy(G, i, q, x)
    T = lambda q, x: kg2_cyclic(G, q, x)
    for q in range(1, q_max + 1):
        for x in _kg2_elements(G, q, rng, rep):
            y = x
            for _ in range(q + 1):
                y = T(q, y)
            rep.record("tau_power", q, (x,), y == x)
            tx = T(q, x)
            for i in range(q + 1):
                for j in range(i + 1, q + 1):
                    if q >= 2:
                        rep.record("face_face", q, (i, j, x), F(i, q - 1, F(j, q, x)) == F(j - 1, q - 1, F(i, q, x)))
                for j in range(i, q + 1):
                    rep.record("degen_degen", q, (i, j, x), S(i, q + 1, S(j, q, x)) == S(j + 1, q + 1, S(i, q, x)))
            for i in range(q + 2):
                for j in range(q + 1):
                    lhs = F(i, q + 1, S(j, q, x))
                    if i < j:
                        rhs = S(j - 1, q - 1, F(i, q, x))
                    elif i in (j, j + 1):
                        rhs = x
                    else:
                        rhs = S(j, q - 1, F(i - 1, q, x))
                    rep.record("face_degen", q, (i, j, x), lhs == rhs)
            for i in range(1, q + 1):
                rep.record("face_tau", q, (i, x), F(i, q, tx) == T(q - 1, F(i - 1, q, x)) if q >= 2 else True)
                rep.record("degen_tau", q, (i, x), S(i, q, tx) == T(q + 1, S(i - 1, q, x)))
            rep.record("face0_tau", q, (x,), F(0, q, tx) == F(q, q, x))
            rep.record("degen0_tau", q, (x,), S(0, q, tx) == T(q + 1, T(q + 1, S(q, q, x))))
    return rep


# -- 2K(B) ---------------------------------------------------------------------------


class CyclicIndexSet:
    """``I_n``: positions ``(u, v)`` of an ``(n+1) x (n+1)`` array with
    ``u != v`` and ``u != v + 1 (mod n+1)``, in lexicographic order."""

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("level must be nonnegative")
        N = n + 1
        self.n = n
        self.positions = tuple((u, v) for u in range(N) for v in range(N) if u != v and u != (v + 1) % N)
        self.index = {p: k for k, p in enumerate(self.positions)}

    def __len__(self):
        return len(self.positions)

    def __contains__(self, p):
        return p in self.index

    def is_trivial(self, u: int, v: int) -> bool:
        N = self.n + 1
        return u == v or u == (v + 1) % N


def _encode(digits: Sequence[int], base: int) -> int:
    r = 0
    for d in digits:
        r = r * base + d
    return r


class SecondaryCyclicModule:
    """Operators of ``2K(B)`` as sparse matrices, cached per level.

    ``tau_override`` may replace the one-step rotation at chosen levels (a
    mapping ``level -> SparseMatrix``); faces and degeneracies are built by
    conjugating with powers of whatever rotation is in effect.
    """

    def __init__(self, B: StructureAlgebra, eps: AlgebraMorphism | None = None, *, tau_override: dict | None = None):
        if not B.commutative:
            raise ValueError("B must be flagged commutative")
        if eps is not None and (eps.source is not B or eps.target.dim != 1):
            raise ValueError("eps must be an algebra morphism B -> k")
        self.B = B
        self.eps = eps
        self.field = B.field
        self.eps_values = tuple(eps.images[j][0] for j in range(B.dim)) if eps is not None else None
        self.tau_override = dict(tau_override or {})
        self._cache: dict = {}

    def index_set(self, n: int) -> CyclicIndexSet:
        key = ("I", n)
        if key not in self._cache:
            self._cache[key] = CyclicIndexSet(n)
        return self._cache[key]

    def dim(self, n: int) -> int:
        return self.B.dim ** len(self.index_set(n))

    def _basis(self, n: int):
        return itertools.product(range(self.B.dim), repeat=len(self.index_set(n)))

    def _cached(self, key, build: Callable[[], SparseMatrix]) -> SparseMatrix:
        got = self._cache.get(key)
        if got is None:
            got = build()
            self._cache[key] = got
        return got

    # rotation

    def _shift_matrix(self, n: int, k: int) -> SparseMatrix:
        I = self.index_set(n)
        N = n + 1
        dB = self.B.dim
        # output position (u+k, v+k) carries the input factor at (u, v)
        src = [I.index[((u - k) % N, (v - k) % N)] for (u, v) in I.positions]
        perm = []
        for x in self._basis(n):
            perm.append(_encode([x[s] for s in src], dB))
        return SparseMatrix.permutation(perm, self.field)

    def tau(self, n: int, power: int = 1) -> SparseMatrix:
        """``tau_n^power``; negative powers are taken modulo ``n+1``."""
        N = n + 1
        power %= N
        if power == 0:
            return self._cached(("id", n), lambda: SparseMatrix.identity(self.dim(n), self.field))
        if power == 1:
            if n in self.tau_override:
                return self.tau_override[n]
            return self._cached(("tau", n), lambda: self._shift_matrix(n, 1))
        return self._cached(("tau", n, power), lambda: self.tau(n, 1) @ self.tau(n, power - 1))

    # last face and degeneracy

    def _build_face_last(self, n: int) -> SparseMatrix:
        B, f = self.B, self.field
        src, tgt = self.index_set(n), self.index_set(n - 1)
        phi = lambda r: n - 1 if r == n else r
        groups: dict = {}
        for u in range(n + 1):
            for v in range(n + 1):
                if (u, v) in src:
                    groups.setdefault((phi(u), phi(v)), []).append(src.index[(u, v)])
        scalar_groups = [g for t, g in groups.items() if t not in tgt]
        vector_groups = [groups.get(p, []) for p in tgt.positions]
        dB = B.dim
        cols = {}
        prod_cache: dict = {}

        def bprod(idx: tuple) -> dict:
            got = prod_cache.get(idx)
            if got is None:
                acc = {k: c for k, c in B.unit_sparse}
                for j in idx:
                    nxt: dict = {}
                    for i, c in acc.items():
                        for k, v in B.sparse[i][j]:
                            nxt[k] = nxt.get(k, 0) + c * v
                    acc = {k: v for k, v in nxt.items() if v}
                prod_cache[idx] = got = acc
            return got

        for col, x in enumerate(self._basis(n)):
            scal = f.one
            for g in scalar_groups:
                vec = bprod(tuple(x[s] for s in g))
                e = f.zero
                for k, c in vec.items():
                    e = e + c * self.eps_values[k]
                scal = scal * e
                if not scal:
                    break
            if not scal:
                continue
            acc = {0: scal}
            for g in vector_groups:
                vec = bprod(tuple(x[s] for s in g))
                nxt: dict = {}
                for r, c in acc.items():
                    for k, v in vec.items():
                        key = r * dB + k
                        nxt[key] = nxt.get(key, 0) + c * v
                acc = {r: c for r, c in nxt.items() if c}
                if not acc:
                    break
            if acc:
                cols[col] = acc
        return SparseMatrix.from_columns(self.dim(n - 1), [cols.get(c, {}) for c in range(self.dim(n))], f)

    def face_last(self, n: int) -> SparseMatrix:
        """``d_n: level n -> level n-1``, collapsing row and column ``n`` into ``n-1``.

        Factors that land on a position outside ``I_(n-1)`` are sent through
        ``eps``; the remaining factors multiply in ``B``.
        """
        if n < 1:
            raise IndexError("faces start at level 1")
        if self.eps is None:
            raise TypeError("faces need eps: B -> k")
        return self._cached(("dlast", n), lambda: self._build_face_last(n))

    def _build_degeneracy_last(self, n: int) -> SparseMatrix:
        B, f = self.B, self.field
        src, tgt = self.index_set(n), self.index_set(n + 1)
        dB = B.dim
        slots = [src.index.get(p) for p in tgt.positions]
        unit = {k: c for k, c in B.unit_sparse}
        cols = []
        for x in self._basis(n):
            acc = {0: f.one}
            for s in slots:
                vec = {x[s]: f.one} if s is not None else unit
                nxt: dict = {}
                for r, c in acc.items():
                    for k, v in vec.items():
                        key = r * dB + k
                        nxt[key] = nxt.get(key, 0) + c * v
                acc = nxt
            cols.append({r: c for r, c in acc.items() if c})
        return SparseMatrix.from_columns(self.dim(n + 1), cols, f)

    def degeneracy_last(self, n: int) -> SparseMatrix:
        """``s_n: level n -> level n+1``; every new position receives ``1_B``."""
        if n < 0:
            raise IndexError("levels start at 0")
        return self._cached(("slast", n), lambda: self._build_degeneracy_last(n))

    # conjugated faces and degeneracies

    def face(self, i: int, n: int) -> SparseMatrix:
        """``d_i = tau_(n-1)^(i-n) d_n tau_n^(n-i)``."""
        if n < 1 or not 0 <= i <= n:
            raise IndexError(f"face d_{i} undefined at level {n}")
        if i == n:
            return self.face_last(n)
        return self._cached(
            ("d", i, n), lambda: self.tau(n - 1, i - n) @ self.face_last(n) @ self.tau(n, n - i)
        )

    def degeneracy(self, i: int, n: int) -> SparseMatrix:
        """``s_i = tau_(n+1)^(i-n) s_n tau_n^(n-i)``."""
        if n < 0 or not 0 <= i <= n:
            raise IndexError(f"degeneracy s_{i} undefined at level {n}")
        if i == n:
            return self.degeneracy_last(n)
        return self._cached(
            ("s", i, n), lambda: self.tau(n + 1, i - n) @ self.degeneracy_last(n) @ self.tau(n, n - i)
        )


def _module(B: StructureAlgebra, eps: AlgebraMorphism | None) -> SecondaryCyclicModule:
    if eps is None:
        from .algebra import epsilon_map, ground_field

        if B.dim != 1:
            raise ValueError("eps is required unless B = k")
        eps = epsilon_map(B, ground_field(B.field), [[1]])
    return SecondaryCyclicModule(B, eps)


def tau_matrix(B: StructureAlgebra, n: int, power: int = 1) -> SparseMatrix:
    """The rotation ``(u, v) -> (u+1, v+1) mod (n+1)`` of tensor factors."""
    if n < 1:
        raise IndexError("tau_n needs n >= 1")
    return SecondaryCyclicModule(B).tau(n, power)


def face_last_matrix(B: StructureAlgebra, eps: AlgebraMorphism, n: int) -> SparseMatrix:
    return SecondaryCyclicModule(B, eps).face_last(n)


def degeneracy_last_matrix(B: StructureAlgebra, n: int) -> SparseMatrix:
    return SecondaryCyclicModule(B).degeneracy_last(n)


def face_matrix(i: int, B: StructureAlgebra, eps: AlgebraMorphism, n: int) -> SparseMatrix:
    return SecondaryCyclicModule(B, eps).face(i, n)


def degeneracy_matrix(i: int, B: StructureAlgebra, n: int) -> SparseMatrix:
    return SecondaryCyclicModule(B).degeneracy(i, n)


def verify_cyclic_module(
    B: StructureAlgebra,
    eps: AlgebraMorphism | None,
    n_max: int,
    *,
    module: SecondaryCyclicModule | None = None,
) -> IdentityReport:
    """Check the cyclic-module identities of ``2K(B)`` as exact matrix equalities.

    Identities are checked at source levels ``0 .. n_max``, skipping any whose
    intermediate level would exceed ``n_max + 1``. Families, in the order they
    are checked at each level: ``tau_power``, ``face_face``, ``degen_degen``,
    ``face_degen``, ``face_tau``, ``degen_tau``, ``face0_tau``, ``degen0_tau``.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    K = module if module is not None else _module(B, eps)
    top = n_max + 1
    rep = IdentityReport()
    for n in range(0, n_max + 1):
        if n >= 1:
            rep.record("tau_power", n, (), K.tau(n, 1) @ K.tau(n, n) == K.tau(n, 0))
        if n >= 2:
            for i in range(n + 1):
                for j in range(i + 1, n + 1):
                    rep.record("face_face", n, (i, j), K.face(i, n - 1) @ K.face(j, n) == K.face(j - 1, n - 1) @ K.face(i, n))
        if n + 2 <= top:
            for i in range(n + 1):
                for j in range(i, n + 1):
                    rep.record(
                        "degen_degen", n, (i, j),
                        K.degeneracy(i, n + 1) @ K.degeneracy(j, n) == K.degeneracy(j + 1, n + 1) @ K.degeneracy(i, n),
                    )
        for i in range(n + 2):
            for j in range(n + 1):
                lhs = K.face(i, n + 1) @ K.degeneracy(j, n)
                if i < j:
                    rhs = K.degeneracy(j - 1, n - 1) @ K.face(i, n)
                elif i in (j, j + 1):
                    rhs = K.tau(n, 0)
                else:
                    rhs = K.degeneracy(j, n - 1) @ K.face(i - 1, n)
                rep.record("face_degen", n, (i, j), lhs == rhs)
        if n >= 1:
            for i in range(1, n + 1):
                rep.record("face_tau", n, (i,), K.face(i, n) @ K.tau(n) == K.tau(n - 1) @ K.face(i - 1, n))
                rep.record("degen_tau", n, (i,), K.degeneracy(i, n) @ K.tau(n) == K.tau(n + 1) @ K.degeneracy(i - 1, n))
            rep.record("face0_tau", n, (), K.face(0, n) @ K.tau(n) == K.face_last(n))
            rep.record("degen0_tau", n, (), K.degeneracy(0, n) @ K.tau(n) == K.tau(n + 1, 2) @ K.degeneracy_last(n))
    return rep
