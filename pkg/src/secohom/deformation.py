"""Families of products on truncated power series ``A[t]/(t^(N+1))``.

A family over a triple ``(A, B, eps)`` is given by degree-2 cochains
``c_1, ..., c_N`` (values in ``A``) and defines, for each ``al`` in ``B``,

    m_{al,t}(a, b) = eps(al) a b + c_1(a, b, al) t + ... + c_N(a, b, al) t^N.

Generalized associativity asks that
``m_{al be,t}(a, m_{ga,t}(b, c)) = m_{be ga,t}(m_{al,t}(a, b), c)``.
Its ``t^1`` coefficient is the cocycle condition on ``c_1``; at ``t^(n+1)``
one needs ``delta_2(c_(n+1)) = sum_{p+q=n+1} c_p o c_q``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .algebra import AlgebraMorphism, MorphismError, StructureAlgebra, Triple, InvalidAlgebra
from .complex import (
    Cochain,
    CochainSpace,
    DegreeError,
    apply_coboundary,
    circle_product,
    coboundary_matrix,
)
from .linalg import SparseMatrix, solve

__all__ = [
    "DeformationError",
    "InternalInconsistency",
    "RecoveryError",
    "TruncatedElement",
    "DeformationFamily",
    "AbstractFamily",
    "GaugeTransform",
    "AssociativityReport",
    "ExtensionResult",
    "UnitResult",
    "multiply",
    "check_generalized_associativity",
    "cocycle_condition_holds",
    "is_two_cocycle",
    "obstruction",
    "extend_one_order",
    "gauge_equivalent_first_order",
    "trivial_lift",
    "recover_epsilon",
    "unit_epsilon",
]


class DeformationError(ValueError):
    """A precondition on a family (order, associativity, shapes) does not hold."""


class InternalInconsistency(RuntimeError):
    """Two independent computations that must agree did not."""


class RecoveryError(ValueError):
    """An abstract family does not define a B-algebra structure.

    ``kind`` is ``"no-unit"``, ``"condition-5"`` or ``"morphism"``;
    ``witness`` locates the failure.
    """

    def __init__(self, kind: str, witness: tuple, message: str):
        self.kind = kind
        self.witness = witness
        super().__init__(message)


def _sparse(vec) -> dict:
    return {k: c for k, c in enumerate(vec) if c}


def _dense(d: dict, dim: int, zero) -> tuple:
    out = [zero] * dim
    for k, c in d.items():
        out[k] = c
    return tuple(out)


def _add_into(acc: dict, vec: dict, scale=1):
    for k, c in vec.items():
        v = acc.get(k, 0) + scale * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


class TruncatedElement:
    """An element ``x_0 + x_1 t + ... + x_N t^N`` of ``A[t]/(t^(N+1))``."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Sequence[Sequence]):
        if not coeffs:
            raise DeformationError("a truncated element needs at least the t^0 coefficient")
        self.coeffs = tuple(tuple(c) for c in coeffs)
        self.order = len(self.coeffs) - 1
        if len({len(c) for c in self.coeffs}) != 1:
            raise DeformationError("all coefficients must have the same length")

    @classmethod
    def constant(cls, x: Sequence, order: int, zero) -> TruncatedElement:
        return cls([tuple(x)] + [(zero,) * len(x)] * order)

    def __eq__(self, other):
        return isinstance(other, TruncatedElement) and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self):
        return f"TruncatedElement(order={self.order}, coeffs={self.coeffs})"


class _Bilinear:
    """Cached evaluation of a degree-2 cochain ``c(x, y, al)`` on sparse arguments."""

    def __init__(self, values: dict):
        self.values = values  # (i, j, al) -> sparse A-vector

    def __call__(self, x: dict, y: dict, al: dict) -> dict:
        acc: dict = {}
        for i, xi in x.items():
            for j, yj in y.items():
                c = xi * yj
                for a, w in al.items():
                    v = self.values.get((i, j, a))
                    if v:
                        _add_into(acc, v, c * w)
        return acc


class DeformationFamily:
    """``(triple, N, [c_1, ..., c_N])`` with every ``c_r`` a degree-2 ``A``-valued cochain."""

    def __init__(self, triple: Triple, cochains: Sequence[Cochain]):
        self.triple = triple
        self.space = CochainSpace(triple, None, 2)
        checked = []
        for r, c in enumerate(cochains, start=1):
            if not isinstance(c, Cochain) or c.degree != 2:
                raise DegreeError(f"c_{r} must be a degree-2 cochain")
            if c.space.triple is not triple or c.space.dM != triple.A.dim:
                raise DeformationError(f"c_{r} is not an A-valued cochain over this triple")
            checked.append(c if c.space == self.space else Cochain(self.space, c.coeffs))
        self.cochains = tuple(checked)
        self.order = len(self.cochains)
        A, B = triple.A, triple.B
        one = triple.field.one
        base = {}
        for i in range(A.dim):
            for j in range(A.dim):
                prod = {k: v for k, v in A.sparse[i][j]}
                for al in range(B.dim):
                    e = _sparse(triple.eps.images[al])
                    v = _mul_sparse(A, e, prod)
                    if v:
                        base[(i, j, al)] = v
        self._maps = [_Bilinear(base)]
        for c in self.cochains:
            vals = {}
            for i in range(A.dim):
                for j in range(A.dim):
                    for al in range(B.dim):
                        v = _sparse(c._eval_sparse([{i: one}, {j: one}], [{al: one}]))
                        if v:
                            vals[(i, j, al)] = v
            self._maps.append(_Bilinear(vals))

    @classmethod
    def zero(cls, triple: Triple, order: int) -> DeformationFamily:
        sp = CochainSpace(triple, None, 2)
        return cls(triple, [sp.zero()] * order)

    def extended(self, c_next: Cochain) -> DeformationFamily:
        return DeformationFamily(self.triple, list(self.cochains) + [c_next])

    def truncated(self, order: int) -> DeformationFamily:
        return DeformationFamily(self.triple, self.cochains[:order])

    def c(self, r: int, x: dict, y: dict, al: dict) -> dict:
        """``c_r(x, y, al)`` on sparse arguments, ``c_0 = eps(al) x y``."""
        return self._maps[r](x, y, al)

    def __repr__(self):
        return f"DeformationFamily(order={self.order})"


def _mul_sparse(A: StructureAlgebra, x: dict, y: dict) -> dict:
    out: dict = {}
    for i, xi in x.items():
        for j, yj in y.items():
            c = xi * yj
            for k, v in A.sparse[i][j]:
                out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def _series_mul(fam: DeformationFamily, al: dict, x: list[dict], y: list[dict], top: int) -> list[dict]:
    # coefficient of t^k is sum_{p+q+r=k} c_r(x_p, y_q, al), for k <= top
    out = [dict() for _ in range(top + 1)]
    for p, xp in enumerate(x):
        if not xp or p > top:
            continue
        for q, yq in enumerate(y):
            if not yq or p + q > top:
                continue
            for r in range(0, min(fam.order, top - p - q) + 1):
                _add_into(out[p + q + r], fam.c(r, xp, yq, al))
    return out


def multiply(fam: DeformationFamily, alpha: Sequence, a: TruncatedElement, b: TruncatedElement) -> TruncatedElement:
    """``m_{alpha,t}(a, b)`` truncated at ``t^N``."""
    N = fam.order
    if a.order != N or b.order != N:
        raise DeformationError(f"elements must be truncated at order {N}, got {a.order} and {b.order}")
    f = fam.triple.field
    al = _sparse([f(v) for v in alpha])
    res = _series_mul(fam, al, [_sparse(c) for c in a.coeffs], [_sparse(c) for c in b.coeffs], N)
    return TruncatedElement([_dense(r, fam.triple.A.dim, f.zero) for r in res])


@dataclass
class AssociativityReport:
    """Outcome of a generalized-associativity scan.

    On failure ``witness`` is ``(order, (a, b, c), (al, be, ga))`` with basis
    indices, chosen with the lowest order and then the lowest tuple.
    """

    passed: bool
    orders_checked: int
    witness: tuple | None = None
    lhs: tuple | None = None
    rhs: tuple | None = None

    def __bool__(self):
        return self.passed


def check_generalized_associativity(fam: DeformationFamily, k_order: int) -> AssociativityReport:
    """Compare the two sides of generalized associativity in ``t^0 .. t^(k_order-1)``."""
    if not 1 <= k_order <= fam.order + 1:
        raise DeformationError(f"k_order must lie in 1..{fam.order + 1}")
    A, B = fam.triple.A, fam.triple.B
    one = fam.triple.field.one
    top = k_order - 1
    first = None
    inner_cache: dict = {}

    def inner(i, j, al):
        key = (i, j, al)
        if key not in inner_cache:
            inner_cache[key] = _series_mul(fam, {al: one}, [{i: one}], [{j: one}], top)
        return inner_cache[key]

    bprod = {(x, y): {k: v for k, v in B.sparse[x][y]} for x in range(B.dim) for y in range(B.dim)}
    for a, b, c in itertools.product(range(A.dim), repeat=3):
        for al, be, ga in itertools.product(range(B.dim), repeat=3):
            lhs = _series_mul(fam, bprod[(al, be)], [{a: one}], inner(b, c, ga), top)
            rhs = _series_mul(fam, bprod[(be, ga)], inner(a, b, al), [{c: one}], top)
            for k in range(top + 1):
                if lhs[k] != rhs[k]:
                    cand = (k, (a, b, c), (al, be, ga))
                    if first is None or cand[0] < first[0][0]:
                        first = (cand, lhs[k], rhs[k])
                    break
            if first is not None and first[0][0] == 0:
                break
        if first is not None and first[0][0] == 0:
            break
    if first is None:
        return AssociativityReport(True, k_order)
    z = fam.triple.field.zero
    (w, l, r) = first
    return AssociativityReport(False, k_order, w, _dense(l, A.dim, z), _dense(r, A.dim, z))


def cocycle_condition_holds(c1: Cochain) -> tuple[bool, tuple | None]:
    """Evaluate the four-term cocycle condition directly on basis 6-tuples.

    Returns ``(holds, witness)``. This does not use the coboundary matrix.
    """
    sp = c1.space
    if c1.degree != 2:
        raise DegreeError("the cocycle condition concerns degree-2 cochains")
    A, B, eps = sp.triple.A, sp.triple.B, sp.triple.eps
    one = sp.field.one
    e = [_sparse(img) for img in eps.images]
    M = sp.M

    def c(x, y, al):
        return _sparse(c1._eval_sparse([x, y], [al]))

    def left(x, m):
        out: dict = {}
        for i, xi in x.items():
            for s, ms in m.items():
                for t, v in M.left_sparse[i][s]:
                    out[t] = out.get(t, 0) + xi * ms * v
        return out

    def right(m, x):
        out: dict = {}
        for s, ms in m.items():
            for i, xi in x.items():
                for t, v in M.right_sparse[s][i]:
                    out[t] = out.get(t, 0) + xi * ms * v
        return out

    def eps_of(bv):
        out: dict = {}
        for j, cj in bv.items():
            _add_into(out, e[j], cj)
        return out

    for a, b, cc in itertools.product(range(A.dim), repeat=3):
        for al, be, ga in itertools.product(range(B.dim), repeat=3):
            ab_ = {k: v for k, v in B.sparse[al][be]}
            bg = {k: v for k, v in B.sparse[be][ga]}
            total: dict = {}
            _add_into(total, left(_mul_sparse(A, {a: one}, eps_of(ab_)), c({b: one}, {cc: one}, {ga: one})))
            _add_into(total, c(_mul_sparse(A, e[al], _mul_sparse(A, {a: one}, {b: one})), {cc: one}, bg), -1)
            _add_into(total, c({a: one}, _mul_sparse(A, e[ga], _mul_sparse(A, {b: one}, {cc: one})), ab_))
            _add_into(total, left(eps_of(bg), right(c({a: one}, {b: one}, {al: one}), {cc: one})), -1)
            if any(total.values()):
                return False, ((a, b, cc), (al, be, ga))
    return True, None


def is_two_cocycle(c1: Cochain) -> bool:
    """Whether ``delta_2(c1) = 0``, cross-checked against the direct condition."""
    if c1.degree != 2:
        raise DegreeError("is_two_cocycle expects a degree-2 cochain")
    by_matrix = apply_coboundary(c1).is_zero()
    direct, witness = cocycle_condition_holds(c1)
    if by_matrix != direct:
        raise InternalInconsistency(
            f"coboundary matrix says {by_matrix}, direct evaluation says {direct} (witness {witness})"
        )
    return by_matrix


def obstruction(fam: DeformationFamily, n: int | None = None) -> Cochain:
    """``omega = sum_{p+q=n+1, p,q>=1} c_p o c_q`` for a family associative mod ``t^(n+1)``.

    ``n`` defaults to the family's order. The result is checked to be a
    3-cocycle before it is returned.
    """
    n = fam.order if n is None else n
    if not 0 <= n <= fam.order:
        raise DeformationError(f"obstruction order {n} outside 0..{fam.order}")
    sub = fam.truncated(n)
    rep = check_generalized_associativity(sub, n + 1)
    if not rep.passed:
        raise DeformationError(f"family is not associative mod t^{n + 1}: witness {rep.witness}")
    sp3 = CochainSpace(fam.triple, None, 3)
    omega = sp3.zero()
    for p in range(1, n + 1):
        q = n + 1 - p
        omega = omega + circle_product(fam.cochains[p - 1], fam.cochains[q - 1])
    if not apply_coboundary(omega).is_zero():
        raise InternalInconsistency("obstruction cochain is not a 3-cocycle")
    return omega


@dataclass
class ExtensionResult:
    """Outcome of :func:`extend_one_order`.

    ``obstructed`` results carry ``omega`` and the fact that the linear system
    ``delta_2(x) = omega`` is inconsistent serves as the non-membership proof.
    """

    extended: bool
    obstruction: Cochain
    next_cochain: Cochain | None = None
    family: DeformationFamily | None = None

    @property
    def obstructed(self) -> bool:
        return not self.extended


def extend_one_order(fam: DeformationFamily) -> ExtensionResult:
    """Try to find ``c_(N+1)`` with ``delta_2(c_(N+1)) = omega``."""
    omega = obstruction(fam)
    d2 = coboundary_matrix(fam.triple, fam.space.M, 2)
    x = solve(d2, omega.coeffs)
    if x is None:
        return ExtensionResult(False, omega)
    c_next = Cochain(fam.space, x)
    new = fam.extended(c_next)
    rep = check_generalized_associativity(new, new.order + 1)
    if not rep.passed:
        raise InternalInconsistency(f"extended family fails associativity at {rep.witness}")
    return ExtensionResult(True, omega, c_next, new)


class GaugeTransform:
    """First-order gauge ``f(a) = a + f_1(a) t``; ``matrix[s][i]`` is the ``s``-th coordinate of ``f_1(e_i)``."""

    def __init__(self, triple: Triple, matrix: Sequence[Sequence]):
        d = triple.A.dim
        if len(matrix) != d or any(len(r) != d for r in matrix):
            raise DeformationError(f"f_1 must be a {d}x{d} matrix")
        self.triple = triple
        f = triple.field
        self.matrix = tuple(tuple(f(v) for v in row) for row in matrix)

    @classmethod
    def from_cochain(cls, g: Cochain) -> GaugeTransform:
        if g.degree != 1:
            raise DegreeError("a gauge map is a degree-1 cochain")
        d = g.space.dA
        return cls(g.space.triple, [[g.coeffs[s * d + i] for i in range(d)] for s in range(d)])

    def cochain(self) -> Cochain:
        sp = CochainSpace(self.triple, None, 1)
        return Cochain(sp, [v for row in self.matrix for v in row])

    def coboundary(self) -> Cochain:
        """``delta_1(f_1)``, the first-order change of ``c_1`` under this gauge."""
        return apply_coboundary(self.cochain())

    def __repr__(self):
        return f"GaugeTransform({self.matrix})"


def gauge_equivalent_first_order(c1: Cochain, d1: Cochain) -> GaugeTransform | None:
    """Some ``f_1`` with ``c1 - d1 = delta_1(f_1)``, or ``None`` when none exists."""
    if c1.degree != 2 or d1.degree != 2:
        raise DegreeError("gauge equivalence compares degree-2 cochains")
    diff = c1 - d1
    sp = c1.space
    d1m = coboundary_matrix(sp.triple, sp.M, 1)
    x = solve(d1m, diff.coeffs)
    if x is None:
        return None
    return GaugeTransform.from_cochain(Cochain(CochainSpace(sp.triple, sp.M, 1), x))


def trivial_lift(classical_c: Sequence, triple: Triple) -> DeformationFamily:
    """Lift classical maps ``c_i: A (x) A -> A`` by ``c~_i(a, b, al) = eps(al) c_i(a, b)``.

    Each ``c_i`` is either a table with ``c_i[i][j]`` the coordinates of
    ``c_i(e_i, e_j)``, or a degree-2 cochain over a triple with ``B = k``.
    """
    A = triple.A
    sp = CochainSpace(triple, None, 2)
    f = triple.field
    one = f.one
    eps = [_sparse(img) for img in triple.eps.images]
    lifted = []
    for idx, c in enumerate(classical_c, start=1):
        if isinstance(c, Cochain):
            if c.degree != 2 or c.space.dB != 1 or c.space.dA != A.dim:
                raise DegreeError(f"c_{idx} is not a classical degree-2 cochain on A")
            table = [[c._eval_sparse([{i: one}, {j: one}], [{0: one}]) for j in range(A.dim)] for i in range(A.dim)]
        else:
            table = c
            if len(table) != A.dim or any(len(r) != A.dim or any(len(v) != A.dim for v in r) for r in table):
                raise DeformationError(f"c_{idx} must be a dim(A) x dim(A) table of A-vectors")

        def fn(ia, ib, table=table):
            i, j = ia
            val = _mul_sparse(A, eps[ib[0]], _sparse([f(v) for v in table[i][j]]))
            return _dense(val, A.dim, f.zero)

        lifted.append(sp.from_function(fn))
    return DeformationFamily(triple, lifted)


# -- abstract families ----------------------------------------------------------------


class AbstractFamily:
    """Products ``m_al: A (x) A -> A`` for each basis element ``al`` of ``B``.

    ``products[al][i][j]`` holds the coordinates of ``m_al(e_i, e_j)``; the
    family is extended to all of ``B`` linearly, which builds in the additivity
    and scalar rules.
    """

    def __init__(self, B: StructureAlgebra, dim_A: int, products: Sequence, *, labels=None):
        self.B = B
        self.dim = dim_A
        self.field = B.field
        self.labels = labels
        f = self.field
        if len(products) != B.dim:
            raise DeformationError(f"need one product per basis element of B ({B.dim})")
        self.products = tuple(
            tuple(tuple(tuple(f(v) for v in products[al][i][j]) for j in range(dim_A)) for i in range(dim_A))
            for al in range(B.dim)
        )
        for al in range(B.dim):
            if len(products[al]) != dim_A or any(len(r) != dim_A or any(len(v) != dim_A for v in r) for r in products[al]):
                raise DeformationError(f"product m_{al} must be a {dim_A}x{dim_A} table of vectors")

    @classmethod
    def from_triple(cls, triple: Triple) -> AbstractFamily:
        """``m_al(a, b) = eps(al) a b``."""
        A, B = triple.A, triple.B
        products = []
        for al in range(B.dim):
            e = triple.eps.images[al]
            products.append([[A.mul(e, A.table[i][j]) for j in range(A.dim)] for i in range(A.dim)])
        return cls(B, A.dim, products, labels=A.labels)

    def m(self, al: dict, x: dict, y: dict) -> dict:
        out: dict = {}
        for a, w in al.items():
            P = self.products[a]
            for i, xi in x.items():
                for j, yj in y.items():
                    c = w * xi * yj
                    for k, v in enumerate(P[i][j]):
                        if v:
                            out[k] = out.get(k, 0) + c * v
        return {k: v for k, v in out.items() if v}


def recover_epsilon(fam: AbstractFamily, *, name: str = "A") -> AlgebraMorphism:
    """Recover ``eps(al) = m_al(1, 1)`` and the algebra ``(A, m_1)`` it lands in."""
    B, d, f = fam.B, fam.dim, fam.field
    one = f.one
    unit_B = _sparse(B.unit)
    m1 = [[_dense(fam.m(unit_B, {i: one}, {j: one}), d, f.zero) for j in range(d)] for i in range(d)]
    # unit of m_1: u with m_1(u, e_j) = e_j = m_1(e_j, u)
    rows: dict = {}
    rhs = []
    r = 0
    for j in range(d):
        for side in (0, 1):
            for k in range(d):
                row = {}
                for i in range(d):
                    v = m1[i][j][k] if side == 0 else m1[j][i][k]
                    if v:
                        row[i] = v
                if row:
                    rows[r] = row
                rhs.append(one if k == j else f.zero)
                r += 1
    u = solve(SparseMatrix.from_rows(r, d, rows, f), rhs)
    if u is None:
        raise RecoveryError("no-unit", (), "the product m_1 has no two-sided unit")
    # condition (5): m_{be ga}(m_al(a, b), c) = m_{al be}(a, m_ga(b, c))
    for al, be, ga in itertools.product(range(B.dim), repeat=3):
        bg = {k: v for k, v in B.sparse[be][ga]}
        ab = {k: v for k, v in B.sparse[al][be]}
        for a, b, c in itertools.product(range(d), repeat=3):
            lhs = fam.m(bg, fam.m({al: one}, {a: one}, {b: one}), {c: one})
            rhs_ = fam.m(ab, {a: one}, fam.m({ga: one}, {b: one}, {c: one}))
            if lhs != rhs_:
                raise RecoveryError(
                    "condition-5",
                    (al, be, ga, a, b, c),
                    f"generalized associativity fails at B-basis ({al}, {be}, {ga}), A-basis ({a}, {b}, {c})",
                )
    us = _sparse(u)
    try:
        target = StructureAlgebra(d, m1, u, labels=fam.labels, field=f, name=name)
        images = [_dense(fam.m({al: one}, us, us), d, f.zero) for al in range(B.dim)]
        return AlgebraMorphism(B, target, [[images[al][k] for al in range(B.dim)] for k in range(d)])
    except (InvalidAlgebra, MorphismError) as exc:
        # unreachable when condition (5) holds
        raise RecoveryError("morphism", getattr(exc, "witness", ()), f"recovered structure is invalid: {exc}") from exc


@dataclass
class UnitResult:
    """Unit of ``(A[t]/(t^(N+1)), m_{1,t})`` and ``eps_bar(al) = m_{al,t}(1, 1)``.

    When ``found`` is false, ``failed_order`` is the power of ``t`` at which
    the unit equations became inconsistent.
    """

    found: bool
    unit: TruncatedElement | None = None
    epsilon_bar: list[TruncatedElement] = dc_field(default_factory=list)
    failed_order: int | None = None


def unit_epsilon(fam: DeformationFamily) -> UnitResult:
    """Search order by order for a unit of ``m_{1,t}`` and return ``eps_bar``."""
    triple = fam.triple
    A, B, f = triple.A, triple.B, triple.field
    d, N = A.dim, fam.order
    one = f.one
    unit_B = _sparse(B.unit)
    # left/right multiplication by basis elements via c_0 = eps(1) x y = x y
    rows: dict = {}
    r = 0
    for a in range(d):
        for side in (0, 1):
            for k in range(d):
                row = {}
                for i in range(d):
                    v = A.table[i][a][k] if side == 0 else A.table[a][i][k]
                    if v:
                        row[i] = v
                if row:
                    rows[r] = row
                r += 1
    L = SparseMatrix.from_rows(r, d, rows, f)
    u: list[dict] = []
    for k in range(N + 1):
        rhs = []
        for a in range(d):
            target_l: dict = {}
            target_r: dict = {}
            if k == 0:
                target_l = target_r = {a: one}
            for p in range(k):
                rr = k - p
                if rr > N:
                    continue
                _add_into(target_l, fam.c(rr, u[p], {a: one}, unit_B), -1)
                _add_into(target_r, fam.c(rr, {a: one}, u[p], unit_B), -1)
            rhs.extend(_dense(target_l, d, f.zero))
            rhs.extend(_dense(target_r, d, f.zero))
        x = solve(L, rhs)
        if x is None:
            return UnitResult(False, failed_order=k)
        u.append(_sparse(x))
    unit = TruncatedElement([_dense(x, d, f.zero) for x in u])
    eps_bar = []
    for al in range(B.dim):
        res = _series_mul(fam, {al: one}, u, u, N)
        eps_bar.append(TruncatedElement([_dense(x, d, f.zero) for x in res]))
    return UnitResult(True, unit, eps_bar)
