"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The lines are also collected and shown in the pytest terminal summary.
"""

import random
import time

import pytest

import oracles as O
from secohom import QQ
from secohom.algebra import (
    StructureAlgebra,
    Triple,
    epsilon_map,
    ground_field,
    identity_morphism,
    matrix_algebra,
    truncated_polynomial_algebra,
)
from secohom.complex import (
    Cochain,
    CochainSpace,
    apply_coboundary,
    circle_product,
    classical_hochschild,
    coboundary_matrix,
    cohomology,
    hochschild_coboundary_matrix,
    restriction_cochain_map,
)
from secohom.deformation import (
    AbstractFamily,
    DeformationFamily,
    check_generalized_associativity,
    extend_one_order,
    gauge_equivalent_first_order,
    recover_epsilon,
)
from secohom.linalg import kernel_basis
from secohom.simplicial import cyclic_group, verify_cyclic_module, verify_kg2

LINES: list[str] = []


def record(number: int, ok: bool, seconds: float, budget: float, detail: str) -> bool:
    ok = ok and seconds < budget
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  ({seconds:.1f}s of {budget:.0f}s)  {detail}"
    LINES.append(line)
    print(line)
    return ok


def from_raw(raw, name):
    d, mult, unit = raw
    return StructureAlgebra(d, mult, unit, name=name)


def random_cochain(space, rng):
    return Cochain(space, [QQ(rng.randint(-2, 2)) for _ in range(space.dim)])


@pytest.fixture(scope="module")
def D():
    return truncated_polynomial_algebra(2, QQ, name="D")


@pytest.fixture(scope="module")
def DD(D):
    return Triple(D, D, identity_morphism(D), name="DD")


def test_criterion_1_complex(D, DD):
    t0 = time.perf_counter()
    Z = from_raw(O.cyclic_group_algebra(2), "kZ2")
    Z = StructureAlgebra(Z.dim, Z.table, Z.unit, commutative=True, name="kZ2")
    triples = [Triple.classical(D), DD, Triple(Z, Z, epsilon_map(Z, Z, [[1, 1], [0, 0]]))]
    bad = [
        (T.name, n)
        for T in triples
        for n in range(4)
        if not (coboundary_matrix(T, None, n + 1) @ coboundary_matrix(T, None, n)).is_zero()
    ]
    detail = "delta_(n+1) delta_n = 0 for n <= 3 on 3 triples" if not bad else f"nonzero products at {bad}"
    assert record(1, not bad, time.perf_counter() - t0, 60, detail)


def test_criterion_2_classical_reduction():
    t0 = time.perf_counter()
    raws = {"k": O.ground(), "k[x]/x^2": O.dual_numbers(), "k[x]/x^3": O.truncated(3), "T2": O.upper_triangular()}
    bad = []
    for name, raw in raws.items():
        A = from_raw(raw, name)
        T = Triple.classical(A)
        for n in range(5):
            m = coboundary_matrix(T, None, n)
            if m != hochschild_coboundary_matrix(A, None, n):
                bad.append((name, n))
            if n <= 2 and m.to_dense() != O.naive_hochschild_coboundary(raw, n):
                bad.append((name, n, "oracle"))
    detail = "matrices equal for n <= 4 on 4 algebras of dim <= 3" if not bad else f"mismatch at {bad}"
    assert record(2, not bad, time.perf_counter() - t0, 30, detail)


def test_criterion_3_known_dimensions(D):
    t0 = time.perf_counter()
    expected = [2, 1, 1]  # frozen from the dense oracle
    direct = [classical_hochschild(D, None, n).dim for n in range(3)]
    via = [cohomology(Triple.classical(D), None, n).dim for n in range(3)]
    ok = direct == expected and via == expected
    assert record(3, ok, time.perf_counter() - t0, 10, f"direct {direct}, via B = k {via}, expected {expected}")


def test_criterion_4_first_order_equivalence(DD):
    t0 = time.perf_counter()
    sp = CochainSpace(DD, None, 2)
    kernel = kernel_basis(coboundary_matrix(DD, None, 2))
    kernel_ok = all(check_generalized_associativity(DeformationFamily(DD, [Cochain(sp, v)]), 2).passed for v in kernel)
    rng = random.Random(2024)
    failures_with_witness = 0
    for _ in range(20):
        c = random_cochain(sp, rng)
        while apply_coboundary(c).is_zero():
            c = random_cochain(sp, rng)
        rep = check_generalized_associativity(DeformationFamily(DD, [c]), 2)
        if not rep.passed and rep.witness is not None:
            failures_with_witness += 1
    ok = kernel_ok and len(kernel) > 0 and failures_with_witness == 20
    detail = f"{len(kernel)} kernel vectors pass: {kernel_ok}; random non-cocycles failing with witness: {failures_with_witness}/20"
    assert record(4, ok, time.perf_counter() - t0, 60, detail)


def test_criterion_5_extension_equation(DD):
    t0 = time.perf_counter()
    sp = CochainSpace(DD, None, 2)
    kernel = kernel_basis(coboundary_matrix(DD, None, 2))
    rng = random.Random(5)
    good = 0
    for _ in range(10):
        coeffs = [QQ(0)] * sp.dim
        for v in kernel:
            x = rng.randint(-3, 3)
            coeffs = [a + x * b for a, b in zip(coeffs, v)]
        c1 = Cochain(sp, coeffs)
        res = extend_one_order(DeformationFamily(DD, [c1]))
        if (
            res.extended
            and apply_coboundary(res.next_cochain) == circle_product(c1, c1)
            and check_generalized_associativity(res.family, 3).passed
        ):
            good += 1
    assert record(5, good == 10, time.perf_counter() - t0, 120, f"{good}/10 extensions satisfy delta_2(c2) = c1 o c1")


def test_criterion_6_gauge(DD):
    t0 = time.perf_counter()
    sp1, sp2 = CochainSpace(DD, None, 1), CochainSpace(DD, None, 2)
    rng = random.Random(6)
    good = 0
    for _ in range(20):
        c1, f1 = random_cochain(sp2, rng), random_cochain(sp1, rng)
        d1 = c1 - apply_coboundary(f1)
        g = gauge_equivalent_first_order(c1, d1)
        if g is not None and c1 - d1 == g.coboundary():
            good += 1
    assert record(6, good == 20, time.perf_counter() - t0, 30, f"{good}/20 pairs recovered with c1 - d1 = delta_1(f)")


def test_criterion_7_recover_epsilon(D, DD):
    t0 = time.perf_counter()
    k = ground_field()
    D3 = truncated_polynomial_algebra(3, name="D3")
    R = StructureAlgebra(
        3, {(0, 0, 0): 1, (0, 1, 1): 1, (0, 2, 2): 1, (1, 0, 1): 1, (2, 0, 2): 1}, [1, 0, 0], commutative=True, name="R"
    )
    Z = from_raw(O.cyclic_group_algebra(2), "kZ2")
    Z = StructureAlgebra(Z.dim, Z.table, Z.unit, commutative=True, name="kZ2")
    fixtures = [
        Triple.classical(D),
        DD,
        Triple(D, D, epsilon_map(D, D, [[1, 0], [0, 0]]), name="D,D,aug"),
        Triple(Z, Z, epsilon_map(Z, Z, [[1, 1], [0, 0]]), name="Z2"),
        Triple.classical(matrix_algebra(2)),
        Triple.classical(R),
        Triple(D3, D, epsilon_map(D, D3, [[1, 0], [0, 0], [0, 1]]), name="D3,D,x->x^2"),
        Triple.classical(k),
    ]
    bad = [T.name for T in fixtures if recover_epsilon(AbstractFamily.from_triple(T)).matrix != T.eps.matrix]
    detail = f"{len(fixtures) - len(bad)}/{len(fixtures)} triples round-trip exactly" + (f"; failed {bad}" if bad else "")
    assert record(7, not bad, time.perf_counter() - t0, 10, detail)


def test_criterion_8_kg2():
    t0 = time.perf_counter()
    reps = {"Z/2 q<=4": verify_kg2(cyclic_group(2), 4), "Z/3 q<=3": verify_kg2(cyclic_group(3), 3)}
    ok = all(r.passed and not r.sampled_levels for r in reps.values())
    detail = "; ".join(
        f"{k}: {sum(r.checked.values())} checks, {'exhaustive' if not r.sampled_levels else 'sampled'}"
        + ("" if r.passed else f", first failure {r.first_failure}")
        for k, r in reps.items()
    )
    assert record(8, ok, time.perf_counter() - t0, 60, detail)


def test_criterion_9_cyclic_module():
    t0 = time.perf_counter()
    k = ground_field()
    D = truncated_polynomial_algebra(2)
    r_k = verify_cyclic_module(k, None, 3)
    r_d = verify_cyclic_module(D, epsilon_map(D, k, [[1, 0]]), 3)
    ok = r_k.passed and r_d.passed
    detail = f"B = k: {'pass' if r_k.passed else r_k.first_failure}; B = k[x]/(x^2): " + (
        "pass"
        if r_d.passed
        else f"first failure {r_d.first_failure}, {sum(r_d.failures.values())} failing of {sum(r_d.checked.values())}"
    )
    assert record(9, ok, time.perf_counter() - t0, 300, detail)


def test_criterion_10_restriction(D, DD):
    t0 = time.perf_counter()
    bad = []
    for T in (DD, Triple.classical(D)):
        for n in range(4):
            lhs = restriction_cochain_map(T, None, n + 1) @ coboundary_matrix(T, None, n)
            rhs = hochschild_coboundary_matrix(D, None, n) @ restriction_cochain_map(T, None, n)
            if lhs != rhs:
                bad.append((T.name, n))
    detail = "r delta^eps_n = delta_n r for n <= 3" if not bad else f"mismatch at {bad}"
    assert record(10, not bad, time.perf_counter() - t0, 30, detail)
