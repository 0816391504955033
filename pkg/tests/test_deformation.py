import random

import pytest
from hypothesis import given, settings, strategies as st

from secohom import QQ
from secohom.algebra import StructureAlgebra, Triple, epsilon_map, identity_morphism, truncated_polynomial_algebra
from secohom.complex import Cochain, CochainSpace, apply_coboundary, circle_product, coboundary_matrix
from secohom.deformation import (
    AbstractFamily,
    DeformationError,
    DeformationFamily,
    GaugeTransform,
    RecoveryError,
    TruncatedElement,
    check_generalized_associativity,
    cocycle_condition_holds,
    extend_one_order,
    gauge_equivalent_first_order,
    is_two_cocycle,
    multiply,
    obstruction,
    recover_epsilon,
    trivial_lift,
    unit_epsilon,
)
from secohom.linalg import kernel_basis


_D = truncated_polynomial_algebra(2)
DD = Triple(_D, _D, identity_morphism(_D))


def radical_square_zero():
    """k[x, y]/(x, y)^2 with basis 1, x, y."""
    st_ = {(0, j, j): 1 for j in range(3)}
    st_.update({(j, 0, j): 1 for j in range(1, 3)})
    return StructureAlgebra(3, st_, [1, 0, 0], labels=["1", "x", "y"], commutative=True, name="R")


def combine(space, vectors, rng):
    v = [QQ(0)] * space.dim
    for k in vectors:
        x = rng.randint(-2, 2)
        v = [a + x * b for a, b in zip(v, k)]
    return Cochain(space, v)


@pytest.fixture(scope="module")
def kernel2(dual_over_dual):
    return kernel_basis(coboundary_matrix(dual_over_dual, None, 2))


def test_kernel_vectors_are_first_order_deformations(dual_over_dual, kernel2):
    sp = CochainSpace(dual_over_dual, None, 2)
    assert len(kernel2) == 4
    for v in kernel2:
        c = Cochain(sp, v)
        assert check_generalized_associativity(DeformationFamily(dual_over_dual, [c]), 2).passed
        assert is_two_cocycle(c)


def test_random_cochain_fails_with_witness(dual_over_dual):
    rng = random.Random(3)
    sp = CochainSpace(dual_over_dual, None, 2)
    c = Cochain(sp, [QQ(rng.randint(-2, 2)) for _ in range(sp.dim)])
    assert not apply_coboundary(c).is_zero()
    rep = check_generalized_associativity(DeformationFamily(dual_over_dual, [c]), 2)
    assert not rep.passed
    order, (a, b, cc), (al, be, ga) = rep.witness
    assert order == 1
    assert rep.lhs != rep.rhs
    holds, witness = cocycle_condition_holds(c)
    assert not holds and witness is not None


def test_witness_is_reproducible_from_multiply(dual_over_dual):
    sp = CochainSpace(dual_over_dual, None, 2)
    c = Cochain(sp, [QQ(1)] + [QQ(0)] * (sp.dim - 1))
    fam = DeformationFamily(dual_over_dual, [c])
    rep = check_generalized_associativity(fam, 2)
    order, abc, albega = rep.witness
    A, B = dual_over_dual.A, dual_over_dual.B
    el = [TruncatedElement.constant(A.basis_vector(i), 1, QQ(0)) for i in abc]
    al, be, ga = (B.basis_vector(i) for i in albega)
    lhs = multiply(fam, B.mul(al, be), el[0], multiply(fam, ga, el[1], el[2]))
    rhs = multiply(fam, B.mul(be, ga), multiply(fam, al, el[0], el[1]), el[2])
    assert lhs.coeffs[order] == rep.lhs and rhs.coeffs[order] == rep.rhs


def test_zeroth_order_is_the_triple_itself(dual_over_dual, z2_triple):
    for T in (dual_over_dual, z2_triple):
        assert check_generalized_associativity(DeformationFamily.zero(T, 2), 3).passed


def test_extension_solves_the_obstruction_equation(dual_over_dual, kernel2):
    rng = random.Random(11)
    sp = CochainSpace(dual_over_dual, None, 2)
    c1 = combine(sp, kernel2, rng)
    res = extend_one_order(DeformationFamily(dual_over_dual, [c1]))
    assert res.extended
    assert apply_coboundary(res.next_cochain) == circle_product(c1, c1)
    assert res.obstruction == circle_product(c1, c1)
    assert check_generalized_associativity(res.family, 3).passed
    assert extend_one_order(res.family).extended


def test_obstruction_checks_lower_orders(dual_over_dual):
    sp = CochainSpace(dual_over_dual, None, 2)
    c = Cochain(sp, [QQ(1)] + [QQ(0)] * (sp.dim - 1))
    with pytest.raises(DeformationError):
        obstruction(DeformationFamily(dual_over_dual, [c]))


def test_obstructed_extension():
    R = radical_square_zero()
    T = Triple.classical(R)
    table = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    table[1][1][1] = 1  # c(x, x) = x
    table[1][2][1] = 1  # c(x, y) = x
    fam = trivial_lift([table], T)
    assert is_two_cocycle(fam.cochains[0])
    res = extend_one_order(fam)
    assert res.obstructed
    assert not res.obstruction.is_zero()
    assert res.next_cochain is None


def test_trivial_lift_of_classical_cocycle(dual_over_k, dual):
    # c(x, x) = 1 spans HH^2 of the dual numbers
    table = [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]
    classical = trivial_lift([table], dual_over_k)
    assert is_two_cocycle(classical.cochains[0])
    assert check_generalized_associativity(classical, 2).passed
    # B = D with eps(x) = 0: eps(B) = k, so the lift stays a deformation
    aug = Triple(dual, dual, epsilon_map(dual, dual, [[1, 0], [0, 0]]))
    lifted = trivial_lift([classical.cochains[0]], aug)
    assert is_two_cocycle(lifted.cochains[0])
    assert check_generalized_associativity(lifted, 2).passed
    # with eps = id the lift needs c to be eps(B)-balanced, which c(x, x) = 1 is not
    assert not is_two_cocycle(trivial_lift([table], DD).cochains[0])


def test_trivial_lift_of_zero_is_zero(dual_over_dual):
    zero = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    fam = trivial_lift([zero, zero], dual_over_dual)
    assert fam.order == 2 and all(c.is_zero() for c in fam.cochains)


def test_gauge_from_random_pair(dual_over_dual):
    rng = random.Random(5)
    sp1, sp2 = CochainSpace(dual_over_dual, None, 1), CochainSpace(dual_over_dual, None, 2)
    f = Cochain(sp1, [QQ(rng.randint(-3, 3)) for _ in range(sp1.dim)])
    c1 = Cochain(sp2, [QQ(rng.randint(-2, 2)) for _ in range(sp2.dim)])
    d1 = c1 - apply_coboundary(f)
    g = gauge_equivalent_first_order(c1, d1)
    assert isinstance(g, GaugeTransform)
    assert c1 - d1 == g.coboundary()


def test_gauge_inequivalent_classes(dual_over_k):
    table = [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]
    c = trivial_lift([table], dual_over_k).cochains[0]
    assert gauge_equivalent_first_order(c, CochainSpace(dual_over_k, None, 2).zero()) is None


@pytest.mark.parametrize("name", ["dual_over_k", "dual_over_dual", "z2_triple"])
def test_recover_epsilon_round_trip(request, name):
    T = request.getfixturevalue(name)
    eps = recover_epsilon(AbstractFamily.from_triple(T))
    assert eps.matrix == T.eps.matrix
    assert eps.target.table == T.A.table


def test_recover_rejects_condition_violation(dual_over_dual):
    fam = AbstractFamily.from_triple(dual_over_dual)
    products = [list(map(list, p)) for p in fam.products]
    products[1][1][1] = (QQ(1), QQ(0))  # m_x(x, x) = 1 breaks generalized associativity
    with pytest.raises(RecoveryError) as exc:
        recover_epsilon(AbstractFamily(dual_over_dual.B, 2, products))
    assert exc.value.kind == "condition-5"


def test_recover_without_unit(dual_over_k):
    zero = [[[QQ(0)] * 2 for _ in range(2)] for _ in range(2)]
    with pytest.raises(RecoveryError) as exc:
        recover_epsilon(AbstractFamily(dual_over_k.B, 2, [zero]))
    assert exc.value.kind == "no-unit"


def test_unit_of_gauge_trivial_family(dual_over_dual):
    rng = random.Random(2)
    sp1 = CochainSpace(dual_over_dual, None, 1)
    f = Cochain(sp1, [QQ(rng.randint(-2, 2)) for _ in range(sp1.dim)])
    fam = DeformationFamily(dual_over_dual, [apply_coboundary(f)])
    res = unit_epsilon(fam)
    assert res.found
    A, B = dual_over_dual.A, dual_over_dual.B
    for i in range(A.dim):
        a = TruncatedElement.constant(A.basis_vector(i), 1, QQ(0))
        assert multiply(fam, B.unit, res.unit, a) == a
        assert multiply(fam, B.unit, a, res.unit) == a
    for al in range(B.dim):
        assert res.epsilon_bar[al] == multiply(fam, B.basis_vector(al), res.unit, res.unit)


def test_unit_of_undeformed_family(dual_over_dual):
    res = unit_epsilon(DeformationFamily.zero(dual_over_dual, 2))
    assert res.unit == TruncatedElement.constant(dual_over_dual.A.unit, 2, QQ(0))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_cocycle_tests_agree(seed):
    rng = random.Random(seed)
    sp = CochainSpace(DD, None, 2)
    c = Cochain(sp, [QQ(rng.choice([0, 0, 0, 1, -1])) for _ in range(sp.dim)])
    direct, _ = cocycle_condition_holds(c)
    assert direct == apply_coboundary(c).is_zero() == is_two_cocycle(c)
