import itertools

import pytest
from hypothesis import given, settings, strategies as st

from secohom import QQ
from secohom.algebra import epsilon_map, ground_field, truncated_polynomial_algebra
from secohom.linalg import SparseMatrix
from secohom.simplicial import (
    CyclicIndexSet,
    FiniteAbelianGroup,
    SecondaryCyclicModule,
    cyclic_group,
    degeneracy_last_matrix,
    face_last_matrix,
    face_matrix,
    kg2_cyclic,
    kg2_degeneracy,
    kg2_face,
    kg2_pairs,
    tau_matrix,
    verify_cyclic_module,
    verify_kg2,
)


@pytest.fixture(scope="module")
def dual_aug():
    D = truncated_polynomial_algebra(2)
    return D, epsilon_map(D, ground_field(), [[1, 0]])


# -- K(G, 2) ---------------------------------------------------------------------


def test_face_examples():
    Z2 = cyclic_group(2)
    assert kg2_face(Z2, 0, 3, (1, 0, 1)) == (1,)
    for i in range(3):
        assert kg2_face(Z2, i, 2, (1,)) == ()
    with pytest.raises(IndexError):
        kg2_face(Z2, 4, 3, (0, 0, 0))


def test_degeneracy_from_level_one_is_trivial():
    Z3 = cyclic_group(3)
    assert kg2_degeneracy(Z3, 0, 1, ()) == (0,)
    assert kg2_degeneracy(Z3, 1, 1, ()) == (0,)


@pytest.mark.parametrize("q", [1, 2, 3, 4])
def test_tau_fixes_identity(q):
    G = cyclic_group(3)
    e = (G.identity,) * len(kg2_pairs(q))
    assert kg2_cyclic(G, q, e) == e


def test_face_face_on_k4_by_enumeration():
    Z2 = cyclic_group(2)
    for x in itertools.product(range(2), repeat=6):
        for i, j in itertools.combinations(range(5), 2):
            assert kg2_face(Z2, i, 3, kg2_face(Z2, j, 4, x)) == kg2_face(Z2, j - 1, 3, kg2_face(Z2, i, 4, x))


def test_face_inverts_degeneracy_on_z4():
    Z4 = cyclic_group(4)
    for x in itertools.product(range(4), repeat=3):
        for i in range(4):
            assert kg2_face(Z4, i, 4, kg2_degeneracy(Z4, i, 3, x)) == x


def test_tau_order():
    for m, q in ((2, 3), (3, 3)):
        G = cyclic_group(m)
        for x in itertools.product(range(m), repeat=len(kg2_pairs(q))):
            y = x
            for _ in range(q + 1):
                y = kg2_cyclic(G, q, y)
            assert y == x


@pytest.mark.parametrize(
    "G,q",
    [(cyclic_group(2), 4), (cyclic_group(3), 3), (cyclic_group(4), 3), (cyclic_group(2) * cyclic_group(2), 3)],
    ids=["Z2", "Z3", "Z4", "V4"],
)
def test_kg2_identities(G, q):
    rep = verify_kg2(G, q)
    assert rep.passed, rep.first_failure
    assert not rep.sampled_levels
    assert set(rep.checked) >= {"face_face", "degen_degen", "face_degen", "face_tau", "degen_tau", "tau_power"}


def test_non_abelian_group_rejected():
    from secohom.algebra import GroupError, symmetric_group_table

    with pytest.raises(GroupError):
        FiniteAbelianGroup(symmetric_group_table(3)[0])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.data())
def test_kg2_face_degeneracy_random(m, data):
    G = cyclic_group(m)
    q = data.draw(st.integers(1, 5))
    x = tuple(data.draw(st.lists(st.integers(0, m - 1), min_size=len(kg2_pairs(q)), max_size=len(kg2_pairs(q)))))
    j = data.draw(st.integers(0, q))
    y = kg2_degeneracy(G, j, q, x)
    assert kg2_face(G, j, q + 1, y) == x
    assert kg2_face(G, j + 1, q + 1, y) == x


# -- the secondary cyclic module ---------------------------------------------------


@pytest.mark.parametrize("n", range(1, 6))
def test_index_set_size(n):
    I = CyclicIndexSet(n)
    assert len(I.positions) == n * n - 1
    for u, v in I.positions:
        assert u != v and u % (n + 1) != (v + 1) % (n + 1)


def test_tau_small_cases():
    k = ground_field()
    assert tau_matrix(k, 2) == SparseMatrix.identity(1)
    D = truncated_polynomial_algebra(2)
    T = tau_matrix(D, 3)
    assert T.shape == (2**8, 2**8)
    assert tau_matrix(D, 3, 4) == SparseMatrix.identity(2**8)


def test_tau_matches_index_bookkeeping():
    D = truncated_polynomial_algebra(2)
    n = 3
    pos = CyclicIndexSet(n).positions
    T = tau_matrix(D, n)
    for col in range(2 ** len(pos)):
        bits = [(col >> (len(pos) - 1 - p)) & 1 for p in range(len(pos))]
        moved = {((u + 1) % (n + 1), (v + 1) % (n + 1)): b for (u, v), b in zip(pos, bits)}
        row = sum(moved[p] << (len(pos) - 1 - k) for k, p in enumerate(pos))
        assert T[row, col] == 1
        assert sum(1 for (r, c), _ in T.items() if c == col) == 1


def test_face_last_level_two_is_eps_of_everything(dual_aug):
    # every factor of I_2 lands outside I_1 = {}, so d_2 = eps^(x 3)
    D, eps = dual_aug
    d = face_last_matrix(D, eps, 2)
    assert d.shape == (1, 8)
    assert d.to_dense() == [[1, 0, 0, 0, 0, 0, 0, 0]]


def test_face_last_of_all_ones(dual_aug):
    D, eps = dual_aug
    for n in (2, 3):
        d = face_last_matrix(D, eps, n)
        assert list(d.apply([1] + [0] * (d.ncols - 1)))[0] == 1


def test_degeneracy_last_shape():
    D = truncated_polynomial_algebra(2)
    s = degeneracy_last_matrix(D, 2)
    assert s.shape == (2**8, 2**3)
    for col in s.T.to_dense():
        assert sum(1 for x in col if x) == 1
    assert degeneracy_last_matrix(ground_field(), 2) == SparseMatrix.identity(1)


def test_last_face_after_last_degeneracy(dual_aug):
    D, eps = dual_aug
    for n in (1, 2):
        assert face_last_matrix(D, eps, n + 1) @ degeneracy_last_matrix(D, n) == SparseMatrix.identity(2 ** (n * n - 1))


def test_conjugation_at_top_index(dual_aug):
    D, eps = dual_aug
    assert face_matrix(3, D, eps, 3) == face_last_matrix(D, eps, 3)


def test_ground_field_module_passes():
    rep = verify_cyclic_module(ground_field(), None, 3)
    assert rep.passed


def test_corrupted_tau_is_caught(dual_aug):
    D, eps = dual_aug
    n = 2
    good = SecondaryCyclicModule(D, eps).tau(n)
    cols = good.columns()
    perm = [next(iter(c)) for c in cols]
    perm[1], perm[2] = perm[2], perm[1]
    bad = SecondaryCyclicModule(D, eps, tau_override={n: SparseMatrix.permutation(perm)})
    rep = verify_cyclic_module(D, eps, 2, module=bad)
    assert not rep.passed
    assert rep.failures.get("tau_power")
    assert rep.first_failure[1] == n


def test_dual_numbers_failures_are_confined_to_face_degeneracy(dual_aug):
    # documented deviation: the mixed identities compare eps(b) 1_B with b
    D, eps = dual_aug
    rep = verify_cyclic_module(D, eps, 3)
    assert set(rep.failures) == {"face_degen"}
    assert rep.first_failure == ("face_degen", 2, (0, 0))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_face_last_scalar_positions(dual_aug, n):
    D, eps = dual_aug
    K = SecondaryCyclicModule(D, eps)
    src, tgt = CyclicIndexSet(n), CyclicIndexSet(n - 1)
    scalar = {(n - 1, n), (n, n - 2), (0, n - 1)}
    d = K.face_last(n)
    cols = d.columns()
    L = len(src.positions)
    for p_idx, p in enumerate(src.positions):
        col = cols[1 << (L - 1 - p_idx)]  # x at p, 1 elsewhere
        if p in scalar:
            assert col == {}  # eps(x) = 0
        else:
            merged = tuple(n - 1 if r == n else r for r in p)
            q = tgt.index[merged]
            assert col == {1 << (len(tgt.positions) - 1 - q): 1}
