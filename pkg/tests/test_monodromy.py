import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from syz.monodromy import (
    EDGE_MONODROMY,
    NEGATIVE_TRIPLE,
    POSITIVE_TRIPLE,
    SEMISTABLE_2X2,
    MonodromyMatrix,
    VertexKind,
    classify_vertex,
    conjugate,
    fixed_space,
    k3_monodromy_list,
    load_matrices,
    mirror_dual,
    product,
    random_sl,
    semistable_k,
    validate_k3_list,
)


def numpy_fixed_dim(M):
    A = np.array(M.rows, dtype=float) - np.eye(M.size)
    return M.size - np.linalg.matrix_rank(A)


class TestMatrix:
    def test_rejects_non_unimodular(self):
        with pytest.raises(ValueError):
            MonodromyMatrix([[2, 0], [0, 1]])

    def test_rejects_size(self):
        with pytest.raises(ValueError):
            MonodromyMatrix([[1]])

    def test_json_roundtrip(self):
        assert MonodromyMatrix.from_json(EDGE_MONODROMY.to_json()) == EDGE_MONODROMY

    def test_inverse(self):
        M = random_sl(3, random.Random(4))
        assert (M @ M.inverse()).is_identity()


class TestFixedSpace:
    def test_edge(self):
        dim, basis = fixed_space(EDGE_MONODROMY)
        assert dim == 2
        assert basis == [[1, 0, 0], [0, 1, 0]]

    def test_identity(self):
        assert fixed_space(MonodromyMatrix.identity(3))[0] == 3

    def test_basis_is_fixed(self):
        rng = random.Random(2)
        for _ in range(30):
            M = random_sl(3, rng)
            dim, basis = fixed_space(M)
            assert dim == numpy_fixed_dim(M)
            for v in basis:
                assert list(np.array(M.rows) @ np.array(v)) == v


class TestSemistable:
    @pytest.mark.parametrize("rows,k", [
        ([[1, 1], [0, 1]], 1),
        ([[1, 2], [0, 1]], 2),
        ([[1, 0, 5], [0, 1, 0], [0, 0, 1]], 5),
        ([[1, 0], [0, 1]], 0),
    ])
    def test_k(self, rows, k):
        assert semistable_k(MonodromyMatrix(rows)) == k

    def test_not_semistable(self):
        assert semistable_k(MonodromyMatrix([[2, 1], [1, 1]])) is None
        assert semistable_k(MonodromyMatrix([[1, 1, 0], [0, 1, 1], [0, 0, 1]])) is None

    def test_conjugation_invariant(self):
        rng = random.Random(7)
        for size, M in ((2, SEMISTABLE_2X2), (3, EDGE_MONODROMY)):
            for _ in range(50):
                C = random_sl(size, rng)
                N = conjugate(C, M)
                assert semistable_k(N) == 1
                assert fixed_space(N)[0] == fixed_space(M)[0]


class TestClassify:
    def test_examples(self):
        assert classify_vertex(POSITIVE_TRIPLE) == VertexKind.POSITIVE
        assert classify_vertex(NEGATIVE_TRIPLE) == VertexKind.NEGATIVE

    def test_products(self):
        assert product(POSITIVE_TRIPLE).is_identity()
        assert product(NEGATIVE_TRIPLE).is_identity()

    @pytest.mark.parametrize("triple,kind", [(POSITIVE_TRIPLE, VertexKind.POSITIVE),
                                             (NEGATIVE_TRIPLE, VertexKind.NEGATIVE)])
    def test_rotation_invariant(self, triple, kind):
        for r in range(3):
            assert classify_vertex(triple[r:] + triple[:r]) == kind

    def test_conjugated(self):
        rng = random.Random(11)
        for _ in range(50):
            C = random_sl(3, rng)
            assert classify_vertex([conjugate(C, M) for M in POSITIVE_TRIPLE]) == VertexKind.POSITIVE
            assert classify_vertex([conjugate(C, M) for M in NEGATIVE_TRIPLE]) == VertexKind.NEGATIVE

    def test_invalid(self):
        I = MonodromyMatrix.identity(3)
        assert classify_vertex([I, I, I]) == VertexKind.INVALID
        assert classify_vertex(POSITIVE_TRIPLE[:2]) == VertexKind.INVALID
        bad = (POSITIVE_TRIPLE[0], POSITIVE_TRIPLE[0], POSITIVE_TRIPLE[2])
        assert classify_vertex(bad) == VertexKind.INVALID

    def test_mirror_swaps(self):
        assert classify_vertex([mirror_dual(M) for M in POSITIVE_TRIPLE]) == VertexKind.NEGATIVE
        assert classify_vertex([mirror_dual(M) for M in NEGATIVE_TRIPLE]) == VertexKind.POSITIVE


@given(st.integers(0, 10**6), st.sampled_from([2, 3]))
def test_mirror_involution(seed, size):
    M = random_sl(size, random.Random(seed))
    assert mirror_dual(mirror_dual(M)) == M
    D = np.array(mirror_dual(M).rows)
    assert np.array_equal(D.T @ np.array(M.rows), np.eye(size, dtype=int))


@given(st.integers(0, 10**6))
def test_mirror_keeps_k(seed):
    M = conjugate(random_sl(3, random.Random(seed)), EDGE_MONODROMY)
    assert semistable_k(mirror_dual(M)) == 1


class TestK3:
    def test_generated_list(self):
        mats = k3_monodromy_list()
        assert len(mats) == 24
        rep = validate_k3_list(mats)
        assert rep.passed and rep.count == 24 and not rep.warnings
        for M in mats:
            dim = numpy_fixed_dim(M)
            assert dim == 1

    def test_perturbation_breaks_product_only(self):
        mats = k3_monodromy_list()
        C = MonodromyMatrix([[2, 1], [1, 1]])
        mats[5] = conjugate(C, mats[5])
        rep = validate_k3_list(mats)
        assert rep.all_k_one and not rep.product_identity and not rep.passed

    def test_single_matrix(self):
        rep = validate_k3_list([SEMISTABLE_2X2])
        assert rep.all_k_one and not rep.product_identity and rep.warnings

    def test_empty(self):
        with pytest.raises(ValueError):
            validate_k3_list([])

    def test_wrong_size(self):
        with pytest.raises(ValueError):
            validate_k3_list([EDGE_MONODROMY])

    def test_non_unimodular(self):
        with pytest.raises(ValueError):
            validate_k3_list([[[1, 1], [0, 2]]])


def test_load_matrices():
    docs = [M.to_json() for M in POSITIVE_TRIPLE]
    assert load_matrices({"matrices": docs}) == list(POSITIVE_TRIPLE)
    assert load_matrices(docs) == list(POSITIVE_TRIPLE)
    assert load_matrices(docs[0]) == [POSITIVE_TRIPLE[0]]
    with pytest.raises(ValueError):
        load_matrices([{"size": 3}])
