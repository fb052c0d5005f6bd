import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import partitions, random_conjugator
from hodgedeg.filtrations import (
    Filtration,
    NilpotentOp,
    NonExistent,
    induced_on_graded,
    jordan_matrix,
    jordan_type,
    relative_weight_filtration,
    search_weight_filtrations,
    shift,
    tensor_filtration,
    verify_relative_axioms,
    verify_weight_axioms,
    weight_filtration,
)
from hodgedeg.linalg import LinalgError, RatMatrix, Subspace


def test_jordan_3_2_graded_dims():
    m = weight_filtration(jordan_matrix([3, 2]))
    assert m.gr_dims() == {-2: 1, -1: 1, 0: 1, 1: 1, 2: 1}


def test_zero_operator_is_pure():
    m = weight_filtration(RatMatrix.zeros(3, 3), center=4)
    assert m == Filtration.trivial(3, 4)


@pytest.mark.parametrize("parts", list(partitions(6)))
def test_axioms_for_every_jordan_type_of_dim_6(parts):
    n = jordan_matrix(parts)
    assert verify_weight_axioms(n, weight_filtration(n, 1), 1).ok


@given(st.lists(st.integers(1, 4), min_size=1, max_size=3), st.integers(0, 10 ** 6))
def test_conjugation_equivariance(parts, seed):
    rng = random.Random(seed)
    n = jordan_matrix(parts)
    p = random_conjugator(rng, n.rows)
    conj = p @ n @ p.inverse()
    assert weight_filtration(conj) == weight_filtration(n).transform(p)
    assert jordan_type(conj) == sorted(parts, reverse=True)


@given(st.lists(st.integers(1, 4), min_size=1, max_size=3))
def test_gr_symmetry(parts):
    gr = weight_filtration(jordan_matrix(parts)).gr_dims()
    assert all(gr.get(-k, 0) == v for k, v in gr.items())


def test_search_confirms_uniqueness():
    for parts in ([3, 2], [2, 2, 1], [4, 1]):
        count, first = search_weight_filtrations(parts, 0, radius=4, backend="numpy")
        assert count == 1
        assert first == weight_filtration(jordan_matrix(parts))


def test_wrong_filtration_fails_axioms():
    n = jordan_matrix([2])
    bad = Filtration.trivial(2, 0)
    rep = verify_weight_axioms(n, bad, 0)
    assert not rep.ok and rep.witness is not None


def test_not_nilpotent_rejected():
    with pytest.raises(LinalgError):
        NilpotentOp(RatMatrix([[1, 0], [0, 0]]))
    with pytest.raises(LinalgError):
        weight_filtration(RatMatrix([[1, 1], [0, 1]]))


def test_relative_nonexistent_example():
    w = Filtration(2, {-1: Subspace.zero(2), 0: Subspace(2, [[1, 0]]), 1: Subspace.full(2)})
    res = relative_weight_filtration(RatMatrix([[0, 1], [0, 0]]), w)
    assert isinstance(res, NonExistent) and not res
    assert res.witness is not None


def test_relative_for_zero_operator_is_w():
    w = Filtration(3, {0: Subspace.zero(3), 1: Subspace(3, [[1, 0, 0]]),
                       3: Subspace.full(3)})
    assert relative_weight_filtration(RatMatrix.zeros(3, 3), w) == w


def test_relative_on_pure_w_is_shifted_weight_filtration():
    n = jordan_matrix([3, 1])
    w = Filtration.trivial(4, 2)
    m = relative_weight_filtration(n, w)
    assert m == weight_filtration(n, 2)
    assert verify_relative_axioms(n, w, m).ok


def test_relative_rejects_unstable_or_unseparated():
    n = RatMatrix([[0, 0], [1, 0]])
    w = Filtration(2, {-1: Subspace.zero(2), 0: Subspace(2, [[1, 0]]), 1: Subspace.full(2)})
    with pytest.raises(LinalgError):
        relative_weight_filtration(n, w)
    with pytest.raises(LinalgError):
        relative_weight_filtration(RatMatrix.zeros(2, 2), Filtration(2, {0: Subspace(2, [[1, 0]]),
                                                                         1: Subspace.full(2)}))


def test_induced_on_graded_piece():
    n = jordan_matrix([2, 2])
    w = Filtration.from_weights([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
                                [0, 0, 1, 1])
    mat, _, lifts = induced_on_graded(n, w, 0)
    assert mat.shape == (2, 2) and len(lifts) == 2


def test_tensor_of_weight_filtrations():
    a, b = jordan_matrix([2]), jordan_matrix([3])
    ia, ib = RatMatrix.identity(2), RatMatrix.identity(3)
    total = a.kron(ib) + ia.kron(b)
    assert tensor_filtration(weight_filtration(a), weight_filtration(b)) == weight_filtration(total)


def test_shift_and_json_round_trip():
    f = weight_filtration(jordan_matrix([3]))
    assert shift(f, 2).gr_dims() == {-4: 1, -2: 1, 0: 1}
    assert Filtration.from_json(f.to_json()) == f
    assert hash(Filtration.from_json(f.to_json())) == hash(f)


def test_decreasing_steps_rejected():
    with pytest.raises(LinalgError):
        Filtration(2, {0: Subspace.full(2), 1: Subspace(2, [[1, 0]])})
