from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hodgedeg.linalg import (
    ChainComplex,
    LinalgError,
    RatMatrix,
    Subspace,
    cohomology,
    cohomology_dims,
    exp_nilpotent,
    image,
    intersect,
    kernel,
    log_unipotent,
    quotient,
    solve,
    sum_spaces,
    total_complex,
)

small = st.integers(-3, 3)


def matrices(max_r=5, max_c=5):
    return st.integers(1, max_r).flatmap(
        lambda r: st.integers(1, max_c).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    ).map(RatMatrix)


@given(matrices())
def test_rank_nullity(m):
    assert kernel(m).dim + image(m).dim == m.cols
    for v in kernel(m).basis:
        assert not any(m.apply(v))


@given(matrices(), st.data())
def test_solve_finds_preimages(m, data):
    x = data.draw(st.lists(small, min_size=m.cols, max_size=m.cols))
    b = m.apply(x)
    y = solve(m, b)
    assert y is not None and m.apply(y) == b


@given(matrices(4, 5), matrices(4, 5))
def test_intersection_and_sum_dimensions(a, b):
    n = 5
    if a.cols != n or b.cols != n:
        return
    u, v = Subspace(n, a.tolist()), Subspace(n, b.tolist())
    assert sum_spaces(u, v).dim + intersect(u, v).dim == u.dim + v.dim
    assert intersect(u, v) <= u and intersect(u, v) <= v


def test_quotient_kills_exactly_the_subspace():
    amb = Subspace(4, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1]])
    sub = Subspace(4, [[1, 1, 0, 0]])
    proj, q = quotient(amb, sub)
    assert q == 2
    assert not any(proj.apply(sub.basis[0]))
    assert RatMatrix.from_columns([proj.apply(v) for v in amb.basis], q).rank() == 2
    with pytest.raises(LinalgError):
        quotient(sub, amb)


def test_inverse_and_identity():
    m = RatMatrix([[2, 1], [7, 4]])
    assert m @ m.inverse() == RatMatrix.identity(2)
    assert m.inverse()[0, 0] == Fraction(4)
    with pytest.raises(LinalgError):
        RatMatrix([[1, 2], [2, 4]]).inverse()


def test_exp_log_round_trip():
    n = RatMatrix([[0, 1, 3], [0, 0, 2], [0, 0, 0]])
    assert log_unipotent(exp_nilpotent(n)) == n


def test_json_round_trip():
    m = RatMatrix([[Fraction(1, 2), 0], [-3, Fraction(7, 5)]])
    assert RatMatrix.from_json(m.to_json()) == m
    s = Subspace(3, [[1, 2, 3]])
    assert Subspace.from_json(s.to_json()) == s


def test_cohomology_of_small_complex():
    # Q -> Q^2 -> Q, d0 = (1, 1), d1 = (1, -1): exact in the middle
    c = ChainComplex(0, [1, 2, 1], [RatMatrix([[1], [1]]), RatMatrix([[1, -1]])])
    assert cohomology_dims(c) == {0: 0, 1: 0, 2: 0}
    with pytest.raises(LinalgError):
        ChainComplex(0, [1, 2, 1], [RatMatrix([[1], [1]]), RatMatrix([[1, 1]])])


def test_cohomology_representatives_classify():
    c = ChainComplex(0, [1, 2], [RatMatrix([[1], [0]])])
    h = cohomology(c)
    assert h[1].dim == 1
    assert h[1].classify((0, 5)) == (5,)


def test_total_complex_squares_to_zero():
    # tensor product of two copies of Q -> Q (identity): acyclic
    one = RatMatrix([[1]])
    blocks = {(p, q): 1 for p in range(2) for q in range(2)}
    dh = {(0, 0): one, (0, 1): one}
    dv = {(0, 0): one, (1, 0): one}
    t = total_complex(blocks, dh, dv)
    assert t.dims == [1, 2, 1]
    assert not any(cohomology_dims(t).values())
