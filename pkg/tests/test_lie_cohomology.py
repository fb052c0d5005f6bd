from math import comb

import pytest

from hodgedeg.lie_cohomology import (
    LieModule,
    NilpotentLieAlgebra,
    a2_nilradical,
    abelian_algebra,
    chevalley_eilenberg,
    heisenberg_algebra,
    kostant_check,
    lattice_vs_lie_check,
    lie_cohomology,
)
from hodgedeg.linalg import LinalgError, RatMatrix


def standard(alg):
    """Q^2 with the first basis vector acting by e12 and the rest by zero."""
    e = RatMatrix([[0, 1], [0, 0]])
    z = RatMatrix.zeros(2, 2)
    return LieModule(alg, [e] + [z] * (alg.dim - 1))


def test_differential_squares_to_zero():
    g = heisenberg_algebra()
    c = chevalley_eilenberg(g, LieModule.trivial(g, 2))
    for q in range(c.hi - 1):
        assert (c.d(q + 1) @ c.d(q)).is_zero()


def test_heisenberg_trivial():
    g = heisenberg_algebra()
    assert lie_cohomology(g, LieModule.trivial(g)).dims == [1, 2, 2, 1]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_abelian_trivial_is_exterior_algebra(n):
    g = abelian_algebra(n)
    dims = lie_cohomology(g, LieModule.trivial(g)).dims
    assert dims == [comb(n, q) for q in range(n + 1)]


def test_jacobi_failure_detected():
    # [e0, e1] = e2, [e1, e2] = e0 is not nilpotent
    with pytest.raises(LinalgError):
        NilpotentLieAlgebra(3, {(0, 1): (0, 0, 1), (1, 2): (1, 0, 0)})


def test_module_homomorphism_check():
    g = heisenberg_algebra()
    e = RatMatrix([[0, 1], [0, 0]])
    with pytest.raises(LinalgError):
        LieModule(g, [e, e.T(), RatMatrix.zeros(2, 2)])


def test_euler_characteristic_vanishes():
    g = a2_nilradical()
    res = lie_cohomology(g, LieModule.trivial(g))
    assert res.euler_characteristic == 0


@pytest.mark.parametrize("m", range(7))
def test_kostant_a1(m):
    rep = kostant_check("A1", m)
    assert rep.ok and rep.dims == [1, 1]


@pytest.mark.parametrize("hw", [(0, 0), (1, 0), (0, 1), (1, 1)])
def test_kostant_a2(hw):
    rep = kostant_check("A2", hw)
    assert rep.ok, (rep.weights, rep.expected_weights)
    assert rep.dims == [1, 2, 2, 1]


def test_kostant_rejects_bad_input():
    with pytest.raises(ValueError):
        kostant_check("A1", -1)
    with pytest.raises(ValueError):
        kostant_check("B2", 1)


def test_weight_split_two_ways_agree():
    g = a2_nilradical()
    res = lie_cohomology(g, LieModule.trivial(g, 1, 0))
    assert res.split_ok
    assert res.weights[3] == {-22: 1}


def test_nomizu_abelian_and_heisenberg():
    a2 = abelian_algebra(2)
    e = RatMatrix([[0, 1], [0, 0]])
    i2 = RatMatrix.identity(2)
    boxed = LieModule(a2, [e.kron(i2), i2.kron(e)])
    assert lattice_vs_lie_check(a2, boxed).lie == [1, 2, 1]
    for g, m in ((abelian_algebra(1), LieModule.trivial(abelian_algebra(1))),
                 (a2, LieModule.trivial(a2)), (a2, boxed), (abelian_algebra(1),
                                                            standard(abelian_algebra(1)))):
        assert lattice_vs_lie_check(g, m).ok
    h = heisenberg_algebra()
    rep = lattice_vs_lie_check(h, LieModule.trivial(h))
    assert rep.ok and rep.lattice == [1, 2, 2, 1]


def test_json_round_trip():
    g = a2_nilradical()
    back = NilpotentLieAlgebra.from_json(g.to_json())
    assert back.to_json() == g.to_json()
    m = LieModule.trivial(g, 2, 3)
    assert LieModule.from_json(back, m.to_json()).to_json() == m.to_json()
