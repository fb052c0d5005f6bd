import random
from collections import Counter

import pytest

from helpers import random_conjugator
from hodgedeg import degeneration as dg
from hodgedeg.group_cohomology import AbelianGroup, GroupAction, koszul_resolution
from hodgedeg.lie_cohomology import LieModule, abelian_algebra
from hodgedeg.linalg import RatMatrix


@pytest.fixture(scope="module")
def hilbert():
    return dg.hilbert_example()


@pytest.fixture(scope="module")
def hilbert_table(hilbert):
    return dg.degenerate(hilbert)


def sym_datum(m):
    """w1 = Q acting on Sym^m by the raising operator, trivial H."""
    d = m + 1
    x = RatMatrix([[1 if j == i + 1 else 0 for j in range(d)] for i in range(d)])
    h = RatMatrix.diag([m - 2 * i for i in range(d)])
    w1 = abelian_algebra(1, grading=[2])
    v = LieModule(w1, [x], h)
    g = AbelianGroup(0)
    return dg.BoundaryDatum(w1, v, GroupAction(g, [], dim=d), koszul_resolution(0), 0)


def test_trivial_datum():
    t = dg.degenerate(dg.trivial_datum(3, c=2))
    assert t.entries == {(0, 0): Counter({0: 3})}
    assert t.total_dims() == {-2: 3}


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_sym_m_weights(m):
    t = dg.degenerate(sym_datum(m))
    assert t.entries[(0, 0)] == Counter({m: 1})
    assert t.entries[(0, 1)] == Counter({-m - 2: 1})


def test_hilbert_lie_stage(hilbert_table):
    dims = [sum(hilbert_table.lie_weights[q].values()) for q in range(3)]
    assert dims == [1, 2, 1]


def test_hilbert_table(hilbert_table):
    e = hilbert_table.entries
    assert e[(0, 0)] == e[(1, 0)] == Counter({2: 1})
    assert e[(0, 2)] == e[(1, 2)] == Counter({-6: 1})
    assert not any(e.get((p, 1)) for p in range(2))
    assert hilbert_table.total_dims() == {-1: 1, 0: 1, 1: 1, 2: 1}


def test_hilbert_checks(hilbert, hilbert_table):
    assert dg.check_splitting(hilbert_table, dg.lattice_total(hilbert)).ok
    assert dg.check_weight_commutation(hilbert).ok
    rep = dg.check_factor_containment(hilbert, hilbert_table)
    assert rep.ok and rep.detail["multiplicity_ok"]
    # H^1(w1, V) dies entirely: (gamma - 1) is invertible on its weight block
    assert rep.detail["killed_rows"] == [1]


def test_independent_total_mismatch_is_reported(hilbert_table):
    assert not dg.check_splitting(hilbert_table, [1, 1, 1, 2]).ok


def test_resolution_swap_and_basis_change(hilbert, hilbert_table):
    assert dg.degenerate(dg.koszul_swap(hilbert)).to_json() == hilbert_table.to_json()
    rng = random.Random(3)
    for _ in range(2):
        p = random_conjugator(rng, 4)
        assert dg.degenerate(dg.conjugate_datum(hilbert, p)).to_json() == hilbert_table.to_json()


def test_shift_reindexes_totals(hilbert_table):
    t2 = dg.degenerate(dg.hilbert_example(c=2))
    assert t2.entries == hilbert_table.entries
    assert {n + 1: v for n, v in t2.total_dims().items()} == hilbert_table.total_dims()


def test_two_weight_block_diagonal():
    w1 = abelian_algebra(0, grading=[])
    v = LieModule(w1, [], RatMatrix.diag([1, 1, 3]))
    g = AbelianGroup(1)
    gamma = RatMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 2]])
    d = dg.BoundaryDatum(w1, v, GroupAction(g, [gamma]), koszul_resolution(1), 0)
    t = dg.degenerate(d)
    assert t.entries == {(0, 0): Counter({1: 1}), (1, 0): Counter({1: 1})}
    assert dg.check_weight_commutation(d).ok
    rep = dg.check_factor_containment(d, t)
    assert rep.ok and (0, 0) in rep.detail["strict"]


def test_equivariance_violation_detected(hilbert):
    bad = RatMatrix([[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    with pytest.raises(dg.EquivarianceError):
        dg.BoundaryDatum(hilbert.w1, hilbert.V, GroupAction(AbelianGroup(1), [bad]),
                         hilbert.resolution, 1).algebra_action(bad)


def test_grading_must_commute_with_group(hilbert):
    swap = RatMatrix([[0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0]])
    with pytest.raises(dg.EquivarianceError):
        dg.BoundaryDatum(hilbert.w1, hilbert.V, GroupAction(AbelianGroup(1), [swap]),
                         hilbert.resolution, 1)


def test_datum_and_table_json(hilbert, hilbert_table):
    back = dg.BoundaryDatum.from_json(hilbert.to_json())
    assert dg.degenerate(back).to_json() == hilbert_table.to_json()
    t = dg.DegenerationTable.from_json(hilbert_table.to_json())
    assert t.to_json() == hilbert_table.to_json()
