import itertools
import random

import pytest

from hodgedeg.filtrations import Filtration
from hodgedeg.hodge_orbits import (
    OrbitDatum,
    OrbitError,
    check_cattani_kaplan,
    check_orbit,
    direct_sum,
    kashiwara_tilde,
    random_orbit,
    sl2_block,
    tensor,
    truncated_module,
    twist,
    with_nilpotents,
)
from hodgedeg.linalg import RatMatrix


def disjoint_pairs(n):
    idx = range(1, n + 1)
    for r1 in range(1, n + 1):
        for i1 in itertools.combinations(idx, r1):
            rest = [i for i in idx if i not in i1]
            for r2 in range(1, len(rest) + 1):
                for i2 in itertools.combinations(rest, r2):
                    yield i1, i2


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_sl2_block_is_an_orbit(m):
    o = sl2_block(m)
    assert check_orbit(o).ok
    assert o.weight == m - 1
    assert o.weight_filtration.gr_dims() == {2 * j: 1 for j in range(m)}


def test_sl2_block_gr_dims():
    o = sl2_block(3)
    assert o.weight_filtration.gr_dims() == {0: 1, 2: 1, 4: 1}


def test_twist_shifts_weight():
    o = twist(sl2_block(2), 1)
    assert o.weight == -1 and check_orbit(o).ok
    assert o.weight_filtration.gr_dims() == {-2: 1, 0: 1}


def test_split_tensor_gr_dims():
    t = tensor(sl2_block(2), sl2_block(2), [1], [2])
    assert t.n == 2 and t.space_dim == 4
    assert sorted(t.weight_filtration.gr_dims().values()) == [1, 1, 2]
    assert check_orbit(t).ok


def test_direct_sum_requires_same_weight():
    assert check_orbit(direct_sum(sl2_block(3), sl2_block(1, -1))).ok
    with pytest.raises(ValueError):
        direct_sum(sl2_block(3), sl2_block(2))


def test_broken_orbit_is_caught():
    o = sl2_block(3)
    non_nil = OrbitDatum(o.space_dim, o.hodge, o.weight_filtration,
                         (RatMatrix.identity(3),), o.pairing, o.weight)
    rep = check_orbit(non_nil)
    assert not rep.ok and rep.checks.get("nilpotent") is False
    with pytest.raises(OrbitError):
        OrbitDatum.from_json(dict(o.to_json(), S=RatMatrix.zeros(3, 3).to_json()))


def test_json_round_trip():
    o = tensor(sl2_block(2), sl2_block(3), [1], [2])
    back = OrbitDatum.from_json(o.to_json())
    assert back.to_json() == o.to_json()


def test_cattani_kaplan_on_random_orbits():
    rng = random.Random(11)
    for _ in range(10):
        o = random_orbit(rng, max_dim=8, max_n=3)
        for i1, i2 in disjoint_pairs(o.n):
            assert check_cattani_kaplan(o, i1, i2).ok


def test_cattani_kaplan_rejects_overlap():
    o = tensor(sl2_block(2), sl2_block(2), [1], [2])
    with pytest.raises(ValueError):
        check_cattani_kaplan(o, [1], [1, 2])


def test_truncated_module_single_variable():
    # H[X]/(A - X) is H with X acting as A
    a = RatMatrix([[0, 1], [0, 0]])
    assert truncated_module([a], 2) == a


def test_truncated_module_satisfies_its_polynomial():
    a = RatMatrix([[0, 1], [0, 0]])
    b = a.scale(2)
    x = truncated_module([a, b], 2)
    lift = lambda m: RatMatrix.block_diag([m, m])  # noqa: E731
    assert (lift(a) - x) @ (lift(b) - x) == RatMatrix.zeros(4, 4)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_kashiwara_on_blocks(m):
    assert kashiwara_tilde(sl2_block(m), [1]).ok


def test_kashiwara_two_variables():
    a = with_nilpotents(sl2_block(2), [sl2_block(2).N(1)] * 2)
    t = tensor(sl2_block(2), sl2_block(2), [1], [2])
    for o in (a, t):
        for idx in ([1], [2], [1, 2]):
            rep = kashiwara_tilde(o, idx)
            assert rep.ok, (idx, rep.witness)
    full = kashiwara_tilde(t, [1, 2])
    assert full.space_dim == 8 and full.weight == 1


def test_kashiwara_unrestricted_reading_fails_for_partial_index_set():
    t = tensor(sl2_block(2), sl2_block(2), [1], [2])
    assert not kashiwara_tilde(t, [1], restrict=False).ok


def test_kashiwara_face_filtration_differs_on_unequal_split_tensor():
    # N alone has Jordan type (4,1,1) on the cokernel, N + N_1 + N_2 has (4,2)
    t = tensor(sl2_block(1), sl2_block(3), [1], [2])
    rep = kashiwara_tilde(t, [1, 2])
    assert not rep.prop_b
    assert rep.witness[0] == "prop_b"
