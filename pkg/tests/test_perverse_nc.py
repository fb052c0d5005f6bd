import pytest

from hodgedeg.filtrations import jordan_type
from hodgedeg.hodge_orbits import direct_sum, sl2_block, tensor, with_nilpotents
from hodgedeg.linalg import LinalgError, RatMatrix
from hodgedeg.perverse_nc import (
    MonViolation,
    NCObject,
    check_mon_condition,
    check_theorem_3cY,
    direct_sum_nc,
    filtered_local_system,
    from_local_system,
    members,
    monodromy_commutes,
    nearby_cycles,
    validate,
)


def mon_fixtures():
    b4 = sl2_block(4)
    a = with_nilpotents(sl2_block(2), [sl2_block(2).N(1)] * 2)
    b = with_nilpotents(sl2_block(2), [sl2_block(2).N(1), sl2_block(2).N(1).scale(3)])
    s3 = sl2_block(3)
    s1 = sl2_block(1, -1)
    return {
        "block3": s3,
        "block4_two_vars": with_nilpotents(b4, [b4.N(1), b4.N(1).scale(2)]),
        "tensor": tensor(a, b, [1, 2], [1, 2]),
        "sum": direct_sum(with_nilpotents(s3, [s3.N(1), s3.N(1)]),
                          with_nilpotents(s1, [s1.N(1), s1.N(1)])),
    }


def test_members_and_bits():
    assert members(0b101) == [1, 3]


def test_local_system_validates():
    n = RatMatrix([[0, 1], [0, 0]])
    x = from_local_system(2, [n, n.scale(2)])
    assert validate(x).ok
    back = NCObject.from_json(x.to_json())
    assert back.to_json() == x.to_json()


def test_validate_catches_broken_relation():
    n = RatMatrix([[0, 1], [0, 0]])
    x = from_local_system(2, [n])
    x.var[(1, 1)] = RatMatrix.identity(2).scale(2)
    rep = validate(x)
    assert not rep.ok and rep.witness is not None


def test_noncommuting_logs_rejected():
    a = RatMatrix([[0, 1], [0, 0]])
    with pytest.raises(LinalgError):
        from_local_system(2, [a, a.T()])


@pytest.mark.parametrize("m", [1, 2])
def test_nearby_dims_and_axioms(m):
    o = mon_fixtures()["tensor"]
    x = from_local_system(o.space_dim, o.nilpotents)
    psi, mono = nearby_cycles(x, m)
    for mask in psi.masks():
        low = [i for i in members(mask) if i <= m]
        high_mask = sum(1 << (i - 1) for i in members(mask) if i > m)
        assert psi.dims[mask] == len(low) * x.dims[high_mask]
    assert validate(psi).ok
    assert monodromy_commutes(psi, mono)


def test_one_variable_nearby_cycles_recover_h():
    o = sl2_block(3)
    x = from_local_system(3, o.nilpotents)
    psi, mono = nearby_cycles(x, 1)
    assert psi.dims == {0: 0, 1: 3}
    # the monodromy on the single component is N_1 itself; N~_1 = N_1 - N vanishes
    assert mono[1] == o.N(1)
    assert psi.N[(1, 1)].is_zero()


def test_direct_sum_nc():
    n = RatMatrix([[0, 1], [0, 0]])
    x = from_local_system(2, [n])
    y = from_local_system(1, [RatMatrix.zeros(1, 1)])
    assert validate(direct_sum_nc(x, y)).ok


def test_filtered_local_system_compatible():
    o = sl2_block(3)
    f = filtered_local_system(3, o.nilpotents, o.weight_filtration)
    assert f.check_compatible().ok


@pytest.mark.parametrize("name", list(mon_fixtures()))
def test_theorem_on_mon_fixtures(name):
    o = mon_fixtures()[name]
    assert check_mon_condition(list(o.nilpotents), o.weight, o.weight_filtration).ok
    for m in range(1, o.n + 1):
        rep = check_theorem_3cY(o, o.weight, o.weight_filtration, m)
        assert rep.ok, (name, m)
        assert rep.components


def test_mon_violation_is_refused_with_witness():
    t = tensor(sl2_block(2), sl2_block(2), [1], [2])
    with pytest.raises(MonViolation) as exc:
        check_theorem_3cY(t, t.weight, t.weight_filtration, 2)
    assert exc.value.report.witness == {1}


def test_bypassing_mon_shows_the_comparison_failing():
    t = tensor(sl2_block(2), sl2_block(2), [1], [2])
    rep = check_theorem_3cY(t, t.weight, t.weight_filtration, 2, require_mon=False)
    assert not rep.ok
