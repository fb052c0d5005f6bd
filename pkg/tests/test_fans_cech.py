import random

import pytest

from hodgedeg.fans_cech import (
    PeriodicFan2D,
    PosetSheaf,
    cech_chain_complex,
    check_prop_5I,
    is_componentwise_iso,
    random_closed_cover,
    random_poset_sheaf,
    s_bullet,
    stalk_complex,
    star_cover,
    tot,
)
from hodgedeg.group_cohomology import (
    AbelianGroup,
    GroupAction,
    cohomology_of_group,
    koszul_resolution,
)
from hodgedeg.linalg import LinalgError, RatMatrix, cohomology_dims


def test_fan_rays_and_action():
    f = PeriodicFan2D(3, (1, 0), (1, 1))
    assert [f.ray(k) for k in range(-1, 4)] == [(2, -1), (1, 0), (1, 1), (2, 3), (5, 8)]
    assert f.action == ((1, 1), (1, 2))
    assert PeriodicFan2D(3, (1, 0), (1, 1), period=2).action == ((2, 3), (3, 5))
    assert f.verify(-8, 8)


def test_bad_fans_rejected():
    with pytest.raises(ValueError):
        PeriodicFan2D(2, (1, 0), (1, 1))
    with pytest.raises(LinalgError):
        PeriodicFan2D(3, (1, 0), (1, 2))


def test_fan_json_round_trip():
    f = PeriodicFan2D(4, (1, 0), (1, 1), 3)
    assert PeriodicFan2D.from_json(f.to_json()).to_json() == f.to_json()


def test_star_cover_is_a_path():
    f = PeriodicFan2D(3, (1, 0), (1, 1))
    cover = star_cover(f, range(0, 4), "rays")
    keys = sorted(cover)
    for a in keys:
        for b in keys:
            meet = set(cover[a]) & set(cover[b])
            assert bool(meet) == (abs(a - b) <= 2)


@pytest.mark.parametrize("members,ranks", [("rays", [1, 1]), ("all", [2, 3, 1])])
def test_fan_resolution(members, ranks):
    fr = cech_chain_complex(PeriodicFan2D(3, (1, 0), (1, 1)), members)
    assert fr.resolution.ranks == ranks
    cert = fr.certificate
    assert cert["free"] and cert["exact"] and cert["stable"]
    g = AbelianGroup(1)
    dims = cohomology_of_group(fr.resolution, GroupAction.trivial(g)).dims
    assert dims[:2] == [1, 1] and not any(dims[2:])


def test_fan_resolution_matches_koszul_on_modules():
    rng = random.Random(4)
    fan_res = cech_chain_complex(PeriodicFan2D(3, (1, 0), (1, 1))).resolution
    g = AbelianGroup(1)
    for _ in range(5):
        d = rng.randint(1, 3)
        while True:
            m = RatMatrix([[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)])
            if m.is_invertible():
                break
        a = GroupAction(g, [m])
        assert cohomology_of_group(fan_res, a).dims == \
            cohomology_of_group(koszul_resolution(1), a).dims


def chain_sheaf():
    # 0 < 1 < 2 with F = Q everywhere, identity restrictions
    one = RatMatrix.identity(1)
    return PosetSheaf(3, [(0, 1), (1, 2)], [1, 1, 1], {(0, 1): one, (1, 2): one})


def test_poset_sheaf_basics():
    sh = chain_sheaf()
    assert sh.leq(0, 2) and not sh.leq(2, 0)
    assert sh.global_sections().dim == 1
    assert sh.cohomology_dims()[0] == 1 and not any(sh.cohomology_dims()[1:])
    assert sh.is_closed({0, 1}) and not sh.is_closed({1})
    back = PosetSheaf.from_json(sh.to_json())
    assert back.to_json() == sh.to_json()


def test_inconsistent_restrictions_rejected():
    one, two = RatMatrix.identity(1), RatMatrix.identity(1).scale(2)
    with pytest.raises(LinalgError):
        PosetSheaf(4, [(0, 1), (0, 2), (1, 3), (2, 3)], [1] * 4,
                   {(0, 1): one, (0, 2): one, (1, 3): one, (2, 3): two})


def test_open_cover_member_rejected():
    with pytest.raises(LinalgError):
        s_bullet(chain_sheaf(), [[1, 2], [0, 1, 2]])


def test_two_point_circle_cohomology():
    # two minimal points below two maximal ones: a combinatorial circle
    one = RatMatrix.identity(1)
    edges = [(0, 2), (0, 3), (1, 2), (1, 3)]
    sh = PosetSheaf(4, edges, [1] * 4, {e: one for e in edges})
    assert sh.cohomology_dims()[:2] == [1, 1]
    rep = check_prop_5I(sh, [[0, 1, 2], [0, 1, 3]])
    assert rep.ok and rep.tot_cohomology[:2] == [1, 1]


def test_stalk_complexes_are_exact():
    sh = chain_sheaf()
    d = s_bullet(sh, [[0, 1], [0, 1, 2], [0]])
    for x in range(3):
        assert not any(cohomology_dims(stalk_complex(d, x)).values())
    t = tot(d)
    dims = cohomology_dims(t)
    assert dims[0] == 1 and not any(dims[i] for i in t.degrees() if i)


def test_duplicate_member_does_not_change_cohomology():
    rng = random.Random(8)
    sh = random_poset_sheaf(rng, 5)
    cover = random_closed_cover(rng, sh)
    a = check_prop_5I(sh, cover)
    b = check_prop_5I(sh, cover + [cover[0]])
    assert a.ok and b.ok
    assert a.tot_cohomology[:len(a.sheaf_cohomology)] == b.tot_cohomology[:len(a.sheaf_cohomology)]


def test_isomorphism_condition_and_componentwise_iso():
    sh = chain_sheaf()
    cover = [[0, 1], [0, 1, 2]]
    d = s_bullet(sh, cover)
    assert d.check_isomorphism_condition()
    assert s_bullet(sh, cover, degenerate_upto=3).check_isomorphism_condition()
    ident = {(t, x): RatMatrix.identity(d.components[t].dims[x])
             for t in d.components for x in range(sh.n)}
    assert is_componentwise_iso(d, d, ident)
    zero = dict(ident)
    zero[((0,), 0)] = RatMatrix.zeros(1, 1)
    assert not is_componentwise_iso(d, d, zero)


def test_random_sheaves_resolve():
    rng = random.Random(0)
    for _ in range(10):
        sh = random_poset_sheaf(rng, rng.randint(2, 6))
        cover = random_closed_cover(rng, sh)
        assert check_prop_5I(sh, cover).ok
