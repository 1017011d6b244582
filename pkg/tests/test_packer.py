from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from sympack import packer
from sympack.lattice import HomologyClass
from sympack.packer import PackingProblem, check_feasible, packing_number, sup_radius_profile

TABLE = [F(1), F(1, 2), F(3, 4), F(1), F(4, 5), F(24, 25), F(63, 64), F(288, 289)]
LAMBDA_SQ = [F(1), F(1, 2), F(1, 2), F(1, 2), F(2, 5), F(2, 5), F(3, 8), F(6, 17)]


def test_table_values():
    rows = packer.packing_table()
    assert [r.p for r in rows] == TABLE
    assert [r.lambda_sq for r in rows] == LAMBDA_SQ
    assert rows[0].binding == "volume"
    # at k = 4 the class (1;1,1) and the volume bound coincide
    assert rows[3].tie and rows[3].binding.sorted() == HomologyClass(4, 1, (1, 1, 0, 0))


@pytest.mark.parametrize("k,b,m", [
    (5, 2, (1,) * 5),
    (7, 3, (2,) + (1,) * 6),
    (8, 6, (3,) + (2,) * 7),
])
def test_binding_classes(k, b, m):
    assert packer.packing_row(k).binding.sorted() == HomologyClass(k, b, m)


def test_feasibility_examples():
    res = check_feasible(PackingProblem.equal(5, F(2, 5)))
    assert not res.feasible
    assert res.binding.sorted() == HomologyClass(5, 2, (1,) * 5)
    assert res.slack == 0
    res = check_feasible(PackingProblem.equal(5, 0))
    assert res.feasible and res.ratio == 0
    res = check_feasible(PackingProblem.equal(5, F(39, 100)))
    assert res.feasible and res.ratio == F(7605, 10000)
    assert res.to_dict()["ratio"] == "1521/2000"


def test_volume_violation():
    res = check_feasible(PackingProblem.equal(1, 1))
    assert not res.feasible and res.binding == "volume"
    assert check_feasible(PackingProblem.equal(1, F(99, 100))).feasible


def test_chern_margin_reported():
    res = check_feasible(PackingProblem(8, (F(1, 3),) * 8))
    assert res.chern_margin == 3 - F(8, 3)


def test_problem_validation():
    with pytest.raises(ValueError):
        PackingProblem(2, (F(1, 2),))
    with pytest.raises(ValueError):
        PackingProblem(1, (F(-1),))
    with pytest.raises(ValueError):
        PackingProblem(9, (F(0),) * 9)
    assert PackingProblem.parse("2/5, 2/5,2/5").lambda_sq == (F(2, 5),) * 3


@pytest.mark.parametrize("k", range(1, 9))
def test_supremum_tightness(k):
    lam = LAMBDA_SQ[k - 1]
    for j in range(1, 21):
        assert check_feasible(PackingProblem.equal(k, lam * (1 - F(1, 2**j)))).feasible
    assert not check_feasible(PackingProblem.equal(k, lam)).feasible


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_grid_search_oracle(k):
    # largest feasible equal radius on a 1/1000 grid approaches p_k from below
    best = F(0)
    for i in range(1, 1001):
        lam = F(i, 1000)
        if check_feasible(PackingProblem.equal(k, lam)).feasible:
            best = max(best, k * lam * lam)
    p = packing_number(k)
    assert best < p
    assert p - best <= 2 * k * F(1, 1000)


def test_sup_radius_profile():
    s = sup_radius_profile(2, [1, 1])
    assert s.t == F(1, 2) and s.binding == HomologyClass(2, 1, (1, 1))
    s = sup_radius_profile(2, [2, 1])
    assert s.t == F(1, 3) and s.volume_bound_sq == F(1, 5)
    for k in range(1, 9):
        s = sup_radius_profile(k, [1] * k)
        assert k * s.t_squared == packing_number(k)
    # with two or more positive weights the line class always beats the volume bound
    s = sup_radius_profile(2, [1, F(1, 10)])
    assert s.binding == HomologyClass(2, 1, (1, 1)) and s.t == F(10, 11)
    s = sup_radius_profile(1, [2])
    assert s.binding == "volume" and s.t == F(1, 2)
    with pytest.raises(ValueError):
        sup_radius_profile(2, [1, 0])


def test_table_formats():
    rows = packer.packing_table()
    csv_text = packer.format_table(rows, "csv")
    assert csv_text.splitlines()[0] == "k,p_k,lambda_sq,binding"
    assert '"(2; 1, 1, 1, 1, 1)"' in csv_text
    md = packer.format_table(rows, "md")
    assert "| 8 | 288/289 |" in md
    import json
    data = json.loads(packer.format_table(rows, "json"))
    assert [d["p"] for d in data] == [str(x) for x in TABLE]
    with pytest.raises(ValueError):
        packer.format_table(rows, "xml")


radii = st.lists(st.fractions(min_value=0, max_value=1, max_denominator=50), min_size=1, max_size=8)


@settings(max_examples=150, deadline=None)
@given(radii, st.data())
def test_monotone_and_permutation_invariant(lam, data):
    k = len(lam)
    p = PackingProblem(k, tuple(lam))
    feas = check_feasible(p).feasible
    perm = data.draw(st.permutations(lam))
    assert check_feasible(PackingProblem(k, tuple(perm))).feasible == feas
    shrink = [x * data.draw(st.fractions(min_value=0, max_value=1, max_denominator=10)) for x in lam]
    if feas:
        assert check_feasible(PackingProblem(k, tuple(shrink))).feasible


@settings(max_examples=50, deadline=None)
@given(radii)
def test_real_structure_consistency(lam):
    assert packer.real_structure_consistent(len(lam), lam)
