import itertools

import pytest
from hypothesis import given, settings, strategies as st

from sympack import lattice
from sympack.lattice import HomologyClass, cremona_move, cremona_orbit, enumerate_exceptional_classes

COUNTS = [1, 3, 6, 10, 16, 27, 56, 240]


def naive_classes(k, max_b):
    """Plain itertools scan of the whole box |m_q| <= b + 1."""
    out = set()
    for b in range(0, max_b + 1):
        for m in itertools.product(range(-b - 1, b + 2), repeat=k):
            if b * b - sum(x * x for x in m) == -1 and 3 * b - sum(m) == 1:
                out.add(HomologyClass(k, b, m))
    return out


@pytest.mark.parametrize("k,max_b", [(1, 6), (2, 6), (3, 6), (4, 5), (5, 3)])
def test_matches_naive_scan(k, max_b):
    want = naive_classes(k, max_b)
    got = {c for c in enumerate_exceptional_classes(k) if c.b <= max_b}
    assert got == want


def test_counts():
    assert lattice.class_counts() == COUNTS


def test_small_examples():
    assert enumerate_exceptional_classes(1) == {HomologyClass(1, 0, (-1,))}
    assert enumerate_exceptional_classes(2) == {HomologyClass.E(0, 2), HomologyClass.E(1, 2), HomologyClass(2, 1, (1, 1))}
    top = max(enumerate_exceptional_classes(8), key=lambda c: c.b)
    assert top.b == 6 and top.sorted() == HomologyClass(8, 6, (3,) + (2,) * 7)


@pytest.mark.parametrize("k", range(1, 9))
def test_classes_are_exceptional_and_permutation_closed(k):
    classes = enumerate_exceptional_classes(k)
    for c in classes:
        assert c.self_intersection() == -1
        assert c.chern() == 1
        assert c.permutations() <= classes


@pytest.mark.parametrize("k", range(1, 9))
def test_saturation_scan_is_empty(k):
    assert not lattice.saturation_scan(k, 7, 10)


def test_enumeration_rejects_bad_k():
    for k in (0, 9):
        with pytest.raises(ValueError):
            enumerate_exceptional_classes(k)


def test_cremona_move_example():
    assert cremona_move(HomologyClass(3, 1, (1, 1, 0)), (0, 1, 2)) == HomologyClass(3, 0, (0, 0, -1))


def test_cremona_move_is_involution():
    c = HomologyClass(5, 2, (1, 1, 1, 1, 1))
    for t in itertools.combinations(range(5), 3):
        assert cremona_move(cremona_move(c, t), t) == c


@pytest.mark.parametrize("k", range(3, 9))
def test_orbit_equals_enumeration(k):
    assert lattice.exceptional_orbit(k) == enumerate_exceptional_classes(k)


def test_orbit_k3_and_k6():
    orb = lattice.exceptional_orbit(3)
    assert len(orb) == 6
    assert {c for c in orb if c.b == 1} == HomologyClass(3, 1, (1, 1, 0)).permutations()
    assert len(lattice.exceptional_orbit(6)) == 27


def test_orbit_below_three_points_returns_seeds():
    seeds = [HomologyClass.E(0, 2), HomologyClass.E(1, 2)]
    assert cremona_orbit(seeds, 2) == set(seeds)


classes8 = st.builds(lambda b, m: HomologyClass(8, b, tuple(m)),
                     st.integers(-6, 6), st.lists(st.integers(-4, 4), min_size=8, max_size=8))
triples8 = st.sampled_from(list(itertools.combinations(range(8), 3)))


@settings(max_examples=200, deadline=None)
@given(classes8, classes8, triples8)
def test_moves_preserve_pairing_and_chern(x, y, t):
    assert cremona_move(x, t).pairing(cremona_move(y, t)) == x.pairing(y)
    assert cremona_move(x, t).chern() == x.chern()


@settings(max_examples=100, deadline=None)
@given(classes8, classes8)
def test_real_structure_action(x, y):
    fx = lattice.real_structure_action(x)
    assert fx == -x
    assert fx.pairing(lattice.real_structure_action(y)) == x.pairing(y)


def test_real_structure_examples():
    assert lattice.real_structure_action(HomologyClass.E(0, 1)) == HomologyClass(1, 0, (1,))
    assert lattice.real_structure_action(HomologyClass(2, 1, (1, 1))) == HomologyClass(2, -1, (-1, -1))


def test_sorted_representatives_k8():
    reps = lattice.sorted_representatives(enumerate_exceptional_classes(8))
    assert [c.b for c in reps] == [0, 1, 2, 3, 4, 5, 6]
    assert sum(c.orbit_size() for c in reps) == 240


def test_json_round_trip():
    c = HomologyClass(5, 2, (1, 1, 1, 1, 1))
    assert c.to_dict() == {"k": 5, "b": 2, "m": [1, 1, 1, 1, 1]}
    assert HomologyClass.from_dict(c.to_dict()) == c
