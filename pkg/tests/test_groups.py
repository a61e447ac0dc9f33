import itertools

import pytest

from galois_invariants.groups import (
    GroupError,
    all_subgroups,
    build_group,
    conjugacy_class_of,
    cyclic_group,
    cyclic_subgroup_classes,
    dihedral_group,
    from_table,
    klein_four,
    parse_cycles,
    quaternion_group,
    subgroup_classes,
    symmetric_group,
)
from galois_invariants.randomgen import named_group


def brute_force_subgroups(G):
    # every subset containing 1 that is closed: feasible for |G| <= 8
    out = set()
    rest = list(range(1, G.order))
    for k in range(len(rest) + 1):
        for combo in itertools.combinations(rest, k):
            s = {0, *combo}
            if all(G.mul(a, b) in s for a in s for b in s):
                out.add(tuple(sorted(s)))
    return out


def test_trivial_group():
    G = build_group([])
    assert G.order == 1
    assert [h.elements for h in subgroup_classes(G)] == [(0,)]


def test_klein_four_from_disjoint_transpositions():
    G = build_group([(1, 0, 2, 3), (0, 1, 3, 2)])
    assert G.order == 4
    assert all(G.mul(a, a) == 0 for a in range(4))


def test_s3_from_three_cycle_and_transposition():
    G = build_group([(1, 2, 0), (1, 0, 2)])
    assert G.order == 6
    assert not G.is_abelian


def test_rejects_non_bijection():
    with pytest.raises(GroupError):
        build_group([(0, 0, 1)])
    with pytest.raises(GroupError):
        parse_cycles("(1 2)(2 3)")
    with pytest.raises(GroupError):
        parse_cycles("1 2")


def test_cycle_notation_is_one_indexed():
    assert parse_cycles("(1 2)(3 4)") == (1, 0, 3, 2)
    assert parse_cycles("(1 3 2)") == (2, 0, 1)


def test_bfs_ordering_is_deterministic():
    a = build_group(["(1 2 3)", "(1 2)"])
    b = build_group(["(1 2)", "(1 2 3)"])
    assert a.mult_table == b.mult_table


@pytest.mark.parametrize("name", ["C4", "V4", "S3", "D4", "Q8", "C2xC4", "C2^3", "C8"])
def test_subgroup_enumeration_matches_brute_force(name):
    G = named_group(name)
    assert {h.elements for h in all_subgroups(G)} == brute_force_subgroups(G)


def test_subgroup_counts():
    G = klein_four()
    assert len(all_subgroups(G)) == 5
    assert sorted(h.order for h in subgroup_classes(G)) == [1, 2, 2, 2, 4]
    assert len(all_subgroups(cyclic_group(5))) == 2
    assert [h.order for h in subgroup_classes(symmetric_group(3))] == [1, 2, 3, 6]
    assert len(all_subgroups(symmetric_group(4))) == 30
    assert len(subgroup_classes(symmetric_group(4))) == 11


def test_cyclic_subgroup_classes():
    assert [h.order for h in cyclic_subgroup_classes(klein_four())] == [1, 2, 2, 2]
    assert [h.order for h in cyclic_subgroup_classes(cyclic_group(4))] == [1, 2, 4]
    assert [h.order for h in cyclic_subgroup_classes(symmetric_group(3))] == [1, 2, 3]


def test_classification_is_most_specific():
    assert cyclic_group(6).whole.classification == "cyclic"
    assert symmetric_group(3).whole.classification == "metacyclic"
    assert quaternion_group().whole.classification == "metacyclic"
    assert dihedral_group(4).whole.classification == "metacyclic"
    assert klein_four().whole.classification == "metacyclic"
    assert named_group("C2^3").whole.classification == "other"
    assert named_group("A4").whole.classification == "other"


def test_class_representatives_are_lexicographically_smallest(s3):
    for h in subgroup_classes(s3):
        assert h.elements == min(c.elements for c in conjugacy_class_of(h))
    for G in (klein_four(), s3, dihedral_group(4)):
        assert G.trivial in subgroup_classes(G)
        assert G.whole in subgroup_classes(G)


def test_subgroup_validation(v4):
    with pytest.raises(GroupError):
        v4.subgroup([0, 1, 2])
    with pytest.raises(GroupError):
        v4.subgroup([1])
    assert v4.subgroup([0, 1]).order == 2


def test_from_table_round_trip():
    G = symmetric_group(3)
    H = from_table([list(r) for r in G.mult_table])
    assert H.order == 6 and len(subgroup_classes(H)) == 4
    bad = [list(r) for r in G.mult_table]
    bad[1][1], bad[1][2] = bad[1][2], bad[1][1]
    with pytest.raises(GroupError):
        from_table(bad)
