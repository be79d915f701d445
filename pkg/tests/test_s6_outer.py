import itertools

import pytest

from kleingeom.perm_group import conjugate, cycle_type, identity
from kleingeom.s6_outer import build_outer_automorphism, relabeling_conjugator, verify_outer


@pytest.fixture(scope="module")
def outer():
    rep = build_outer_automorphism()
    verify_outer(rep)
    return rep


def test_construction_counts(outer):
    assert outer.pgl.order == 120
    assert len(outer.table) // outer.pgl.order == 6
    assert len(outer.conjugates) == 6
    assert outer.conjugates[0] == outer.pgl
    assert len({C.elements for C in outer.conjugates}) == 6


def test_identity_maps_to_identity(outer):
    assert outer.table[identity(6)] == identity(6)


def test_all_flags(outer):
    assert outer.flags == {
        "is_homomorphism": True, "is_bijective": True, "trivial_kernel": True,
        "fixes_stabilizer_image": True, "outer_by_fixed_point": True,
        "outer_exhaustive": True, "is_outer": True, "moves_transposition_class": True,
    }


def test_pgl_is_transitive_on_points(outer):
    assert all(outer.pgl.orbit(x) == set(range(6)) for x in range(6))


def test_transpositions_go_to_triple_transpositions(outer):
    for a, b in itertools.combinations(range(6), 2):
        t = list(range(6))
        t[a], t[b] = b, a
        assert cycle_type(outer.table[tuple(t)]) == (2, 2, 2)


def test_inner_automorphisms_preserve_cycle_type(outer):
    for g in list(outer.table)[::37]:
        for t in list(outer.table)[::11]:
            assert cycle_type(conjugate(g, t)) == cycle_type(t)


def test_relabeling_changes_f_by_an_inner_automorphism(outer):
    other = build_outer_automorphism("revlex")
    assert [C.elements for C in other.conjugates] != [C.elements for C in outer.conjugates]
    g = relabeling_conjugator(outer, other)
    assert g is not None
    assert all(other.table[t] == conjugate(g, outer.table[t]) for t in outer.table)


def test_corrupted_table_fails_homomorphism(outer):
    rep = build_outer_automorphism()
    t = (1, 0, 2, 3, 4, 5)
    rep.table[t] = identity(6)
    flags = verify_outer(rep)
    assert not flags["is_homomorphism"] and not flags["is_bijective"]


def test_report_serializes_full_table(outer):
    doc = outer.to_dict()
    assert len(doc["table"]) == 720
    assert doc["orders"]["index"] == 6
    assert [c["label"] for c in doc["conjugates"]] == [f"H{i}" for i in range(1, 7)]
