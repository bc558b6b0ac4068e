import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qdouble.catalog import builtin_group, centralizer_irreps
from qdouble.finite_group import (FiniteGroup, GroupError, centralizer_strata, character_table,
                                  check_double_cosets, class_of, conjugacy_classes,
                                  double_cosets, regular_part)

NAMES = ["Z2", "Z3", "Z4", "Z6", "S3", "D4", "Q8"]


def brute_classes(G):
    """Orbits of conjugation by explicit set closure."""
    n = G.order
    seen, out = set(), []
    for g in range(n):
        if g in seen:
            continue
        orb = {G.mul(G.mul(x, g), G.inv(x)) for x in range(n)}
        seen |= orb
        out.append(sorted(orb))
    return out


@pytest.mark.parametrize("name", NAMES)
def test_tables_and_inverses(name):
    G = builtin_group(name)
    n = G.order
    for a in range(n):
        assert G.mul(a, G.inv(a)) == 0
        for z in range(n):
            assert G.conj_table[z, a] == G.mul(G.mul(G.inv(z), a), z)
            assert G.ldiv_table[z, a] == G.mul(G.inv(z), a)


@pytest.mark.parametrize("name", NAMES)
def test_classes_match_brute_force(name):
    G = builtin_group(name)
    classes = conjugacy_classes(G)
    assert [list(c.members) for c in classes] == brute_classes(G)
    co = class_of(G)
    for c in classes:
        assert c.representative == min(c.members)
        assert all(co[x] == c.index for x in c.members)
        # orbit-stabilizer
        assert c.size * len(c.centralizer) == G.order


def test_class_sizes():
    sizes = {n: sorted(c.size for c in conjugacy_classes(builtin_group(n))) for n in NAMES}
    assert sizes["S3"] == [1, 2, 3]
    assert sizes["D4"] == [1, 1, 2, 2, 2]
    assert sizes["Q8"] == [1, 1, 2, 2, 2]
    assert sizes["Z6"] == [1] * 6


def test_strata_group_classes_by_centralizer():
    G = builtin_group("D4")
    strata = centralizer_strata(G)
    classes = conjugacy_classes(G)
    assert sorted(sum(strata, [])) == list(range(len(classes)))
    for s in strata:
        assert len({classes[i].centralizer for i in s}) == 1


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("tiebreak", ["min", "max"])
def test_double_cosets_all_class_pairs(name, tiebreak):
    G = builtin_group(name)
    classes = conjugacy_classes(G)
    for A, B in itertools.product(classes, classes):
        dc = double_cosets(G, A, B, tiebreak)
        check_double_cosets(G, A, B, dc)
        assert abs(dc.measure.sum() - 1) < 1e-15


def test_double_coset_count_by_burnside():
    # |N_A \ G / N_B| = average number of fixed points of (a, b): x -> a x b^-1
    G = builtin_group("S3")
    classes = conjugacy_classes(G)
    for A, B in itertools.product(classes, classes):
        fixed = sum(G.mul(G.mul(a, x), G.inv(b)) == x
                    for a in A.centralizer for b in B.centralizer for x in range(G.order))
        assert len(double_cosets(G, A, B)) * len(A.centralizer) * len(B.centralizer) == fixed


def test_regular_part_is_union_of_double_cosets():
    G = builtin_group("S3")
    classes = conjugacy_classes(G)
    for A, B in itertools.product(classes, classes):
        reg = set(regular_part(G, A, B))
        dc = double_cosets(G, A, B)
        for mem in dc.members:
            assert set(mem) <= reg or not (set(mem) & reg)


@pytest.mark.parametrize("name", NAMES)
def test_character_table_against_explicit_irreps(name):
    G = builtin_group(name)
    classes = conjugacy_classes(G)
    T = character_table(G)
    reps = centralizer_irreps(G, range(G.order))
    explicit = np.array([[r.character(c.representative) for c in classes] for r in reps])
    key = lambda row: tuple(np.round(np.concatenate([row.real, row.imag]), 8))
    assert sorted(map(key, T)) == sorted(map(key, explicit))
    sizes = np.array([c.size for c in classes])
    gram = (T * sizes) @ T.conj().T / G.order
    assert np.abs(gram - np.eye(len(classes))).max() < 1e-10


def test_rejects_non_associative_table_naming_triple():
    tab = [[0, 1, 2], [1, 2, 0], [2, 1, 0]]
    with pytest.raises(GroupError):
        FiniteGroup(tab)
    # Latin square with identity but not associative (order 5 loop)
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError, match=r"\(\d\*\d\)\*\d"):
        FiniteGroup(loop)


def test_rejects_bad_identity_and_shape():
    with pytest.raises(GroupError):
        FiniteGroup([[1, 0], [0, 1]])
    with pytest.raises(GroupError):
        FiniteGroup([[0, 1, 2]])


@given(st.sampled_from(NAMES), st.data())
def test_centralizer_is_subgroup(name, data):
    G = builtin_group(name)
    g = data.draw(st.integers(0, G.order - 1))
    C = G.centralizer(g)
    assert G.is_subgroup(C)
    assert all(G.mul(x, g) == G.mul(g, x) for x in C)
