import json

import numpy as np
import pytest

from qdouble.catalog import (abelian_irreps, builtin_group, centralizer_irreps, group_to_dict,
                             load_group_file, numerical_irreps, resolve_group)
from qdouble.finite_group import GroupError, conjugacy_classes

NAMES = ["Z1", "Z2", "Z3", "Z4", "Z6", "Z12", "S3", "D4", "Q8"]


@pytest.mark.parametrize("name", NAMES)
def test_every_centralizer_has_complete_irreps(name):
    G = builtin_group(name)
    for c in conjugacy_classes(G):
        reps = centralizer_irreps(G, c.centralizer)
        assert sum(r.dim ** 2 for r in reps) == len(c.centralizer)
        for r in reps:
            assert max(r.defects(G).values()) < 1e-12
        # pairwise inequivalent: character orthogonality
        chars = np.array([[r.character(h) for h in c.centralizer] for r in reps])
        gram = chars @ chars.conj().T / len(c.centralizer)
        assert np.abs(gram - np.eye(len(reps))).max() < 1e-12


def test_group_orders():
    assert [builtin_group(n).order for n in ("S3", "D4", "Q8", "Z5")] == [6, 8, 8, 5]
    assert builtin_group("Q8").center == (0, 1)


def test_numerical_irreps_agree_with_tabulated_ones():
    G = builtin_group("Q8")
    full = tuple(range(8))
    tab = centralizer_irreps(G, full)
    num = numerical_irreps(G, full, seed=3)
    key = lambda r: tuple(np.round([r.character(h) for h in full], 8))
    assert sorted(map(key, tab)) == sorted(map(key, num))


def test_abelian_irreps_rejects_nonabelian():
    with pytest.raises(GroupError):
        abelian_irreps(builtin_group("S3"), range(6))


def test_unknown_builtin():
    with pytest.raises(GroupError):
        builtin_group("A5")


def test_file_round_trip(tmp_path):
    G = builtin_group("D4")
    path = tmp_path / "d4.json"
    path.write_text(json.dumps(group_to_dict(G)))
    H = resolve_group(f"file:{path}")
    assert np.array_equal(G.mult, H.mult)
    for c in conjugacy_classes(G):
        a = [r.matrices for r in centralizer_irreps(G, c.centralizer)]
        b = [r.matrices for r in centralizer_irreps(H, c.centralizer)]
        assert all(np.array_equal(x, y) for x, y in zip(a, b))
    assert resolve_group(str(path)).order == 8


def test_file_without_irreps_is_completed(tmp_path):
    path = tmp_path / "s3.json"
    path.write_text(json.dumps({"order": 6, "mult": builtin_group("S3").mult.tolist()}))
    G = load_group_file(path)
    assert sum(r.dim ** 2 for r in centralizer_irreps(G, range(6))) == 6


@pytest.mark.parametrize("payload, match", [
    ({"order": 2}, "order"),
    ({"order": 2, "mult": [[0, 1]]}, "shape"),
    ({"order": 3, "mult": [[0, 1, 2], [1, 0, 2], [2, 2, 0]]}, "permutation"),
    ({"order": 2, "mult": [[0, 1], [1, 0]],
      "irreps": [{"subgroup": [0, 1], "dim": 1, "matrices": {"0": [[1]], "1": [[2]]}}]}, "fails"),
])
def test_bad_files(tmp_path, payload, match):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(payload))
    with pytest.raises(GroupError, match=match):
        load_group_file(path)


def test_unreadable_file(tmp_path):
    with pytest.raises(GroupError):
        load_group_file(tmp_path / "missing.json")
    (tmp_path / "junk.json").write_text("{not json")
    with pytest.raises(GroupError):
        load_group_file(tmp_path / "junk.json")
