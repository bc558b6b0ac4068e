"""Builtin groups, centralizer irreps and the JSON group-file format."""

from __future__ import annotations

import itertools
import json
import re
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .finite_group import (FiniteGroup, GroupError, SubgroupIrrep, conjugacy_classes)

BUILTIN_NAMES = ("Z1..Z12", "S3", "D4", "Q8")


def cyclic(n: int) -> FiniteGroup:
    if not 1 <= n <= 12:
        raise GroupError("Z_n is only provided for 1 <= n <= 12")
    ids = np.arange(n)
    G = FiniteGroup((ids[:, None] + ids[None, :]) % n, name=f"Z{n}",
                    element_names=["e"] + [f"a^{k}" for k in range(1, n)])
    chars = np.exp(2j * np.pi * np.outer(ids, ids) / n)
    G.irreps[tuple(range(n))] = [
        SubgroupIrrep(tuple(range(n)), chars[k][:, None, None], label=f"chi{k}") for k in range(n)
    ]
    return G


def symmetric3() -> FiniteGroup:
    perms = list(itertools.permutations(range(3)))
    pos = {p: i for i, p in enumerate(perms)}
    tab = [[pos[tuple(p[q[i]] for i in range(3))] for q in perms] for p in perms]
    names = ["e", "(12)", "(01)", "(012)", "(021)", "(02)"]
    G = FiniteGroup(tab, name="S3", element_names=names)
    # orthonormal basis of the plane x + y + z = 0
    basis = np.array([[1, -1, 0], [1, 1, -2]], dtype=float).T
    basis /= np.linalg.norm(basis, axis=0)
    std, sign = [], []
    for p in perms:
        P = np.zeros((3, 3))
        P[list(p), range(3)] = 1.0
        std.append(basis.T @ P @ basis)
        sign.append(np.linalg.det(P))
    full = tuple(range(6))
    G.irreps[full] = [
        SubgroupIrrep(full, np.ones((6, 1, 1)), "triv"),
        SubgroupIrrep(full, np.array(sign)[:, None, None], "sign"),
        SubgroupIrrep(full, np.array(std), "std"),
    ]
    return G


def dihedral4() -> FiniteGroup:
    # element r^k s^e has index k + 4e
    def idx(k, e):
        return k % 4 + 4 * e

    elems = [(k, e) for e in range(2) for k in range(4)]
    tab = [[idx(a + (-1) ** e * b, (e + f) % 2) for (b, f) in elems] for (a, e) in elems]
    names = ["e", "r", "r^2", "r^3", "s", "rs", "r^2s", "r^3s"]
    G = FiniteGroup(tab, name="D4", element_names=names)
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    refl = np.diag([1.0, -1.0])
    E = [np.linalg.matrix_power(rot, k) @ np.linalg.matrix_power(refl, e) for (k, e) in elems]
    full = tuple(range(8))
    one = []
    for sr, ss, lab in ((1, 1, "A1"), (1, -1, "A2"), (-1, 1, "B1"), (-1, -1, "B2")):
        one.append(SubgroupIrrep(full, np.array([sr ** k * ss ** e for (k, e) in elems],
                                                dtype=float)[:, None, None], lab))
    G.irreps[full] = one + [SubgroupIrrep(full, np.array(E), "E")]
    return G


def quaternion8() -> FiniteGroup:
    # 1, -1, i, -i, j, -j, k, -k as unit quaternions (w, x, y, z)
    units = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    quats = []
    for u in units:
        quats.append(np.array(u))
        quats.append(-np.array(u))

    def qmul(p, q):
        a1, b1, c1, d1 = p
        a2, b2, c2, d2 = q
        return np.array([a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                         a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                         a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                         a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2])

    def find(q):
        return next(i for i, r in enumerate(quats) if np.array_equal(r, q))

    tab = [[find(qmul(p, q)) for q in quats] for p in quats]
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    G = FiniteGroup(tab, name="Q8", element_names=names)
    I2 = np.eye(2, dtype=complex)
    qi = np.array([[1j, 0], [0, -1j]])
    qj = np.array([[0, 1], [-1, 0]], dtype=complex)
    qk = qi @ qj
    E = []
    for m in (I2, qi, qj, qk):
        E.extend([m, -m])
    full = tuple(range(8))
    signs = {"A1": (1, 1), "Ai": (1, -1), "Aj": (-1, 1), "Ak": (-1, -1)}
    one = []
    for lab, (si, sj) in signs.items():
        vals = [1, 1, si, si, sj, sj, si * sj, si * sj]
        one.append(SubgroupIrrep(full, np.array(vals, dtype=float)[:, None, None], lab))
    G.irreps[full] = one + [SubgroupIrrep(full, np.array(E), "E")]
    return G


def abelian_irreps(group: FiniteGroup, subgroup: Sequence[int]) -> List[SubgroupIrrep]:
    """All characters of an abelian subgroup, by enumerating generator values."""
    H = tuple(sorted(int(h) for h in subgroup))
    if not group.is_abelian_subset(H):
        raise GroupError("subgroup is not abelian")
    gens: List[int] = []
    span = {0}
    for h in H:
        if h in span:
            continue
        gens.append(h)
        frontier = list(span)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = group.mul(x, g)
                if y not in span:
                    span.add(y)
                    frontier.append(y)
    orders = [group.element_order(g) for g in gens]
    out = []
    for exps in itertools.product(*(range(o) for o in orders)):
        val = {0: 1.0 + 0j}
        frontier = [0]
        ok = True
        while frontier and ok:
            x = frontier.pop()
            for g, o, a in zip(gens, orders, exps):
                y = group.mul(x, g)
                v = val[x] * np.exp(2j * np.pi * a / o)
                if y in val:
                    if abs(val[y] - v) > 1e-9:
                        ok = False
                        break
                else:
                    val[y] = v
                    frontier.append(y)
        if ok:
            mats = np.array([val[h] for h in H])[:, None, None]
            mats.real[np.abs(mats.real) < 1e-15] = 0.0
            mats.imag[np.abs(mats.imag) < 1e-15] = 0.0
            out.append(SubgroupIrrep(H, mats, "chi" + "".join(str(a) for a in exps)))
    if len(out) != len(H):
        raise GroupError("character enumeration did not find |H| characters")
    return out


def numerical_irreps(group: FiniteGroup, subgroup: Sequence[int], seed: int = 0) -> List[SubgroupIrrep]:
    """Unitary irreps of any subgroup by splitting its left-regular representation.

    A random Hermitian element of the right-regular algebra commutes with the
    left action; its eigenspaces are irreducible left-invariant subspaces.
    """
    H = tuple(sorted(int(h) for h in subgroup))
    sub, _ = group.subgroup_table(H)
    k = len(H)
    m = sub.mult
    L = np.zeros((k, k, k))
    R = np.zeros((k, k, k))
    for h in range(k):
        L[h, m[h], np.arange(k)] = 1.0                  # e_x -> e_{hx}
        R[h, m[np.arange(k), sub.inverse[h]], np.arange(k)] = 1.0   # e_x -> e_{x h^-1}
    rng = np.random.default_rng(seed)
    for _ in range(8):
        c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        X = np.einsum("h,hij->ij", c, R)
        X = X + X.conj().T
        vals, vecs = np.linalg.eigh(X)
        groups, start = [], 0
        for i in range(1, k + 1):
            if i == k or vals[i] - vals[i - 1] > 1e-8:
                groups.append(vecs[:, start:i])
                start = i
        reps, chars = [], []
        fine = True
        for U in groups:
            mats = np.einsum("ai,hab,bj->hij", U.conj(), L, U)
            tr = np.trace(mats, axis1=1, axis2=2)
            if abs(np.mean(np.abs(tr) ** 2) - 1) > 1e-8:
                fine = False
                break
            if not any(np.allclose(tr, t, atol=1e-8) for t in chars):
                chars.append(tr)
                reps.append(mats)
        if fine and sum(r.shape[1] ** 2 for r in reps) == k:
            break
    else:
        raise GroupError("numerical irrep decomposition failed")
    reps.sort(key=lambda r: (r.shape[1], -np.trace(r, axis1=1, axis2=2).real.sum()))
    return [SubgroupIrrep(H, r, f"rho{i}") for i, r in enumerate(reps)]


def centralizer_irreps(group: FiniteGroup, subgroup: Sequence[int]) -> List[SubgroupIrrep]:
    """Irreps of ``subgroup``: catalog entry if present, else computed and cached."""
    key = tuple(sorted(int(h) for h in subgroup))
    if key not in group.irreps:
        if group.is_abelian_subset(key):
            group.irreps[key] = abelian_irreps(group, key)
        else:
            group.irreps[key] = numerical_irreps(group, key)
    return group.irreps[key]


def _complete_catalog(group: FiniteGroup) -> FiniteGroup:
    for c in conjugacy_classes(group):
        centralizer_irreps(group, c.centralizer)
    return group


def builtin_group(name: str) -> FiniteGroup:
    """``Z1``..``Z12``, ``S3``, ``D4`` or ``Q8`` with irreps for every centralizer."""
    key = name.strip().upper().replace("_", "")
    if key == "S3":
        G = symmetric3()
    elif key == "D4":
        G = dihedral4()
    elif key == "Q8":
        G = quaternion8()
    elif re.fullmatch(r"Z\d+", key):
        G = cyclic(int(key[1:]))
    else:
        raise GroupError(f"unknown group {name!r}; builtins are {', '.join(BUILTIN_NAMES)}")
    return _complete_catalog(G)


def _cplx(entry) -> complex:
    if isinstance(entry, dict):
        return complex(entry.get("re", 0.0), entry.get("im", 0.0))
    return complex(entry)


def group_from_dict(data: dict, name: str = "file") -> FiniteGroup:
    try:
        n = int(data["order"])
        mult = data["mult"]
    except (KeyError, TypeError, ValueError) as exc:
        raise GroupError(f"group file needs 'order' and 'mult': {exc}") from None
    arr = np.asarray(mult)
    if arr.shape != (n, n):
        raise GroupError(f"'mult' must be {n}x{n}, got shape {arr.shape}")
    G = FiniteGroup(arr, name=data.get("name", name), element_names=data.get("names"))
    for k, ir in enumerate(data.get("irreps", [])):
        H = tuple(int(h) for h in ir["subgroup"])
        d = int(ir["dim"])
        mats = np.zeros((len(H), d, d), dtype=complex)
        for h_key, rows in ir["matrices"].items():
            h = int(h_key)
            if h not in H:
                raise GroupError(f"irrep {k}: matrix given for element {h} outside the subgroup")
            mats[H.index(h)] = [[_cplx(v) for v in row] for row in rows]
        if len(ir["matrices"]) != len(H):
            raise GroupError(f"irrep {k}: need a matrix for every subgroup element")
        if not G.is_subgroup(H):
            raise GroupError(f"irrep {k}: {list(H)} is not a subgroup")
        order = np.argsort(H)
        rep = SubgroupIrrep(tuple(np.array(H)[order]), mats[order], ir.get("label", f"irrep{k}"))
        bad = {key: v for key, v in rep.defects(G).items() if v > 1e-10}
        if bad:
            raise GroupError(f"irrep {k} fails checks: {bad}")
        G.irreps.setdefault(rep.subgroup, []).append(rep)
    return _complete_catalog(G)


def load_group_file(path) -> FiniteGroup:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise GroupError(f"cannot read group file {path}: {exc}") from None
    return group_from_dict(data, name=path.stem)


def group_to_dict(group: FiniteGroup) -> dict:
    """Serialize a group and its irrep catalog in the group-file format."""
    irreps = []
    for H, reps in group.irreps.items():
        for r in reps:
            irreps.append({
                "subgroup": list(H), "dim": r.dim, "label": r.label,
                "matrices": {str(h): [[{"re": float(v.real), "im": float(v.imag)} for v in row]
                                      for row in r(h)] for h in H},
            })
    return {"name": group.name, "order": group.order, "mult": group.mult.tolist(),
            "names": list(group.element_names), "irreps": irreps}


def resolve_group(source: str) -> FiniteGroup:
    """Builtin name, ``file:path`` or a path to a ``.json`` file."""
    if source.startswith("file:"):
        return load_group_file(source[5:])
    if source.endswith(".json") or Path(source).is_file():
        return load_group_file(source)
    return builtin_group(source)
