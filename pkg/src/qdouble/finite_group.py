"""Finite groups given by multiplication tables, with 0-based element indices.

Index 0 is always the identity. Everything downstream (classes, centralizers,
double cosets, section maps) is computed by brute force on the table, which
is fine for the group orders this package targets (up to ~100).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np


class GroupError(ValueError):
    """Raised for invalid group tables or irrep data."""


class FiniteGroup:
    """A finite group stored as its multiplication table."""

    def __init__(self, mult, name: str = "G",
                 element_names: Optional[Sequence[str]] = None,
                 validate: bool = True) -> None:
        mult = np.asarray(mult, dtype=np.int64)
        if mult.ndim != 2 or mult.shape[0] != mult.shape[1] or mult.shape[0] == 0:
            raise GroupError("multiplication table must be a non-empty square array")
        self.mult = mult
        self.mult.setflags(write=False)
        self.name = name
        self.order = int(mult.shape[0])
        self.identity = 0
        if element_names is None:
            element_names = [str(i) for i in range(self.order)]
        if len(element_names) != self.order:
            raise GroupError("element_names has the wrong length")
        self.element_names = tuple(element_names)
        # irrep catalog: sorted subgroup tuple -> list of SubgroupIrrep
        self.irreps: Dict[Tuple[int, ...], List["SubgroupIrrep"]] = {}
        if validate:
            self._validate()
        inv = np.empty(self.order, dtype=np.int64)
        rows, cols = np.nonzero(mult == 0)
        inv[rows] = cols
        self.inverse = inv
        self.inverse.setflags(write=False)

    def _validate(self) -> None:
        n = self.order
        m = self.mult
        if m.min() < 0 or m.max() >= n:
            raise GroupError("table entries must be element indices 0..n-1")
        ids = np.arange(n)
        if not (np.array_equal(m[0], ids) and np.array_equal(m[:, 0], ids)):
            raise GroupError("index 0 must be a two-sided identity")
        for axis, what in ((1, "row"), (0, "column")):
            srt = np.sort(m, axis=axis)
            bad = np.flatnonzero(~np.all(srt == (ids if axis == 1 else ids[:, None]), axis=axis))
            if bad.size:
                raise GroupError(f"{what} {int(bad[0])} is not a permutation (not a Latin square)")
        left = m[m[:, :, None], np.arange(n)[None, None, :]]      # (ab)c
        right = m[np.arange(n)[:, None, None], m[None, :, :]]     # a(bc)
        bad = np.argwhere(left != right)
        if bad.size:
            a, b, c = (int(v) for v in bad[0])
            raise GroupError(f"table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return int(self.mult[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conjugate(self, w: int, g: int) -> int:
        """``w g w^-1``."""
        return int(self.mult[self.mult[w, g], self.inverse[w]])

    @cached_property
    def conj_table(self) -> np.ndarray:
        """``conj_table[z, x]`` is the index of ``z^-1 x z``."""
        m, inv = self.mult, self.inverse
        return m[m[inv[:, None], np.arange(self.order)[None, :]], np.arange(self.order)[:, None]]

    @cached_property
    def ldiv_table(self) -> np.ndarray:
        """``ldiv_table[z, y]`` is the index of ``z^-1 y``."""
        return self.mult[self.inverse]

    @cached_property
    def center(self) -> Tuple[int, ...]:
        m = self.mult
        return tuple(int(g) for g in range(self.order) if np.array_equal(m[g], m[:, g]))

    def centralizer(self, g: int) -> Tuple[int, ...]:
        m = self.mult
        return tuple(int(x) for x in np.flatnonzero(m[:, g] == m[g, :]))

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.mul(x, g)
            k += 1
        return k

    def is_subgroup(self, elems: Sequence[int]) -> bool:
        s = set(elems)
        return 0 in s and all(self.mul(a, self.inv(b)) in s for a in s for b in s)

    def is_abelian_subset(self, elems: Sequence[int]) -> bool:
        e = np.asarray(elems)
        sub = self.mult[np.ix_(e, e)]
        return bool(np.array_equal(sub, sub.T))

    def subgroup_table(self, elems: Sequence[int]) -> Tuple["FiniteGroup", Tuple[int, ...]]:
        """Re-index a subgroup as a standalone group (identity first)."""
        elems = tuple(sorted(int(e) for e in elems))
        pos = {e: i for i, e in enumerate(elems)}
        tab = [[pos[self.mul(a, b)] for b in elems] for a in elems]
        names = [self.element_names[e] for e in elems]
        return FiniteGroup(tab, name=f"{self.name}<sub>", element_names=names, validate=False), elems


@dataclass(frozen=True)
class ConjugacyClass:
    """A conjugacy class with its canonical representative and centralizer."""

    index: int
    representative: int
    members: Tuple[int, ...]
    centralizer: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def label(self) -> str:
        return f"C{self.index}"


@dataclass(eq=False)
class SubgroupIrrep:
    """An irreducible unitary representation of a subgroup, as explicit matrices."""

    subgroup: Tuple[int, ...]
    matrices: np.ndarray          # (|H|, d, d), aligned with ``subgroup``
    label: str = "irrep"

    def __post_init__(self) -> None:
        self.subgroup = tuple(int(h) for h in self.subgroup)
        self.matrices = np.asarray(self.matrices, dtype=np.complex128)
        if self.matrices.ndim != 3 or self.matrices.shape[0] != len(self.subgroup):
            raise GroupError(f"irrep {self.label}: need one square matrix per subgroup element")
        self._pos = {h: i for i, h in enumerate(self.subgroup)}

    @property
    def dim(self) -> int:
        return int(self.matrices.shape[1])

    def __call__(self, h: int) -> np.ndarray:
        return self.matrices[self._pos[int(h)]]

    def character(self, h: int) -> complex:
        return complex(np.trace(self(h)))

    def defects(self, group: FiniteGroup) -> Dict[str, float]:
        """Homomorphism, unitarity and irreducibility defects."""
        H = self.subgroup
        M = self.matrices
        d = self.dim
        idx = np.array([[self._pos[group.mul(a, b)] for b in H] for a in H])
        prod = np.einsum("aij,bjk->abik", M, M)
        hom = np.abs(prod - M[idx]).max()
        uni = np.abs(M @ np.conj(np.transpose(M, (0, 2, 1))) - np.eye(d)).max()
        tr = np.trace(M, axis1=1, axis2=2)
        irr = abs(np.mean(np.abs(tr) ** 2) - 1.0)
        return {"homomorphism": float(hom), "unitarity": float(uni), "irreducibility": float(irr)}


def conjugacy_classes(group: FiniteGroup) -> List[ConjugacyClass]:
    """Classes ordered by representative; the representative is the smallest member."""
    cached = group.__dict__.get("_classes")
    if cached is not None:
        return cached
    n = group.order
    seen = np.full(n, -1)
    out = []
    for g in range(n):
        if seen[g] >= 0:
            continue
        orbit = np.unique(group.mult[group.mult[:, g], group.inverse])
        seen[orbit] = len(out)
        out.append(ConjugacyClass(len(out), g, tuple(int(x) for x in orbit), group.centralizer(g)))
    group.__dict__["_classes"] = out
    group.__dict__["_class_of"] = seen
    return out


def class_of(group: FiniteGroup) -> np.ndarray:
    """Array mapping element index -> class index."""
    conjugacy_classes(group)
    return group.__dict__["_class_of"]


def centralizer_strata(group: FiniteGroup) -> List[List[int]]:
    """Group class indices by centralizer subgroup (the strata ``Conj_p``)."""
    strata: Dict[Tuple[int, ...], List[int]] = {}
    for c in conjugacy_classes(group):
        strata.setdefault(c.centralizer, []).append(c.index)
    return list(strata.values())


@dataclass
class DoubleCosetSystem:
    """Double cosets ``N_A \\ G / N_B`` with the chosen section maps.

    ``rep[k]`` is ``y(xi_k)``, ``w[k]`` is ``w(xi_k)`` and ``target[k]`` is the
    class index of ``C(xi_k)``. ``n1[x], n2[x]`` realize
    ``x = n1(x) y(N_A x N_B) n2(x)^-1``.
    """

    left: Tuple[int, ...]
    right: Tuple[int, ...]
    rep: List[int]
    members: List[Tuple[int, ...]]
    w: List[int]
    target: List[int]
    coset_of: np.ndarray
    n1: np.ndarray
    n2: np.ndarray
    order: int = field(repr=False, default=1)

    def __len__(self) -> int:
        return len(self.rep)

    @property
    def measure(self) -> np.ndarray:
        """Normalized measure ``mu(xi) = |xi| / |G|``."""
        return np.array([len(m) for m in self.members]) / self.order


def double_cosets(group: FiniteGroup, A: ConjugacyClass, B: ConjugacyClass,
                  tiebreak: str = "min") -> DoubleCosetSystem:
    """Partition ``G`` into ``N_A y N_B`` and fix all section choices.

    ``tiebreak="min"`` picks smallest indices everywhere (lexicographically
    smallest pair for ``(n1, n2)``); ``"max"`` picks largest, which is used to
    check that downstream results do not depend on the choice.
    """
    if tiebreak not in ("min", "max"):
        raise ValueError("tiebreak must be 'min' or 'max'")
    pick = min if tiebreak == "min" else max
    m, inv = group.mult, group.inverse
    NA = np.array(A.centralizer)
    NB = np.array(B.centralizer)
    n = group.order
    classes = conjugacy_classes(group)
    cls = class_of(group)
    coset_of = np.full(n, -1)
    reps, members = [], []
    order = range(n) if tiebreak == "min" else range(n - 1, -1, -1)
    for x in order:
        if coset_of[x] >= 0:
            continue
        orbit = np.unique(m[m[NA, x][:, None], inv[NB][None, :]])
        coset_of[orbit] = len(reps)
        reps.append(x)
        members.append(tuple(int(v) for v in orbit))
    gA, gB = A.representative, B.representative
    ws, targets = [], []
    for y in reps:
        t = m[m[m[gA, y], gB], inv[y]]
        c = classes[cls[t]]
        cands = np.flatnonzero(m[m[:, c.representative], inv] == t)
        ws.append(int(pick(cands)))
        targets.append(int(c.index))
    n1 = np.empty(n, dtype=np.int64)
    n2 = np.empty(n, dtype=np.int64)
    pairs = sorted((int(a), int(b)) for a in NA for b in NB)
    if tiebreak == "max":
        pairs.reverse()
    for x in range(n):
        y = reps[coset_of[x]]
        for a, b in pairs:
            if m[m[a, y], inv[b]] == x:
                n1[x], n2[x] = a, b
                break
    return DoubleCosetSystem(A.centralizer, B.centralizer, reps, members, ws, targets,
                             coset_of, n1, n2, order=n)


def check_double_cosets(group: FiniteGroup, A: ConjugacyClass, B: ConjugacyClass,
                        dc: DoubleCosetSystem) -> None:
    """Assert the partition, class-map and section-map identities exactly."""
    m, inv = group.mult, group.inverse
    classes = conjugacy_classes(group)
    allm = sorted(x for mem in dc.members for x in mem)
    assert allm == list(range(group.order)), "double cosets do not partition G"
    for k, y in enumerate(dc.rep):
        t = m[m[m[A.representative, y], B.representative], inv[y]]
        gC = classes[dc.target[k]].representative
        assert t == m[m[dc.w[k], gC], inv[dc.w[k]]], f"class map fails on coset {k}"
    for x in range(group.order):
        y = dc.rep[dc.coset_of[x]]
        assert dc.n1[x] in A.centralizer and dc.n2[x] in B.centralizer
        assert m[m[dc.n1[x], y], inv[dc.n2[x]]] == x, f"section map fails at {x}"


def regular_part(group: FiniteGroup, A: ConjugacyClass, B: ConjugacyClass) -> Tuple[int, ...]:
    """``G_o``: elements whose ``N_A x N_B`` stabilizer is the diagonal centre."""
    m, inv = group.mult, group.inverse
    NA = np.array(A.centralizer)
    NB = np.array(B.centralizer)
    Z = set(group.center)
    out = []
    for x in range(group.order):
        fixed = m[m[NA, x][:, None], inv[NB][None, :]] == x
        ok = all(NA[i] == NB[j] and NA[i] in Z for i, j in np.argwhere(fixed))
        if ok:
            out.append(x)
    return tuple(out)


def character_table(group: FiniteGroup, seed: int = 0, retries: int = 8) -> np.ndarray:
    """Character table by Burnside's class-multiplication eigenvector method.

    Rows are irreducible characters (trivial first, then by degree), columns
    follow :func:`conjugacy_classes`.
    """
    classes = conjugacy_classes(group)
    cls = class_of(group)
    k = len(classes)
    n = group.order
    reps = np.array([c.representative for c in classes])
    sizes = np.array([c.size for c in classes], dtype=float)
    # c[j, kk, l] = #{(x in C_j, y in C_kk) : x y = g_l}
    coef = np.zeros((k, k, k))
    for j, Cj in enumerate(classes):
        for kk, Ck in enumerate(classes):
            prods = group.mult[np.ix_(Cj.members, Ck.members)].ravel()
            for l, g in enumerate(reps):
                coef[j, kk, l] = np.count_nonzero(prods == g)
    rng = np.random.default_rng(seed)
    for _ in range(retries):
        r = rng.standard_normal(k)
        M = np.einsum("j,jkl->kl", r, coef)
        vals, vecs = np.linalg.eig(M)
        gaps = np.abs(vals[:, None] - vals[None, :]) + np.eye(k) * 1e9
        if gaps.min() > 1e-6 * max(1.0, np.abs(vals).max()):
            break
    else:
        raise np.linalg.LinAlgError("Burnside eigenvector separation failed; try another seed")
    rows = []
    for i in range(k):
        w = vecs[:, i] / vecs[0, i]
        d = np.sqrt(n / np.sum(np.abs(w) ** 2 / sizes))
        deg = int(round(d.real))
        rows.append(deg * w / sizes)
    table = np.array(rows, dtype=np.complex128)
    table[np.abs(table.real) < 1e-13] = 1j * table[np.abs(table.real) < 1e-13].imag
    table[np.abs(table.imag) < 1e-13] = table[np.abs(table.imag) < 1e-13].real
    order = sorted(range(k), key=lambda i: (round(table[i, 0].real),
                                            tuple(np.round(-table[i].real, 8)),
                                            tuple(np.round(-table[i].imag, 8))))
    return table[order]
