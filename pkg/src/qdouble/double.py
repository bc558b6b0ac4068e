"""The quantum double D(G) of a finite group, computed exactly.

Elements are complex functions on G x G stored as ``(n, n)`` arrays
``F[x, y]``. Integrals over G are normalized averages, and the point mass
``e_(g,x)`` is ``|G|`` at ``(g, x)`` and zero elsewhere, so that

    e_(g1,x1) . e_(g2,x2) = [g2 = x1^-1 g1 x1] e_(g1, x1 x2).

Functions on G^2k (the k-fold tensor power) are kept as ``(n^k, n^k)``
arrays indexed by the multi-indices (x1..xk) and (y1..yk). Since
D(G)^{(x)k} is D(G^k) as an algebra, one twisted-product kernel serves all k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import _backend
from .catalog import centralizer_irreps
from .finite_group import (ConjugacyClass, FiniteGroup, GroupError, SubgroupIrrep,
                           conjugacy_classes, double_cosets)


class FusionDisagreement(RuntimeError):
    """The rank and character computations of a multiplicity differ."""


class ZeroSectorError(ValueError):
    """A projection onto a centralizer irrep whose central character is not omega."""


# --------------------------------------------------------------------------
# algebra elements


@dataclass(eq=False)
class DoubleAlgebraElement:
    """A function ``F(x, y)`` on G x G."""

    group: FiniteGroup
    values: np.ndarray

    def __post_init__(self):
        n = self.group.order
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (n, n):
            raise ValueError(f"values must have shape ({n}, {n})")

    def _check(self, other: "DoubleAlgebraElement") -> None:
        if other.group is not self.group:
            raise GroupError("elements belong to different groups")

    def __add__(self, other):
        self._check(other)
        return DoubleAlgebraElement(self.group, self.values + other.values)

    def __sub__(self, other):
        self._check(other)
        return DoubleAlgebraElement(self.group, self.values - other.values)

    def __mul__(self, other):
        if isinstance(other, DoubleAlgebraElement):
            return multiply(self, other)
        return DoubleAlgebraElement(self.group, self.values * other)

    def __rmul__(self, scalar):
        return DoubleAlgebraElement(self.group, self.values * scalar)

    def allclose(self, other, atol=1e-12) -> bool:
        return bool(np.allclose(self.values, other.values, rtol=0, atol=atol))


def point_mass(group: FiniteGroup, g: int, x: int) -> DoubleAlgebraElement:
    """``e_(g,x)(u, v) = |G| [u = g][v = x]``."""
    v = np.zeros((group.order, group.order), dtype=np.complex128)
    v[g, x] = group.order
    return DoubleAlgebraElement(group, v)


def point_mass_basis(group: FiniteGroup) -> np.ndarray:
    """All point masses as an ``(n*n, n, n)`` stack, index ``g*n + x``."""
    n = group.order
    return (n * np.eye(n * n, dtype=np.complex128)).reshape(n * n, n, n)


def _vals(F) -> np.ndarray:
    return F.values if isinstance(F, DoubleAlgebraElement) else np.asarray(F, dtype=np.complex128)


def multiply(F1, F2) -> DoubleAlgebraElement:
    """``(F1 . F2)(x, y) = avg_z F1(x, z) F2(z^-1 x z, z^-1 y)``."""
    if isinstance(F1, DoubleAlgebraElement) and isinstance(F2, DoubleAlgebraElement):
        F1._check(F2)
    G = F1.group if isinstance(F1, DoubleAlgebraElement) else F2.group
    out = _backend.twisted_product(_vals(F1)[None], _vals(F2)[None], G.conj_table, G.ldiv_table)
    return DoubleAlgebraElement(G, out[0])


def multiply_batch(group: FiniteGroup, H1: np.ndarray, H2: np.ndarray) -> np.ndarray:
    """Batched product of ``(B, n, n)`` stacks."""
    return _backend.twisted_product(H1, H2, group.conj_table, group.ldiv_table)


def star(F: DoubleAlgebraElement) -> DoubleAlgebraElement:
    """``F*(x, y) = conj F(y^-1 x y, y^-1)``."""
    G = F.group
    idx_x = G.conj_table.T                     # [x, y] -> y^-1 x y
    v = np.conj(F.values[idx_x, G.inverse[None, :]])
    return DoubleAlgebraElement(G, v)


def unit(group: FiniteGroup) -> DoubleAlgebraElement:
    v = np.zeros((group.order, group.order), dtype=np.complex128)
    v[:, 0] = group.order
    return DoubleAlgebraElement(group, v)


def counit(F: DoubleAlgebraElement) -> complex:
    """``eps(F) = avg_y F(e, y)``."""
    return complex(F.values[0].mean())


def antipode(F: DoubleAlgebraElement) -> DoubleAlgebraElement:
    """``(S F)(x, y) = F(y^-1 x^-1 y, y^-1)``."""
    G = F.group
    idx_x = G.conj_table.T[G.inverse]          # [x, y] -> y^-1 x^-1 y
    return DoubleAlgebraElement(G, F.values[idx_x, G.inverse[None, :]])


def comultiply(F: DoubleAlgebraElement) -> np.ndarray:
    """``Delta F`` as an ``(n, n, n, n)`` array with axes ``(x1, y1, x2, y2)``.

    ``Delta F(x1, y1; x2, y2) = F(x1 x2, y1) |G| [y1 = y2]``.
    """
    return _slots_to_pairs(_delta_slot(F.group, F.values, 1, 0), 2)


def r_element(group: FiniteGroup) -> np.ndarray:
    """``R(x1, y1; x2, y2) = |G|^2 [x1 = y2][y1 = e]`` with axes ``(x1, y1, x2, y2)``."""
    n = group.order
    R = np.zeros((n, n, n, n), dtype=np.complex128)
    ids = np.arange(n)
    R[ids, 0, :, ids] = n * n
    return R


# --------------------------------------------------------------------------
# multi-slot helpers; internal axis order is (x1..xk, y1..yk)


def _slots_to_pairs(H: np.ndarray, k: int) -> np.ndarray:
    order = [a for s in range(k) for a in (s, k + s)]
    return np.transpose(H, order)


def _pairs_to_slots(H: np.ndarray, k: int) -> np.ndarray:
    order = [2 * s for s in range(k)] + [2 * s + 1 for s in range(k)]
    return np.transpose(H, order)


def _power_tables(group: FiniteGroup, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """conj / ldiv tables of G^k for row-major multi-indices."""
    conj, ldiv = group.conj_table, group.ldiv_table
    n = group.order
    C, L = conj, ldiv
    for _ in range(k - 1):
        N = C.shape[0]
        C = (C[:, None, :, None] * n + conj[None, :, None, :]).reshape(N * n, N * n)
        L = (L[:, None, :, None] * n + ldiv[None, :, None, :]).reshape(N * n, N * n)
    return C, L


def _delta_slot(group: FiniteGroup, H: np.ndarray, k: int, s: int) -> np.ndarray:
    """Apply the coproduct to slot ``s`` of a k-slot function."""
    n = group.order
    Hf = np.moveaxis(H, (s, k + s), (0, 1))              # (x_s, y_s, rest)
    rest = Hf.shape[2:]
    out = np.zeros((n, n, n, n) + rest, dtype=np.complex128)   # (xa, xb, ya, yb, rest)
    ids = np.arange(n)
    out[:, :, ids, ids] = Hf[group.mult] * n          # [xa, xb, y, y] = H[xa xb, y] n
    out = np.moveaxis(out, (0, 1, 2, 3), (s, s + 1, k + 1 + s, k + 2 + s))
    return out


def _eps_slot(H: np.ndarray, k: int, s: int) -> np.ndarray:
    Hf = np.moveaxis(H, (s, k + s), (0, 1))
    return Hf[0].mean(axis=0)


def _antipode_slot(group: FiniteGroup, H: np.ndarray, k: int, s: int) -> np.ndarray:
    Hf = np.moveaxis(H, (s, k + s), (0, 1))
    idx_x = group.conj_table.T[group.inverse]
    out = Hf[idx_x, group.inverse[None, :]]
    return np.moveaxis(out, (0, 1), (s, k + s))


def _mult_slots(group: FiniteGroup, H: np.ndarray) -> np.ndarray:
    """``m(H)(x, y) = avg_z H(x, z; z^-1 x z, z^-1 y)`` for a 2-slot function."""
    n = group.order
    xi = np.arange(n)[:, None, None]
    yi = np.arange(n)[None, :, None]
    zi = np.arange(n)[None, None, :]
    # internal order (x1, x2, y1, y2)
    return H[xi, group.conj_table[zi, xi], zi, group.ldiv_table[zi, yi]].mean(axis=-1)


def _unit_k(group: FiniteGroup, k: int) -> np.ndarray:
    u = unit(group).values
    out = u
    for _ in range(k - 1):
        out = np.multiply.outer(out, u)
    return _pairs_to_slots(out, k) if k > 1 else out


# --------------------------------------------------------------------------
# Hopf axioms


@dataclass
class HopfReport:
    """Maximum absolute defect for each Hopf-algebra axiom."""

    group: str
    defects: Dict[str, float] = field(default_factory=dict)

    def ok(self, tol: float = 1e-12) -> bool:
        return all(v < tol for v in self.defects.values())

    def failures(self, tol: float = 1e-12) -> List[str]:
        return [k for k, v in self.defects.items() if not v < tol]


AXIOMS = ("associativity", "unit", "coassociativity", "counit", "antipode",
          "star", "quasi_triangularity", "qybe")


def _maxabs(a) -> float:
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0


def verify_hopf(group: FiniteGroup) -> HopfReport:
    """Check every Hopf *-algebra axiom on all point-mass basis elements."""
    n = group.order
    N = n * n
    basis = point_mass_basis(group)
    rep = HopfReport(group.name)
    conj, ldiv = group.conj_table, group.ldiv_table

    # structure constants: prods[a, b] = e_a . e_b
    A = np.repeat(basis, N, axis=0)
    B = np.tile(basis, (N, 1, 1))
    prods = multiply_batch(group, A, B)
    M = prods.reshape(N, N, N) / n                       # coefficients on basis
    Mr = M.real if not np.any(M.imag) else M
    worst = 0.0
    for a in range(N):
        lhs = (Mr[a] @ Mr.reshape(N, N * N)).reshape(N, N, N)        # (e_a e_b) e_c
        rhs = (Mr.reshape(N * N, N) @ Mr[a]).reshape(N, N, N)        # e_a (e_b e_c)
        worst = max(worst, _maxabs(lhs - rhs))
    rep.defects["associativity"] = worst

    one = np.broadcast_to(unit(group).values, basis.shape)
    rep.defects["unit"] = max(_maxabs(multiply_batch(group, one, basis) - basis),
                              _maxabs(multiply_batch(group, basis, one) - basis))

    coass = counit_d = anti = 0.0
    for F in basis:
        D = _delta_slot(group, F, 1, 0)                          # (x1, x2, y1, y2)
        left = _delta_slot(group, D, 2, 0)
        right = _delta_slot(group, D, 2, 1)
        coass = max(coass, _maxabs(left - right))
        counit_d = max(counit_d, _maxabs(_eps_slot(D, 2, 0) - F), _maxabs(_eps_slot(D, 2, 1) - F))
        eps = F[0].mean()
        target = eps * unit(group).values
        anti = max(anti,
                   _maxabs(_mult_slots(group, _antipode_slot(group, D, 2, 0)) - target),
                   _maxabs(_mult_slots(group, _antipode_slot(group, D, 2, 1)) - target))
    rep.defects["coassociativity"] = coass
    rep.defects["counit"] = counit_d
    rep.defects["antipode"] = anti

    stars = np.stack([star(DoubleAlgebraElement(group, F)).values for F in basis])
    sd = _maxabs(np.stack([star(DoubleAlgebraElement(group, F)).values for F in stars]) - basis)
    lhs = np.stack([star(DoubleAlgebraElement(group, P)).values for P in prods])
    rhs = multiply_batch(group, np.tile(stars, (N, 1, 1)), np.repeat(stars, N, axis=0))
    rep.defects["star"] = max(sd, _maxabs(lhs - rhs))

    # quasi-triangularity in D(G^2)
    C2, L2 = _power_tables(group, 2)
    R = _pairs_to_slots(r_element(group), 2).reshape(N, N)
    Rinv = _antipode_slot(group, _pairs_to_slots(r_element(group), 2), 2, 0).reshape(N, N)
    one2 = _unit_k(group, 2).reshape(N, N)
    D = np.stack([_delta_slot(group, F, 1, 0) for F in basis])           # (b, x1, x2, y1, y2)
    Dop = np.transpose(D, (0, 2, 1, 4, 3))
    D = D.reshape(-1, N, N)
    Dop = Dop.reshape(-1, N, N)
    Rb = np.broadcast_to(R, D.shape)
    qt = _maxabs(_backend.twisted_product(Rb, D, C2, L2) - _backend.twisted_product(Dop, Rb, C2, L2))
    inv = max(_maxabs(_backend.twisted_product(R[None], Rinv[None], C2, L2)[0] - one2),
              _maxabs(_backend.twisted_product(Rinv[None], R[None], C2, L2)[0] - one2))
    # (Delta x id) R = R13 R23 and (id x Delta) R = R13 R12
    C3, L3 = _power_tables(group, 3)
    R12, R13, R23 = _r_legs(group)
    N3 = n ** 3
    dl = _delta_slot(group, _pairs_to_slots(r_element(group), 2), 2, 0).reshape(N3, N3)
    dr = _delta_slot(group, _pairs_to_slots(r_element(group), 2), 2, 1).reshape(N3, N3)
    hex1 = _maxabs(dl - _backend.twisted_product(R13[None], R23[None], C3, L3)[0])
    hex2 = _maxabs(dr - _backend.twisted_product(R13[None], R12[None], C3, L3)[0])
    rep.defects["quasi_triangularity"] = max(qt, inv, hex1, hex2)

    def tp(X, Y):
        return _backend.twisted_product(X[None], Y[None], C3, L3)[0]

    rep.defects["qybe"] = _maxabs(tp(tp(R12, R13), R23) - tp(tp(R23, R13), R12))
    return rep


def _r_legs(group: FiniteGroup):
    """R12, R13, R23 in D(G^3) as ``(n^3, n^3)`` arrays."""
    n = group.order
    R = r_element(group)                       # (x1, y1, x2, y2)
    u = unit(group).values
    R12 = np.einsum("abcd,ef->abcdef", R, u)
    R13 = np.einsum("abef,cd->abcdef", R, u)
    R23 = np.einsum("cdef,ab->abcdef", R, u)
    N3 = n ** 3
    return tuple(_pairs_to_slots(X, 3).reshape(N3, N3) for X in (R12, R13, R23))


# --------------------------------------------------------------------------
# irreducible representations


def coset_reps(group: FiniteGroup, cls: ConjugacyClass):
    """Left cosets of ``N_A``: reps, class element per coset, and the split ``x = x_i h``."""
    m, inv = group.mult, group.inverse
    g = cls.representative
    keys = m[m[:, g], inv]                     # x g x^-1
    reps: List[int] = []
    where: Dict[int, int] = {}
    index = np.empty(group.order, dtype=np.int64)
    for x in range(group.order):
        k = int(keys[x])
        if k not in where:
            where[k] = len(reps)
            reps.append(x)
        index[x] = where[k]
    reps_a = np.array(reps)
    hpart = m[inv[reps_a[index]], np.arange(group.order)]
    return reps_a, keys[reps_a], index, hpart


class DoubleIrrep:
    """The irrep ``Pi^A_alpha`` on functions ``phi : G -> V_alpha`` with
    ``phi(x h) = alpha(h^-1) phi(x)``, in coordinates ``phi(x_i)``."""

    def __init__(self, group: FiniteGroup, cls: ConjugacyClass, alpha: SubgroupIrrep,
                 alpha_index: int = 0):
        if tuple(alpha.subgroup) != tuple(cls.centralizer):
            raise GroupError("alpha must be an irrep of the centralizer of the class")
        self.group = group
        self.cls = cls
        self.alpha = alpha
        self.alpha_index = alpha_index
        self.cosets, self.class_elems, self.coset_index, self.hpart = coset_reps(group, cls)
        d = alpha.dim
        inv_h = group.inverse[self.hpart]
        # alpha(h(x)^-1) for every x
        self.alpha_inv_h = np.stack([alpha(h) for h in inv_h])
        self._tensor = None

    @property
    def d_alpha(self) -> int:
        return self.alpha.dim

    @property
    def dim(self) -> int:
        return len(self.cosets) * self.alpha.dim

    @property
    def label(self) -> str:
        return f"{self.cls.label}:{self.alpha.label}"

    def __repr__(self) -> str:
        return f"DoubleIrrep({self.label}, dim={self.dim})"

    def _rep_tensor(self) -> np.ndarray:
        """``E[i, z]``: block row ``i`` of ``Pi(F)`` per unit of ``F(c_i, z)``."""
        if self._tensor is None:
            G = self.group
            n = G.order
            na, d = len(self.cosets), self.d_alpha
            E = np.zeros((na, n, na, d, na, d), dtype=np.complex128)
            for i, xi in enumerate(self.cosets):
                ys = G.ldiv_table[:, xi]                    # z^-1 x_i for every z
                ks = self.coset_index[ys]
                for z in range(n):
                    E[i, z, i, :, ks[z], :] += self.alpha_inv_h[ys[z]] / n
            self._tensor = E.reshape(na, n, self.dim, self.dim)
        return self._tensor

    def matrix(self, F) -> np.ndarray:
        """``Pi^A_alpha(F)``; ``F`` may be a single element or an ``(B, n, n)`` stack."""
        v = _vals(F)
        E = self._rep_tensor()
        if v.ndim == 2:
            return np.einsum("iz,izab->ab", v[self.class_elems], E)
        return np.einsum("siz,izab->sab", v[:, self.class_elems], E)

    def character(self, g: int, x: int) -> complex:
        """Trace of ``Pi(e_(g,x))``; zero unless ``g`` is in the class and commutes with ``x``."""
        G = self.group
        if g not in self.cls.members or G.mul(g, x) != G.mul(x, g):
            return 0.0j
        i = int(np.flatnonzero(self.class_elems == g)[0])
        w = int(self.cosets[i])
        return complex(self.alpha.character(G.mul(G.mul(G.inv(w), x), w)))

    def character_table(self) -> np.ndarray:
        """``chi[g, x]`` for all pairs."""
        n = self.group.order
        out = np.zeros((n, n), dtype=np.complex128)
        for g in self.cls.members:
            for x in self.group.centralizer(g):
                out[g, x] = self.character(g, x)
        return out


def irrep_matrix(rep: DoubleIrrep, F) -> np.ndarray:
    return rep.matrix(F)


def character(rep: DoubleIrrep, g: int, x: int) -> complex:
    return rep.character(g, x)


def all_irreps(group: FiniteGroup) -> List[DoubleIrrep]:
    """Every ``Pi^A_alpha``, ordered by class then by centralizer irrep."""
    cache = group.__dict__.get("_double_irreps")
    if cache is not None:
        return cache
    out = []
    for c in conjugacy_classes(group):
        for k, a in enumerate(centralizer_irreps(group, c.centralizer)):
            out.append(DoubleIrrep(group, c, a, k))
    group.__dict__["_double_irreps"] = out
    return out


def find_irrep(group: FiniteGroup, label: str) -> DoubleIrrep:
    """Look up an irrep by ``"C<k>:<alpha label>"`` or by its position."""
    reps = all_irreps(group)
    for r in reps:
        if r.label == label:
            return r
    if label.isdigit() and int(label) < len(reps):
        return reps[int(label)]
    raise GroupError(f"no irrep {label!r}; have {[r.label for r in reps]}")


# --------------------------------------------------------------------------
# tensor products and braiding


@dataclass(eq=False)
class TensorState:
    """A covariant function ``Phi : G x G -> V_alpha (x) V_beta``.

    ``values`` has shape ``(n, n, d_alpha * d_beta)`` with the vector index
    ordered as ``k * d_beta + l``.
    """

    repA: DoubleIrrep
    repB: DoubleIrrep
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        n = self.repA.group.order
        shape = (n, n, self.repA.d_alpha * self.repB.d_alpha)
        if self.values.shape != shape:
            raise ValueError(f"tensor state must have shape {shape}")

    def norm2(self) -> float:
        """``avg_{x,y} ||Phi(x, y)||^2``."""
        return float(np.mean(np.sum(np.abs(self.values) ** 2, axis=-1)))

    def covariance_defect(self) -> float:
        return covariance_defect(self.repA, self.repB, self.values)

    def allclose(self, other: "TensorState", atol=1e-10) -> bool:
        return bool(np.allclose(self.values, other.values, rtol=0, atol=atol))


def _kron_table(repA: DoubleIrrep, repB: DoubleIrrep) -> np.ndarray:
    """``K[x, y] = alpha(h(x)^-1) (x) beta(h(y)^-1)``."""
    a, b = repA.alpha_inv_h, repB.alpha_inv_h
    n, da, db = a.shape[0], a.shape[1], b.shape[1]
    K = np.einsum("xac,ybd->xyabcd", a, b)
    return K.reshape(n, n, da * db, da * db)


def state_from_coordinates(repA: DoubleIrrep, repB: DoubleIrrep, coords) -> TensorState:
    """Extend values at coset-representative pairs ``(x_i, y_k)`` covariantly."""
    coords = np.asarray(coords, dtype=np.complex128)
    K = _kron_table(repA, repB)
    ci, ck = repA.coset_index, repB.coset_index
    vals = np.einsum("xyab,xyb->xya", K, coords[ci[:, None], ck[None, :]])
    return TensorState(repA, repB, vals)


def tensor_basis(repA: DoubleIrrep, repB: DoubleIrrep) -> np.ndarray:
    """All basis states as a ``(dimA * dimB, n, n, dA dB)`` stack."""
    na, nb = len(repA.cosets), len(repB.cosets)
    D = repA.d_alpha * repB.d_alpha
    K = _kron_table(repA, repB)
    ci, ck = repA.coset_index, repB.coset_index
    out = np.zeros((na, nb, D) + K.shape[:2] + (D,), dtype=np.complex128)
    n = K.shape[0]
    for x in range(n):
        for y in range(n):
            out[ci[x], ck[y], :, x, y, :] = K[x, y].T
    return out.reshape(na * nb * D, n, n, D)


def random_state(repA: DoubleIrrep, repB: DoubleIrrep, rng=None) -> TensorState:
    rng = np.random.default_rng(rng)
    shape = (len(repA.cosets), len(repB.cosets), repA.d_alpha * repB.d_alpha)
    coords = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return state_from_coordinates(repA, repB, coords)


def covariance_defect(repA: DoubleIrrep, repB: DoubleIrrep, values: np.ndarray) -> float:
    G = repA.group
    m = G.mult
    worst = 0.0
    da, db = repA.d_alpha, repB.d_alpha
    for h1 in repA.cls.centralizer:
        for h2 in repB.cls.centralizer:
            T = np.kron(repA.alpha(G.inv(h1)), repB.alpha(G.inv(h2)))
            lhs = values[m[:, h1][:, None], m[:, h2][None, :]]
            worst = max(worst, _maxabs(lhs - values @ T.T))
    return worst


def _as_values(state) -> np.ndarray:
    return state.values if isinstance(state, TensorState) else np.asarray(state)


def tensor_apply(repA: DoubleIrrep, repB: DoubleIrrep, F, state,
                 check: bool = True) -> TensorState:
    """``(F . Phi)(x, y) = avg_z F(x g_A x^-1 y g_B y^-1, z) Phi(z^-1 x, z^-1 y)``."""
    G = repA.group
    Phi = _as_values(state)
    if check and covariance_defect(repA, repB, Phi) > 1e-12:
        raise ValueError("input state violates the covariance condition")
    Fv = _vals(F)
    n = G.order
    keys = G.mult[repA.class_elems[repA.coset_index][:, None],
                  repB.class_elems[repB.coset_index][None, :]]
    out = np.zeros_like(Phi)
    for z in range(n):
        coef = Fv[keys, z]
        if not np.any(coef):
            continue
        l = G.ldiv_table[z]
        out += coef[:, :, None] * Phi[l[:, None], l[None, :]]
    return TensorState(repA, repB, out / n)


def _swap(values: np.ndarray, da: int, db: int) -> np.ndarray:
    n1, n2 = values.shape[:2]
    return values.reshape(n1, n2, da, db).swapaxes(2, 3).reshape(n1, n2, da * db)


def braid(repA: DoubleIrrep, repB: DoubleIrrep, state) -> TensorState:
    """``(R Phi)(x, y) = sigma Phi(y, y g_A^-1 y^-1 x)``, a state of ``(B, A)``."""
    G = repA.group
    Phi = _as_values(state)
    cinv = G.inverse[repA.class_elems[repA.coset_index]]        # y g_A^-1 y^-1
    second = G.mult[cinv[None, :], np.arange(G.order)[:, None]]  # [x, y]
    moved = Phi[np.arange(G.order)[None, :], second]
    return TensorState(repB, repA, _swap(moved, repA.d_alpha, repB.d_alpha))


def braid_inverse(repA: DoubleIrrep, repB: DoubleIrrep, state) -> TensorState:
    """Inverse of :func:`braid`: takes a ``(B, A)`` state back to ``(A, B)``."""
    G = repA.group
    Psi = _as_values(state)
    c = repA.class_elems[repA.coset_index]                       # x g_A x^-1
    first = G.mult[c[:, None], np.arange(G.order)[None, :]]      # [x, y]
    moved = Psi[first, np.arange(G.order)[:, None]]
    return TensorState(repA, repB, _swap(moved, repB.d_alpha, repA.d_alpha))


def braid_intertwiner_defect(repA: DoubleIrrep, repB: DoubleIrrep,
                             states: Optional[np.ndarray] = None) -> float:
    """Max over point masses F and states of ``|R (F Phi) - F (R Phi)|``."""
    G = repA.group
    if states is None:
        states = tensor_basis(repA, repB)
    worst = 0.0
    for Phi in states:
        R_Phi = braid(repA, repB, Phi)
        for g in range(G.order):
            for x in range(G.order):
                F = point_mass(G, g, x)
                lhs = braid(repA, repB, tensor_apply(repA, repB, F, Phi, check=False))
                rhs = tensor_apply(repB, repA, F, R_Phi, check=False)
                worst = max(worst, _maxabs(lhs.values - rhs.values))
    return worst


# --------------------------------------------------------------------------
# decomposition of tensor products


def central_character(repA: DoubleIrrep, repB: DoubleIrrep) -> Dict[int, complex]:
    """``omega(z)`` with ``alpha(z) (x) beta(z) = omega(z) id`` on the centre."""
    return {z: complex(repA.alpha(z)[0, 0] * repB.alpha(z)[0, 0]) for z in repA.group.center}


def gamma_allowed(repA: DoubleIrrep, repB: DoubleIrrep, gamma: SubgroupIrrep,
                  atol: float = 1e-10) -> bool:
    om = central_character(repA, repB)
    return all(np.allclose(gamma(z), om[z] * np.eye(gamma.dim), atol=atol) for z in om)


def rho_component(repA: DoubleIrrep, repB: DoubleIrrep, xi: int, gamma: SubgroupIrrep,
                  k: int, l: int, j: int, state, dc=None) -> np.ndarray:
    """``(rho Phi)_i(x) = avg_{n in N_C} gamma_ij(n) Phi_kl(x n w^-1, x n w^-1 y)``.

    Returns an ``(n, d_gamma)`` array over all ``x``.
    """
    G = repA.group
    if dc is None:
        dc = double_cosets(G, repA.cls, repB.cls)
    C = conjugacy_classes(G)[dc.target[xi]]
    if tuple(gamma.subgroup) != tuple(C.centralizer):
        raise GroupError("gamma must be an irrep of N_C for the class of this double coset")
    if not gamma_allowed(repA, repB, gamma):
        raise ZeroSectorError(
            f"gamma {gamma.label} does not restrict to omega on the centre; component vanishes")
    Phi = _as_values(state)
    kl = k * repB.d_alpha + l
    vals = _rho_values(G, dc, xi, C, gamma, Phi[None, ..., kl:kl + 1], np.arange(G.order))
    return vals[0, :, :, j, 0]


def _rho_values(G: FiniteGroup, dc, xi: int, C: ConjugacyClass, gamma: SubgroupIrrep,
                Phis: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Batched projections: returns ``(B, len(xs), d_gamma(i), d_gamma(j), D)``."""
    m, inv = G.mult, G.inverse
    NC = np.array(C.centralizer)
    w, y = dc.w[xi], dc.rep[xi]
    u = m[m[xs[:, None], NC[None, :]], inv[w]]          # x n w^-1
    v = m[u, y]
    vals = Phis[:, u, v, :]                               # (B, X, |N|, D)
    return np.einsum("nij,bxnd->bxijd", gamma.matrices, vals) / len(NC)


def isometry_sides(repA: DoubleIrrep, repB: DoubleIrrep, state, dc=None,
                   prefactor: float = 1.0) -> Tuple[float, float]:
    """Both sides of the norm identity for the decomposition map.

    Right side is ``sum_p int_C sum_gamma d_gamma sum_{k,l,j,i} ||rho Phi||^2``
    with the normalized measure ``mu(xi) = |xi|/|G|`` split as
    ``nu(C) p^C(xi)``. ``prefactor`` multiplies the right side.
    """
    G = repA.group
    if dc is None:
        dc = double_cosets(G, repA.cls, repB.cls)
    Phi = _as_values(state)
    classes = conjugacy_classes(G)
    mu = dc.measure
    nu: Dict[int, float] = {}
    for k, c in enumerate(dc.target):
        nu[c] = nu.get(c, 0.0) + mu[k]
    strata: Dict[Tuple[int, ...], List[int]] = {}
    for c in nu:
        strata.setdefault(classes[c].centralizer, []).append(c)
    xs = np.arange(G.order)
    rhs = 0.0
    for Np, cs in strata.items():                         # sum over p
        gammas = [g for g in centralizer_irreps(G, Np) if gamma_allowed(repA, repB, g)]
        for c in cs:                                      # integral over Conj_p against nu
            inner = 0.0
            for k in (k for k, t in enumerate(dc.target) if t == c):
                pC = mu[k] / nu[c]
                for gam in gammas:
                    vals = _rho_values(G, dc, k, classes[c], gam, Phi[None], xs)[0]
                    inner += pC * gam.dim * np.sum(np.abs(vals) ** 2) / G.order
            rhs += nu[c] * inner
    lhs = float(np.mean(np.sum(np.abs(Phi) ** 2, axis=-1)))
    return lhs, prefactor * rhs


def _multiplicities_rank(repA: DoubleIrrep, repB: DoubleIrrep, tiebreak: str = "min"):
    G = repA.group
    classes = conjugacy_classes(G)
    dc = double_cosets(G, repA.cls, repB.cls, tiebreak=tiebreak)
    basis = tensor_basis(repA, repB)
    out: Dict[Tuple[int, int], int] = {}
    for c in sorted(set(dc.target)):
        C = classes[c]
        reps, _, _, _ = coset_reps(G, C)
        xis = [k for k, t in enumerate(dc.target) if t == c]
        for gi, gam in enumerate(centralizer_irreps(G, C.centralizer)):
            if not gamma_allowed(repA, repB, gam):
                continue
            blocks = []
            for xi in xis:
                vals = _rho_values(G, dc, xi, C, gam, basis, reps)   # (B, cos, i, j, D)
                blocks.append(vals.reshape(vals.shape[0], -1))
            Mt = np.concatenate(blocks, axis=1)
            s = np.linalg.svd(Mt, compute_uv=False)
            rank = int(np.sum(s > 1e-9 * max(1.0, s[0] if s.size else 0.0)))
            size = C.size * gam.dim
            if rank % size:
                raise FusionDisagreement(f"rank {rank} not a multiple of {size} for {C.label}:{gam.label}")
            if rank:
                out[(c, gi)] = rank // size
    return out


def _multiplicities_character(repA: DoubleIrrep, repB: DoubleIrrep):
    G = repA.group
    n = G.order
    chiA, chiB = repA.character_table(), repB.character_table()
    m, inv = G.mult, G.inverse
    # chi_{A(x)B}(g, x) = sum_{g1} chiA(g1, x) chiB(g1^-1 g, x)
    idx = m[inv[:, None], np.arange(n)[None, :]]          # [g1, g] -> g1^-1 g
    chiAB = np.einsum("ax,agx->gx", chiA, chiB[idx])
    out: Dict[Tuple[int, int], int] = {}
    for r in all_irreps(G):
        val = np.sum(np.conj(r.character_table()) * chiAB) / n
        N = int(round(val.real))
        if abs(val - N) > 1e-8:
            raise FusionDisagreement(f"non-integral character multiplicity {val} for {r.label}")
        if N:
            out[(r.cls.index, r.alpha_index)] = N
    return out


def fusion_multiplicities(repA: DoubleIrrep, repB: DoubleIrrep,
                          tiebreak: str = "min") -> Dict[Tuple[int, int], int]:
    """Nonzero ``N`` keyed by ``(class index, centralizer-irrep index)``.

    Computed from ranks of the projections and from characters; any
    difference raises :class:`FusionDisagreement`.
    """
    by_rank = _multiplicities_rank(repA, repB, tiebreak)
    by_char = _multiplicities_character(repA, repB)
    if by_rank != by_char:
        raise FusionDisagreement(
            f"{repA.label} x {repB.label}: rank {by_rank} != character {by_char}")
    G = repA.group
    dims = {(r.cls.index, r.alpha_index): r.dim for r in all_irreps(G)}
    total = sum(N * dims[key] for key, N in by_rank.items())
    if total != repA.dim * repB.dim:
        raise FusionDisagreement(f"dimension sum {total} != {repA.dim * repB.dim}")
    return by_rank


@dataclass
class FusionRow:
    a: str
    b: str
    c: str
    n: int


def fusion_table(group: FiniteGroup, include_zero: bool = False,
                 tiebreak: str = "min") -> List[FusionRow]:
    reps = all_irreps(group)
    lookup = {(r.cls.index, r.alpha_index): r for r in reps}
    rows = []
    for ra in reps:
        for rb in reps:
            N = fusion_multiplicities(ra, rb, tiebreak)
            for key, rc in lookup.items():
                if N.get(key, 0) or include_zero:
                    rows.append(FusionRow(ra.label, rb.label, rc.label, N.get(key, 0)))
    return rows
