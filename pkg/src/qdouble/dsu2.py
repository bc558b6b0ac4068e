"""Generic tensor products of D(SU(2)) irreps.

An irrep ``Pi^r_n`` has ``0 < r < 2pi`` (class of ``g_r``) and a half-integer
``n`` (character of the centralizer U(1)); ``n`` is stored doubled. The double
coset of ``a_theta`` fuses to the class ``r3 = lambda(theta)`` with conjugator
``w(theta) = g_{phi_w} a_{theta_w}``. All ``r3`` integrals are done as
``theta`` integrals against ``sin(theta) dtheta / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .su2 import (FOUR_PI, TWO_PI, a_theta, euler_matrix, g_phi, gauss_legendre,
                  haar_quadrature, su2_cgc, wigner_D_batch, wigner_D_euler, wigner_d_matrix)


class SelectionRuleError(ValueError):
    """``n3`` is not congruent to ``n1 + n2`` modulo the integers."""


@dataclass(frozen=True)
class GenericIrrepLabel:
    r: float
    twon: int

    def __post_init__(self):
        if not 0.0 < self.r < TWO_PI:
            raise ValueError(f"r = {self.r} is not generic; need 0 < r < 2pi")
        if int(self.twon) != self.twon:
            raise ValueError("twon must be an integer (twice the half-integer n)")

    @property
    def n(self) -> float:
        return self.twon / 2


def fusion_interval(r1: float, r2: float) -> Tuple[float, float]:
    """``[|r1 - r2|, min(r1 + r2, 4pi - r1 - r2)]``."""
    return abs(r1 - r2), min(r1 + r2, FOUR_PI - r1 - r2)


def _v(r1, r2, theta):
    s1, c1 = np.sin(r1 / 2), np.cos(r1 / 2)
    s2, c2 = np.sin(r2 / 2), np.cos(r2 / 2)
    ct, st = np.cos(theta), np.sin(theta)
    v = np.stack(np.broadcast_arrays(s1 * c2 + ct * c1 * s2, st * c1 * s2, st * s1 * s2), axis=-1)
    return c1 * c2 - ct * s1 * s2, v


def lambda_map(r1: float, r2: float, theta):
    """``r3`` with ``cos(r3/2) = cos(r1/2)cos(r2/2) - cos(theta) sin(r1/2) sin(r2/2)``.

    Evaluated as ``2 atan2(|v|, cos(r3/2))`` where ``v`` is the vector part of
    ``g_r1 a_theta g_r2 a_theta^-1``, so no clamping is needed. Decreasing in
    ``theta``.
    """
    c, v = _v(r1, r2, np.asarray(theta, dtype=np.float64))
    return 2.0 * np.arctan2(np.linalg.norm(v, axis=-1), c)


def theta_from_r3(r1: float, r2: float, r3, tol: float = 1e-12):
    """Inverse of :func:`lambda_map` on the fusion interval."""
    lo, hi = fusion_interval(r1, r2)
    r3 = np.asarray(r3, dtype=np.float64)
    if np.any(r3 < lo - tol) or np.any(r3 > hi + tol):
        raise ValueError(f"r3 outside the fusion interval [{lo}, {hi}]")
    x = (np.cos(r1 / 2) * np.cos(r2 / 2) - np.cos(r3 / 2)) / (np.sin(r1 / 2) * np.sin(r2 / 2))
    if np.any(np.abs(x) > 1 + 1e-9):
        raise ValueError("r3 does not correspond to any double coset")
    return np.arccos(np.clip(x, -1.0, 1.0))


def nu_density(r1: float, r2: float, r3):
    """Density of the fusion measure on ``I``; zero outside."""
    lo, hi = fusion_interval(r1, r2)
    r3 = np.asarray(r3, dtype=np.float64)
    dens = np.sin(r3 / 2) / (4.0 * np.sin(r1 / 2) * np.sin(r2 / 2))
    return np.where((r3 >= lo) & (r3 <= hi), dens, 0.0)


def nu_mass(r1: float, r2: float, order: int = 32) -> float:
    lo, hi = fusion_interval(r1, r2)
    x, w = gauss_legendre(order)
    r3 = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    return float(0.5 * (hi - lo) * np.sum(w * nu_density(r1, r2, r3)))


def w_angles(r1: float, r2: float, theta, eps: float = 1e-9):
    """``(phi_w, theta_w)`` of the conjugator, from the unit vector ``n_w``."""
    _, v = _v(r1, r2, np.asarray(theta, dtype=np.float64))
    nv = np.linalg.norm(v, axis=-1)
    if np.any(nv < eps):
        raise ValueError("degenerate channel: sin(r3/2) vanishes, w(theta) undefined")
    nhat = v / nv[..., None]
    theta_w = np.arccos(np.clip(nhat[..., 0], -1.0, 1.0))
    phi_w = np.arctan2(nhat[..., 2], nhat[..., 1]) % TWO_PI
    return phi_w, theta_w


def w_of_theta(r1: float, r2: float, theta: float) -> np.ndarray:
    """``w(theta) = g_{phi_w} a_{theta_w}`` with ``w g_r3 w^-1 = g_r1 a g_r2 a^-1``."""
    phi_w, theta_w = w_angles(r1, r2, theta)
    return euler_matrix(float(phi_w), float(theta_w), 0.0)


def w_of_theta_batch(r1: float, r2: float, theta) -> np.ndarray:
    phi_w, theta_w = w_angles(r1, r2, theta)
    c, s = np.cos(theta_w / 2), np.sin(theta_w / 2)
    e = np.exp(0.5j * phi_w)
    M = np.empty(np.shape(theta_w) + (2, 2), dtype=np.complex128)
    M[..., 0, 0] = e * c
    M[..., 0, 1] = -e * s
    M[..., 1, 0] = s / e
    M[..., 1, 1] = c / e
    return M


@dataclass
class FusionChannel:
    r3: float
    theta: float
    twon3: int
    nu: float

    def rs_defect(self, r1: float, r2: float) -> float:
        lhs = np.cos(self.r3 / 2)
        rhs = np.cos(r1 / 2) * np.cos(r2 / 2) - np.cos(self.theta) * np.sin(r1 / 2) * np.sin(r2 / 2)
        return float(abs(lhs - rhs))


def fusion_channel(a: GenericIrrepLabel, b: GenericIrrepLabel, twon3: int, r3: float) -> FusionChannel:
    check_selection(a, b, twon3)
    th = float(theta_from_r3(a.r, b.r, r3))
    return FusionChannel(float(r3), th, twon3, float(nu_density(a.r, b.r, r3)))


def check_selection(a: GenericIrrepLabel, b: GenericIrrepLabel, twon3: int) -> None:
    if (twon3 - a.twon - b.twon) % 2:
        raise SelectionRuleError(
            f"n3 = {twon3}/2 must differ from n1 + n2 = {(a.twon + b.twon)}/2 by an integer")


# --------------------------------------------------------------------------
# Clebsch-Gordan coefficients


@dataclass
class Gauge:
    """Alternative sections ``a_theta -> g_phi a_theta g_psi``, ``w -> g_phi w g_zeta``."""

    phi: float = 0.0
    psi: float = 0.0
    zeta: float = 0.0


def _check_state(twoj, twom, twon, what):
    if twoj < abs(twon) or abs(twom) > twoj or (twoj - twom) % 2 or (twoj - twon) % 2:
        raise ValueError(f"invalid {what} quantum numbers (2j={twoj}, 2m={twom}, 2n={twon})")


def cgc_theta(a: GenericIrrepLabel, b: GenericIrrepLabel, twon3: int,
              twoj1: int, twom1: int, twoj2: int, twom2: int, twoj: int, twom: int,
              theta, gauge: Optional[Gauge] = None) -> np.ndarray:
    """Generalized CG coefficient as a function of the double-coset angle."""
    check_selection(a, b, twon3)
    _check_state(twoj1, twom1, a.twon, "first factor")
    _check_state(twoj2, twom2, b.twon, "second factor")
    theta = np.asarray(theta, dtype=np.float64)
    out = np.zeros(theta.shape, dtype=np.complex128)
    if twom != twom1 + twom2 or abs(twon3) > twoj or abs(twom) > twoj or (twoj - twon3) % 2:
        return out
    if not abs(twoj1 - twoj2) <= twoj <= twoj1 + twoj2:
        return out
    n1 = a.twon
    if gauge is None:
        D2 = wigner_d_matrix(twoj2, theta).astype(np.complex128)
        Dw = wigner_D_euler(twoj, *w_angles(a.r, b.r, theta), np.zeros_like(theta))
    else:
        ys = np.stack([g_phi(gauge.phi) @ a_theta(t) @ g_phi(gauge.psi) for t in theta.ravel()])
        ws = g_phi(gauge.phi) @ w_of_theta_batch(a.r, b.r, theta.ravel()) @ g_phi(gauge.zeta)
        D2 = wigner_D_batch(twoj2, ys).reshape(theta.shape + (twoj2 + 1,) * 2)
        Dw = wigner_D_batch(twoj, ws).reshape(theta.shape + (twoj + 1,) * 2)
    c1 = su2_cgc(twoj1, twom1, twoj2, twom2, twoj, twom)
    if c1 == 0.0:
        return out
    col2 = (twoj2 - b.twon) // 2
    coln3 = (twoj - twon3) // 2
    for twop2 in range(max(-twoj - n1, -twoj2), min(twoj - n1, twoj2) + 1, 2):
        q = n1 + twop2
        c2 = su2_cgc(twoj1, n1, twoj2, twop2, twoj, q)
        if c2 == 0.0:
            continue
        out += c1 * c2 * D2[..., (twoj2 - twop2) // 2, col2] * np.conj(Dw[..., (twoj - q) // 2, coln3])
    return out


def dsu2_cgc(a: GenericIrrepLabel, b: GenericIrrepLabel, twon3: int,
             twoj1: int, twom1: int, twoj2: int, twom2: int, twoj: int, twom: int,
             r3: float, gauge: Optional[Gauge] = None) -> complex:
    """``<(r1,n1) j1 m1, (r2,n2) j2 m2 | (r3,n3) j m>`` at a point of the fusion interval."""
    check_selection(a, b, twon3)
    lo, hi = fusion_interval(a.r, b.r)
    if not lo < r3 < hi:
        raise ValueError(f"r3 must lie inside the open fusion interval ({lo}, {hi})")
    th = theta_from_r3(a.r, b.r, r3)
    return complex(cgc_theta(a, b, twon3, twoj1, twom1, twoj2, twom2, twoj, twom, th, gauge))


def j_range(twoj1: int, twoj2: int, twom: int, twon3: int) -> List[int]:
    """Doubled ``j`` values carrying ``D^j_{m n3}``: ``max(|j1-j2|, |m|, |n3|) .. j1+j2``."""
    lo = max(abs(twoj1 - twoj2), abs(twom), abs(twon3))
    if (lo - (twoj1 + twoj2)) % 2:
        lo += 1
    return list(range(lo, twoj1 + twoj2 + 1, 2))


def rho_apply(a: GenericIrrepLabel, b: GenericIrrepLabel, twon3: int, r3: float,
              twoj1: int, twom1: int, twoj2: int, twom2: int,
              gauge: Optional[Gauge] = None) -> List[Tuple[int, int, complex]]:
    """Expansion ``rho(D^j1_{m1 n1} (x) D^j2_{m2 n2}) = sum_j c_j D^j_{m n3}``.

    Returns ``[(2j, 2m, c_j), ...]`` with ``m = m1 + m2``.
    """
    twom = twom1 + twom2
    return [(tj, twom, dsu2_cgc(a, b, twon3, twoj1, twom1, twoj2, twom2, tj, twom, r3, gauge))
            for tj in j_range(twoj1, twoj2, twom, twon3)]


def zeta_quadrature_coefficients(a: GenericIrrepLabel, b: GenericIrrepLabel, twon3: int,
                                 twoj1: int, twom1: int, twoj2: int, twom2: int, theta: float,
                                 nzeta: int = 4096, nbeta: int = 16) -> Dict[int, complex]:
    """Expansion coefficients of ``rho`` from the U(1) integral itself.

    ``(rho Phi)(x) = avg_zeta e^{i n3 zeta} Phi(x g_zeta w^-1, x g_zeta w^-1 a_theta)``
    is sampled at ``x = a_beta`` and projected on ``d^j_{m n3}(beta)``.
    """
    check_selection(a, b, twon3)
    zeta = -TWO_PI + FOUR_PI * np.arange(nzeta) / nzeta
    xb, wb = gauss_legendre(nbeta)
    beta = np.arccos(xb)
    w_inv = w_of_theta(a.r, b.r, theta).conj().T
    at = a_theta(theta)
    gz = np.zeros((nzeta, 2, 2), dtype=np.complex128)
    gz[:, 0, 0] = np.exp(0.5j * zeta)
    gz[:, 1, 1] = np.exp(-0.5j * zeta)
    phase = np.exp(0.5j * twon3 * zeta)
    i1, k1 = (twoj1 - twom1) // 2, (twoj1 - a.twon) // 2
    i2, k2 = (twoj2 - twom2) // 2, (twoj2 - b.twon) // 2
    f = np.empty(nbeta, dtype=np.complex128)
    for t, be in enumerate(beta):
        u = a_theta(be) @ gz @ w_inv
        vals = wigner_D_batch(twoj1, u)[:, i1, k1] * wigner_D_batch(twoj2, u @ at)[:, i2, k2]
        f[t] = np.mean(phase * vals)
    twom = twom1 + twom2
    out = {}
    for tj in j_range(twoj1, twoj2, twom, twon3):
        d = wigner_d_matrix(tj, beta)[:, (tj - twom) // 2, (tj - twon3) // 2]
        out[tj] = complex((tj + 1) * 0.5 * np.sum(wb * f * d))
    return out


# --------------------------------------------------------------------------
# orthogonality


@dataclass
class GramReport:
    twojmax: int
    order: int
    max_defect: float
    refinement: float
    states: List[Tuple[int, int, int, int]] = field(default_factory=list)
    gram: Dict[int, np.ndarray] = field(default_factory=dict)

    def diagonal(self) -> Dict[Tuple[int, int, int, int], float]:
        out = {}
        for twom, G in self.gram.items():
            sts = [s for s in self.states if s[1] + s[3] == twom]
            for k, s in enumerate(sts):
                out[s] = float(G[k, k].real)
        return out


def _states(a: GenericIrrepLabel, b: GenericIrrepLabel, twojmax: int):
    out = []
    for tj1 in range(abs(a.twon), twojmax + 1, 2):
        for tj2 in range(abs(b.twon), twojmax + 1, 2):
            for tm1 in range(-tj1, tj1 + 1, 2):
                for tm2 in range(-tj2, tj2 + 1, 2):
                    out.append((tj1, tm1, tj2, tm2))
    return out


def _gram(a, b, twojmax, order, gauge):
    x, w = gauss_legendre(order)
    theta = np.arccos(x)
    wt = w / 2
    states = _states(a, b, twojmax)
    n3s = range(-2 * twojmax, 2 * twojmax + 1)
    n3s = [t for t in n3s if (t - a.twon - b.twon) % 2 == 0]
    grams = {}
    for twom in sorted({s[1] + s[3] for s in states}):
        sts = [s for s in states if s[1] + s[3] == twom]
        blocks = []
        for (tj1, tm1, tj2, tm2) in sts:
            row = []
            for tn3 in n3s:
                for tj in range(0, 4 * twojmax + 1):
                    c = cgc_theta(a, b, tn3, tj1, tm1, tj2, tm2, tj, twom, theta, gauge)
                    row.append(c * np.sqrt(wt / (tj + 1)))
            blocks.append(np.concatenate(row))
        Mx = np.array(blocks)
        grams[twom] = Mx @ Mx.conj().T
    return states, grams


def orthogonality_gram(a: GenericIrrepLabel, b: GenericIrrepLabel, twojmax: int,
                       order: int = 64, gauge: Optional[Gauge] = None) -> GramReport:
    """Gram matrix of the generalized CG coefficients against the expected
    ``delta / ((2j1+1)(2j2+1))``, blockwise in the total ``m``.

    ``refinement`` is the change when the order is doubled; it should be far
    below the defect tolerance or the order is too small.
    """
    if order < 8:
        raise ValueError("quadrature order must be at least 8")
    states, grams = _gram(a, b, twojmax, order, gauge)
    _, fine = _gram(a, b, twojmax, 2 * order, gauge)
    worst = 0.0
    for twom, G in grams.items():
        sts = [s for s in states if s[1] + s[3] == twom]
        target = np.diag([1.0 / ((s[0] + 1) * (s[2] + 1)) for s in sts])
        worst = max(worst, float(np.abs(G - target).max()))
    refinement = max(float(np.abs(grams[m] - fine[m]).max()) for m in grams)
    return GramReport(twojmax, order, worst, refinement, states, grams)


# --------------------------------------------------------------------------
# states, braiding and characters


def wigner_state(twoj1: int, twom1: int, twon1: int, twoj2: int, twom2: int, twon2: int):
    """``Phi(x, y) = D^j1_{m1 n1}(x) D^j2_{m2 n2}(y)`` on matrix stacks."""
    i1, k1 = (twoj1 - twom1) // 2, (twoj1 - twon1) // 2
    i2, k2 = (twoj2 - twom2) // 2, (twoj2 - twon2) // 2

    def Phi(x, y):
        return wigner_D_batch(twoj1, x)[..., i1, k1] * wigner_D_batch(twoj2, y)[..., i2, k2]

    return Phi


def random_band_limited(twomax: int, rng=None) -> Callable:
    """``F(u, v) = sum c D^a_{pq}(u) D^b_{st}(v)`` over all ``a, b <= twomax/2``
    with complex Gaussian coefficients."""
    rng = np.random.default_rng(rng)
    coef = {(ta, tb): rng.standard_normal((ta + 1,) * 2 + (tb + 1,) * 2)
            + 1j * rng.standard_normal((ta + 1,) * 2 + (tb + 1,) * 2)
            for ta in range(twomax + 1) for tb in range(twomax + 1)}

    def F(u, v):
        out = 0.0
        for (ta, tb), c in coef.items():
            out = out + np.einsum("...pq,...st,pqst->...", wigner_D_batch(ta, u),
                                  wigner_D_batch(tb, v), c)
        return out

    return F


def braid_eval(a: GenericIrrepLabel, b: GenericIrrepLabel, Phi: Callable, x, y):
    """``(R Phi)(x, y) = sigma Phi(y, y g_r1^-1 y^-1 x)``; ``sigma`` is trivial on 1-dim spaces."""
    x, y = np.asarray(x), np.asarray(y)
    yinv = np.conj(np.swapaxes(y, -1, -2))
    return Phi(y, y @ g_phi(-a.r) @ yinv @ x)


def braid_inverse_eval(a: GenericIrrepLabel, b: GenericIrrepLabel, Psi: Callable, x, y):
    """Inverse braid: ``Phi(x, y) = sigma Psi(x g_r1 x^-1 y, x)``."""
    x, y = np.asarray(x), np.asarray(y)
    xinv = np.conj(np.swapaxes(x, -1, -2))
    return Psi(x @ g_phi(a.r) @ xinv @ y, x)


def tensor_apply_su2(a: GenericIrrepLabel, b: GenericIrrepLabel, F: Callable, Phi: Callable,
                     x, y, rule) -> complex:
    """``avg_z F(x g_r1 x^-1 y g_r2 y^-1, z) Phi(z^-1 x, z^-1 y)`` by quadrature in ``z``."""
    Z = rule.matrices()
    Zinv = np.conj(np.swapaxes(Z, -1, -2))
    key = x @ g_phi(a.r) @ x.conj().T @ y @ g_phi(b.r) @ y.conj().T
    vals = F(np.broadcast_to(key, Z.shape), Z) * Phi(Zinv @ x, Zinv @ y)
    return complex(rule.integrate(vals))


def braid_intertwiner_defect(a: GenericIrrepLabel, b: GenericIrrepLabel, F: Callable,
                             Phi: Callable, points, order: int = 32) -> float:
    """Max over sample points of ``|R(F . Phi) - F . (R Phi)|``."""
    rule = haar_quadrature(order, order, 2 * order)

    def FPhi(u, v):
        u = np.asarray(u).reshape(-1, 2, 2)
        v = np.asarray(v).reshape(-1, 2, 2)
        return np.array([tensor_apply_su2(a, b, F, Phi, s, t, rule) for s, t in zip(u, v)])

    def RPhi(u, v):
        return braid_eval(a, b, Phi, u, v)

    worst = 0.0
    for x, y in points:
        lhs = braid_eval(a, b, FPhi, x[None], y[None])[0]
        rhs = tensor_apply_su2(b, a, F, RPhi, x, y, rule)
        worst = max(worst, abs(lhs - rhs))
    return worst


def character_su2(label: GenericIrrepLabel, f1: Callable, f2: Callable,
                  order: int = 16, nzeta: Optional[int] = None) -> complex:
    """``chi^r_n(f1 (x) f2) = int int f1(z g_r z^-1) f2(z g_zeta z^-1) e^{i n zeta}``.

    ``f1`` and ``f2`` take stacks of 2x2 matrices. The zeta average is over
    ``[-2pi, 2pi)``.
    """
    rule = haar_quadrature(order, order, 2 * order)
    Z = rule.matrices()
    Zinv = np.conj(np.swapaxes(Z, -1, -2))
    nzeta = nzeta or 4 * order
    zeta = -TWO_PI + FOUR_PI * np.arange(nzeta) / nzeta
    A = f1(Z @ g_phi(label.r) @ Zinv)                             # (Q,)
    gz = np.zeros((nzeta, 2, 2), dtype=np.complex128)
    gz[:, 0, 0] = np.exp(0.5j * zeta)
    gz[:, 1, 1] = np.exp(-0.5j * zeta)
    conj = Z[:, None] @ gz[None] @ Zinv[:, None]                  # (Q, T, 2, 2)
    B = f2(conj.reshape(-1, 2, 2)).reshape(len(rule), nzeta)
    inner = B @ np.exp(0.5j * label.twon * zeta) / nzeta
    return complex(rule.integrate(A * inner))
