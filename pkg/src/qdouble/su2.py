"""SU(2): Euler angles, Wigner functions, Clebsch-Gordan coefficients, quadrature.

Conventions
-----------
``g = g_phi a_theta g_psi`` with ``g_phi = diag(e^{i phi/2}, e^{-i phi/2})``
and ``a_theta = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]``; ranges
``phi in [0, 2pi)``, ``theta in [0, pi]``, ``psi in [-2pi, 2pi)``.

``D^j_{mn}(g) = e^{-i m phi} d^j_{mn}(theta) e^{-i n psi}``. Matrix index
``a`` corresponds to ``m = j - a``. Half-integers are passed as doubled
integers (``twoj``, ``twom``, ...) everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial, sqrt
from typing import Tuple

import numpy as np

from . import _backend

TWO_PI = 2.0 * np.pi
FOUR_PI = 4.0 * np.pi

# Pauli-type basis with n = (1, 0, 0) giving the diagonal generator
TAU = np.array([
    [[1, 0], [0, -1]],
    [[0, 1], [1, 0]],
    [[0, 1j], [-1j, 0]],
], dtype=np.complex128)


def g_phi(phi) -> np.ndarray:
    return np.diag([np.exp(0.5j * phi), np.exp(-0.5j * phi)])


def a_theta(theta) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def euler_matrix(phi, theta, psi) -> np.ndarray:
    return g_phi(phi) @ a_theta(theta) @ g_phi(psi)


def _wrap(v, lo, period):
    return (v - lo) % period + lo


def to_euler(mat) -> Tuple[float, float, float]:
    """Euler angles of an SU(2) matrix.

    At the gimbal points (``theta`` 0 or ``pi``) only one combination of
    ``phi`` and ``psi`` is determined. There ``psi`` is taken from
    ``{0, -2pi}`` (``-2pi`` supplies the sign ``g_{-2pi} = -1`` that ``phi``
    alone cannot) and the rest goes into ``phi``.
    """
    M = np.asarray(mat, dtype=np.complex128)
    a, b = M[0, 0], M[0, 1]
    theta = 2.0 * np.arctan2(abs(b), abs(a))
    if abs(b) < 1e-12:                         # a_theta = 1: g = diag(e^{i(phi+psi)/2}, ...)
        s = 2.0 * np.angle(a)                  # phi + psi mod 4pi
        phi = s % TWO_PI
        psi = 0.0 if abs(_wrap(s - phi, -TWO_PI, FOUR_PI)) < 1.0 else -TWO_PI
        return float(phi), 0.0, psi
    if abs(a) < 1e-12:                         # theta = pi: a = 0, b = -e^{i(phi-psi)/2}
        d = 2.0 * np.angle(-b)                 # phi - psi mod 4pi
        phi = d % TWO_PI
        psi = 0.0 if abs(_wrap(d - phi, -TWO_PI, FOUR_PI)) < 1.0 else -TWO_PI
        return float(phi), float(np.pi), psi
    # a = c e^{i(phi+psi)/2}, b = -s e^{i(phi-psi)/2}
    phi = (np.angle(a) + np.angle(-b)) % TWO_PI
    psi = _wrap(2.0 * np.angle(a) - phi, -TWO_PI, FOUR_PI)
    return float(phi), float(theta), float(psi)


@dataclass(frozen=True)
class SU2Element:
    """A point of SU(2) kept both as Euler angles and as a 2x2 matrix."""

    phi: float
    theta: float
    psi: float
    matrix: np.ndarray

    @property
    def euler(self) -> Tuple[float, float, float]:
        return (self.phi, self.theta, self.psi)

    def __matmul__(self, other: "SU2Element") -> "SU2Element":
        return from_matrix(self.matrix @ other.matrix)

    def inv(self) -> "SU2Element":
        return from_matrix(self.matrix.conj().T)

    def defect(self) -> float:
        """Unitarity, determinant and Euler-reconstruction defects (max)."""
        M = self.matrix
        return float(max(np.abs(M @ M.conj().T - np.eye(2)).max(),
                         abs(np.linalg.det(M) - 1.0),
                         np.abs(euler_matrix(*self.euler) - M).max()))


def from_euler(phi: float, theta: float, psi: float) -> SU2Element:
    if not 0.0 <= theta <= np.pi:
        raise ValueError("theta must lie in [0, pi]")
    return SU2Element(float(phi % TWO_PI), float(theta), float(_wrap(psi, -TWO_PI, FOUR_PI)),
                      euler_matrix(phi, theta, psi))


def from_matrix(mat) -> SU2Element:
    M = np.asarray(mat, dtype=np.complex128)
    phi, theta, psi = to_euler(M)
    return SU2Element(phi, theta, psi, M)


def direction(theta: float, phi: float) -> np.ndarray:
    """Unit vector ``(cos t, sin t cos p, sin t sin p)``."""
    return np.array([np.cos(theta), np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi)])


def from_axis_angle(r: float, theta: float, phi: float) -> SU2Element:
    """``exp(i r/2 n(theta, phi) . tau) = cos(r/2) + i sin(r/2) n . tau``."""
    n = direction(theta, phi)
    M = np.cos(r / 2) * np.eye(2) + 1j * np.sin(r / 2) * np.einsum("k,kab->ab", n, TAU)
    return from_matrix(M)


def random_element(rng=None) -> SU2Element:
    """Haar-random element (normalized Gaussian quaternion)."""
    rng = np.random.default_rng(rng)
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    a, b = q[0] + 1j * q[1], q[2] + 1j * q[3]
    return from_matrix(np.array([[a, -np.conj(b)], [b, np.conj(a)]]))


# --------------------------------------------------------------------------
# half-integers


@dataclass(frozen=True, order=True)
class HalfInt:
    """A half-integer stored as twice its value."""

    twice: int

    @classmethod
    def of(cls, value) -> "HalfInt":
        t = 2 * value
        if abs(t - round(t)) > 1e-12:
            raise ValueError(f"{value} is not a half-integer")
        return cls(int(round(t)))

    @property
    def value(self) -> float:
        return self.twice / 2

    def __str__(self) -> str:
        return str(self.twice // 2) if self.twice % 2 == 0 else f"{self.twice}/2"


def check_triple(twoj: int, twom: int, twon: int) -> None:
    if twoj < 0:
        raise ValueError("j must be non-negative")
    for t, nm in ((twom, "m"), (twon, "n")):
        if abs(t) > twoj:
            raise ValueError(f"|{nm}| exceeds j")
        if (twoj - t) % 2:
            raise ValueError(f"j and {nm} must both be integer or both half-integer")


# --------------------------------------------------------------------------
# Wigner functions


def wigner_d_matrix(twoj: int, theta) -> np.ndarray:
    """``d^j(theta)`` for scalar or array ``theta``; shape ``(..., 2j+1, 2j+1)``."""
    th = np.asarray(theta, dtype=np.float64)
    out = _backend.wigner_d_table(int(twoj), th.ravel())
    return out.reshape(th.shape + out.shape[1:])


def wigner_d(twoj: int, twom: int, twon: int, theta):
    """Small-d function ``d^j_{mn}(theta)``."""
    check_triple(twoj, twom, twon)
    a, b = (twoj - twom) // 2, (twoj - twon) // 2
    return wigner_d_matrix(twoj, theta)[..., a, b]


def _mvals(twoj: int) -> np.ndarray:
    """``m`` values in matrix order (descending), as floats."""
    return (twoj - 2 * np.arange(twoj + 1)) / 2.0


def wigner_D_euler(twoj: int, phi, theta, psi) -> np.ndarray:
    m = _mvals(twoj)
    phi, theta, psi = (np.asarray(v, dtype=np.float64) for v in (phi, theta, psi))
    d = wigner_d_matrix(twoj, theta)
    left = np.exp(-1j * m * phi[..., None])
    right = np.exp(-1j * m * psi[..., None])
    return left[..., :, None] * d * right[..., None, :]


def wigner_D_matrix(twoj: int, g) -> np.ndarray:
    """Full ``D^j(g)`` for an :class:`SU2Element` or a 2x2 matrix."""
    if not isinstance(g, SU2Element):
        g = from_matrix(g)
    return wigner_D_euler(twoj, g.phi, g.theta, g.psi)


def wigner_D(twoj: int, twom: int, twon: int, g) -> complex:
    check_triple(twoj, twom, twon)
    a, b = (twoj - twom) // 2, (twoj - twon) // 2
    return complex(wigner_D_matrix(twoj, g)[a, b])


def symmetric_power_D(twoj: int, mat) -> np.ndarray:
    """``D^j`` as the symmetric power of ``conj(g)``, an independent construction.

    ``u`` and ``v`` carry ``D^{1/2} = conj(g)``; the spin-j matrix is its
    action on the monomials ``u^{j+m} v^{j-m} / sqrt((j+m)!(j-m)!)``.
    """
    U = np.conj(np.asarray(mat, dtype=np.complex128))
    n = twoj
    out = np.zeros((n + 1, n + 1), dtype=np.complex128)
    # basis k = number of u factors = j + m, row index a = n - k
    for k_out in range(n + 1):
        for k_in in range(n + 1):
            # coefficient of u^{k_out} v^{n-k_out} in (U00 u + U10 v)^{k_in} (U01 u + U11 v)^{n-k_in}
            tot = 0.0j
            for p in range(max(0, k_out - (n - k_in)), min(k_in, k_out) + 1):
                q = k_out - p
                tot += (comb(k_in, p) * U[0, 0] ** p * U[1, 0] ** (k_in - p)
                        * comb(n - k_in, q) * U[0, 1] ** q * U[1, 1] ** (n - k_in - q))
            norm = sqrt(factorial(k_out) * factorial(n - k_out) / (factorial(k_in) * factorial(n - k_in)))
            out[n - k_out, n - k_in] = tot * norm
    return out


# --------------------------------------------------------------------------
# Clebsch-Gordan coefficients


@lru_cache(maxsize=None)
def _fact(k: int) -> int:
    return factorial(k)


def su2_cgc(twoj1: int, twom1: int, twoj2: int, twom2: int, twoj: int, twom: int) -> float:
    """``C^{jm}_{j1 m1 j2 m2}`` (Condon-Shortley), zero outside the coupling domain."""
    if twom != twom1 + twom2:
        return 0.0
    if not (abs(twoj1 - twoj2) <= twoj <= twoj1 + twoj2) or (twoj1 + twoj2 + twoj) % 2:
        return 0.0
    for tj, tm in ((twoj1, twom1), (twoj2, twom2), (twoj, twom)):
        if abs(tm) > tj or (tj - tm) % 2:
            return 0.0
    j1pj2mj = (twoj1 + twoj2 - twoj) // 2
    j1mj2pj = (twoj1 - twoj2 + twoj) // 2
    mj1pj2pj = (-twoj1 + twoj2 + twoj) // 2
    tri = _fact(j1pj2mj) * _fact(j1mj2pj) * _fact(mj1pj2pj) / _fact((twoj1 + twoj2 + twoj) // 2 + 1)
    pre = sqrt((twoj + 1) * tri
               * _fact((twoj1 + twom1) // 2) * _fact((twoj1 - twom1) // 2)
               * _fact((twoj2 + twom2) // 2) * _fact((twoj2 - twom2) // 2)
               * _fact((twoj + twom) // 2) * _fact((twoj - twom) // 2))
    a1 = (twoj - twoj2 + twom1) // 2
    a2 = (twoj - twoj1 - twom2) // 2
    kmin = max(0, -a1, -a2)
    kmax = min(j1pj2mj, (twoj1 - twom1) // 2, (twoj2 + twom2) // 2)
    s = 0.0
    for k in range(kmin, kmax + 1):
        den = (_fact(k) * _fact(j1pj2mj - k) * _fact((twoj1 - twom1) // 2 - k)
               * _fact((twoj2 + twom2) // 2 - k) * _fact(a1 + k) * _fact(a2 + k))
        s += (-1) ** k / den
    return pre * s


# --------------------------------------------------------------------------
# quadrature


def gauss_legendre(npts: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on ``[-1, 1]``."""
    if npts < 1:
        raise ValueError("quadrature order must be at least 1")
    return np.polynomial.legendre.leggauss(npts)


@dataclass
class HaarRule:
    """Product rule for the normalized Haar measure; weights sum to 1."""

    phi: np.ndarray
    theta: np.ndarray
    psi: np.ndarray
    weights: np.ndarray

    def matrices(self) -> np.ndarray:
        c, s = np.cos(self.theta / 2), np.sin(self.theta / 2)
        ep, eq = np.exp(0.5j * self.phi), np.exp(0.5j * self.psi)
        a = ep * c * eq
        b = -ep * s / eq
        M = np.empty(self.weights.shape + (2, 2), dtype=np.complex128)
        M[..., 0, 0] = a
        M[..., 0, 1] = b
        M[..., 1, 0] = -np.conj(b)
        M[..., 1, 1] = np.conj(a)
        return M

    def integrate(self, values) -> complex:
        return np.tensordot(self.weights, values, axes=(0, 0))

    def __len__(self) -> int:
        return self.weights.size


def haar_quadrature(order_phi: int, order_theta: int, order_psi: int) -> HaarRule:
    """``dg = sin(theta) dphi dtheta dpsi / 16 pi^2``.

    Trapezoid in ``phi`` (period 2pi) and ``psi`` (period 4pi), Gauss-Legendre
    in ``cos theta``. Exact on products of Wigner functions with total degree
    below the orders.
    """
    if min(order_phi, order_theta, order_psi) < 1:
        raise ValueError("quadrature orders must be at least 1")
    phis = TWO_PI * np.arange(order_phi) / order_phi
    psis = -TWO_PI + FOUR_PI * np.arange(order_psi) / order_psi
    x, w = gauss_legendre(order_theta)
    thetas = np.arccos(x)
    P, T, S = np.meshgrid(phis, thetas, psis, indexing="ij")
    W = np.broadcast_to((w / 2)[None, :, None] / (order_phi * order_psi), P.shape)
    return HaarRule(P.ravel(), T.ravel(), S.ravel(), W.ravel().copy())


def euler_angles(mats) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized :func:`to_euler` for a stack of matrices.

    At gimbal points this returns a different, equally valid split of the
    free angle; the reconstructed matrix is the same.
    """
    M = np.asarray(mats, dtype=np.complex128)
    a, b = M[..., 0, 0], M[..., 0, 1]
    theta = 2.0 * np.arctan2(np.abs(b), np.abs(a))
    phi = (np.angle(a) + np.angle(-b)) % TWO_PI
    psi = _wrap(2.0 * np.angle(a) - phi, -TWO_PI, FOUR_PI)
    return phi, theta, psi


def wigner_D_batch(twoj: int, mats) -> np.ndarray:
    """``D^j`` of every matrix in a stack; shape ``(..., 2j+1, 2j+1)``."""
    return wigner_D_euler(twoj, *euler_angles(mats))
