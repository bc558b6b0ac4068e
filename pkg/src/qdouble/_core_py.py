"""Pure-numpy implementations of the hot kernels.

Used when the compiled ``_core`` extension is unavailable, and as the
reference the compiled kernels are tested against.
"""

from __future__ import annotations

from math import factorial

import numpy as np


def twisted_product(H1, H2, conj, ldiv):
    """Batched twisted convolution on a finite group of size ``N``.

    ``out[b, x, y] = (1/N) * sum_z H1[b, x, z] * H2[b, conj[z, x], ldiv[z, y]]``
    where ``conj[z, x]`` indexes ``z^-1 x z`` and ``ldiv[z, y]`` indexes
    ``z^-1 y``. Columns ``z`` of ``H1`` that vanish across the batch are
    skipped, so sparse left factors are cheap.
    """
    H1 = np.ascontiguousarray(H1, dtype=np.complex128)
    H2 = np.ascontiguousarray(H2, dtype=np.complex128)
    B, N, _ = H1.shape
    out = np.zeros((B, N, N), dtype=np.complex128)
    live = np.flatnonzero(np.any(H1 != 0, axis=(0, 1)))
    for z in live:
        a = H1[:, :, z]
        g = H2[:, conj[z]][:, :, ldiv[z]]
        out += a[:, :, None] * g
    out /= N
    return out


def _d_terms(twoj):
    """Non-zero terms of the factorial sum for every (m', m) entry."""
    terms = []
    j2 = twoj
    for a in range(j2 + 1):          # row: m' = j - a
        tmp = j2 - 2 * a             # 2m'
        for b in range(j2 + 1):      # col: m = j - b
            tm = j2 - 2 * b          # 2m
            jpmp = (j2 + tmp) // 2
            jmmp = (j2 - tmp) // 2
            jpm = (j2 + tm) // 2
            jmm = (j2 - tm) // 2
            dm = (tmp - tm) // 2     # m' - m
            pref = np.sqrt(float(factorial(jpmp) * factorial(jmmp)
                                 * factorial(jpm) * factorial(jmm)))
            for s in range(max(0, -dm), min(jpm, jmmp) + 1):
                den = (factorial(jpm - s) * factorial(s)
                       * factorial(dm + s) * factorial(jmmp - s))
                sign = -1.0 if (dm + s) % 2 else 1.0
                terms.append((a, b, sign * pref / den,
                              j2 - dm - 2 * s, dm + 2 * s))
    return terms


def wigner_d_table(twoj, theta):
    """Wigner small-d matrices ``d^j(theta)`` for an array of angles.

    Returns shape ``(len(theta), 2j+1, 2j+1)``; row/column index ``a``
    corresponds to magnetic number ``j - a`` (descending).
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=np.float64))
    c = np.cos(theta / 2)
    s = np.sin(theta / 2)
    out = np.zeros((theta.size, twoj + 1, twoj + 1))
    for a, b, coef, pc, ps in _d_terms(twoj):
        out[:, a, b] += coef * c**pc * s**ps
    return out
