"""Kernel backend selection.

The compiled extension is preferred; set ``QDOUBLE_PURE_PYTHON=1`` to force
the numpy fallback. :func:`use_backend` switches at runtime (tests and the
benchmark use it to compare the two).
"""

from __future__ import annotations

import os

from qdouble import _core_py

try:
    from qdouble import _core as _compiled
except ImportError:  # extension not built
    _compiled = None

_BACKENDS = {"python": _core_py}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled

available = tuple(_BACKENDS)
name = "python" if (_compiled is None or os.environ.get("QDOUBLE_PURE_PYTHON")) else "compiled"
_impl = _BACKENDS[name]


def use_backend(which: str) -> str:
    """Select ``"compiled"`` or ``"python"``; returns the previous name."""
    global name, _impl
    if which not in _BACKENDS:
        raise ValueError(f"backend {which!r} not available (have {available})")
    prev, name, _impl = name, which, _BACKENDS[which]
    return prev


def twisted_product(H1, H2, conj, ldiv):
    return _impl.twisted_product(H1, H2, conj, ldiv)


def wigner_d_table(twoj, theta):
    return _impl.wigner_d_table(twoj, theta)
