import numpy as np
import pytest
from hypothesis import given, strategies as st

from qdouble import backend
from qdouble.catalog import builtin_group
from qdouble.double import _power_tables

needs_compiled = pytest.mark.skipif("compiled" not in backend.available,
                                    reason="compiled extension not built")


@pytest.fixture
def restore_backend():
    prev = backend.name
    yield
    backend.use_backend(prev)


def _both(fn):
    out = {}
    for b in backend.available:
        backend.use_backend(b)
        out[b] = fn()
    return out


def test_python_backend_always_available():
    assert "python" in backend.available
    with pytest.raises(ValueError):
        backend.use_backend("fortran")


@needs_compiled
@pytest.mark.parametrize("name, k", [("S3", 1), ("Q8", 1), ("Z3", 2), ("S3", 2)])
def test_twisted_product_parity(restore_backend, name, k):
    G = builtin_group(name)
    C, L = _power_tables(G, k)
    N = C.shape[0]
    rng = np.random.default_rng(0)
    H1 = rng.standard_normal((3, N, N)) + 1j * rng.standard_normal((3, N, N))
    H2 = rng.standard_normal((3, N, N)) + 1j * rng.standard_normal((3, N, N))
    H1[0, :, ::2] = 0                      # exercise the sparse skip
    res = _both(lambda: backend.twisted_product(H1, H2, C, L))
    assert np.abs(res["python"] - res["compiled"]).max() < 1e-12


@needs_compiled
@given(st.integers(0, 8), st.lists(st.floats(0, np.pi), min_size=1, max_size=20))
def test_wigner_parity(twoj, thetas):
    prev = backend.name
    try:
        res = _both(lambda: backend.wigner_d_table(twoj, np.array(thetas)))
    finally:
        backend.use_backend(prev)
    assert np.abs(res["python"] - res["compiled"]).max() < 1e-12


def test_pure_python_env_var():
    import subprocess
    import sys
    code = "import qdouble; print(qdouble.backend.name)"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env={"QDOUBLE_PURE_PYTHON": "1", "PATH": ""}).stdout.strip()
    assert out == "python"


def test_hopf_suite_on_python_backend(restore_backend):
    from qdouble.double import verify_hopf
    backend.use_backend("python")
    assert verify_hopf(builtin_group("S3")).ok(1e-12)
