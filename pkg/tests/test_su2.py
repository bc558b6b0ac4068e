import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy import Rational
from sympy.physics.quantum.cg import CG
from sympy.physics.wigner import wigner_d_small

from qdouble.su2 import (FOUR_PI, TWO_PI, HalfInt, a_theta, check_triple, euler_angles,
                         euler_matrix, from_axis_angle, from_euler, from_matrix, g_phi,
                         haar_quadrature, random_element, su2_cgc, symmetric_power_D, to_euler,
                         wigner_D, wigner_D_batch, wigner_D_matrix, wigner_d, wigner_d_matrix)

angles = st.floats(0, TWO_PI, allow_nan=False)
thetas = st.floats(0, np.pi, allow_nan=False)
psis = st.floats(-TWO_PI, TWO_PI, allow_nan=False, exclude_max=True)


def test_generators():
    assert np.allclose(g_phi(TWO_PI), -np.eye(2))
    assert np.allclose(a_theta(np.pi), [[0, -1], [1, 0]])
    # n = (1,0,0) exponentiates to g_r
    assert np.allclose(from_axis_angle(0.7, 0.0, 0.0).matrix, g_phi(0.7))


@given(angles, thetas, psis)
def test_euler_round_trip(phi, theta, psi):
    M = euler_matrix(phi, theta, psi)
    assert np.abs(euler_matrix(*to_euler(M)) - M).max() < 1e-9
    assert from_euler(phi, theta, psi).defect() < 1e-9


@pytest.mark.parametrize("M", [np.eye(2), -np.eye(2), g_phi(1.0), g_phi(5.0), g_phi(-1.0),
                               a_theta(np.pi), -a_theta(np.pi), g_phi(1.0) @ a_theta(np.pi)])
def test_gimbal_points(M):
    phi, theta, psi = to_euler(M)
    assert theta in (0.0, float(np.pi)) and psi in (0.0, -TWO_PI)
    assert np.abs(euler_matrix(phi, theta, psi) - M).max() < 1e-14


def test_batched_euler_angles():
    rng = np.random.default_rng(0)
    mats = np.stack([random_element(rng).matrix for _ in range(50)] + [-np.eye(2), np.eye(2)])
    phi, theta, psi = euler_angles(mats)
    rebuilt = np.stack([euler_matrix(*t) for t in zip(phi, theta, psi)])
    assert np.abs(rebuilt - mats).max() < 1e-12


def test_from_euler_rejects_bad_theta():
    with pytest.raises(ValueError):
        from_euler(0.0, 4.0, 0.0)


def test_halfint():
    assert HalfInt.of(1.5).twice == 3 and str(HalfInt(3)) == "3/2" and str(HalfInt(4)) == "2"
    with pytest.raises(ValueError):
        HalfInt.of(0.3)
    with pytest.raises(ValueError):
        check_triple(2, 1, 0)
    with pytest.raises(ValueError):
        check_triple(1, 3, 1)


@pytest.mark.parametrize("twoj", range(0, 7))
def test_small_d_against_sympy(twoj):
    th = 0.913
    j = Rational(twoj, 2)
    d = wigner_d_matrix(twoj, th)
    # sympy's small-d is the transpose (rotation sense reversed) of the usual one
    for a in range(twoj + 1):
        for b in range(twoj + 1):
            ref = complex(wigner_d_small(j, th)[b, a].evalf(30))
            assert abs(d[a, b] - ref) < 1e-12


@pytest.mark.parametrize("twoj", range(0, 7))
def test_D_against_symmetric_power(twoj):
    rng = np.random.default_rng(twoj)
    for _ in range(10):
        g = random_element(rng)
        assert np.abs(wigner_D_matrix(twoj, g) - symmetric_power_D(twoj, g.matrix)).max() < 1e-12


def test_spin_half_is_conjugate_matrix():
    g = random_element(7)
    assert np.abs(wigner_D_matrix(1, g) - np.conj(g.matrix)).max() < 1e-14


@pytest.mark.parametrize("twoj", range(0, 7))
def test_homomorphism_and_unitarity(twoj):
    rng = np.random.default_rng(100 + twoj)
    for _ in range(20):
        g, h = random_element(rng), random_element(rng)
        Dg, Dh, Dgh = (wigner_D_matrix(twoj, x) for x in (g, h, g @ h))
        assert np.abs(Dg @ Dh - Dgh).max() < 1e-10
        assert np.abs(Dg @ Dg.conj().T - np.eye(twoj + 1)).max() < 1e-10


def test_batched_D():
    rng = np.random.default_rng(3)
    mats = np.stack([random_element(rng).matrix for _ in range(20)])
    B = wigner_D_batch(4, mats)
    assert np.abs(B - np.stack([wigner_D_matrix(4, m) for m in mats])).max() < 1e-12


def test_element_accessors():
    g = from_euler(1.0, 0.5, -3.0)
    assert abs(wigner_D(2, 2, 0, g) - wigner_D_matrix(2, g)[0, 1]) < 1e-15
    assert abs(wigner_d(2, 0, 0, 0.5) - np.cos(0.5)) < 1e-15
    assert np.abs((g @ g.inv()).matrix - np.eye(2)).max() < 1e-14
    assert from_matrix(g.matrix).defect() < 1e-12


@pytest.mark.parametrize("twoj1", range(0, 5))
@pytest.mark.parametrize("twoj2", range(0, 5))
def test_cgc_against_sympy(twoj1, twoj2):
    for twoj in range(abs(twoj1 - twoj2), twoj1 + twoj2 + 1, 2):
        for tm1 in range(-twoj1, twoj1 + 1, 2):
            for tm2 in range(-twoj2, twoj2 + 1, 2):
                tm = tm1 + tm2
                if abs(tm) > twoj:
                    continue
                ref = float(CG(Rational(twoj1, 2), Rational(tm1, 2), Rational(twoj2, 2),
                               Rational(tm2, 2), Rational(twoj, 2), Rational(tm, 2)).doit())
                assert abs(su2_cgc(twoj1, tm1, twoj2, tm2, twoj, tm) - ref) < 1e-14


def test_cgc_known_values_and_zeros():
    assert abs(su2_cgc(1, 1, 1, -1, 0, 0) - 1 / np.sqrt(2)) < 1e-15
    assert su2_cgc(1, 1, 1, 1, 2, 0) == 0.0        # m mismatch
    assert su2_cgc(1, 1, 1, -1, 4, 0) == 0.0       # triangle
    assert su2_cgc(2, 0, 2, 0, 2, 0) == 0.0        # parity zero


@pytest.mark.parametrize("twoj1", range(0, 5))
@pytest.mark.parametrize("twoj2", range(0, 5))
def test_cgc_orthogonality(twoj1, twoj2):
    rows = [(tj, tm) for tj in range(abs(twoj1 - twoj2), twoj1 + twoj2 + 1, 2)
            for tm in range(-tj, tj + 1, 2)]
    cols = [(a, b) for a in range(-twoj1, twoj1 + 1, 2) for b in range(-twoj2, twoj2 + 1, 2)]
    U = np.array([[su2_cgc(twoj1, a, twoj2, b, tj, tm) for a, b in cols] for tj, tm in rows])
    assert np.abs(U @ U.T - np.eye(len(rows))).max() < 1e-12
    assert np.abs(U.T @ U - np.eye(len(cols))).max() < 1e-12


def test_cgc_couples_D_matrices():
    # D^{j1}_{m1 n1} D^{j2}_{m2 n2} = sum_j C C D^j_{m1+m2, n1+n2}
    g = random_element(11)
    t1, t2 = 2, 3
    for a1, b1, a2, b2 in [(2, 0, 1, -1), (0, -2, 3, 1), (-2, 2, -1, -3)]:
        lhs = wigner_D(t1, a1, b1, g) * wigner_D(t2, a2, b2, g)
        rhs = sum(su2_cgc(t1, a1, t2, a2, tj, a1 + a2) * su2_cgc(t1, b1, t2, b2, tj, b1 + b2)
                  * wigner_D(tj, a1 + a2, b1 + b2, g)
                  for tj in range(1, 6, 2) if abs(a1 + a2) <= tj and abs(b1 + b2) <= tj)
        assert abs(lhs - rhs) < 1e-12


def test_haar_rule():
    rule = haar_quadrature(8, 8, 16)
    assert abs(rule.weights.sum() - 1) < 1e-14
    D = wigner_D_batch(2, rule.matrices())
    # Schur orthogonality: int |D^1_{01}|^2 = 1/3, int D^1_{00} = 0
    assert abs(rule.integrate(np.abs(D[:, 1, 0]) ** 2) - 1 / 3) < 1e-13
    assert abs(rule.integrate(D[:, 1, 1])) < 1e-13
    with pytest.raises(ValueError):
        haar_quadrature(0, 4, 4)


def test_haar_invariance():
    rule = haar_quadrature(6, 6, 12)
    h = random_element(5).matrix
    f = lambda M: wigner_D_batch(3, M)[:, 1, 2] * np.conj(wigner_D_batch(3, M)[:, 2, 0])
    Z = rule.matrices()
    assert abs(rule.integrate(f(Z)) - rule.integrate(f(h @ Z))) < 1e-13
