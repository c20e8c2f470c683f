import cmath
import itertools
import math
from math import comb

import numpy as np
import pytest

from quditsim import clifford as cl
from quditsim.dense import x_matrix
from quditsim.field import Phase
from quditsim.inner import inner
from quditsim.magic import (UnsupportedDimension, alpha, alpha_closed, alpha_direct, apply_C, beta_closed,
                            build_C, build_M, build_Uv, c_phase, depressed_sum, kappa, magic_uv_parameters,
                            optimal_p, orbit, orbit_representative)
from quditsim.stabilizer import apply_z, dense_vector, plus_state

PRIMES = [3, 5, 7, 11, 13]


def w(d, m):
    return cmath.exp(2j * math.pi * m / d)


def test_M_diagonals_match_table():
    assert np.allclose(build_M(3).diagonal, [w(9, 1), 1, w(9, -1)])
    assert np.allclose(build_M(5).diagonal, [w(5, -2), w(5, 1), w(5, -1), w(5, -2), w(5, -1)])
    assert np.allclose(build_M(7).diagonal, [w(7, 3), w(7, -2), 1, w(7, 3), w(7, 1), w(7, 2), 1])


@pytest.mark.parametrize("d", PRIMES)
def test_M_order(d):
    gate = build_M(d)
    assert np.allclose(gate.diagonal ** (d ** gate.m), 1)
    assert gate.m == (2 if d == 3 else 1)


def test_M_rejects_composite():
    with pytest.raises(UnsupportedDimension):
        build_M(9)


@pytest.mark.parametrize("d", PRIMES)
def test_C_is_image_of_X(d):
    M = build_M(d).dense
    C = build_C(d)
    assert np.allclose(cl.dense_matrix(C), M @ x_matrix(d) @ M.conj().T, atol=1e-12)
    assert cl.element_order(C) == d


def test_C_phases():
    assert c_phase(5) == Phase.omega(5, -2)
    # for d = 3 the phase consistent with M X M^dag is e^{-2 pi i/9}
    assert abs(complex(c_phase(3)) - w(9, -1)) < 1e-15


@pytest.mark.parametrize("d", [5, 7, 11])
def test_Uv_conjugates_X(d):
    for z, g, e in itertools.product(range(d), repeat=3):
        U = np.diag(build_Uv(d, z, g, e))
        lhs = U @ x_matrix(d) @ U.conj().T
        rhs = w(d, e) * cl.dense_matrix(cl.clifford_gamma(d, g, (1, z)))
        assert np.allclose(lhs, rhs, atol=1e-12)


def test_Uv_conjugates_X_d3_up_to_ninth_root():
    d = 3
    for z, g, e in itertools.product(range(d), repeat=3):
        U = np.diag(build_Uv(d, z, g, e))
        lhs = U @ x_matrix(d) @ U.conj().T
        rhs = w(d, e) * w(9, 2 * g) * cl.dense_matrix(cl.clifford_gamma(d, g, (1, z)))
        assert np.allclose(lhs, rhs, atol=1e-12)


@pytest.mark.parametrize("d", [5, 7, 11, 13])
def test_M_equals_Uv_up_to_global_phase(d):
    ratio = build_M(d).diagonal / build_Uv(d, *magic_uv_parameters(d))
    assert np.allclose(ratio, w(d, comb(d + 1, 4) // d))


def test_M3_equals_Uv_110():
    assert np.allclose(build_M(3).diagonal, w(9, 1) * build_Uv(3, 1, 1, 0))


def test_Uv_starts_at_one():
    for d in (3, 5, 7):
        for z, g, e in itertools.product(range(d), repeat=3):
            assert build_Uv(d, z, g, e)[0] == pytest.approx(1)


@pytest.mark.parametrize("d", PRIMES + [17, 19, 23])
def test_alpha_routes_agree_and_sum_is_real(d):
    for p in range(d):
        assert abs(alpha_direct(d, p) - alpha_closed(d, p)) < 1e-12
        if d > 3:
            assert abs(depressed_sum(d, p).imag) < 1e-12


@pytest.mark.parametrize("d", PRIMES + [17, 19, 23])
def test_prefactor_binomial_identity(d):
    assert comb(d + 1, 4) - comb(d, 3) == comb(d, 4)
    assert comb(d, 4) % d == 0 or d < 4


def test_alpha_examples():
    assert abs(alpha(3, 0) - (1 + 2 * math.cos(2 * math.pi / 9)) / 3) < 1e-12
    assert abs(abs(alpha(5, 3)) - (3 + 2 * math.cos(2 * math.pi / 5)) / 5) < 1e-12
    assert abs(abs(alpha(7, 3)) - (1 + 6 * math.cos(2 * math.pi / 7)) / 7) < 1e-12


def test_optimal_p_and_kappa():
    assert optimal_p(3) == 0
    assert optimal_p(7) == 3
    # 0.723607 is attained at p = 3 under alpha = <+|Z^{-p} M|+>
    assert optimal_p(5) == 3
    assert abs(alpha(5, 4)) == pytest.approx(0.4472136, abs=1e-6)
    assert kappa(3) == pytest.approx(0.3087, abs=1e-4)
    assert kappa(5) == pytest.approx(0.4020, abs=1e-4)
    assert kappa(7) == pytest.approx(0.4005, abs=1e-4)


def test_optimal_p_is_unique_argmax():
    for d in (3, 5, 7, 11):
        vals = [abs(alpha_direct(d, p)) for p in range(d)]
        best = max(vals)
        assert sum(1 for v in vals if abs(v - best) < 1e-12) == 1


@pytest.mark.parametrize("d", [3, 5, 7])
def test_orbit_reconstructs_magic_state(d):
    o = orbit(d)
    target = build_M(d).dense @ (np.ones(d) / math.sqrt(d))
    recon = o.prefactor * sum(dense_vector(s) for s in o.states)
    assert np.allclose(recon, target, atol=1e-10)
    assert o.sign in (1, -1)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_orbit_overlaps(d):
    o = orbit(d)
    for a, b in itertools.combinations(o.states, 2):
        assert abs(abs(complex(inner(a, b))) ** 2 - 1 / d) < 1e-12
    target = build_M(d).dense @ (np.ones(d) / math.sqrt(d))
    overlaps = [np.vdot(dense_vector(s), target) for s in o.states]
    assert np.allclose(overlaps, o.alpha, atol=1e-12)
    assert np.allclose(cl.dense_matrix(build_C(d)) @ target, target, atol=1e-12)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_orbits_are_distinct(d):
    reps = [dense_vector(orbit_representative(d, q)) for q in range(d)]
    for p in range(d):
        s = orbit_representative(d, p)
        for a in range(1, d):
            v = dense_vector(apply_C(s, 0, a))
            for r in reps:
                assert abs(abs(np.vdot(r, v)) - 1) > 1e-6


@pytest.mark.parametrize("d", [3, 5, 7])
def test_z_single(d):
    o = orbit(d)
    assert abs(o.z_single - d * abs(o.alpha) ** 2) < 1e-12


@pytest.mark.parametrize("d", [5, 7])
def test_beta_closed_form_matches_inner_product(d):
    for p in range(d):
        o = orbit(d, p)
        s0 = o.states[0]
        for j in range(d):
            via_inner = 1.0 if j == 0 else complex(inner(o.states[j], s0)) * math.sqrt(d)
            assert abs(beta_closed(d, j, p) - via_inner) < 1e-12
            assert abs(abs(o.betas[j]) - 1) < 1e-12


def test_beta_d3():
    o = orbit(3, 0)
    assert o.betas[0] == 1
    assert abs(o.betas[1] - cmath.exp(-1j * math.pi / 18)) < 1e-12
    assert abs(o.betas[2] - cmath.exp(1j * math.pi / 18)) < 1e-12
    # the quoted e^{+i pi/18} is the conjugate overlap <1~|0~>
    assert abs(math.sqrt(3) * complex(inner(o.states[0], o.states[1])) - cmath.exp(1j * math.pi / 18)) < 1e-12
    for j in range(3):
        assert abs(beta_closed(3, j, 0) - o.betas[j]) < 1e-12


def test_apply_C_matches_dense():
    for d in (3, 5):
        C = cl.dense_matrix(build_C(d))
        s = apply_z(plus_state(1, d), 0, 1)
        for a in range(2 * d):
            assert np.allclose(dense_vector(apply_C(s, 0, a)), np.linalg.matrix_power(C, a) @ dense_vector(s))
