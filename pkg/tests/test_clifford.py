import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quditsim import clifford as cl
from quditsim.dense import h_matrix, p_matrix, x_matrix, z_matrix

DS = [3, 5, 7]


def close_upto_nothing(A, B):
    return np.allclose(A, B, atol=1e-10)


@pytest.mark.parametrize("d", DS)
def test_phase_gate_is_diagonal(d):
    j = np.arange(d)
    assert close_upto_nothing(cl.dense_matrix(cl.phase_gate(d)), np.diag(np.exp(2j * np.pi * (j * (j - 1) // 2) / d)))
    assert close_upto_nothing(cl.dense_matrix(cl.phase_gate(d)), p_matrix(d))


@pytest.mark.parametrize("d", DS)
def test_generators_match_dense(d):
    assert close_upto_nothing(cl.dense_matrix(cl.shift(d)), x_matrix(d))
    assert close_upto_nothing(cl.dense_matrix(cl.clock(d)), z_matrix(d))
    H = cl.dense_matrix(cl.hadamard(d))
    # same Clifford as the Fourier matrix up to a global phase
    ratio = H[np.abs(H) > 1e-9] / h_matrix(d)[np.abs(H) > 1e-9]
    assert np.allclose(ratio, ratio[0])


@pytest.mark.parametrize("d", DS)
def test_hadamard_order_four(d):
    assert cl.element_order(cl.hadamard(d)) == 4


@pytest.mark.parametrize("d", DS)
def test_weyl_composition(d):
    for a, b in itertools.product(itertools.product(range(d), repeat=2), repeat=2):
        c, ph = cl.weyl_compose(a, b, d)
        lhs = cl.weyl_matrix(a, d) @ cl.weyl_matrix(b, d)
        assert close_upto_nothing(lhs, complex(ph) * cl.weyl_matrix(c, d))


def _random_element(rng, d):
    while True:
        F = tuple(int(v) for v in rng.integers(0, d, size=4))
        if (F[0] * F[3] - F[1] * F[2]) % d == 1:
            break
    return cl.CliffordElement(d, F, tuple(int(v) for v in rng.integers(0, d, size=2)))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(DS), st.integers(0, 2 ** 32 - 1))
def test_composition_matches_dense(d, seed):
    rng = np.random.default_rng(seed)
    c1, c2 = _random_element(rng, d), _random_element(rng, d)
    assert close_upto_nothing(cl.dense_matrix(c1 @ c2), cl.dense_matrix(c1) @ cl.dense_matrix(c2))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(DS), st.integers(0, 2 ** 32 - 1))
def test_conjugation_matches_dense(d, seed):
    rng = np.random.default_rng(seed)
    c = _random_element(rng, d)
    a = tuple(int(v) for v in rng.integers(0, d, size=2))
    fa, ph = cl.conjugate_weyl(c, a)
    U = cl.dense_matrix(c)
    assert close_upto_nothing(U @ cl.weyl_matrix(a, d) @ U.conj().T, complex(ph) * cl.weyl_matrix(fa, d))


@pytest.mark.parametrize("d", DS)
def test_dense_is_unitary(d):
    rng = np.random.default_rng(d)
    for _ in range(20):
        U = cl.dense_matrix(_random_element(rng, d))
        assert np.allclose(U @ U.conj().T, np.eye(d), atol=1e-12)


def test_rejects_non_symplectic():
    with pytest.raises(ValueError):
        cl.CliffordElement(5, (1, 1, 1, 1))


def test_symplectic_product_antisymmetric():
    d = 7
    for a, b in itertools.product(itertools.product(range(d), repeat=2), repeat=2):
        assert (cl.symplectic_product(a, b, d) + cl.symplectic_product(b, a, d)) % d == 0
