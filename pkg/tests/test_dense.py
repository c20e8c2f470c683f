import math

import numpy as np
import pytest

from quditsim.circuit import Gate, parse
from quditsim.dense import (DenseState, apply_gate_dense, c_matrix, circuit_distribution, exact_distribution,
                            h_matrix, m_matrix, x_matrix)
from quditsim.stabilizer import CapExceeded

from conftest import random_word


def test_h_on_zero():
    s = apply_gate_dense(DenseState(3, 1), Gate("H", (0,)))
    assert np.allclose(s.amplitudes, np.ones(3) / math.sqrt(3))


def test_m3_on_plus():
    s = DenseState(3, 1, np.ones(3) / math.sqrt(3))
    s = apply_gate_dense(s, Gate("T", (0,)))
    w = np.exp(2j * np.pi / 9)
    assert np.allclose(s.amplitudes, np.array([w, 1, w.conjugate()]) / math.sqrt(3), atol=1e-12)


def _inverse(word, d):
    out = []
    for g in reversed(word):
        if g.name == "H":
            out.append(Gate("H", g.qudits, 3))
        else:
            out.append(Gate(g.name, g.qudits, (-g.power) % d))
    return out


def test_word_then_inverse_is_identity(rng):
    for _ in range(30):
        d = int(rng.choice([3, 5]))
        n = int(rng.integers(1, 4))
        word = random_word(rng, d, n, 30)
        s0 = DenseState(d, n, rng.normal(size=d ** n) + 1j * rng.normal(size=d ** n))
        s0 = DenseState(d, n, s0.amplitudes / s0.norm())
        s = s0
        for g in word + _inverse(word, d):
            s = apply_gate_dense(s, g)
            assert abs(s.norm() - 1) < 1e-12
        assert np.allclose(s.amplitudes, s0.amplitudes, atol=1e-10)


def test_exact_distribution_examples():
    assert np.allclose(exact_distribution(DenseState(3, 1), [0]), [1, 0, 0])
    plus = DenseState(5, 1, np.ones(5) / math.sqrt(5))
    assert np.allclose(exact_distribution(plus, [0]), np.full(5, 0.2))
    v = m_matrix(3) @ np.ones(3) / math.sqrt(3)
    assert np.allclose(exact_distribution(DenseState(3, 1, v), [0]), np.abs(v) ** 2)


def test_marginal_order():
    s = DenseState.basis(3, [1, 2])
    p = exact_distribution(s, [1, 0])
    assert p[2, 1] == pytest.approx(1.0)


def test_cap():
    with pytest.raises(CapExceeded):
        DenseState(3, 13)


def test_c_matrix_is_clifford_image():
    for d in (3, 5, 7):
        C = c_matrix(d)
        M = m_matrix(d)
        assert np.allclose(C @ M @ np.ones(d), M @ np.ones(d))
        assert np.allclose(np.linalg.matrix_power(C, d), np.eye(d), atol=1e-10)


def test_circuit_distribution_sums_to_one():
    c = parse("d 3\nn 2\nH 0\nT 0\nCSUM 0 1\nH 1\nMEASURE 0\nMEASURE 1\n")
    dist = circuit_distribution(c)
    assert sum(dist.values()) == pytest.approx(1.0, abs=1e-12)
