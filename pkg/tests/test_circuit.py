import math

import numpy as np
import pytest

from quditsim.approx import build_approx_state, full_code
from quditsim.circuit import (CircuitError, CircuitSyntaxError, Gate, IndexOutOfRange, PrimeDimensionError,
                              SameQuditError, gadgetize, parse)
from quditsim.dense import DenseState, apply_gate_dense, circuit_distribution, gadget_distribution, m_matrix
from quditsim.field import NonPrimeDimension
from quditsim.magic import orbit
from quditsim.stabilizer import SameQudit, basis_state, dense_vector, tensor
from quditsim.weaksim import _branch, _renormalize, gadget_correction, measure_observable_ZZinv, zzinv_projector

from conftest import random_state


def test_parse_minimal():
    c = parse("d 3\nn 1\nT 0\nMEASURE 0")
    assert (c.d, c.n, c.t) == (3, 1, 1)
    assert c.measured == [0]


def test_parse_powers_and_comments():
    c = parse("# header\nd 5\nn 2\nX 0 3   # shift\nZ 1\nP 1 7\nH 0\nCSUM 1 0\n")
    assert c.gates[0] == Gate("X", (0,), 3)
    assert c.gates[2].power == 2
    assert parse(c.to_text()).gates == c.gates


def test_non_prime_dimension():
    with pytest.raises(NonPrimeDimension):
        parse("d 4\nn 1\n")
    with pytest.raises(PrimeDimensionError) as exc:
        parse("d 9\nn 1\n")
    assert exc.value.line == 1


def test_same_qudit():
    with pytest.raises(SameQudit) as exc:
        parse("d 3\nn 2\nCSUM 0 0\n")
    assert isinstance(exc.value, SameQuditError) and exc.value.line == 3


@pytest.mark.parametrize("text,err,line", [
    ("d 3\nn 1\nFOO 0\n", CircuitSyntaxError, 3),
    ("d 3\nn 1\nH 1\n", IndexOutOfRange, 3),
    ("d 3\nn 1\nH 0 1\n", CircuitSyntaxError, 3),
    ("d 3\nn 1\n\nX a\n", CircuitSyntaxError, 4),
    ("n 1\nd 3\n", CircuitSyntaxError, 1),
    ("d 3\n", CircuitSyntaxError, None),
])
def test_parse_errors(text, err, line):
    with pytest.raises(err) as exc:
        parse(text)
    assert exc.value.line == line
    assert isinstance(exc.value, CircuitError)


def test_gadgetize_without_t():
    c = parse("d 3\nn 2\nH 0\nCSUM 0 1\nMEASURE 1\n")
    gc = gadgetize(c)
    assert gc.ops == c.gates and gc.t == 0 and gc.width == 2


def test_gadgetize_counts():
    c = parse("d 3\nn 2\nT 0\nH 1\nT 1\nT 0\n")
    gc = gadgetize(c)
    assert gc.t == 3 and gc.width == 5
    assert [op.qudits for op in gc.ops if op.name == "GADGET"] == [(0, 2), (1, 3), (0, 4)]
    assert all(op.name != "T" for op in gc.ops)


@pytest.mark.parametrize("d", [3, 5])
def test_gadget_identity_every_outcome(d, rng):
    o = orbit(d)
    M = m_matrix(d)
    anc = build_approx_state(full_code(1, d), o)
    for _ in range(10):
        psi = random_state(rng, d, 1)
        terms = [(c, tensor(psi, s)) for c, s in anc]
        probs, branches = _branch(terms, lambda k: zzinv_projector(0, 1, 2, k, d), d)
        assert probs.sum() == pytest.approx(1.0, abs=1e-10)
        want = np.kron(M @ dense_vector(psi), np.eye(d)[0])
        for k in range(d):
            assert probs[k] == pytest.approx(1 / d, abs=1e-10)
            fixed = [(c, gadget_correction(s, 0, 1, k)) for c, s in _renormalize(branches[k], probs[k])]
            vec = sum(c * dense_vector(s) for c, s in fixed)
            assert np.allclose(vec, want, atol=1e-10)


@pytest.mark.parametrize("d", [3, 5])
def test_k_zero_branch_is_postselection(d):
    # without a correction the k = 0 branch is the projector form of the identity
    o = orbit(d)
    psi = basis_state(1, [1], d)
    terms = [(c, tensor(psi, s)) for c, s in build_approx_state(full_code(1, d), o)]
    probs, branches = _branch(terms, lambda k: zzinv_projector(0, 1, 2, k, d), d)
    vec = sum(c * dense_vector(s) for c, s in branches[0])
    from quditsim.dense import apply_csum_dense
    out = apply_csum_dense(DenseState(d, 2, vec), 0, 1, d - 1).amplitudes
    assert np.allclose(out, np.kron(m_matrix(d) @ dense_vector(psi), np.eye(d)[0]) / math.sqrt(d))


def test_zzinv_measurement_examples(rng):
    d = 3
    zero = [(1.0, basis_state(2, [0, 0], d))]
    k, probs, _ = measure_observable_ZZinv(zero, 0, 1, rng)
    assert k == 0 and probs[0] == pytest.approx(1)
    from quditsim.stabilizer import plus_state
    k, probs, post = measure_observable_ZZinv([(1.0, plus_state(2, d))], 0, 1, rng)
    assert np.allclose(probs, 1 / d)
    for _ in range(20):
        s = random_state(rng, d, 3)
        _, probs, _ = measure_observable_ZZinv([(1.0, s)], 0, 2, rng)
        assert abs(probs.sum() - 1) < 1e-10


@pytest.mark.parametrize("text", [
    "d 3\nn 1\nH 0\nT 0\nH 0\nMEASURE 0\n",
    "d 3\nn 1\nH 0\nT 0\nT 0\nH 0\nMEASURE 0\n",
    "d 5\nn 1\nH 0\nT 0\nT 0\nH 0\nMEASURE 0\n",
    "d 3\nn 2\nH 0\nT 0\nCSUM 0 1\nT 1\nH 1\nMEASURE 0\nMEASURE 1\n",
])
def test_dense_gadget_reference_matches_direct_T(text):
    c = parse(text)
    gc = gadgetize(c)
    d = c.d
    one = m_matrix(d) @ (np.ones(d) / math.sqrt(d))
    anc = one
    for _ in range(gc.t - 1):
        anc = np.kron(anc, one)
    ref = circuit_distribution(c)
    got = gadget_distribution(gc, anc)
    for key in set(ref) | set(got):
        assert abs(ref.get(key, 0) - got.get(key, 0)) < 1e-10
