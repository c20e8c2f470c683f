"""Brute-force state-vector reference simulator.

Qudit 0 is the most significant digit of the basis index, the same
convention as :func:`quditsim.stabilizer.dense_vector`.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .circuit import Circuit, Gate, GadgetizedCircuit
from .field import check_dimension
from .stabilizer import DENSE_CAP, CapExceeded


def x_matrix(d: int, a: int = 1) -> np.ndarray:
    return np.roll(np.eye(d, dtype=complex), a % d, axis=0)


def z_matrix(d: int, a: int = 1) -> np.ndarray:
    return np.diag(np.exp(2j * np.pi * a * np.arange(d) / d))


def p_matrix(d: int, a: int = 1) -> np.ndarray:
    j = np.arange(d)
    return np.diag(np.exp(2j * np.pi * a * (j * (j - 1) // 2) / d))


def h_matrix(d: int) -> np.ndarray:
    j = np.arange(d)
    return np.exp(2j * np.pi * np.outer(j, j) / d) / math.sqrt(d)


def m_matrix(d: int) -> np.ndarray:
    from .magic import build_M
    return build_M(d).dense


def c_matrix(d: int) -> np.ndarray:
    M = m_matrix(d)
    return M @ x_matrix(d) @ M.conj().T


class DenseState:
    def __init__(self, d: int, n: int, amplitudes=None, cap: int = DENSE_CAP):
        self.d = check_dimension(d)
        self.n = n
        if d ** n > cap:
            raise CapExceeded(f"{d}^{n} amplitudes exceed cap {cap}")
        if amplitudes is None:
            amplitudes = np.zeros(d ** n, dtype=complex)
            amplitudes[0] = 1.0
        self.amplitudes = np.asarray(amplitudes, dtype=complex).reshape(d ** n)

    @classmethod
    def basis(cls, d: int, digits) -> DenseState:
        n = len(digits)
        vec = np.zeros(d ** n, dtype=complex)
        vec[int(np.dot(digits, d ** np.arange(n - 1, -1, -1)))] = 1.0
        return cls(d, n, vec)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.d,) * self.n)

    def copy(self) -> DenseState:
        return DenseState(self.d, self.n, self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def apply_single(state: DenseState, U: np.ndarray, q: int) -> DenseState:
    psi = np.tensordot(U, state.tensor(), axes=([1], [q]))
    psi = np.moveaxis(psi, 0, q)
    return DenseState(state.d, state.n, psi.reshape(-1))


def apply_csum_dense(state: DenseState, c: int, t: int, power: int = 1) -> DenseState:
    d = state.d
    psi = state.tensor()
    out = np.empty_like(psi)
    for a in range(d):
        src = np.take(psi, a, axis=c)
        # target axis index shifts down by one if it came after c
        tt = t - 1 if t > c else t
        moved = np.roll(src, (power * a) % d, axis=tt)
        idx = [slice(None)] * state.n
        idx[c] = a
        out[tuple(idx)] = moved
    return DenseState(d, state.n, out.reshape(-1))


def apply_gate_dense(state: DenseState, gate: Gate) -> DenseState:
    d = state.d
    name, qs, a = gate.name, gate.qudits, gate.power
    if name == "X":
        return apply_single(state, x_matrix(d, a), qs[0])
    if name == "Z":
        return apply_single(state, z_matrix(d, a), qs[0])
    if name == "P":
        return apply_single(state, p_matrix(d, a), qs[0])
    if name == "H":
        return apply_single(state, np.linalg.matrix_power(h_matrix(d), a % 4), qs[0])
    if name == "CSUM":
        return apply_csum_dense(state, qs[0], qs[1], a)
    if name == "T":
        return apply_single(state, np.linalg.matrix_power(m_matrix(d), a), qs[0])
    if name == "C":
        return apply_single(state, np.linalg.matrix_power(c_matrix(d), a % d), qs[0])
    raise ValueError(f"no dense action for {name}")


def apply_diagonal(state: DenseState, diag: np.ndarray, q: int) -> DenseState:
    """Apply an arbitrary diagonal single-qudit gate, e.g. ``U_v``."""
    return apply_single(state, np.diag(diag), q)


def exact_distribution(state: DenseState, qudits) -> np.ndarray:
    """Marginal Born probabilities as an array indexed by the measured digits."""
    probs = np.abs(state.tensor()) ** 2
    qudits = list(qudits)
    rest = tuple(i for i in range(state.n) if i not in qudits)
    marg = probs.sum(axis=rest) if rest else probs
    # axes of marg are the measured qudits in increasing order
    order = sorted(qudits)
    return np.transpose(marg, [order.index(q) for q in qudits]) if qudits else marg


def distribution_dict(probs: np.ndarray, tol: float = 0.0) -> dict[tuple, float]:
    return {idx: float(p) for idx, p in np.ndenumerate(probs) if p > tol}


def project_dense(state: DenseState, q: int, v: int) -> DenseState:
    psi = state.tensor().copy()
    idx = [slice(None)] * state.n
    for w in range(state.d):
        if w != v:
            idx[q] = w
            psi[tuple(idx)] = 0
    return DenseState(state.d, state.n, psi.reshape(-1))


def circuit_distribution(circuit: Circuit) -> dict[tuple, float]:
    """Exact joint distribution of all MEASURE outcomes, T applied as M_d."""
    out: dict[tuple, float] = {}

    def walk(state: DenseState, i: int, prefix: tuple, weight: float):
        while i < len(circuit.gates) and circuit.gates[i].name != "MEASURE":
            state = apply_gate_dense(state, circuit.gates[i])
            i += 1
        if i == len(circuit.gates):
            out[prefix] = out.get(prefix, 0.0) + weight
            return
        q = circuit.gates[i].qudits[0]
        for v in range(circuit.d):
            proj = project_dense(state, q, v)
            p = proj.norm() ** 2
            if p > 1e-15:
                walk(DenseState(state.d, state.n, proj.amplitudes / math.sqrt(p)),
                     i + 1, prefix + (v,), weight * p)

    walk(DenseState(circuit.d, circuit.n), 0, (), 1.0)
    return out


def gadget_distribution(gc: GadgetizedCircuit, ancilla: np.ndarray,
                        joint: bool = False) -> dict[tuple, float]:
    """Exact outcome distribution of a gadgetized circuit with a dense ancilla.

    With ``joint=True`` keys are ``(outcomes, gadget_outcomes)``; otherwise
    gadget outcomes are marginalized out.
    """
    d, n, t = gc.d, gc.n, gc.t
    start = np.zeros(d ** n, dtype=complex)
    start[0] = 1.0
    vec = np.kron(start, np.asarray(ancilla, dtype=complex)) if t else start
    Cd = c_matrix(d) if t else None
    out: dict[tuple, float] = {}

    def walk(state: DenseState, i: int, meas: tuple, gad: tuple, weight: float):
        while i < len(gc.ops) and gc.ops[i].name not in ("MEASURE", "GADGET"):
            state = apply_gate_dense(state, gc.ops[i])
            i += 1
        if i == len(gc.ops):
            key = (meas, gad) if joint else meas
            out[key] = out.get(key, 0.0) + weight
            return
        op = gc.ops[i]
        for v in range(d):
            if op.name == "MEASURE":
                proj = project_dense(state, op.qudits[0], v)
            else:
                proj = project_zzinv_dense(state, *op.qudits, v)
            p = proj.norm() ** 2
            if p <= 1e-15:
                continue
            nxt = DenseState(d, state.n, proj.amplitudes / math.sqrt(p))
            if op.name == "MEASURE":
                walk(nxt, i + 1, meas + (v,), gad, weight * p)
            else:
                q, a = op.qudits
                nxt = apply_single(nxt, x_matrix(d, -v), q)
                nxt = apply_csum_dense(nxt, q, a, d - 1)
                nxt = apply_single(nxt, np.linalg.matrix_power(Cd, v), q)
                walk(nxt, i + 1, meas, gad + (v,), weight * p)

    walk(DenseState(d, n + t, vec), 0, (), (), 1.0)
    return out


def project_zzinv_dense(state: DenseState, q: int, a: int, k: int) -> DenseState:
    """Projector onto the omega^k eigenspace of ``Z_q Z_a^{-1}``."""
    d = state.d
    psi = state.tensor().copy()
    for xq, xa in itertools.product(range(d), repeat=2):
        if (xq - xa - k) % d:
            idx = [slice(None)] * state.n
            idx[q], idx[a] = xq, xa
            psi[tuple(idx)] = 0
    return DenseState(d, state.n, psi.reshape(-1))


def circuit_unitary_state(circuit: Circuit) -> DenseState:
    """Final state of a measurement-free circuit started in |0...0>."""
    state = DenseState(circuit.d, circuit.n)
    for g in circuit.gates:
        if g.name == "MEASURE":
            raise ValueError("circuit contains measurements")
        state = apply_gate_dense(state, g)
    return state
