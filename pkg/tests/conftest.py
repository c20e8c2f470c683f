import numpy as np
import pytest

from quditsim import stabilizer as st
from quditsim.circuit import Gate
from quditsim.dense import DenseState, apply_gate_dense
from quditsim.weaksim import apply_clifford_gate


def random_word(rng, d, n, length):
    names = ["X", "Z", "P", "H"] + (["CSUM"] if n > 1 else [])
    word = []
    for _ in range(length):
        g = names[rng.integers(len(names))]
        if g == "CSUM":
            c, t = rng.choice(n, size=2, replace=False)
            word.append(Gate(g, (int(c), int(t)), int(rng.integers(1, d))))
        elif g == "H":
            word.append(Gate(g, (int(rng.integers(n)),)))
        else:
            word.append(Gate(g, (int(rng.integers(n)),), int(rng.integers(1, d))))
    return word


def run_word(word, d, n):
    s, ds = st.basis_state(n, [0] * n, d), DenseState(d, n)
    for g in word:
        s, ds = apply_clifford_gate(s, g), apply_gate_dense(ds, g)
    return s, ds


def random_state(rng, d, n, length=None):
    length = int(rng.integers(0, 40)) if length is None else length
    s, _ = run_word(random_word(rng, d, n, length), d, n)
    return s


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# filled by test_acceptance.py, one line per criterion
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
