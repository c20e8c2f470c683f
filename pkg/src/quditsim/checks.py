"""Oracle cross-validation suites behind ``quditsim check``."""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import stabilizer as st
from .approx import Z_of_code, build_approx_state, sample_code
from .circuit import Gate
from .dense import DenseState, apply_gate_dense
from .field import gauss_sum, inverse, legendre
from .inner import inner
from .magic import alpha, build_M, optimal_p, orbit
from .weaksim import apply_clifford_gate

TABLE_ALPHA = {3: 0.84403, 5: 0.723607, 7: 0.677277}


@dataclass
class SuiteResult:
    name: str
    passed: int
    failed: int

    @property
    def ok(self) -> bool:
        return self.failed == 0


def _tally(name, results) -> SuiteResult:
    results = list(results)
    bad = sum(1 for r in results if not r)
    return SuiteResult(name, len(results) - bad, bad)


def suite_field() -> SuiteResult:
    def cases():
        for d in (3, 5, 7, 11, 13):
            for a in range(1, d):
                yield (a * inverse(a, d)) % d == 1
                squares = {(x * x) % d for x in range(1, d)}
                yield legendre(a, d) == (1 if a in squares else -1)
    return _tally("field", cases())


def suite_gauss() -> SuiteResult:
    def cases():
        for d in (3, 5, 7, 11, 13):
            j = np.arange(d)
            for a, b in itertools.product(range(d), repeat=2):
                brute = np.exp(2j * np.pi * (a * j * j + b * j) / d).sum()
                yield abs(complex(gauss_sum(a, b, d)) - brute) < 1e-12
    return _tally("gauss", cases())


def suite_table() -> SuiteResult:
    def cases():
        for d, ref in TABLE_ALPHA.items():
            yield abs(abs(alpha(d, optimal_p(d))) - ref) < 1e-5
    return _tally("table", cases())


def _random_word(rng, d, n, length):
    names = ["X", "Z", "P", "H"] + (["CSUM"] if n > 1 else [])
    word = []
    for _ in range(length):
        g = names[rng.integers(len(names))]
        if g == "CSUM":
            c, t = rng.choice(n, size=2, replace=False)
            word.append(Gate(g, (int(c), int(t))))
        else:
            word.append(Gate(g, (int(rng.integers(n)),), int(rng.integers(1, d)) if g != "H" else 1))
    return word


def suite_canonical(rounds: int, seed: int = 7) -> SuiteResult:
    rng = np.random.default_rng(seed)

    def cases():
        for _ in range(rounds):
            d = int(rng.choice([3, 5]))
            n = int(rng.integers(1, 4))
            s, ds = st.basis_state(n, [0] * n, d), DenseState(d, n)
            for g in _random_word(rng, d, n, int(rng.integers(1, 51))):
                s, ds = apply_clifford_gate(s, g), apply_gate_dense(ds, g)
            yield np.allclose(st.dense_vector(s), ds.amplitudes, atol=1e-10)
    return _tally("canonical", cases())


def suite_orbit() -> SuiteResult:
    def cases():
        for d in (3, 5, 7):
            o = orbit(d)
            plus = np.ones(d) / math.sqrt(d)
            recon = o.prefactor * sum(st.dense_vector(s) for s in o.states)
            yield np.allclose(recon, build_M(d).dense @ plus, atol=1e-10)
            for a, b in itertools.combinations(o.states, 2):
                yield abs(abs(complex(inner(a, b))) ** 2 - 1 / d) < 1e-12
        yield abs(orbit(3).betas[1] - cmath.exp(-1j * math.pi / 18)) < 1e-12
    return _tally("orbit", cases())


def suite_fidelity(seed: int = 11) -> SuiteResult:
    rng = np.random.default_rng(seed)
    o = orbit(3)
    target1 = build_M(3).dense @ (np.ones(3) / math.sqrt(3))

    def cases():
        for t in range(1, 7):
            target = target1
            for _ in range(t - 1):
                target = np.kron(target, target1)
            for k in range(0, min(t, 3) + 1):
                code = sample_code(t, k, rng, 3)
                Z = Z_of_code(code, o.betas)
                vec = sum(c * st.dense_vector(s) for c, s in build_approx_state(code, o, Z))
                fid = abs(np.vdot(vec, target)) ** 2
                yield abs(fid - code.size * abs(o.alpha) ** (2 * t) / Z) < 1e-10
    return _tally("fidelity", cases())


LEVELS = {
    "fast": lambda: [suite_field(), suite_gauss(), suite_table()],
    "full": lambda: [suite_field(), suite_gauss(), suite_table(), suite_canonical(200),
                     suite_orbit(), suite_fidelity()],
}


def run_checks(level: str) -> list[SuiteResult]:
    if level not in LEVELS:
        raise KeyError(level)
    return LEVELS[level]()
