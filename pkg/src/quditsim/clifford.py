"""Single-qudit Heisenberg-Weyl operators and Clifford elements.

A Clifford element is stored as ``phase * D_chi U_F`` with ``F`` in SL(2, Z_d).
Phases are tracked exactly. The metaplectic operators ``U_F`` given by the
standard explicit formula satisfy ``U_F D_x U_F^dag = D_{Fx}`` exactly, but
``U_F1 U_F2`` equals ``U_{F1 F2}`` only up to a fourth root of unity; that
cocycle is read off the d x d matrices once per pair and cached.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .field import Phase, check_dimension, inverse, roots_per_turn

WeylIndex = tuple[int, int]


def _tau_exponent(m: int, d: int) -> int:
    """Phase-group exponent of tau**m (tau = omega**(1/2 mod d))."""
    return 8 * d * ((inverse(2, d) * m) % d)


def snap_phase(z: complex, d: int, tol: float = 1e-9) -> Phase:
    """Exact unit phase closest to ``z``; raises if ``z`` is not on the grid."""
    n = roots_per_turn(d)
    e = round(cmath.phase(z) * n / (2 * math.pi))
    if abs(z - cmath.exp(2j * math.pi * e / n)) > tol:
        raise ValueError(f"{z} is not a {n}-th root of unity")
    return Phase(d, e)


def symplectic_product(a: WeylIndex, b: WeylIndex, d: int) -> int:
    """``z1*x2 - x1*z2 mod d``."""
    (x1, z1), (x2, z2) = a, b
    return (z1 * x2 - x1 * z2) % d


def weyl_compose(a: WeylIndex, b: WeylIndex, d: int) -> tuple[WeylIndex, Phase]:
    """``D_a D_b = phase * D_{a+b}`` with ``phase = tau**<a.b>``."""
    c = ((a[0] + b[0]) % d, (a[1] + b[1]) % d)
    return c, Phase(d, _tau_exponent(symplectic_product(a, b, d), d))


def weyl_matrix(a: WeylIndex, d: int) -> np.ndarray:
    x, z = a[0] % d, a[1] % d
    j = np.arange(d)
    M = np.zeros((d, d), dtype=complex)
    # X^x Z^z |j> = omega^{z j} |j + x>
    M[(j + x) % d, j] = np.exp(2j * np.pi * z * j / d)
    return complex(Phase(d, _tau_exponent(x * z, d))) * M


@lru_cache(maxsize=None)
def _metaplectic(F: tuple[int, int, int, int], d: int) -> np.ndarray:
    a, b, g, dd = F
    tau = lambda m: np.exp(2j * np.pi * ((inverse(2, d) * m) % d) / d)
    M = np.zeros((d, d), dtype=complex)
    if b % d:
        bi = inverse(b, d)
        for j in range(d):
            for k in range(d):
                M[j, k] = tau(bi * (a * k * k - 2 * j * k + dd * j * j))
        M /= math.sqrt(d)
    else:
        for k in range(d):
            M[(a * k) % d, k] = tau(a * g * k * k)
    M.setflags(write=False)
    return M


@lru_cache(maxsize=None)
def _cocycle(F1: tuple, F2: tuple, d: int) -> Phase:
    prod = _metaplectic(F1, d) @ _metaplectic(F2, d)
    F12 = _matmul2(F1, F2, d)
    ref = _metaplectic(F12, d)
    idx = np.unravel_index(np.argmax(np.abs(ref)), ref.shape)
    return snap_phase(prod[idx] / ref[idx], d)


def _matmul2(A: tuple, B: tuple, d: int) -> tuple[int, int, int, int]:
    a, b, c, e = A
    p, q, r, s = B
    return ((a * p + b * r) % d, (a * q + b * s) % d,
            (c * p + e * r) % d, (c * q + e * s) % d)


def _apply2(F: tuple, v: WeylIndex, d: int) -> WeylIndex:
    a, b, c, e = F
    return ((a * v[0] + b * v[1]) % d, (c * v[0] + e * v[1]) % d)


@dataclass(frozen=True)
class CliffordElement:
    """``phase * D_chi * U_F`` acting on one qudit."""

    d: int
    F: tuple[int, int, int, int]
    chi: WeylIndex = (0, 0)
    phase: Phase = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        d = check_dimension(self.d)
        F = tuple(int(v) % d for v in np.asarray(self.F).ravel())
        if len(F) != 4 or (F[0] * F[3] - F[1] * F[2]) % d != 1:
            raise ValueError(f"F must be in SL(2, Z_{d}), got {F}")
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "chi", (int(self.chi[0]) % d, int(self.chi[1]) % d))
        if self.phase is None:
            object.__setattr__(self, "phase", Phase.one(d))

    def __matmul__(self, other: CliffordElement) -> CliffordElement:
        return clifford_compose(self, other)

    def is_scalar(self) -> bool:
        return self.F == (1, 0, 0, 1) and self.chi == (0, 0)


def identity(d: int) -> CliffordElement:
    return CliffordElement(d, (1, 0, 0, 1))


def hadamard(d: int) -> CliffordElement:
    return CliffordElement(d, (0, d - 1, 1, 0))


def phase_gate(d: int) -> CliffordElement:
    """P|j> = omega^{j(j-1)/2}|j>."""
    return CliffordElement(d, (1, 0, 1, 1), (0, (d - 1) // 2))


def shift(d: int, a: int = 1) -> CliffordElement:
    return CliffordElement(d, (1, 0, 0, 1), (a, 0))


def clock(d: int, a: int = 1) -> CliffordElement:
    return CliffordElement(d, (1, 0, 0, 1), (0, a))


def clifford_gamma(d: int, gamma: int, chi: WeylIndex) -> CliffordElement:
    """``C_{gamma,chi} = D_chi U_gamma`` with ``F = [[1, 0], [gamma, 1]]``."""
    return CliffordElement(d, (1, 0, gamma, 1), chi)


def clifford_compose(c1: CliffordElement, c2: CliffordElement) -> CliffordElement:
    """Product ``c1 * c2`` with the phase tracked exactly."""
    d = c1.d
    if c2.d != d:
        raise ValueError("dimension mismatch")
    moved = _apply2(c1.F, c2.chi, d)
    chi, wphase = weyl_compose(c1.chi, moved, d)
    ph = c1.phase * c2.phase * wphase * _cocycle(c1.F, c2.F, d)
    return CliffordElement(d, _matmul2(c1.F, c2.F, d), chi, ph)


def clifford_power(c: CliffordElement, m: int) -> CliffordElement:
    out = identity(c.d)
    for _ in range(m):
        out = clifford_compose(out, c)
    return out


def dense_matrix(c: CliffordElement) -> np.ndarray:
    return complex(c.phase) * weyl_matrix(c.chi, c.d) @ _metaplectic(c.F, c.d)


def conjugate_weyl(c: CliffordElement, a: WeylIndex) -> tuple[WeylIndex, Phase]:
    """``c D_a c^dag = phase * D_{F a}`` with ``phase = omega**<chi . F a>``.

    The product in the exponent is the symplectic one; this is the convention
    the dense matrices confirm (``tests/test_clifford.py``).
    """
    d = c.d
    fa = _apply2(c.F, (a[0] % d, a[1] % d), d)
    return fa, Phase.omega(d, symplectic_product(c.chi, fa, d))


def element_order(c: CliffordElement, limit: int | None = None) -> int:
    """Smallest m >= 1 such that ``c**m`` is proportional to the identity."""
    limit = limit or 4 * c.d ** 3
    acc = c
    for m in range(1, limit + 1):
        if acc.is_scalar():
            return m
        acc = clifford_compose(acc, c)
    raise RuntimeError("order not found below limit")
