"""The qudit T gate M_d, its Clifford image C_d, and orbit decompositions.

``M_d = diag(exp(2 pi i lambda_j / d^m))`` with

    lambda_j = d^(m-2) [d C(j,3) - j C(d,3) + C(d+1,4)],

``m = 2`` for d = 3 and ``m = 1`` otherwise. ``C_d = M_d X M_d^dag`` is the
Clifford ``e^{-2 pi i/9} X P`` (d = 3) or ``omega^{-1/3} X P`` (d > 3).

The magic state ``M_d|+>`` is the +1 eigenvector of ``C_d``. Starting from
``|0~> = Z^p|+>``, the d states ``|j~> = C_d^j |0~>`` all have the same
overlap ``alpha = <0~|M_d|+>`` with it, and

    M_d|+> = (alpha / (d |alpha|^2)) sum_j |j~>.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from math import comb

import numpy as np

from . import clifford as cl
from .field import Phase, check_dimension, inverse, legendre
from .inner import inner
from .stabilizer import StabilizerState, apply_p, apply_x, apply_z, plus_state


class UnsupportedDimension(ValueError):
    pass


@dataclass(frozen=True)
class MagicGateSpec:
    d: int
    m: int
    lambdas: tuple[int, ...]
    phases: tuple[Phase, ...]

    @property
    def diagonal(self) -> np.ndarray:
        return np.array([complex(p) for p in self.phases])

    @property
    def dense(self) -> np.ndarray:
        return np.diag(self.diagonal)


def order_exponent(d: int) -> int:
    return 2 if d == 3 else 1


def build_M(d: int) -> MagicGateSpec:
    try:
        d = check_dimension(d)
    except ValueError as exc:
        raise UnsupportedDimension(str(exc)) from None
    m = order_exponent(d)
    lambdas = []
    for j in range(d):
        num = d * comb(j, 3) - j * comb(d, 3) + comb(d + 1, 4)
        scaled = num * d ** (m - 2) if m >= 2 else num
        if m < 2:
            assert num % d == 0
            scaled = num // d
        lambdas.append(scaled)
    # exp(2 pi i lambda / d^m) in units of 2 pi / (8 d^2)
    unit = 8 * d * d // d ** m
    phases = tuple(Phase(d, unit * lam) for lam in lambdas)
    return MagicGateSpec(d, m, tuple(lambdas), phases)


def c_phase(d: int) -> Phase:
    """Global phase of ``C_d`` relative to ``X P``."""
    d = check_dimension(d)
    if d == 3:
        return Phase(d, -8)  # e^{-2 pi i / 9}; checked against M X M^dag
    return Phase.omega(d, -inverse(3, d))


def build_C(d: int) -> cl.CliffordElement:
    xp = cl.clifford_compose(cl.shift(d), cl.phase_gate(d))
    return cl.CliffordElement(d, xp.F, xp.chi, xp.phase * c_phase(d))


def apply_C(s: StabilizerState, q: int, power: int = 1) -> StabilizerState:
    """Apply ``C_d**power`` as the gate word (phase, P then X)."""
    ph = c_phase(s.d)
    for _ in range(power % s.d):
        s = apply_x(apply_p(s, q), q).scaled(ph)
    return s


def build_Uv(d: int, zp: int, gammap: int, epsp: int) -> np.ndarray:
    """Diagonal of the gate ``U_v`` with ``U_v X U_v^dag = omega^eps C_{gamma,(1,z)}``."""
    d = check_dimension(d)
    k = np.arange(d)
    if d == 3:
        v = np.array([0, 6 * zp + 2 * gammap + 3 * epsp, 6 * zp + gammap + 6 * epsp]) % 9
        return np.exp(2j * np.pi * v / 9)
    return np.exp(2j * np.pi * uv_exponents(d, zp, gammap, epsp) / d)


def uv_exponents(d: int, zp: int, gammap: int, epsp: int) -> np.ndarray:
    inv12 = inverse(12, d)
    k = np.arange(d, dtype=np.int64)
    v = inv12 * k * (gammap + k * (6 * zp + (2 * k - 3) * gammap)) + k * epsp
    return v % d


def magic_uv_parameters(d: int) -> tuple[int, int, int]:
    """``(z', gamma', eps')`` with ``M_d`` proportional to ``U_v`` (d > 3)."""
    return (d - 1) // 2, 1, (inverse(12, d) * (6 * d - 2 * d * d - 1)) % d


# overlaps -------------------------------------------------------------

def alpha_direct(d: int, p: int) -> complex:
    """``(1/d) Tr(Z^{-p} M_d)`` summed term by term."""
    M = build_M(d).diagonal
    j = np.arange(d)
    return complex(np.sum(np.exp(-2j * np.pi * p * j / d) * M) / d)


def psi(d: int, p: int) -> int:
    return d * d - 3 * d + 3 + 6 * p


def depressed_sum(d: int, p: int) -> complex:
    """``S = (1/d) sum_j omega^{(1/6) j (j^2 - psi)}``; real for d > 3."""
    inv6 = inverse(6, d)
    j = np.arange(d, dtype=np.int64)
    e = (inv6 * j * ((j * j - psi(d, p)) % d)) % d
    return complex(np.sum(np.exp(2j * np.pi * e / d)) / d)


def alpha_prefactor_exponent(d: int, p: int) -> int:
    """Exponent of omega in the phase ``omega^{C(d,4)/d - p}``."""
    return (comb(d, 4) // d - p) % d


def alpha_closed(d: int, p: int) -> complex:
    """Alpha from the depressed cubic form (d > 3) or the d = 3 table."""
    if d == 3:
        p %= 3
        if p == 0:
            return (1 + 2 * math.cos(2 * math.pi / 9)) / 3
        if p == 1:
            return cmath.exp(1j * math.pi / 3) * (2 * math.cos(math.pi / 9) - 1) / 3
        return cmath.exp(2j * math.pi / 3) * (1 + 2 * math.cos(4 * math.pi / 9)) / 3
    S = depressed_sum(d, p)
    if abs(S.imag) > 1e-12:
        raise ArithmeticError(f"depressed cubic sum not real: {S}")
    return complex(Phase.omega(d, alpha_prefactor_exponent(d, p))) * S.real


def alpha(d: int, p: int) -> complex:
    """Overlap ``<+|Z^{-p} M_d|+>``, cross-checked between both routes."""
    a = alpha_direct(d, p)
    b = alpha_closed(d, p)
    if abs(a - b) > 1e-12:
        raise ArithmeticError(f"alpha routes disagree for d={d}, p={p}: {a} vs {b}")
    return a


def optimal_p(d: int) -> int:
    best, best_val = 0, -1.0
    for p in range(d):
        v = abs(alpha_direct(d, p))
        if v > best_val + 1e-12:
            best, best_val = p, v
    return best


def kappa(d: int, p: int | None = None) -> float:
    p = optimal_p(d) if p is None else p
    return -2 * math.log(abs(alpha(d, p)), d)


def beta_closed(d: int, j: int, p: int) -> complex:
    """Phase of ``sqrt(d) <0~|j~>`` in closed form (d = 3 from the table)."""
    j %= d
    if j == 0:
        return 1.0 + 0j
    if d == 3:
        if p % 3 != 0:
            raise ValueError("tabulated d=3 betas are for p = 0")
        # sqrt(3) <+|C_3|+> = e^{-i pi/18}; the often-quoted e^{+i pi/18} is its conjugate
        return cmath.exp((-1j if j == 1 else 1j) * math.pi / 18)
    inv2, inv6 = inverse(2, d), inverse(6, d)
    e = ((inv6 - inv2 ** 3) * j ** 3 - (p + inv2) * j) % d
    val = cmath.exp(2j * math.pi * e / d) * legendre(2 * j, d)
    if d % 4 == 3:
        val *= 1j
    return val


# orbit ----------------------------------------------------------------

@dataclass(frozen=True)
class OrbitDecomposition:
    d: int
    p: int
    states: tuple[StabilizerState, ...]
    alpha: complex
    betas: tuple[complex, ...]
    sign: int

    @property
    def prefactor(self) -> complex:
        """Coefficient ``c`` with ``M_d|+> = c * sum_j |j~>``."""
        return self.alpha / (self.d * abs(self.alpha) ** 2)

    @property
    def z_single(self) -> float:
        """``Z(F_d) = sum_j <0~|j~>``, which equals ``d |alpha|^2``."""
        return float((1 + sum(self.betas[1:]) / math.sqrt(self.d)).real)


def orbit_representative(d: int, p: int) -> StabilizerState:
    return apply_z(plus_state(1, d), 0, p)


def orbit(d: int, p: int | None = None) -> OrbitDecomposition:
    d = check_dimension(d)
    p = optimal_p(d) if p is None else p % d
    states = [orbit_representative(d, p)]
    for _ in range(1, d):
        states.append(apply_C(states[-1], 0))
    a = alpha(d, p)
    # beta_0 = 1 by convention, beta_j = sqrt(d) <0~|j~> otherwise
    betas = [1.0 + 0j]
    for s in states[1:]:
        betas.append(complex(inner(s, states[0])) * math.sqrt(d))
    if d == 3:
        sign = 1  # the tabulated d=3 overlaps carry positive real factors
    else:
        sign = 1 if depressed_sum(d, p).real > 0 else -1
    return OrbitDecomposition(d, p, tuple(states), a, tuple(betas), sign)
