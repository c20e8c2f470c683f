"""Exact arithmetic over Z_d for odd prime d.

Scalars are plain Python ints reduced mod d; vectors and matrices are
``numpy`` int64 arrays reduced mod d. The only non-trivial value type is
:class:`Phase`, an exact complex number ``d**(s/2) * exp(2*pi*i*e/(8*d*d))``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np


class ZeroInverse(ZeroDivisionError):
    pass


class NonPrimeDimension(ValueError):
    pass


@lru_cache(maxsize=None)
def is_odd_prime(d: int) -> bool:
    if d < 3 or d % 2 == 0:
        return False
    f = 3
    while f * f <= d:
        if d % f == 0:
            return False
        f += 2
    return True


def check_dimension(d: int) -> int:
    if not isinstance(d, (int, np.integer)) or not is_odd_prime(int(d)):
        raise NonPrimeDimension(f"dimension must be an odd prime, got {d!r}")
    return int(d)


def inverse(a: int, d: int) -> int:
    """Multiplicative inverse of ``a`` modulo the prime ``d``."""
    a %= d
    if a == 0:
        raise ZeroInverse(f"0 has no inverse mod {d}")
    return pow(a, -1, d)


def legendre(a: int, d: int) -> int:
    a %= d
    if a == 0:
        return 0
    return 1 if pow(a, (d - 1) // 2, d) == 1 else -1


def roots_per_turn(d: int) -> int:
    """Size of the cyclic phase group used by :class:`Phase`."""
    return 8 * d * d


@dataclass(frozen=True)
class Phase:
    """Exact scalar ``d**(s/2) * exp(2*pi*i*e / (8 d^2))``, or zero.

    The granularity 8d^2 embeds omega = e^{2 pi i/d}, tau = omega^{1/2 mod d},
    e^{2 pi i/d^2}, i and -1, which is every phase the simulator produces.
    """

    d: int
    e: int = 0
    s: int = 0
    zero: bool = False

    def __post_init__(self):
        if self.zero:
            object.__setattr__(self, "e", 0)
            object.__setattr__(self, "s", 0)
        else:
            object.__setattr__(self, "e", self.e % roots_per_turn(self.d))

    @classmethod
    def one(cls, d: int) -> Phase:
        return cls(d)

    @classmethod
    def zero_of(cls, d: int) -> Phase:
        return cls(d, zero=True)

    @classmethod
    def omega(cls, d: int, power: int = 1) -> Phase:
        """``omega**power`` with omega = e^{2 pi i/d}."""
        return cls(d, 8 * d * (power % d))

    @classmethod
    def sqrt_d(cls, d: int, power: int = 1) -> Phase:
        return cls(d, 0, power)

    @property
    def magnitude_exponent(self) -> int:
        return self.s

    def __mul__(self, other: Phase) -> Phase:
        if not isinstance(other, Phase):
            return NotImplemented
        if other.d != self.d:
            raise ValueError("phases over different dimensions")
        if self.zero or other.zero:
            return Phase.zero_of(self.d)
        return Phase(self.d, self.e + other.e, self.s + other.s)

    def __pow__(self, m: int) -> Phase:
        if self.zero:
            if m <= 0:
                raise ZeroDivisionError("zero phase to non-positive power")
            return self
        return Phase(self.d, self.e * m, self.s * m)

    def conj(self) -> Phase:
        if self.zero:
            return self
        return Phase(self.d, -self.e, self.s)

    def __complex__(self) -> complex:
        if self.zero:
            return 0j
        n = roots_per_turn(self.d)
        return self.d ** (self.s / 2) * cmath.exp(2j * math.pi * self.e / n)

    def __abs__(self) -> float:
        return 0.0 if self.zero else self.d ** (self.s / 2)

    def to_complex(self) -> complex:
        return complex(self)


@dataclass(frozen=True)
class GaussSumResult:
    """Value of a quadratic exponential sum.

    Exactly one branch is active: either the quadratic coefficient is
    nonzero (closed-form phase of magnitude sqrt(d)), or it vanishes and the
    sum collapses to ``d * [kronecker_arg == 0]``.
    """

    phase: Phase
    is_kronecker: bool
    kronecker_arg: int | None = None

    def __complex__(self) -> complex:
        return complex(self.phase)


def gauss_sum(a: int, b: int, d: int) -> GaussSumResult:
    """Exact value of ``sum_j omega**(a*j*j + b*j)`` over j in Z_d."""
    a %= d
    b %= d
    if a == 0:
        if b == 0:
            return GaussSumResult(Phase.sqrt_d(d, 2), True, 0)
        return GaussSumResult(Phase.zero_of(d), True, b)
    # complete the square: a j^2 + b j = a (j + b/(2a))^2 - b^2/(4a)
    shift = (-b * b * inverse(4 * a, d)) % d
    val = Phase.omega(d, shift) * Phase.sqrt_d(d, 1)
    if legendre(a, d) < 0:
        val = val * Phase(d, 4 * d * d)  # -1
    if d % 4 == 3:
        val = val * Phase(d, 2 * d * d)  # i
    return GaussSumResult(val, False)


def quadratic_gauss_sum(f: int, g: int, d: int) -> GaussSumResult:
    """``sum_j omega**(f*j*(j-1)/2 + g*j)``, the single-qudit canonical sum."""
    half = inverse(2, d)
    return gauss_sum(half * f, g - half * f, d)


# matrix helpers ---------------------------------------------------------

def mod(a, d: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % d


def rank_mod(M: np.ndarray, d: int) -> int:
    return len(rref(M, d)[1])


def rref(M: np.ndarray, d: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over Z_d with leftmost pivots."""
    A = mod(M, d).copy()
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if len(nz) == 0:
            continue
        p = r + nz[0]
        if p != r:
            A[[r, p]] = A[[p, r]]
        A[r] = (A[r] * inverse(int(A[r, c]), d)) % d
        others = np.nonzero(A[:, c])[0]
        for o in others:
            if o != r:
                A[o] = (A[o] - A[o, c] * A[r]) % d
        pivots.append(c)
        r += 1
    return A, pivots


def solve_affine(A: np.ndarray, b: np.ndarray, d: int):
    """Solve ``A x = b`` over Z_d.

    Returns ``(x0, N)`` with every solution ``x0 + N w``, or ``None`` if the
    system is inconsistent. ``N`` has one column per free variable.
    """
    A = mod(A, d)
    rows, cols = A.shape
    aug = np.concatenate([A, mod(b, d).reshape(rows, 1)], axis=1)
    R, pivots = rref(aug, d)
    if cols in pivots:
        return None
    x0 = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x0[c] = R[i, cols]
    free = [c for c in range(cols) if c not in pivots]
    N = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        N[f, j] = 1
        for i, c in enumerate(pivots):
            N[c, j] = (-R[i, f]) % d
    return x0, N
