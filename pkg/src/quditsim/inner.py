"""Exact O(n^3) inner product of canonical-form stabilizer states.

The two affine supports are intersected by solving ``G1 u1 - G2 u2 = h2 - h1``
over Z_d. Both phase polynomials are pulled back to coordinates ``w`` on the
intersection, and their difference ``2bar w^T Q w + L w + c`` is summed. The
sum is done by congruence-diagonalizing ``Q``, which splits it into a
product of one-variable Gauss sums.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import Phase, gauss_sum, inverse, solve_affine
from .stabilizer import StabilizerState, pullback_phase


@dataclass
class AffineIntersection:
    empty: bool
    Gc: np.ndarray | None = None
    hc: np.ndarray | None = None
    pullback1: tuple[np.ndarray, np.ndarray] | None = None
    pullback2: tuple[np.ndarray, np.ndarray] | None = None

    @property
    def dim(self) -> int:
        return -1 if self.empty else self.Gc.shape[1]


def intersect_affine(A1, A2, d: int) -> AffineIntersection:
    """Intersect ``{G1 u + h1}`` with ``{G2 u + h2}``.

    Each pullback is a pair ``(A, b)`` with ``u_i = A w + b`` for the
    intersection point ``Gc w + hc``.
    """
    (G1, h1), (G2, h2) = A1, A2
    k1 = G1.shape[1]
    sol = solve_affine(np.concatenate([G1, -G2], axis=1), h2 - h1, d)
    if sol is None:
        return AffineIntersection(True)
    x0, N = sol
    P1 = (N[:k1], x0[:k1])
    P2 = (N[k1:], x0[k1:])
    Gc = (G1 @ P1[0]) % d
    hc = (G1 @ P1[1] + h1) % d
    return AffineIntersection(False, Gc, hc, P1, P2)


def diagonalize_quadratic(Q: np.ndarray, d: int) -> tuple[np.ndarray, np.ndarray]:
    """Invertible ``P`` and vector ``lam`` with ``P^T Q P = diag(lam)`` over Z_d."""
    A = np.asarray(Q, dtype=np.int64) % d
    k = A.shape[0]
    P = np.eye(k, dtype=np.int64)
    for i in range(k):
        if A[i, i] == 0:
            later = [j for j in range(i + 1, k) if A[j, j]]
            if later:
                j = later[0]
                A[[i, j]] = A[[j, i]]
                A[:, [i, j]] = A[:, [j, i]]
                P[:, [i, j]] = P[:, [j, i]]
            else:
                off = [j for j in range(i + 1, k) if A[i, j]]
                if not off:
                    continue
                # new diagonal Q_ii + 2 Q_ij + Q_jj = 2 Q_ij != 0 as d is odd
                j = off[0]
                A[i] = (A[i] + A[j]) % d
                A[:, i] = (A[:, i] + A[:, j]) % d
                P[:, i] = (P[:, i] + P[:, j]) % d
        inv = inverse(int(A[i, i]), d)
        for j in range(i + 1, k):
            if A[j, i]:
                f = (A[j, i] * inv) % d
                A[j] = (A[j] - f * A[i]) % d
                A[:, j] = (A[:, j] - f * A[:, i]) % d
                P[:, j] = (P[:, j] - f * P[:, i]) % d
    return P, np.diag(A).copy()


def quadratic_sum(Q: np.ndarray, L: np.ndarray, d: int) -> Phase:
    """Exact ``sum_{w in Z_d^k} omega**(2bar w^T Q w + L w)``."""
    k = len(L)
    if k == 0:
        return Phase.one(d)
    P, lam = diagonalize_quadratic(Q, d)
    Lp = (L @ P) % d
    half = inverse(2, d)
    out = Phase.one(d)
    for li, bi in zip(lam, Lp):
        out = out * gauss_sum(half * int(li), int(bi), d).phase
        if out.zero:
            break
    return out


def inner_exact(s1: StabilizerState, s2: StabilizerState) -> Phase:
    """``<s2|s1>`` as an exact :class:`Phase` (zero, or d^{-m/2} times a root of unity)."""
    if s1.d != s2.d or s1.n != s2.n:
        raise ValueError("states must share d and n")
    d = s1.d
    if s1.is_zero or s2.is_zero:
        return Phase.zero_of(d)
    X = intersect_affine((s1.G, s1.h), (s2.G, s2.h), d)
    if X.empty:
        return Phase.zero_of(d)
    Q1, L1, c1 = pullback_phase(s1.Q, s1.L, *X.pullback1, d)
    Q2, L2, c2 = pullback_phase(s2.Q, s2.L, *X.pullback2, d)
    total = quadratic_sum((Q1 - Q2) % d, (L1 - L2) % d, d)
    return s1.amp * s2.amp.conj() * Phase.omega(d, c1 - c2) * total


def inner(s1: StabilizerState, s2: StabilizerState) -> Phase:
    """Alias of :func:`inner_exact`; ``complex(inner(a, b)) == vdot(b, a)``."""
    return inner_exact(s1, s2)
