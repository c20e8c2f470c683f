"""Canonical-form n-qudit stabilizer states.

A state is stored as

    amp * sum_{u in Z_d^k} omega**(2bar * u^T Q u + L . u) |G u + h>

with ``G`` an n x k matrix of full column rank, ``Q`` symmetric, and ``amp``
an exact :class:`~quditsim.field.Phase` (a normalized state has
``|amp| = d**(-k/2)``). Phases live on the summation coordinates ``u``.

After every operation the form is re-canonicalized: ``G^T`` is brought to
reduced row echelon form (leftmost pivots) and ``h`` is shifted so it vanishes
on the pivot rows. The pair ``(G, h)`` is then a unique description of the
affine support, and ``(Q, L, amp)`` is determined by the state.

Gate functions return new states; inputs are never mutated.
"""

from __future__ import annotations

import numpy as np

from .field import (
    Phase,
    check_dimension,
    gauss_sum,
    inverse,
    mod,
    rank_mod,
)

DENSE_CAP = 10**6


class CapExceeded(RuntimeError):
    pass


class SameQudit(ValueError):
    pass


class StabilizerState:
    __slots__ = ("d", "n", "G", "h", "Q", "L", "amp")

    def __init__(self, d, G, h, Q, L, amp: Phase, *, canonical: bool = False):
        self.d = d
        self.h = mod(h, d).reshape(-1)
        self.n = len(self.h)
        G = mod(G, d)
        k = G.shape[1] if G.ndim == 2 else 0
        self.G = G.reshape(self.n, k)
        self.Q = mod(Q, d).reshape(k, k)
        self.L = mod(L, d).reshape(k)
        self.amp = amp
        if not canonical:
            _canonicalize(self)

    @property
    def k(self) -> int:
        return self.G.shape[1]

    @property
    def is_zero(self) -> bool:
        return self.amp.zero

    def copy(self) -> StabilizerState:
        return StabilizerState(self.d, self.G.copy(), self.h.copy(),
                               self.Q.copy(), self.L.copy(), self.amp, canonical=True)

    def scaled(self, phase: Phase) -> StabilizerState:
        out = self.copy()
        out.amp = out.amp * phase
        return out

    def norm_squared_exact(self) -> Phase:
        """``<psi|psi>`` as an exact value (``|amp|^2 d^k``)."""
        if self.is_zero:
            return Phase.zero_of(self.d)
        return Phase(self.d, 0, self.amp.s * 2 + 2 * self.k)

    def key(self) -> tuple:
        """Hashable exact description; equal keys mean equal vectors."""
        return (self.d, self.n, self.G.tobytes(), self.h.tobytes(), self.Q.tobytes(),
                self.L.tobytes(), self.amp)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StabilizerState):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero and self.n == other.n
        return (self.d == other.d and self.G.shape == other.G.shape
                and np.array_equal(self.G, other.G) and np.array_equal(self.h, other.h)
                and np.array_equal(self.Q, other.Q) and np.array_equal(self.L, other.L)
                and self.amp == other.amp)

    def __hash__(self):
        return hash(self.key())

    def __repr__(self) -> str:
        return (f"StabilizerState(d={self.d}, n={self.n}, k={self.k}, "
                f"amp=({self.amp.e}/{8 * self.d ** 2}, s={self.amp.s}, zero={self.amp.zero}))")


# construction -----------------------------------------------------------

def basis_state(n: int, x, d: int) -> StabilizerState:
    d = check_dimension(d)
    x = mod(x, d).reshape(-1)
    if len(x) != n:
        raise ValueError(f"expected {n} digits, got {len(x)}")
    return StabilizerState(d, np.zeros((n, 0), np.int64), x, np.zeros((0, 0)),
                           np.zeros(0), Phase.one(d))


def plus_state(n: int, d: int) -> StabilizerState:
    d = check_dimension(d)
    return StabilizerState(d, np.eye(n, dtype=np.int64), np.zeros(n), np.zeros((n, n)),
                           np.zeros(n), Phase.sqrt_d(d, -n))


def tensor(s1: StabilizerState, s2: StabilizerState) -> StabilizerState:
    if s1.d != s2.d:
        raise ValueError("dimension mismatch")
    d = s1.d
    n1, n2, k1, k2 = s1.n, s2.n, s1.k, s2.k
    G = np.zeros((n1 + n2, k1 + k2), np.int64)
    G[:n1, :k1] = s1.G
    G[n1:, k1:] = s2.G
    Q = np.zeros((k1 + k2, k1 + k2), np.int64)
    Q[:k1, :k1] = s1.Q
    Q[k1:, k1:] = s2.Q
    return StabilizerState(d, G, np.concatenate([s1.h, s2.h]), Q,
                           np.concatenate([s1.L, s2.L]), s1.amp * s2.amp)


def tensor_all(states) -> StabilizerState:
    it = iter(states)
    out = next(it)
    for s in it:
        out = tensor(out, s)
    return out


# gates ----------------------------------------------------------------

def _check_qudit(s: StabilizerState, q: int):
    if not 0 <= q < s.n:
        raise IndexError(f"qudit {q} out of range for n={s.n}")


def apply_x(s: StabilizerState, q: int, a: int = 1) -> StabilizerState:
    _check_qudit(s, q)
    h = s.h.copy()
    h[q] = (h[q] + a) % s.d
    return StabilizerState(s.d, s.G, h, s.Q, s.L, s.amp)


def apply_z(s: StabilizerState, q: int, a: int = 1) -> StabilizerState:
    """Multiply by ``omega**(a x_q)`` with ``x_q = g_q . u + h_q``."""
    _check_qudit(s, q)
    d = s.d
    L = (s.L + a * s.G[q]) % d
    amp = s.amp * Phase.omega(d, a * int(s.h[q]))
    return StabilizerState(d, s.G, s.h, s.Q, L, amp, canonical=True)


def apply_p(s: StabilizerState, q: int, a: int = 1) -> StabilizerState:
    """Multiply by ``omega**(a x_q (x_q - 1)/2)``."""
    _check_qudit(s, q)
    d = s.d
    g, hq = s.G[q], int(s.h[q])
    # 2bar a x(x-1) with x = g.u + hq, split into u-quadratic, u-linear, constant
    Q = (s.Q + a * np.outer(g, g)) % d
    L = (s.L + a * (hq - inverse(2, d)) * g) % d
    amp = s.amp * Phase.omega(d, a * (hq * (hq - 1) // 2))
    return StabilizerState(d, s.G, s.h, Q, L, amp, canonical=True)


def apply_csum(s: StabilizerState, control: int, target: int, power: int = 1) -> StabilizerState:
    """``|a>|b> -> |a>|b + power*a>``; acts on rows of ``G`` and on ``h``."""
    _check_qudit(s, control)
    _check_qudit(s, target)
    if control == target:
        raise SameQudit(f"CSUM control and target are both {control}")
    G = s.G.copy()
    h = s.h.copy()
    G[target] = (G[target] + power * G[control]) % s.d
    h[target] = (h[target] + power * h[control]) % s.d
    return StabilizerState(s.d, G, h, s.Q, s.L, s.amp)


def apply_h(s: StabilizerState, q: int) -> StabilizerState:
    """Discrete Fourier transform on qudit ``q``.

    A fresh summation variable ``v`` replaces ``x_q`` and picks up the phase
    ``omega**(v x_q)``. If the remaining rows of ``G`` lose rank, one old
    variable no longer touches the support and is summed out as a Gauss sum.
    """
    _check_qudit(s, q)
    if s.is_zero:
        return s.copy()
    d, n, k = s.d, s.n, s.k
    g, hq = s.G[q].copy(), int(s.h[q])
    G = np.zeros((n, k + 1), np.int64)
    G[:, :k] = s.G
    G[q, :k] = 0
    G[q, k] = 1
    h = s.h.copy()
    h[q] = 0
    Q = np.zeros((k + 1, k + 1), np.int64)
    Q[:k, :k] = s.Q
    Q[k, :k] = g
    Q[:k, k] = g
    L = np.append(s.L, hq)
    return StabilizerState(d, G, h, Q, L, s.amp * Phase.sqrt_d(d, -1))


def apply_h_power(s: StabilizerState, q: int, m: int) -> StabilizerState:
    for _ in range(m % 4):
        s = apply_h(s, q)
    return s


def apply_phase(s: StabilizerState, phase: Phase) -> StabilizerState:
    return s.scaled(phase)


# projections ------------------------------------------------------------

def project_linear(s: StabilizerState, coeffs, value: int) -> StabilizerState:
    """Apply the projector onto ``{x : coeffs . x == value}`` (unnormalized)."""
    d = s.d
    coeffs = mod(coeffs, d)
    if s.is_zero:
        return s.copy()
    cu = (coeffs @ s.G) % d
    c0 = int((coeffs @ s.h - value) % d)
    if not cu.any():
        if c0 == 0:
            return s.copy()
        out = s.copy()
        out.amp = Phase.zero_of(d)
        return out
    G, h, Q, L, amp = _eliminate(s.G, s.h, s.Q, s.L, s.amp, cu, c0, d)
    return StabilizerState(d, G, h, Q, L, amp)


def project_qudit(s: StabilizerState, q: int, v: int) -> StabilizerState:
    """Apply ``|v><v|`` on qudit ``q``; the squared norm is the Born weight."""
    _check_qudit(s, q)
    e = np.zeros(s.n, np.int64)
    e[q] = 1
    return project_linear(s, e, v)


# dense bridge -----------------------------------------------------------

def enumerate_points(k: int, d: int) -> np.ndarray:
    """All of Z_d^k as rows, lexicographic with the last digit fastest."""
    if k == 0:
        return np.zeros((1, 0), np.int64)
    return np.indices((d,) * k).reshape(k, -1).T.astype(np.int64)


def phase_exponents(s: StabilizerState, U: np.ndarray) -> np.ndarray:
    half = inverse(2, s.d)
    quad = np.einsum("ij,jk,ik->i", U, s.Q, U)
    return (half * quad + U @ s.L) % s.d


def dense_vector(s: StabilizerState, cap: int = DENSE_CAP) -> np.ndarray:
    d, n = s.d, s.n
    if d ** n > cap:
        raise CapExceeded(f"{d}^{n} amplitudes exceed cap {cap}")
    vec = np.zeros(d ** n, dtype=complex)
    if s.is_zero:
        return vec
    U = enumerate_points(s.k, d)
    X = (U @ s.G.T + s.h) % d
    idx = X @ (d ** np.arange(n - 1, -1, -1, dtype=np.int64))
    vec[idx] = complex(s.amp) * np.exp(2j * np.pi * phase_exponents(s, U) / d)
    return vec


def u_to_x_phase(s: StabilizerState):
    """Express the phase as ``2bar x^T Qx x + Lx . x + c`` on the support.

    Returns ``(Qx, Lx, c)``. Pulling ``(Qx, Lx)`` back through ``x = G u + h``
    with :func:`pullback_phase` recovers ``(Q, L)`` and ``-c``.
    """
    d = s.d
    # canonical G has an identity on its pivot rows, which gives a left inverse
    pivots = pivot_rows(s.G, d)
    K = np.zeros((s.k, s.n), np.int64)
    for j, p in enumerate(pivots):
        K[j, p] = 1
    Qx, Lx, c = pullback_phase(s.Q, s.L, K, (-K @ s.h) % d, d)
    return Qx, Lx, c


def pivot_rows(G: np.ndarray, d: int) -> list[int]:
    out = []
    for j in range(G.shape[1]):
        nz = np.nonzero(G[:, j])[0]
        out.append(int(nz[0]))
    return out


# internals --------------------------------------------------------------

def pullback_phase(Q, L, A, b, d: int):
    """Substitute ``u = A w + b`` into ``2bar u^T Q u + L u``.

    Returns ``(Q', L', c)`` with the new form ``2bar w^T Q' w + L' w + c``.
    """
    half = inverse(2, d)
    QA = (Q @ A) % d
    Qn = (A.T @ QA) % d
    Ln = (b @ QA + L @ A) % d
    c = int((half * (b @ Q @ b) + L @ b) % d)
    return Qn, Ln, c


def row_echelon_transform(A: np.ndarray, d: int):
    """RREF of ``A`` over Z_d together with ``T`` such that ``T A = R``."""
    R = A.copy() % d
    m, ncols = R.shape
    T = np.eye(m, dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if len(nz) == 0:
            continue
        p = r + nz[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
            T[[r, p]] = T[[p, r]]
        inv = inverse(int(R[r, c]), d)
        if inv != 1:
            R[r] = (R[r] * inv) % d
            T[r] = (T[r] * inv) % d
        for o in np.nonzero(R[:, c])[0]:
            if o != r:
                f = R[o, c]
                R[o] = (R[o] - f * R[r]) % d
                T[o] = (T[o] - f * T[r]) % d
        r += 1
    return R, T, r


def _eliminate(G, h, Q, L, amp, c, c0, d):
    """Impose ``c . u + c0 = 0`` by solving for the first variable with c != 0."""
    k = G.shape[1]
    s = int(np.nonzero(c)[0][0])
    cinv = inverse(int(c[s]), d)
    others = [j for j in range(k) if j != s]
    A = np.zeros((k, k - 1), np.int64)
    for col, j in enumerate(others):
        A[j, col] = 1
        A[s, col] = (-cinv * c[j]) % d
    b = np.zeros(k, np.int64)
    b[s] = (-cinv * c0) % d
    Qn, Ln, const = pullback_phase(Q, L, A, b, d)
    return (G @ A) % d, (h + G @ b) % d, Qn, Ln, amp * Phase.omega(d, const)


def _sum_out(G, Q, L, amp, r, d):
    """Sum over variable ``r``, which no longer affects the support."""
    others = [j for j in range(G.shape[1]) if j != r]
    qrr = int(Q[r, r])
    c = Q[r, others] % d
    lr = int(L[r])
    G = G[:, others]
    Qw = Q[np.ix_(others, others)]
    Lw = L[others]
    if qrr:
        # sum_y omega^{a y^2 + B y} = omega^{-B^2/(4a)} G(a), a = qrr/2, B = lr + c.w
        inv = inverse(qrr, d)
        Qw = (Qw - inv * np.outer(c, c)) % d
        Lw = (Lw - inv * lr * c) % d
        const = (-inverse(2 * qrr, d) * lr * lr) % d
        g = gauss_sum(inverse(2, d) * qrr, 0, d).phase
        return G, None, Qw, Lw, amp * g * Phase.omega(d, const), None
    if not c.any():
        amp = amp * Phase.sqrt_d(d, 2) if lr == 0 else Phase.zero_of(d)
        return G, None, Qw, Lw, amp, None
    # Kronecker delta: the remaining variables must satisfy c.w + lr = 0
    return G, None, Qw, Lw, amp * Phase.sqrt_d(d, 2), (c, lr)


def _canonicalize(s: StabilizerState) -> None:
    d = s.d
    G, h, Q, L, amp = s.G, s.h, s.Q, s.L, s.amp
    while not amp.zero and G.shape[1] > 0:
        R, T, rank = row_echelon_transform(G.T, d)
        Tt = T.T
        G = R.T.copy()
        Q = (T @ Q @ Tt) % d
        L = (L @ Tt) % d
        k = G.shape[1]
        if rank == k:
            break
        G, _, Q, L, amp, constraint = _sum_out(G, Q, L, amp, k - 1, d)
        if constraint is not None and not amp.zero:
            c, lr = constraint
            G, h, Q, L, amp = _eliminate(G, h, Q, L, amp, c, lr, d)
    if amp.zero:
        s.G, s.h, s.Q, s.L, s.amp = G, h, Q, L, amp
        return
    if G.shape[1]:
        # shift u so that h vanishes on the pivot rows
        piv = pivot_rows(G, d)
        b = (-h[piv]) % d
        if b.any():
            k = G.shape[1]
            Q, L, const = pullback_phase(Q, L, np.eye(k, dtype=np.int64), b, d)
            h = (h + G @ b) % d
            amp = amp * Phase.omega(d, const)
    s.G, s.h, s.Q, s.L, s.amp = G, h, Q, L, amp


def full_column_rank(s: StabilizerState) -> bool:
    return rank_mod(s.G, s.d) == s.k
