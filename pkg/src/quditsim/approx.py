"""Approximate magic states from random linear codes.

For a k-dimensional code L in F_d^t the state

    |L> = (d^k Z(L))^{-1/2} sum_{x in L} |x~>,   |x~> = |x~_1> ... |x~_t>

uses d^k stabilizer terms, where ``|j~>`` are the orbit states of
:mod:`quditsim.magic`. Its overlap with the exact ``(M_d|+>)^t`` is
``|<L|M^t>|^2 = d^k |alpha|^{2t} / Z(L)``, with

    Z(L) = sum_{x in L} prod_l <0~|x~_l> = sum_x prod_j beta_j^{|x|_j} d^{-|x|/2}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import check_dimension
from .magic import OrbitDecomposition
from .stabilizer import StabilizerState, tensor_all


class InfeasiblePrecision(ValueError):
    pass


class NonRealZ(ArithmeticError):
    pass


class NoCodeFound(RuntimeError):
    pass


@dataclass(frozen=True)
class LinearCode:
    """Code spanned by the rows of ``[1_k | Gstd]``."""

    d: int
    t: int
    k: int
    Gstd: np.ndarray

    def __post_init__(self):
        if not 0 <= self.k <= self.t:
            raise ValueError(f"need 0 <= k <= t, got k={self.k}, t={self.t}")
        if self.Gstd.shape != (self.k, self.t - self.k):
            raise ValueError(f"Gstd must be {self.k}x{self.t - self.k}")

    @property
    def generator(self) -> np.ndarray:
        return np.concatenate(
            [np.eye(self.k, dtype=np.int64), np.asarray(self.Gstd, dtype=np.int64)], axis=1) % self.d

    @property
    def size(self) -> int:
        return self.d ** self.k

    def messages(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        """Message digits in lexicographic order, most significant first."""
        stop = self.size if stop is None else stop
        idx = np.arange(start, stop, dtype=np.int64)
        powers = self.d ** np.arange(self.k - 1, -1, -1, dtype=np.int64)
        return (idx[:, None] // powers[None, :]) % self.d

    def codewords(self, start: int = 0, stop: int | None = None) -> np.ndarray:
        return (self.messages(start, stop) @ self.generator) % self.d

    def __eq__(self, other):
        return (isinstance(other, LinearCode) and (self.d, self.t, self.k) == (other.d, other.t, other.k)
                and np.array_equal(self.Gstd, other.Gstd))

    def __hash__(self):
        return hash((self.d, self.t, self.k, self.Gstd.tobytes()))


def sample_code(t: int, k: int, rng: np.random.Generator, d: int) -> LinearCode:
    """Uniform standard-form generator; not uniform over subspaces."""
    d = check_dimension(d)
    G = rng.integers(0, d, size=(k, t - k), dtype=np.int64)
    return LinearCode(d, t, k, G)


def full_code(t: int, d: int) -> LinearCode:
    return LinearCode(d, t, t, np.zeros((t, 0), dtype=np.int64))


def max_precision(t: int, alpha_abs: float, d: int) -> float:
    """Smallest delta for which the unclamped dimension formula stays <= t."""
    return d ** (1 - t * (1 + 2 * math.log(alpha_abs, d)))


def choose_k(t: int, delta: float, alpha_abs: float, d: int, strict: bool = False) -> int:
    """``ceil(1 - 2t log_d|alpha| - log_d delta)`` clamped to ``[0, t]``.

    The clamp at t is harmless: k = t is the exact decomposition. With
    ``strict=True`` exceeding t raises instead.
    """
    if not 0 < alpha_abs <= 1:
        raise ValueError(f"alpha_abs must lie in (0, 1], got {alpha_abs}")
    if not 0 < delta < 1:
        raise InfeasiblePrecision(
            f"delta must lie in (0, 1), got {delta}; for t={t} any delta >= "
            f"delta_max={max_precision(t, alpha_abs, d):.6g} is reached by a proper subcode, "
            f"smaller delta uses the exact k=t decomposition")
    raw = 1 - 2 * t * math.log(alpha_abs, d) - math.log(delta, d)
    # guard against ceil(7.0000000001) style float noise
    k = math.ceil(raw - 1e-12)
    if k > t and strict:
        raise InfeasiblePrecision(
            f"delta={delta} needs k={k} > t={t}; smallest reachable delta is "
            f"delta_max={max_precision(t, alpha_abs, d):.6g}")
    return max(0, min(k, t))


def _symbol_table(betas, d: int) -> np.ndarray:
    tab = np.empty(d, dtype=complex)
    tab[0] = 1.0
    tab[1:] = np.asarray(betas[1:], dtype=complex) / math.sqrt(d)
    return tab


def Z_of_code(code: LinearCode, betas, block: int = 1 << 16) -> float:
    """Normalization sum Z(L), enumerated in lexicographic message order."""
    tab = _symbol_table(betas, code.d)
    total = 0j
    for start in range(0, code.size, block):
        words = code.codewords(start, min(code.size, start + block))
        total += np.prod(tab[words], axis=1).sum()
    if abs(total.imag) > 1e-10 * max(1.0, abs(total.real)):
        raise NonRealZ(f"Z(L) has imaginary part {total.imag:.3e}")
    return float(total.real)


def expected_Z(t: int, k: int, alpha_abs: float, d: int) -> float:
    """Mean of Z over the standard-form ensemble used by :func:`sample_code`."""
    if k == t:
        return (d * alpha_abs ** 2) ** t
    return (1 + d ** k * alpha_abs ** (2 * t)
            - d ** (k - t) * (d * alpha_abs ** 2) ** (t - k))


@dataclass(frozen=True)
class ApproxStateCert:
    code: LinearCode
    Z: float
    fidelity: float
    delta: float
    accepted: bool
    trials: int
    threshold: float

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def chi(self) -> int:
        return self.code.size


def acceptance_threshold(t: int, k: int, alpha_abs: float, d: int, delta: float) -> float:
    return (1 + d ** k * alpha_abs ** (2 * t)) * (1 + delta)


def certify(code: LinearCode, magic: OrbitDecomposition, delta: float,
            trials: int = 1) -> ApproxStateCert:
    a2t = abs(magic.alpha) ** (2 * code.t)
    Z = Z_of_code(code, magic.betas)
    thr = acceptance_threshold(code.t, code.k, abs(magic.alpha), code.d, delta)
    fid = code.size * a2t / Z if Z > 0 else 0.0
    return ApproxStateCert(code, Z, fid, delta, bool(0 < Z <= thr), trials, thr)


def find_code(t: int, delta: float, magic: OrbitDecomposition, rng: np.random.Generator,
              k: int | None = None, max_trials: int | None = None) -> ApproxStateCert:
    """Rejection-sample standard-form codes until ``Z`` is under the Markov threshold."""
    d = magic.d
    if k is None:
        k = choose_k(t, delta, abs(magic.alpha), d)
    if max_trials is None:
        max_trials = math.ceil(1 / delta)
    if k == t:
        return certify(full_code(t, d), magic, delta)
    for trial in range(1, max_trials + 1):
        cert = certify(sample_code(t, k, rng, d), magic, delta, trial)
        if cert.accepted:
            return cert
    raise NoCodeFound(f"no code under threshold after {max_trials} draws (t={t}, k={k})")


def build_approx_state(code: LinearCode, magic: OrbitDecomposition,
                       Z: float | None = None) -> list[tuple[complex, StabilizerState]]:
    """Terms of ``|L>``; for the full code this is exactly ``(M_d|+>)^t``."""
    if Z is None:
        Z = Z_of_code(code, magic.betas)
    unit = magic.alpha / abs(magic.alpha)
    coef = unit ** code.t / math.sqrt(code.size * Z)
    out = []
    for word in code.codewords():
        out.append((coef, tensor_all([magic.states[j] for j in word])))
    return out
