"""Weyl-Heisenberg displacement operators in dimension d.

Displacements are the phased monomials

    D_j = tau^(j1*j2) X^j1 Z^j2,    tau = -exp(i*pi/d),

indexed by j in (Z/d')^2 where d' = 2d for even d and d for odd d.  Phases
are carried as exact integer exponents of tau (which has order d') for as
long as possible and exponentiated only at matrix assembly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .arith import dprime

__all__ = ["WeylSystem", "IdentityReport", "check_heisenberg", "is_unitary"]

_MATRIX_DIM_BOUND = 48


def is_unitary(U: np.ndarray, tol: float = 1e-12) -> bool:
    d = U.shape[0]
    return bool(np.max(np.abs(U.conj().T @ U - np.eye(d))) < tol * d)


class WeylSystem:
    """Displacement operators, cocycle and pairing for one dimension."""

    def __init__(self, d: int):
        if d < 1:
            raise ValueError(f"dimension must be >= 1, got {d}")
        if d > _MATRIX_DIM_BOUND:
            raise ValueError(f"dimension {d} exceeds the dense-matrix bound {_MATRIX_DIM_BOUND}")
        self.d = d
        self.dprime = dprime(d)
        # tau = -zeta_(2d); its multiplicative order is exactly d'.
        self._tau_pow = np.exp(1j * np.pi * (d + 1) * np.arange(2 * d) / d)
        self._displacements: np.ndarray | None = None

    def reduce_index(self, j) -> tuple[int, int]:
        return int(j[0]) % self.dprime, int(j[1]) % self.dprime

    def tau_power(self, e: int) -> complex:
        return complex(self._tau_pow[e % (2 * self.d)])

    def zeta_power(self, e: int) -> complex:
        """zeta_d^e (phases of the clock operator)."""
        return complex(self._tau_pow[(2 * e) % (2 * self.d)])

    def displacement(self, j) -> np.ndarray:
        j1, j2 = self.reduce_index(j)
        d = self.d
        cols = np.arange(d)
        exps = (j1 * j2 + 2 * j2 * cols) % (2 * d)
        M = np.zeros((d, d), dtype=complex)
        M[(cols + j1) % d, cols] = self._tau_pow[exps]
        return M

    def all_displacements(self) -> np.ndarray:
        """Stack of all d'^2 displacements, index j1*d' + j2."""
        if self._displacements is None:
            dp = self.dprime
            out = np.empty((dp * dp, self.d, self.d), dtype=complex)
            for j1 in range(dp):
                for j2 in range(dp):
                    out[j1 * dp + j2] = self.displacement((j1, j2))
            out.setflags(write=False)
            self._displacements = out
        return self._displacements

    def flat_index(self, j) -> int:
        j1, j2 = self.reduce_index(j)
        return j1 * self.dprime + j2

    def cocycle_exponent(self, j, k) -> int:
        """e with D_j D_k = tau^e D_(j+k); e = j2*k1 - j1*k2 mod d'."""
        j1, j2 = self.reduce_index(j)
        k1, k2 = self.reduce_index(k)
        return (j2 * k1 - j1 * k2) % self.dprime

    def cocycle(self, j, k) -> complex:
        return self.tau_power(self.cocycle_exponent(j, k))

    def pairing_exponent(self, j, k) -> int:
        """e with D_j D_k D_j^-1 D_k^-1 = zeta_d^e; e = k1*j2 - k2*j1 mod d."""
        j1, j2 = self.reduce_index(j)
        k1, k2 = self.reduce_index(k)
        return (k1 * j2 - k2 * j1) % self.d

    def pairing(self, j, k) -> complex:
        return self.zeta_power(self.pairing_exponent(j, k))


@dataclass
class IdentityReport:
    d: int
    pairs_checked: int
    max_deviation: float
    tolerance: float
    failures: list[tuple[tuple[int, int], tuple[int, int], float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


@lru_cache(maxsize=32)
def _cached_system(d: int) -> WeylSystem:
    return WeylSystem(d)


def check_heisenberg(d: int, *, tol: float = 1e-12, sample: int | None = None,
                     seed: int = 0) -> IdentityReport:
    """Verify D_j D_k = c_(j,k) D_(j+k) over all (or sampled) index pairs."""
    sys = _cached_system(d)
    dp = sys.dprime
    A = sys.all_displacements()
    N = dp * dp
    j1g, j2g = np.divmod(np.arange(N), dp)

    if sample is None:
        j_list = np.arange(N)
        k_sets = [np.arange(N)] * N
    else:
        rng = np.random.default_rng(seed)
        pairs = rng.integers(0, N, size=(sample, 2))
        j_list, inverse = np.unique(pairs[:, 0], return_inverse=True)
        k_sets = [pairs[inverse == i, 1] for i in range(len(j_list))]

    max_dev = 0.0
    checked = 0
    failures = []
    for j_idx, ks in zip(j_list, k_sets):
        j1, j2 = int(j1g[j_idx]), int(j2g[j_idx])
        k1s, k2s = j1g[ks], j2g[ks]
        sum_idx = ((j1 + k1s) % dp) * dp + (j2 + k2s) % dp
        coc = (j2 * k1s - j1 * k2s) % (2 * d)
        prod = A[j_idx] @ A[ks]
        target = sys._tau_pow[coc][:, None, None] * A[sum_idx]
        dev = np.abs(prod - target).reshape(len(ks), -1).max(axis=1)
        checked += len(ks)
        worst = float(dev.max()) if len(ks) else 0.0
        max_dev = max(max_dev, worst)
        for pos in np.nonzero(dev >= tol)[0]:
            failures.append(((j1, j2), (int(k1s[pos]), int(k2s[pos])), float(dev[pos])))
    return IdentityReport(d=d, pairs_checked=checked, max_deviation=max_dev,
                          tolerance=tol, failures=failures)
