"""Symplectic matrices over Z/d' and the unitaries realizing them.

A matrix F in SL2(Z/d') acts on displacement indices, and a metaplectic
unitary U_F satisfies U_F D_j U_F^dag = (phase) D_(Fj) for every index j.
The construction uses the quadratic Gauss-sum formula when the upper-right
entry of F is invertible mod d', and otherwise factors F into two such
matrices; with this choice the conjugation law in fact holds with phase 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .arith import dprime
from .weyl import WeylSystem, is_unitary

__all__ = [
    "SymplecticMat",
    "ConjugationReport",
    "zauner_matrix",
    "sym_order",
    "metaplectic_unitary",
    "conjugation_check",
    "extended_conjugation",
    "sl2_elements",
    "esl2_elements",
    "gl2_elements",
    "random_sl2",
]

_ENUM_MODULUS_BOUND = 40


@dataclass(frozen=True)
class SymplecticMat:
    """2x2 matrix (a b; c e) over Z/n with determinant +-1."""

    a: int
    b: int
    c: int
    e: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"modulus must be >= 1, got {self.n}")
        for name in "abce":
            object.__setattr__(self, name, getattr(self, name) % self.n)
        if self.n > 1 and self.det() not in (1, self.n - 1):
            raise ValueError(f"determinant {self.det()} mod {self.n} is not +-1")

    def det(self) -> int:
        return (self.a * self.e - self.b * self.c) % self.n

    def trace(self) -> int:
        return (self.a + self.e) % self.n

    def __matmul__(self, other: "SymplecticMat") -> "SymplecticMat":
        if self.n != other.n:
            raise ValueError("mismatched moduli")
        return SymplecticMat(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.e,
            self.c * other.a + self.e * other.c,
            self.c * other.b + self.e * other.e,
            self.n,
        )

    def __pow__(self, k: int) -> SymplecticMat:
        if k < 0:
            return self.inverse() ** (-k)
        result = SymplecticMat(1, 0, 0, 1, self.n)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def inverse(self) -> "SymplecticMat":
        d = self.det()  # +-1, self-inverse scalar mod n
        return SymplecticMat(d * self.e, -d * self.b, -d * self.c, d * self.a, self.n)

    def apply(self, j) -> tuple[int, int]:
        j1, j2 = int(j[0]) % self.n, int(j[1]) % self.n
        return (self.a * j1 + self.b * j2) % self.n, (self.c * j1 + self.e * j2) % self.n

    def reduce(self, m: int) -> "SymplecticMat":
        return SymplecticMat(self.a, self.b, self.c, self.e, m)

    def is_identity(self) -> bool:
        return (self.a, self.b, self.c, self.e) == (1 % self.n, 0, 0, 1 % self.n)

    def is_scalar(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.e

    def entries(self) -> tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.e

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.e]], dtype=np.int64)


def zauner_matrix(d: int, kind: str = "fz") -> SymplecticMat:
    """The canonical order-3 symplectic element for dimension d.

    kind 'fz' gives (0, d-1; d+1, d-1); kind 'fa' gives
    (1, d+3; 4d/3-1, d-2) and requires d = 3 mod 9.  Both have trace = -1
    mod d, which is asserted.
    """
    n = dprime(d)
    kind = kind.lower()
    if kind == "fz":
        F = SymplecticMat(0, d - 1, d + 1, d - 1, n)
    elif kind == "fa":
        if d % 9 != 3:
            raise ValueError(f"kind 'fa' requires d = 3 mod 9, got d={d}")
        F = SymplecticMat(1, d + 3, 4 * d // 3 - 1, d - 2, n)
    else:
        raise ValueError(f"unknown kind {kind!r}, expected 'fz' or 'fa'")
    assert (F.trace() - (d - 1)) % d == 0, "trace is not -1 mod d"
    return F


def sym_order(F: SymplecticMat, d: int) -> tuple[int, int]:
    """(order of F mod d, smallest t with F^t scalar mod d')."""
    if F.n != dprime(d):
        raise ValueError(f"matrix modulus {F.n} does not match d'={dprime(d)}")
    Fd = F.reduce(d) if d > 1 else SymplecticMat(1, 0, 0, 1, 1)
    cur = Fd
    order_d = None
    cap = 12 * d ** 3 + 12
    for t in range(1, cap):
        if cur.is_identity():
            order_d = t
            break
        cur = cur @ Fd
    if order_d is None:
        raise RuntimeError("order search exceeded its cap")  # unreachable
    cur = F
    for t in range(1, cap):
        if cur.is_scalar():
            return order_d, t
        cur = cur @ F
    raise RuntimeError("scalar order search exceeded its cap")  # unreachable


def _gauss_sum_unitary(system: WeylSystem, F: SymplecticMat) -> np.ndarray:
    """U_F for F with invertible upper-right entry, as a normalized Gauss sum.

    U[r, s] = tau^(b^-1 (a s^2 - 2 r s + e r^2)) / sqrt(d); direct calculation
    shows U X U^dag = D_(a,c) and U Z U^dag = D_(b,e) exactly, from which the
    exact conjugation law follows for all indices.
    """
    d = system.d
    n = system.dprime
    binv = pow(F.b, -1, n)
    r = np.arange(d)
    q = (binv * (F.a * r[None, :] ** 2 - 2 * r[:, None] * r[None, :]
                 + F.e * r[:, None] ** 2)) % (2 * d)
    return system._tau_pow[q] / np.sqrt(d)


def metaplectic_unitary(system: WeylSystem, F: SymplecticMat) -> np.ndarray:
    """A unitary U with U D_j U^dag proportional to D_(Fj) for all j.

    Requires det F = +1 mod d'.  The global phase is fixed by making the
    first entry of significant modulus positive real.
    """
    n = system.dprime
    if F.n != n:
        raise ValueError(f"matrix modulus {F.n} does not match d'={n}")
    if F.det() != 1 % n:
        raise ValueError("metaplectic construction needs determinant +1")
    if gcd(F.b, n) == 1:
        U = _gauss_sum_unitary(system, F)
    else:
        # F = F1 @ G with both upper-right entries invertible: G = (p 1; -1 0)
        # works whenever b*p - a is invertible, and such p always exists.
        for p in range(n):
            if gcd((F.b * p - F.a) % n, n) == 1:
                break
        else:
            raise RuntimeError("no factorization with invertible corner found")  # unreachable
        G = SymplecticMat(p, 1, -1, 0, n)
        F1 = F @ G.inverse()
        assert gcd(F1.b, n) == 1 and (F1 @ G).entries() == F.entries()
        U = _gauss_sum_unitary(system, F1) @ _gauss_sum_unitary(system, G)
    d = system.d
    if not is_unitary(U):
        raise RuntimeError("constructed operator failed the unitarity check")
    flat = U.ravel()
    idx = int(np.argmax(np.abs(flat) > 0.5 / np.sqrt(d)))
    U = U * (abs(flat[idx]) / flat[idx])
    return U


@dataclass
class ConjugationReport:
    d: int
    checked: int
    max_deviation: float
    tolerance: float
    failures: list[tuple[int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def conjugation_check(system: WeylSystem, F: SymplecticMat, U: np.ndarray,
                      *, tol: float = 1e-10) -> ConjugationReport:
    """Verify U D_j U^dag = (phase) D_(Fj) over all indices mod d'."""
    dp = system.dprime
    d = system.d
    A = system.all_displacements()
    conj = np.einsum("ij,njk,lk->nil", U, A, U.conj())
    max_dev = 0.0
    failures = []
    for j1 in range(dp):
        for j2 in range(dp):
            src = j1 * dp + j2
            tgt = system.flat_index(F.apply((j1, j2)))
            phase = np.trace(A[tgt].conj().T @ conj[src]) / d
            dev = float(np.max(np.abs(conj[src] - phase * A[tgt])))
            dev = max(dev, abs(abs(phase) - 1.0))
            max_dev = max(max_dev, dev)
            if dev >= tol:
                failures.append((j1, j2))
    return ConjugationReport(d=d, checked=dp * dp, max_deviation=max_dev,
                             tolerance=tol, failures=failures)


def extended_conjugation(d: int, *, tol: float = 1e-12) -> ConjugationReport:
    """Entrywise complex conjugation sends D_(j1,j2) to D_(j1,-j2) exactly."""
    system = WeylSystem(d)
    dp = system.dprime
    A = system.all_displacements()
    max_dev = 0.0
    failures = []
    for j1 in range(dp):
        for j2 in range(dp):
            dev = float(np.max(np.abs(
                A[j1 * dp + j2].conj() - A[system.flat_index((j1, -j2))]
            )))
            max_dev = max(max_dev, dev)
            if dev >= tol:
                failures.append((j1, j2))
    return ConjugationReport(d=d, checked=dp * dp, max_deviation=max_dev,
                             tolerance=tol, failures=failures)


# ---------------------------------------------------------------------------
# Group enumeration over Z/n (dense, for small n)

def _all_2x2(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n > _ENUM_MODULUS_BOUND:
        raise ValueError(f"modulus {n} exceeds the enumeration bound {_ENUM_MODULUS_BOUND}")
    vals = np.arange(n, dtype=np.int64)
    a, b, c, e = np.meshgrid(vals, vals, vals, vals, indexing="ij")
    mats = np.stack(
        [np.stack([a.ravel(), b.ravel()], axis=1),
         np.stack([c.ravel(), e.ravel()], axis=1)],
        axis=1,
    )
    dets = (mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]) % n
    return mats, dets


def sl2_elements(n: int) -> np.ndarray:
    """All of SL2(Z/n) as an (N, 2, 2) integer array."""
    mats, dets = _all_2x2(n)
    return mats[dets == 1 % n]


def esl2_elements(n: int) -> np.ndarray:
    """Determinant +-1 subgroup of GL2(Z/n)."""
    mats, dets = _all_2x2(n)
    keep = (dets == 1 % n) | (dets == (n - 1) % n)
    return mats[keep]


def gl2_elements(n: int) -> np.ndarray:
    mats, dets = _all_2x2(n)
    return mats[np.gcd(dets, n) == 1]


def random_sl2(n: int, rng: np.random.Generator) -> SymplecticMat:
    while True:
        a, b, c, e = (int(x) for x in rng.integers(0, n, 4))
        if (a * e - b * c) % n == 1 % n:
            return SymplecticMat(a, b, c, e, n)
