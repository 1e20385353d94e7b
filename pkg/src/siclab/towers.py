"""Dimension towers over a real quadratic field.

A dimension d >= 4 determines D as the square-free part of (d-1)^2 - 4, and
conversely each D carries the strictly increasing sequence

    d_r = 1 + u^r + u^(-r),   r = 1, 2, ...

where u is the first totally positive power of the fundamental unit.  The
shifted Chebyshev values T*_n(x) = 1 + 2 T_n((x-1)/2) move along the sequence,
T*_s(d_r) = d_rs, and drive its divisibility structure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import dprime, factorize, squarefree_part
from .quadfield import QuadElem, QuadField, multiplicative_order, totally_positive_unit

__all__ = [
    "DimTower",
    "CongruenceReport",
    "LawReport",
    "squarefree_core",
    "d_to_D",
    "dims_for_D",
    "tower_index_of",
    "shifted_chebyshev",
    "verify_congruences",
    "tower_chain",
    "unit_order_law",
    "dprime",
]

_FACTOR_BOUND = 10**12
# Above this size the round trip uses the exact Pell identity instead of
# refactoring (d_r - 1)^2 - 4, which grows exponentially in r.
_CORE_RECHECK_LIMIT = 10**7


def squarefree_core(m: int, *, bound: int = _FACTOR_BOUND) -> int:
    """Square-free part of m, by trial-division factorization."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if m > bound:
        raise ValueError(f"m={m} exceeds the factorization bound {bound}")
    return squarefree_part(m)


def d_to_D(d: int) -> int:
    """The square-free D attached to a dimension d >= 4."""
    if d < 4:
        raise ValueError(f"dimension must be >= 4, got {d}")
    return squarefree_core((d - 1) ** 2 - 4)


@dataclass(frozen=True)
class DimTower:
    """The dimensions d_1 < d_2 < ... sharing one value of D."""

    D: int
    dims: tuple[int, ...]
    unit: QuadElem = field(repr=False)

    def d(self, r: int) -> int:
        if not 1 <= r <= len(self.dims):
            raise IndexError(f"tower generated only up to r={len(self.dims)}")
        return self.dims[r - 1]

    @property
    def max_r(self) -> int:
        return len(self.dims)

    def index_of(self, d: int) -> int:
        """The r with d_r == d, or raise."""
        try:
            return self.dims.index(d) + 1
        except ValueError:
            raise ValueError(f"{d} is not in the tower of D={self.D}") from None


def dims_for_D(D: int, max_r: int) -> DimTower:
    """Exact d_r for r = 1..max_r by big-integer powering of the unit.

    Each term is cross-checked against the independent Chebyshev recursion and
    against the Pell identity (d_r - 1)^2 - 4 = D * y_r^2 (refactored through
    squarefree_core while small).
    """
    if max_r < 1:
        raise ValueError(f"max_r must be >= 1, got {max_r}")
    fld = QuadField(D)
    u = totally_positive_unit(fld)
    dims = []
    power = u
    prev = 3
    for r in range(1, max_r + 1):
        d_r = 1 + power.trace()
        if d_r < 4 or d_r <= prev:
            raise RuntimeError(f"tower of D={D} is not strictly increasing at r={r}")
        pell = (d_r - 1) ** 2 - 4
        if pell != D * power.y * power.y:
            raise RuntimeError(f"Pell identity failed at D={D}, r={r}")
        if pell <= _CORE_RECHECK_LIMIT and squarefree_core(pell) != D:
            raise RuntimeError(f"square-free core round trip failed at D={D}, r={r}")
        dims.append(d_r)
        prev = d_r
        power = power * u
    tower = DimTower(D=D, dims=tuple(dims), unit=u)
    for r in range(1, max_r + 1):
        if shifted_chebyshev(r, tower.d(1)) != tower.d(r):
            raise RuntimeError(f"Chebyshev cross-check failed at D={D}, r={r}")
    return tower


def tower_index_of(d: int, *, max_r: int = 200) -> tuple[int, int]:
    """Round trip a dimension: return (D, r) with d = d_r in the tower of D."""
    D = d_to_D(d)
    fld = QuadField(D)
    u = totally_positive_unit(fld)
    power = u
    for r in range(1, max_r + 1):
        d_r = 1 + power.trace()
        if d_r == d:
            return D, r
        if d_r > d:
            break
        power = power * u
    raise ValueError(f"dimension {d} not found in the tower of D={D}")


def shifted_chebyshev(n: int, x: int) -> int:
    """T*_n(x) = 1 + 2 T_n((x-1)/2), exactly over the integers.

    Seeds T*_0 = 3 and T*_(+-1) = x with the three-term recursion
    T*_n = x T*_(n-1) - x T*_(n-2) + T*_(n-3); extended to n < 0 by symmetry.
    """
    n = abs(n)
    if n == 0:
        return 3
    if n == 1:
        return x
    t0, t1, t2 = x, 3, x  # T*_(k-3), T*_(k-2), T*_(k-1) for k = 2
    for _ in range(n - 1):
        t0, t1, t2 = t1, t2, x * t2 - x * t1 + t0
    return t2


@dataclass
class CongruenceReport:
    """Outcome of the divisibility/congruence sweep over one tower."""

    D: int
    max_n: int
    max_r: int
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_congruences(D: int, max_n: int, max_r: int) -> CongruenceReport:
    """Check the three congruence classes, the recursion reduction and the
    composition law d_rs = T*_r(d_s) = T*_s(d_r) over one tower.

    For n = 0 mod 3 the claim is d_nr = 3 mod d_r; otherwise d_r | d_nr.
    """
    report = CongruenceReport(D=D, max_n=max_n, max_r=max_r)
    tower = dims_for_D(D, max_n * max_r)
    for r in range(1, max_r + 1):
        d_r = tower.d(r)
        for n in range(1, max_n + 1):
            d_nr = tower.d(n * r)
            if n % 3 == 0:
                if (d_nr - 3) % d_r != 0:
                    report.failures.append(f"d_{n*r} != 3 mod d_{r} (D={D})")
            elif d_nr % d_r != 0:
                report.failures.append(f"d_{r} does not divide d_{n*r} (D={D})")
            report.checked += 1
        # Reduction T*_n(x) = T*_(n-3)(x) mod x at x = d_r.
        for n in range(3, max_n + 1):
            if (shifted_chebyshev(n, d_r) - shifted_chebyshev(n - 3, d_r)) % d_r != 0:
                report.failures.append(f"T*_{n} != T*_{n-3} mod d_{r} (D={D})")
            report.checked += 1
    d1 = tower.d(1)
    for r in range(1, max_r + 1):
        for s in range(1, max_n + 1):
            lhs = shifted_chebyshev(r, shifted_chebyshev(s, d1))
            rhs = shifted_chebyshev(s, shifted_chebyshev(r, d1))
            if not lhs == rhs == tower.d(r * s):
                report.failures.append(f"composition failed at (r,s)=({r},{s}), D={D}")
            report.checked += 1
    return report


def tower_chain(D: int, indices: list[int] | tuple[int, ...]) -> list[int]:
    """Dimensions along a divisibility chain of indices coprime to 3.

    Indices must be strictly increasing with each dividing the next; the
    returned dimensions then divide each other in turn, which is asserted.
    """
    indices = list(indices)
    if not indices:
        raise ValueError("empty index chain")
    for i in indices:
        if i % 3 == 0:
            raise ValueError(f"index {i} is not coprime to 3")
    for a, b in zip(indices, indices[1:]):
        if not (a < b and b % a == 0):
            raise ValueError(f"indices must increase and divide: {a}, {b}")
    tower = dims_for_D(D, indices[-1])
    dims = [tower.d(i) for i in indices]
    for a, b in zip(dims, dims[1:]):
        if b % a != 0:
            raise RuntimeError(f"divisibility failed in tower chain for D={D}")
    return dims


@dataclass
class LawReport:
    """Per-index comparison of unit orders with the closed form 3r*d'_r/d_r."""

    D: int
    entries: list[tuple[int, int, int, int, int]] = field(default_factory=list)
    # (r, d_r, d'_r, observed order, expected order)
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.entries) and not self.failures


def unit_order_law(D: int, max_r: int | None = None, *, modulus_bound: int = 10**6) -> LawReport:
    """Orders of the totally positive unit modulo d'_r against 3r*d'_r/d_r.

    The expected order is 3r for odd d_r and 6r for even d_r.  Runs over
    r = 1..max_r, or until d'_r exceeds `modulus_bound` when max_r is None.
    """
    report = LawReport(D=D)
    fld = QuadField(D)
    u = totally_positive_unit(fld)
    power = u
    r = 0
    while True:
        r += 1
        if max_r is not None and r > max_r:
            break
        d_r = 1 + power.trace()
        dp = dprime(d_r)
        if dp > modulus_bound:
            if max_r is None:
                break
            power = power * u
            continue
        observed = multiplicative_order(u, dp)
        expected = 3 * r * dp // d_r
        report.entries.append((r, d_r, dp, observed, expected))
        if observed != expected:
            report.failures.append(
                f"order of the unit mod {dp} is {observed}, expected {expected} (D={D}, r={r})"
            )
        power = power * u
    return report
