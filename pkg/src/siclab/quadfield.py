"""Exact arithmetic in real quadratic fields Q(sqrt(D)).

Elements are stored as coordinate pairs (x, y) standing for (x + y*sqrt(D))/2.
The half-integer convention is applied uniformly: for D = 1 mod 4 the parity
constraint is x = y mod 2 (so (1+sqrt(D))/2 is representable), otherwise both
coordinates must be even.  Every representable element is then an algebraic
integer, and all arithmetic is exact over Python big integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .arith import factorize, is_squarefree, xgcd

__all__ = [
    "QuadField",
    "QuadElem",
    "ResidueRing",
    "PrincipalityBoundError",
    "fundamental_unit",
    "totally_positive_unit",
    "norm_trace_conj",
    "multiplicative_order",
    "phi_finite",
    "class_number",
]

# Continued-fraction period safety cap; far above any D in scope.
_CF_STEP_CAP = 10**6
# Largest modulus for which the totient is also counted by brute force.
_PHI_BRUTE_LIMIT = 4096
# Default ceiling on D for class number computations.
_CLASS_NUMBER_DMAX = 10**4


class PrincipalityBoundError(RuntimeError):
    """The generator search box exceeded its budget.

    Raised instead of ever returning a wrong answer; the box is scaled by the
    fundamental unit and is sufficient for every D in scope.
    """


@dataclass(frozen=True)
class QuadField:
    """The real quadratic field Q(sqrt(D)) for a square-free integer D >= 2."""

    D: int

    def __post_init__(self) -> None:
        if self.D < 2:
            raise ValueError(f"D must be >= 2, got {self.D}")
        if not is_squarefree(self.D):
            raise ValueError(f"D must be square-free, got {self.D}")

    @property
    def disc(self) -> int:
        """Fundamental discriminant: D for D = 1 mod 4, else 4D."""
        return self.D if self.D % 4 == 1 else 4 * self.D

    @property
    def omega(self) -> "QuadElem":
        """Canonical integral generator: (1+sqrt(D))/2 or sqrt(D)."""
        if self.D % 4 == 1:
            return QuadElem(self, 1, 1)
        return QuadElem(self, 0, 2)

    # Trace and norm of omega; omega^2 = t*omega - m.
    @property
    def omega_trace(self) -> int:
        return 1 if self.D % 4 == 1 else 0

    @property
    def omega_norm(self) -> int:
        return (1 - self.D) // 4 if self.D % 4 == 1 else -self.D

    def elem(self, x: int, y: int) -> "QuadElem":
        return QuadElem(self, x, y)

    def from_integral(self, u: int, v: int) -> "QuadElem":
        """Element u + v*omega given in the integral basis."""
        if self.D % 4 == 1:
            return QuadElem(self, 2 * u + v, v)
        return QuadElem(self, 2 * u, 2 * v)

    def one(self) -> "QuadElem":
        return QuadElem(self, 2, 0)

    def zero(self) -> "QuadElem":
        return QuadElem(self, 0, 0)

    def splitting_type(self, p: int) -> str:
        """How the rational prime p behaves: 'split', 'inert' or 'ramified'."""
        chi = _kronecker_disc(self.disc, p)
        return {1: "split", -1: "inert", 0: "ramified"}[chi]

    def __repr__(self) -> str:
        return f"QuadField({self.D})"


@dataclass(frozen=True)
class QuadElem:
    """(x + y*sqrt(D))/2 with the parity constraint making it integral."""

    field: QuadField
    x: int
    y: int

    def __post_init__(self) -> None:
        D = self.field.D
        if D % 4 == 1:
            if (self.x - self.y) % 2 != 0:
                raise ValueError(f"parity violation: ({self.x}+{self.y}√{D})/2")
        elif self.x % 2 != 0 or self.y % 2 != 0:
            raise ValueError(f"parity violation: ({self.x}+{self.y}√{D})/2")

    def _check_same_field(self, other: "QuadElem") -> None:
        if self.field != other.field:
            raise ValueError("elements of different fields")

    def __add__(self, other: "QuadElem") -> "QuadElem":
        self._check_same_field(other)
        return QuadElem(self.field, self.x + other.x, self.y + other.y)

    def __sub__(self, other: "QuadElem") -> "QuadElem":
        self._check_same_field(other)
        return QuadElem(self.field, self.x - other.x, self.y - other.y)

    def __neg__(self) -> "QuadElem":
        return QuadElem(self.field, -self.x, -self.y)

    def __mul__(self, other) -> "QuadElem":
        if isinstance(other, int):
            return QuadElem(self.field, self.x * other, self.y * other)
        self._check_same_field(other)
        D = self.field.D
        x = self.x * other.x + D * self.y * other.y
        y = self.x * other.y + self.y * other.x
        # Parity constraints make both halves exact.
        return QuadElem(self.field, x // 2, y // 2)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "QuadElem":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def norm(self) -> int:
        return (self.x * self.x - self.field.D * self.y * self.y) // 4

    def trace(self) -> int:
        return self.x

    def conj(self) -> "QuadElem":
        return QuadElem(self.field, self.x, -self.y)

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n not in (1, -1):
            raise ValueError("only units (norm +-1) are invertible in Z_K")
        return self.conj() * n

    def is_unit(self) -> bool:
        return self.norm() in (1, -1)

    def is_one(self) -> bool:
        return self.x == 2 and self.y == 0

    def integral_coords(self) -> tuple[int, int]:
        """Coordinates (u, v) with self = u + v*omega."""
        if self.field.D % 4 == 1:
            return (self.x - self.y) // 2, self.y
        return self.x // 2, self.y // 2

    def signs(self) -> tuple[int, int]:
        """Exact signs under the two real embeddings (sqrt(D) -> +, -)."""
        return _sign(self.x, self.y, self.field.D), _sign(self.x, -self.y, self.field.D)

    def is_totally_positive(self) -> bool:
        return self.signs() == (1, 1)

    def __float__(self) -> float:
        # Embedding at the first place; only for coordinates of modest size.
        if max(abs(self.x), abs(self.y)).bit_length() > 500:
            raise OverflowError("coordinates too large for a float embedding")
        return (self.x + self.y * self.field.D ** 0.5) / 2.0

    def __str__(self) -> str:
        D = self.field.D
        if self.x % 2 == 0 and self.y % 2 == 0:
            return f"{self.x // 2}{self.y // 2:+d}√{D}"
        return f"({self.x}{self.y:+d}√{D})/2"

    def __repr__(self) -> str:
        return f"QuadElem(D={self.field.D}, ({self.x}{self.y:+d}√{self.field.D})/2)"


def _sign(x: int, y: int, D: int) -> int:
    """Sign of (x + y*sqrt(D))/2, by integer comparison of x^2 vs D*y^2."""
    if x == 0 and y == 0:
        return 0
    if x >= 0 and y >= 0:
        return 1
    if x <= 0 and y <= 0:
        return -1
    if x > 0:  # y < 0
        return 1 if x * x > D * y * y else -1
    return 1 if D * y * y > x * x else -1  # x < 0 < y


def _kronecker_disc(disc: int, p: int) -> int:
    """Kronecker symbol (disc|p) for a prime p and fundamental discriminant."""
    if p == 2:
        if disc % 2 == 0:
            return 0
        return 1 if disc % 8 == 1 else -1
    r = disc % p
    if r == 0:
        return 0
    return 1 if pow(r, (p - 1) // 2, p) == 1 else -1


# ---------------------------------------------------------------------------
# Units

@lru_cache(maxsize=None)
def fundamental_unit(field: QuadField) -> QuadElem:
    """Smallest unit > 1 of Z_K, from the continued fraction of omega.

    The complete quotients of omega = (P + sqrt(D))/Q are iterated with exact
    integer state (P_i, Q_i); the product of one full period of complete
    quotients is the fundamental unit.
    """
    D = field.D
    sq = isqrt(D)
    if D % 4 == 1:
        P, Q = 1, 2
    else:
        P, Q = 0, 1
    a = (P + sq) // Q
    # First complete quotient alpha_1 = (P1 + sqrt(D))/Q1; it is reduced, so
    # the state sequence is purely periodic from here.
    P1 = a * Q - P
    Q1, rem = divmod(D - P1 * P1, Q)
    assert rem == 0, "continued-fraction state corrupted"
    P, Q = P1, Q1
    first = (P, Q)
    num_x, num_y = P, 1  # running product of (P_i + sqrt(D))
    den = Q
    for _ in range(_CF_STEP_CAP):
        a = (P + sq) // Q
        P2 = a * Q - P
        Q2, rem = divmod(D - P2 * P2, Q)
        assert rem == 0, "continued-fraction state corrupted"
        P, Q = P2, Q2
        if (P, Q) == first:
            break
        num_x, num_y = num_x * P + num_y * D, num_x + num_y * P
        den *= Q
    else:
        raise RuntimeError(f"continued fraction of omega did not close for D={D}")
    x, rx = divmod(2 * num_x, den)
    y, ry = divmod(2 * num_y, den)
    assert rx == 0 and ry == 0, "period product is not integral"
    u = QuadElem(field, x, y)
    assert u.norm() in (1, -1), "period product is not a unit"
    assert _sign(x - 2, y, D) > 0, "fundamental unit not > 1"
    return u


@lru_cache(maxsize=None)
def totally_positive_unit(field: QuadField) -> QuadElem:
    """First power of the fundamental unit with norm +1 (totally positive)."""
    u = fundamental_unit(field)
    if u.norm() == 1:
        return u
    return u * u


def norm_trace_conj(e: QuadElem) -> tuple[int, int, QuadElem]:
    return e.norm(), e.trace(), e.conj()


# ---------------------------------------------------------------------------
# Residue rings Z_K/(n)

class ResidueRing:
    """Z_K modulo a rational integer n >= 1.

    Residues are held as integral-basis pairs (u, v) mod n, so the ring has
    exactly n^2 elements; a residue is invertible iff its norm is coprime
    to n.
    """

    def __init__(self, field: QuadField, n: int):
        if n < 1:
            raise ValueError(f"modulus must be >= 1, got {n}")
        self.field = field
        self.n = n
        self._t = field.omega_trace % n
        self._m = field.omega_norm % n

    def reduce(self, e: QuadElem) -> tuple[int, int]:
        u, v = e.integral_coords()
        return u % self.n, v % self.n

    def one(self) -> tuple[int, int]:
        return 1 % self.n, 0

    def mul(self, p: tuple[int, int], q: tuple[int, int]) -> tuple[int, int]:
        n, t, m = self.n, self._t, self._m
        u1, v1 = p
        u2, v2 = q
        return (u1 * u2 - m * v1 * v2) % n, (u1 * v2 + u2 * v1 + t * v1 * v2) % n

    def pow(self, p: tuple[int, int], k: int) -> tuple[int, int]:
        if k < 0:
            raise ValueError("negative powers not supported in the residue ring")
        result = self.one()
        base = p
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def norm_of(self, p: tuple[int, int]) -> int:
        u, v = p
        return (u * u + self._t * u * v + self._m * v * v) % self.n

    def is_invertible(self, p: tuple[int, int]) -> bool:
        return gcd(self.norm_of(p), self.n) == 1

    def order(self, e: QuadElem) -> int:
        """Multiplicative order of e mod n, by iterated multiplication."""
        p = self.reduce(e)
        if not self.is_invertible(p):
            raise ValueError(f"{e} is not invertible modulo {self.n}")
        one = self.one()
        acc = p
        for k in range(1, self.n * self.n + 1):
            if acc == one:
                return k
            acc = self.mul(acc, p)
        raise RuntimeError("order exceeded the n^2 cycle bound")  # unreachable


def multiplicative_order(e: QuadElem, n: int) -> int:
    """Smallest t >= 1 with e^t = 1 in Z_K/(n)."""
    if n < 2:
        raise ValueError(f"modulus must be >= 2, got {n}")
    return ResidueRing(e.field, n).order(e)


# ---------------------------------------------------------------------------
# Totients

def phi_finite(field: QuadField, n: int, *, brute_limit: int = _PHI_BRUTE_LIMIT) -> int:
    """Order of (Z_K/n)^*.

    Evaluated by the multiplicative formula over prime powers, with the
    splitting type of each prime decided by the Kronecker symbol:

        Phi(p^k) = p^(2k-2) * (p - 1) * (p - chi(p)),   chi in {1, -1, 0}.

    For n up to `brute_limit` the invertible residues are also counted
    directly and the two values are required to agree.
    """
    if n < 1:
        raise ValueError(f"modulus must be >= 1, got {n}")
    if n == 1:
        return 1
    phi = 1
    for p, k in factorize(n).items():
        chi = _kronecker_disc(field.disc, p)
        phi *= p ** (2 * k - 2) * (p - 1) * (p - chi)
    if n <= brute_limit:
        brute = _phi_brute(field, n)
        if brute != phi:
            raise AssertionError(
                f"totient mismatch for D={field.D}, n={n}: formula {phi}, count {brute}"
            )
    return phi


def _phi_brute(field: QuadField, n: int) -> int:
    t = field.omega_trace
    m = field.omega_norm
    u = np.arange(n, dtype=np.int64)
    U, V = np.meshgrid(u, u, indexing="ij")
    norms = (U * U + t * U * V + m * V * V) % n
    return int(np.count_nonzero(np.gcd(norms, n) == 1))


# ---------------------------------------------------------------------------
# Class numbers

@lru_cache(maxsize=None)
def class_number(field: QuadField, *, dmax: int = _CLASS_NUMBER_DMAX) -> int:
    """Wide class number h_K.

    Every ideal class contains a primitive ideal of norm at most the Minkowski
    bound; those ideals are enumerated and partitioned by pairwise equivalence,
    where I ~ J iff I * conj(J) is principal.  Principality is decided by a
    bounded generator search (box scaled by the fundamental unit); the search
    raises rather than ever returning a wrong answer.
    """
    D = field.D
    if D > dmax:
        raise ValueError(f"D={D} exceeds the class-number bound {dmax}")
    bound = isqrt(field.disc) // 2
    ideals = _primitive_ideals_up_to(field, bound)
    reps: list[tuple[int, int]] = []
    for ideal in ideals:
        if not any(_equivalent(field, ideal, rep) for rep in reps):
            reps.append(ideal)
    return len(reps)


def _primitive_ideals_up_to(field: QuadField, bound: int) -> list[tuple[int, int]]:
    """All ideals a*Z + (b+omega)*Z with norm a <= bound."""
    t, m = field.omega_trace, field.omega_norm
    out = [(1, 0)]
    for a in range(2, bound + 1):
        for b in range(a):
            if (b * b + t * b + m) % a == 0:
                out.append((a, b))
    return out


def _conj_ideal(field: QuadField, ideal: tuple[int, int]) -> tuple[int, int]:
    a, b = ideal
    return a, (-b - field.omega_trace) % a


def _mul_ideals(field: QuadField, I: tuple[int, int], J: tuple[int, int]) -> tuple[int, int]:
    """Primitive part of the product ideal, as (a, b) for a*Z + (b+omega)*Z."""
    t, m = field.omega_trace, field.omega_norm
    a1, b1 = I
    a2, b2 = J
    gens = [
        (a1 * a2, 0),
        (a1 * b2, a1),
        (a2 * b1, a2),
        (b1 * b2 - m, b1 + b2 + t),
    ]
    a, b, c = _lattice_hnf(gens)
    # Divide out the content c to get the primitive part (same ideal class).
    assert a % c == 0 and b % c == 0, "product lattice is not an ideal"
    a //= c
    b = (b // c) % a if a > 1 else 0
    return a, b


def _lattice_hnf(gens: list[tuple[int, int]]) -> tuple[int, int, int]:
    """Hermite form (a, b, c): lattice = a*Z + (b + c*omega)*Z, a,c > 0."""
    w = (0, 0)
    c = 0
    for g in gens:
        if g[1] == 0:
            continue
        if c == 0:
            w, c = g, g[1]
        else:
            gg, s, tt = xgcd(c, g[1])
            w = (s * w[0] + tt * g[0], gg)
            c = gg
    if c < 0:
        w, c = (-w[0], -c), -c
    a = 0
    for g in gens:
        k = g[1] // c
        a = gcd(a, g[0] - k * w[0])
    a = abs(a)
    assert a > 0 and c > 0, "degenerate product lattice"
    return a, w[0] % a, c


def _equivalent(field: QuadField, I: tuple[int, int], J: tuple[int, int]) -> bool:
    return _is_principal(field, _mul_ideals(field, I, _conj_ideal(field, J)))


def _is_principal(field: QuadField, ideal: tuple[int, int], *, budget: int = 10**7) -> bool:
    """Search for a generator of norm +-N(ideal) inside the unit-scaled box."""
    a, b = ideal
    if a == 1:
        return True
    D = field.D
    t, m = field.omega_trace, field.omega_norm
    uf = fundamental_unit(field)
    try:
        uval = float(uf)
    except OverflowError:
        raise PrincipalityBoundError(
            f"fundamental unit of Q(sqrt({D})) too large for the generator box"
        ) from None
    # A principal ideal has a generator with both embeddings <= sqrt(a)*u_f.
    vmax = int(2.0 * (a ** 0.5) * uval / (D ** 0.5)) + 2
    if vmax > budget:
        raise PrincipalityBoundError(
            f"generator box of size {vmax} exceeds budget for D={D}"
        )
    tt4m = t * t - 4 * m
    for v in range(vmax + 1):
        for target in (a, -a):
            # Solve u^2 + t*u*v + m*v^2 = target for integer u.
            disc_q = tt4m * v * v + 4 * target
            if disc_q < 0:
                continue
            s = isqrt(disc_q)
            if s * s != disc_q:
                continue
            for root in {s, -s}:
                num = -t * v + root
                if num % 2:
                    continue
                u = num // 2
                if (u - v * b) % a == 0:
                    return True
    return False
