"""Small exact integer helpers shared across the package."""

from __future__ import annotations

from math import isqrt


def factorize(n: int) -> dict[int, int]:
    """Factor n >= 1 by trial division.  Exact, big-int safe."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 5
    while p * p <= n:
        for q in (p, p + 2):
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        p += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def squarefree_part(n: int) -> int:
    """Product of primes dividing n to an odd power."""
    core = 1
    for p, e in factorize(n).items():
        if e % 2:
            core *= p
    return core


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(n).values())


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b)."""
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0 < 0:
        r0, s0, t0 = -r0, -s0, -t0
    return r0, s0, t0


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def dprime(d: int) -> int:
    """The phase modulus attached to a dimension: 2d for even d, d for odd."""
    if d < 1:
        raise ValueError(f"dimension must be positive, got {d}")
    return 2 * d if d % 2 == 0 else d
