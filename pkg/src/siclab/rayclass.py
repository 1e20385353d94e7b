"""Ray class group orders over a real quadratic field.

The order for a modulus m = (n) * (subset of the two real places) is

    h_m = h_K * Phi(n) * 2^r / [U_K : U^1_m],

with Phi the totient of Z_K/(n), r the number of real places in the modulus,
and U^1_m the units that are = 1 mod n and positive at the included places.
The unit index is computed directly as the size of the image of
U_K = <-1, u_f> in (Z_K/n)^* x {+-1}^r.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import dprime
from .quadfield import (
    QuadField,
    ResidueRing,
    class_number,
    fundamental_unit,
    phi_finite,
    totally_positive_unit,
)
from .towers import d_to_D

__all__ = [
    "RayModulus",
    "RayClassOrderCert",
    "PlaceRatioReport",
    "unit_index",
    "ray_class_order",
    "place_ratio_certificate",
]

_PLACE_LABELS = {(False, False): "none", (True, False): "inf1", (False, True): "inf2", (True, True): "both"}


@dataclass(frozen=True)
class RayModulus:
    """A modulus (n) * inf1^e1 * inf2^e2 with rational finite part n >= 1."""

    field: QuadField
    n: int
    inf1: bool = False
    inf2: bool = False

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"finite part must be >= 1, got {self.n}")

    @property
    def r_m(self) -> int:
        return int(self.inf1) + int(self.inf2)

    @property
    def label(self) -> str:
        return _PLACE_LABELS[(self.inf1, self.inf2)]


@dataclass(frozen=True)
class RayClassOrderCert:
    """All five factors of the order formula, with the exact quotient."""

    modulus: RayModulus
    h_K: int
    phi0: int
    phi_inf: int
    unit_index: int
    h_m: int

    def as_dict(self) -> dict:
        return {
            "D": self.modulus.field.D,
            "n": self.modulus.n,
            "places": self.modulus.label,
            "h_K": self.h_K,
            "phi_finite": self.phi0,
            "phi_infinite": self.phi_inf,
            "unit_index": self.unit_index,
            "h_m": self.h_m,
        }


def unit_index(modulus: RayModulus) -> int:
    """[U_K : U^1_m], the size of the image of <-1, u_f> mod m.

    The image lives in (Z_K/n)^* x {+-1}^r; it is generated by the images of
    -1 and the fundamental unit, with signs taken at the included places.
    """
    fld = modulus.field
    n = modulus.n
    ring = ResidueRing(fld, n) if n > 1 else None
    uf = fundamental_unit(fld)
    if ring is not None and not ring.is_invertible(ring.reduce(uf)):
        raise ValueError(f"fundamental unit not invertible mod {n}")  # unreachable

    places = [i for i, flag in enumerate((modulus.inf1, modulus.inf2)) if flag]

    def image(e):
        signs = e.signs()
        return (ring.reduce(e) if ring is not None else None,
                tuple(signs[i] for i in places))

    identity = image(fld.one())
    g = image(uf)
    s = image(fld.elem(-2, 0))

    cycle = {identity}
    cur = g
    cap = 4 * n * n + 8
    for _ in range(cap):
        if cur == identity:
            break
        cycle.add(cur)
        res = ring.mul(cur[0], g[0]) if ring is not None else None
        cur = (res, tuple(a * b for a, b in zip(cur[1], g[1])))
    else:
        raise RuntimeError("unit image cycle did not close")  # unreachable
    return len(cycle) if s in cycle else 2 * len(cycle)


def ray_class_order(modulus: RayModulus) -> RayClassOrderCert:
    """Certificate for h_m; raises if the closed formula fails to divide."""
    fld = modulus.field
    h_K = class_number(fld)
    phi0 = phi_finite(fld, modulus.n) if modulus.n > 1 else 1
    phi_inf = 2 ** modulus.r_m
    idx = unit_index(modulus)
    numerator = h_K * phi0 * phi_inf
    h_m, rem = divmod(numerator, idx)
    if rem != 0:
        raise RuntimeError(
            f"unit index {idx} does not divide {numerator} (D={fld.D}, n={modulus.n})"
        )
    return RayClassOrderCert(modulus, h_K, phi0, phi_inf, idx, h_m)


@dataclass
class PlaceRatioReport:
    """h_m across the four infinite-part choices of the modulus (d')."""

    d: int
    D: int
    dprime: int
    certs: dict[str, RayClassOrderCert]
    checks: list[tuple[str, bool, str]] = field(default_factory=list)

    @property
    def orders(self) -> dict[str, int]:
        return {label: cert.h_m for label, cert in self.certs.items()}

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    @property
    def failures(self) -> list[str]:
        return [f"{name}: {detail}" for name, ok, detail in self.checks if not ok]


def place_ratio_certificate(d: int) -> PlaceRatioReport:
    """Certify the 1:2:2:4 growth of h_m as real places enter the modulus.

    Also independently certifies that unit congruence mod d' already forces
    total positivity: the first power of u_f that is = 1 mod d' is totally
    positive, and no -u^r is = 1 mod d' for u the totally positive unit.
    """
    if d < 4:
        raise ValueError(f"dimension must be >= 4, got {d}")
    D = d_to_D(d)
    fld = QuadField(D)
    dp = dprime(d)
    certs = {}
    for inf1, inf2 in ((False, False), (True, False), (False, True), (True, True)):
        cert = ray_class_order(RayModulus(fld, dp, inf1, inf2))
        certs[_PLACE_LABELS[(inf1, inf2)]] = cert
    report = PlaceRatioReport(d=d, D=D, dprime=dp, certs=certs)
    h0 = certs["none"].h_m
    h1 = certs["inf1"].h_m
    h2 = certs["inf2"].h_m
    h12 = certs["both"].h_m
    report.checks.append(("ratio_inf1", h1 == 2 * h0, f"h(inf1)={h1} vs 2*h(none)={2 * h0}"))
    report.checks.append(("ratio_inf2", h2 == 2 * h0, f"h(inf2)={h2} vs 2*h(none)={2 * h0}"))
    report.checks.append(("ratio_both", h12 == 4 * h0, f"h(both)={h12} vs 4*h(none)={4 * h0}"))
    report.checks.append(("inf1_equals_inf2", h1 == h2, f"h(inf1)={h1}, h(inf2)={h2}"))

    ring = ResidueRing(fld, dp)
    uf = fundamental_unit(fld)
    t = ring.order(uf)
    tp = uf ** t
    report.checks.append(
        ("unit_one_mod_dprime_totally_positive", tp.is_totally_positive(),
         f"u_f^{t} signs {tp.signs()}")
    )
    u = totally_positive_unit(fld)
    ord_u = ring.order(u)
    minus_one = ring.reduce(fld.elem(-2, 0))
    u_res = ring.reduce(u)
    cur = ring.one()
    hit = False
    for _ in range(ord_u):
        cur = ring.mul(cur, u_res)
        if ring.mul(minus_one, cur) == ring.one():
            hit = True
            break
    report.checks.append(
        ("no_totally_negative_unit", not hit, f"checked -u^r mod {dp} for r <= {ord_u}")
    )
    return report
