"""Fiducial vectors and their displacement overlaps.

For a unit vector v the overlap function is f(j) = <v, D_j v> / <v, v>.
Restricted to j in (Z/d)^2 its squared moduli always satisfy the resolution
identity sum |f(j)|^2 = d; v is fiducial exactly when every off-origin
|f(j)|^2 equals 1/(d+1), i.e. when the frame potential below vanishes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..arith import dprime
from ..weyl import WeylSystem

__all__ = ["Fiducial", "VerifyReport", "frame_potential", "verify_sic", "centring_triple"]


@dataclass
class Fiducial:
    """A unit vector with search metadata.

    `residual` is the max equiangularity error max_j ||f(j)|^2 - 1/(d+1)|,
    recorded honestly from the vector itself.
    """

    d: int
    v: np.ndarray
    residual: float
    seed: int | None = None
    symmetry: str = "none"

    def __post_init__(self) -> None:
        self.v = np.asarray(self.v, dtype=complex)
        if self.v.shape != (self.d,):
            raise ValueError(f"vector shape {self.v.shape} does not match d={self.d}")
        if abs(np.linalg.norm(self.v) - 1.0) > 1e-14:
            raise ValueError("fiducial vectors must be stored with unit norm")
        if self.symmetry not in ("Fz", "Fa", "none"):
            raise ValueError(f"unknown symmetry tag {self.symmetry!r}")

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "vector": [[float(z.real), float(z.imag)] for z in self.v],
            "residual": float(self.residual),
            "seed": self.seed,
            "symmetry": self.symmetry,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Fiducial":
        v = np.array([complex(re, im) for re, im in obj["vector"]])
        return cls(d=int(obj["d"]), v=v, residual=float(obj["residual"]),
                   seed=obj.get("seed"), symmetry=obj.get("symmetry", "none"))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json()) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Fiducial":
        return cls.from_json(json.loads(Path(path).read_text()))


def raw_overlap_grid(v: np.ndarray) -> np.ndarray:
    """g[a, b] = sum_m conj(v[m+a]) v[m] zeta_d^(b m), for (a, b) in (Z/d)^2.

    This is <v, D_(a,b) v> up to the tau^(a b) phase; in particular
    |g[a, b]| = |<v, D_(a,b) v>| and g[0, 0] = |v|^2.
    """
    v = np.asarray(v, dtype=complex)
    d = len(v)
    w = np.empty((d, d), dtype=complex)
    for a in range(d):
        w[a] = np.conj(np.roll(v, -a)) * v
    return np.fft.ifft(w, axis=1) * d


def overlap_sq(v: np.ndarray) -> np.ndarray:
    """|f(j)|^2 over (Z/d)^2 for the normalized overlap function."""
    g = raw_overlap_grid(v)
    n2 = float(np.vdot(v, v).real)
    return np.abs(g) ** 2 / n2 ** 2


def frame_potential(v: np.ndarray) -> float:
    """sum_(j != 0) (|f(j)|^2 - 1/(d+1))^2; zero iff v is fiducial."""
    v = np.asarray(v, dtype=complex)
    if not np.any(v):
        raise ValueError("frame potential of the zero vector is undefined")
    d = len(v)
    r = overlap_sq(v) - 1.0 / (d + 1)
    r.flat[0] = 0.0
    return float(np.sum(r * r))


@dataclass
class VerifyReport:
    d: int
    max_deviation: float
    worst_index: tuple[int, int]
    tolerance: float
    orbit_size: int

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance


def verify_sic(fid: "Fiducial | np.ndarray", *, tol: float = 1e-9) -> VerifyReport:
    """Check every off-origin |f(j)|^2 against 1/(d+1).

    Reports the worst deviation and the implied orbit size d^2.  Vacuous for
    d = 1, where there are no off-origin indices.
    """
    v = fid.v if isinstance(fid, Fiducial) else np.asarray(fid, dtype=complex)
    d = len(v)
    dev = np.abs(overlap_sq(v) - 1.0 / (d + 1))
    dev.flat[0] = 0.0
    worst = int(np.argmax(dev))
    return VerifyReport(
        d=d,
        max_deviation=float(dev.flat[worst]),
        worst_index=(worst // d, worst % d),
        tolerance=tol,
        orbit_size=d * d,
    )


def equiangularity_residual(v: np.ndarray) -> float:
    return verify_sic(v).max_deviation


def centring_triple(fid: Fiducial) -> tuple[Fiducial, Fiducial, Fiducial]:
    """The translates (v, Bv, B^2 v) for B = D_(n, 2n), n = d/3.

    Requires 3 | d.  All three remain fiducial (B is unitary); exactly one of
    them is the canonical representative whose overlaps generate the smaller
    field, but that classification needs exact arithmetic and is not decided
    here.
    """
    if fid.d % 3 != 0:
        raise ValueError(f"centring shift needs 3 | d, got d={fid.d}")
    n = fid.d // 3
    B = WeylSystem(fid.d).displacement((n, 2 * n))
    out = [fid]
    v = fid.v
    for _ in range(2):
        v = B @ v
        out.append(Fiducial(d=fid.d, v=v, residual=equiangularity_residual(v),
                            seed=fid.seed, symmetry=fid.symmetry))
    return out[0], out[1], out[2]
