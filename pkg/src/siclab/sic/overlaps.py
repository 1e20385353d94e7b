"""Overlap tables over the full phase-index grid (Z/d')^2.

The table carries f(j) = <v, D_j v> for j mod d'; the normalized values
sqrt(d+1) f(j) at indices j != 0 mod d lie on the unit circle for a true
fiducial, with the j <-> -j symmetry pairing each value with its inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ..arith import dprime
from .fiducial import Fiducial, raw_overlap_grid

__all__ = ["OverlapTable", "NormalizedOverlaps", "overlap_table", "normalized_overlaps"]


@dataclass
class OverlapTable:
    """values[j1, j2] = f(j) for j in (Z/d')^2; f(0,0) = 1."""

    d: int
    dprime: int
    values: np.ndarray
    max_equiangular_dev: float
    conj_symmetry_dev: float
    sum_rule_dev: float

    def value(self, j) -> complex:
        return complex(self.values[j[0] % self.dprime, j[1] % self.dprime])

    def off_origin_mask(self) -> np.ndarray:
        """True at indices j with j != 0 mod d."""
        idx = np.arange(self.dprime)
        on_axis = (idx % self.d == 0)
        return ~(on_axis[:, None] & on_axis[None, :])


def overlap_table(fid: Fiducial | np.ndarray) -> OverlapTable:
    """Build the full table and record its structural deviations.

    Checks recorded: f(0,0) = 1, conjugation symmetry f(-j) = conj(f(j)),
    and the resolution identity sum over (Z/d)^2 of |f|^2 = d.
    """
    v = fid.v if isinstance(fid, Fiducial) else np.asarray(fid, dtype=complex)
    d = len(v)
    dp = dprime(d)
    n2 = float(np.vdot(v, v).real)
    g = raw_overlap_grid(v) / n2

    j1, j2 = np.meshgrid(np.arange(dp), np.arange(dp), indexing="ij")
    tau_pow = np.exp(1j * np.pi * (d + 1) * np.arange(2 * d) / d)
    values = tau_pow[(j1 * j2) % (2 * d)] * g[j1 % d, j2 % d]

    assert abs(values[0, 0] - 1.0) < 1e-12, "f(0,0) must be 1"
    conj_dev = float(np.max(np.abs(
        values[(-j1) % dp, (-j2) % dp].conj() - values
    )))
    sq = np.abs(g) ** 2
    sum_dev = abs(float(np.sum(sq)) - d)
    eq = np.abs(sq - 1.0 / (d + 1))
    eq.flat[0] = 0.0
    return OverlapTable(
        d=d,
        dprime=dp,
        values=values,
        max_equiangular_dev=float(eq.max()),
        conj_symmetry_dev=conj_dev,
        sum_rule_dev=sum_dev,
    )


@dataclass
class NormalizedOverlaps:
    """sqrt(d+1) f(j) at indices j != 0 mod d (NaN elsewhere)."""

    d: int
    dprime: int
    values: np.ndarray
    max_modulus_dev: float
    inverse_pair_dev: float

    def iter_values(self) -> Iterator[tuple[tuple[int, int], complex]]:
        mask = ~np.isnan(self.values.real)
        for j1, j2 in zip(*np.nonzero(mask)):
            yield (int(j1), int(j2)), complex(self.values[j1, j2])


def normalized_overlaps(table: OverlapTable, *, source_tol: float = 1e-9,
                        modulus_tol: float = 1e-8) -> NormalizedOverlaps:
    """Normalize the table to unit-circle values.

    Refuses tables whose equiangularity deviation exceeds `source_tol` (the
    normalization is only meaningful for a verified fiducial).  Asserts that
    every normalized value has modulus 1 within `modulus_tol` and that the
    value at -j is the inverse of the value at j.
    """
    if table.max_equiangular_dev > source_tol:
        raise ValueError(
            f"overlap table is not from a verified fiducial "
            f"(equiangularity deviation {table.max_equiangular_dev:.3e} > {source_tol:.1e})"
        )
    d, dp = table.d, table.dprime
    mask = table.off_origin_mask()
    values = np.where(mask, np.sqrt(d + 1.0) * table.values, np.nan + 0j)

    mods = np.abs(values[mask])
    mod_dev = float(np.max(np.abs(mods - 1.0)))
    if mod_dev >= modulus_tol:
        raise ValueError(f"normalized modulus deviates by {mod_dev:.3e} > {modulus_tol:.1e}")

    j1, j2 = np.meshgrid(np.arange(dp), np.arange(dp), indexing="ij")
    neg = values[(-j1) % dp, (-j2) % dp]
    pair_dev = float(np.nanmax(np.abs(values * neg - 1.0)))
    return NormalizedOverlaps(d=d, dprime=dp, values=values,
                              max_modulus_dev=mod_dev, inverse_pair_dev=pair_dev)
