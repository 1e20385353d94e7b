"""Overlap-function stabilizers inside the determinant +-1 group.

An element g of GL2(Z/d') acts on overlap tables by translation,
(g f)(j) = f(g j); the stabilizer of a fiducial's table is enumerated over
the determinant +-1 subgroup, and its centralizer inside GL2(Z/d') can be
compared with ray-class data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..clifford import SymplecticMat, esl2_elements, gl2_elements
from .overlaps import OverlapTable

__all__ = ["StabilizerResult", "stabilizer_search", "centralizer_order"]

_ENUM_DPRIME_BOUND = 40
_CHUNK = 2048


@dataclass
class StabilizerResult:
    dprime: int
    elements: list[SymplecticMat]
    tolerance: float
    near_misses: list[tuple[SymplecticMat, float]] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.elements)

    def contains(self, F: SymplecticMat) -> bool:
        return any(F.entries() == g.entries() for g in self.elements)


def stabilizer_search(table: OverlapTable, *, tol: float = 1e-8) -> StabilizerResult:
    """All determinant +-1 matrices g with f(g j) = f(j) for every j.

    Elements whose deviation falls between tol and 10*tol are reported as
    near misses (an ambiguous tolerance band deserves a second look).
    """
    dp = table.dprime
    if dp > _ENUM_DPRIME_BOUND:
        raise ValueError(f"d'={dp} exceeds the enumeration bound {_ENUM_DPRIME_BOUND}")
    T = table.values
    j1, j2 = np.meshgrid(np.arange(dp), np.arange(dp), indexing="ij")
    mats = esl2_elements(dp)
    elements = []
    near = []
    for lo in range(0, len(mats), _CHUNK):
        chunk = mats[lo:lo + _CHUNK]
        idx1 = (chunk[:, 0, 0, None, None] * j1 + chunk[:, 0, 1, None, None] * j2) % dp
        idx2 = (chunk[:, 1, 0, None, None] * j1 + chunk[:, 1, 1, None, None] * j2) % dp
        devs = np.abs(T[idx1, idx2] - T[None, :, :]).reshape(len(chunk), -1).max(axis=1)
        for pos in np.nonzero(devs < 10 * tol)[0]:
            g = chunk[pos]
            F = SymplecticMat(int(g[0, 0]), int(g[0, 1]), int(g[1, 0]), int(g[1, 1]), dp)
            if devs[pos] < tol:
                elements.append(F)
            else:
                near.append((F, float(devs[pos])))
    elements.sort(key=lambda F: F.entries())
    return StabilizerResult(dprime=dp, elements=elements, tolerance=tol, near_misses=near)


def centralizer_order(S: Sequence[SymplecticMat], dp: int) -> int:
    """Order of the centralizer of S inside GL2(Z/d'), by enumeration."""
    if not S:
        raise ValueError("centralizer of an empty set is ill-defined here")
    if dp > _ENUM_DPRIME_BOUND:
        raise ValueError(f"d'={dp} exceeds the enumeration bound {_ENUM_DPRIME_BOUND}")
    mats = gl2_elements(dp)
    keep = np.ones(len(mats), dtype=bool)
    for F in S:
        A = F.as_array()
        ga = np.einsum("nij,jk->nik", mats, A)
        ag = np.einsum("ij,njk->nik", A, mats)
        keep &= ((ga - ag) % dp == 0).all(axis=(1, 2))
        mats = mats[keep]
        keep = np.ones(len(mats), dtype=bool)
    return len(mats)
