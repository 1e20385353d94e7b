"""Numerical fiducial search restricted to a Zauner eigenspace.

The order-3 metaplectic unitary splits C^d into three eigenspaces; known
fiducials live in the largest one, so the search parametrizes vectors by
their coordinates in such an eigenspace and drives the equiangularity
residuals to zero with a Levenberg-Marquardt least-squares solver (for a
zero-residual problem this converges to machine-precision residuals).
Restarts use independent per-restart random streams and the result selection
(lowest frame potential, ties by restart index) is deterministic and
independent of the worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import least_squares

from ..clifford import metaplectic_unitary, zauner_matrix
from ..weyl import WeylSystem
from .fiducial import Fiducial, equiangularity_residual, raw_overlap_grid

__all__ = ["SearchOptions", "FiducialNotFound", "search_fiducial", "zauner_eigenbasis"]


class FiducialNotFound(RuntimeError):
    def __init__(self, d: int, restarts: int, best_potential: float):
        self.d = d
        self.restarts = restarts
        self.best_potential = best_potential
        super().__init__(
            f"no fiducial found for d={d} after {restarts} restarts; "
            f"best frame potential {best_potential:.3e}"
        )


@dataclass
class SearchOptions:
    restarts: int = 16
    tol: float = 1e-24
    seed: int = 0
    max_nfev: int | None = None
    eigenspace: int | None = None  # force a class 0/1/2; None = largest (ties tried round-robin)
    workers: int | None = None     # None: SICLAB_THREADS env var, default 1


@lru_cache(maxsize=32)
def zauner_eigenbasis(d: int) -> tuple[np.ndarray, ...]:
    """Orthonormal bases of the three eigenspaces of the order-3 unitary.

    The unitary U is normalized by a cube root of its scalar cube so that
    W = U/xi satisfies W^3 = I; the eigenspace of omega^c is then the image
    of the projector (1/3) sum_m omega^(-cm) W^m.  Returned in class order
    c = 0, 1, 2; ranks sum to d.
    """
    system = WeylSystem(d)
    U = metaplectic_unitary(system, zauner_matrix(d))
    cube = U @ U @ U
    scalar = np.trace(cube) / d
    if np.max(np.abs(cube - scalar * np.eye(d))) > 1e-10 or abs(abs(scalar) - 1) > 1e-10:
        raise RuntimeError(f"order-3 unitary has non-scalar cube at d={d}")
    xi = scalar ** (1.0 / 3.0)
    W = U / xi
    omega = np.exp(2j * np.pi / 3)
    bases = []
    total = 0
    for c in range(3):
        P = (np.eye(d) + omega ** (-c) * W + omega ** (-2 * c) * (W @ W)) / 3.0
        u, s, _ = np.linalg.svd(P)
        rank = int(np.count_nonzero(s > 0.5))
        bases.append(np.ascontiguousarray(u[:, :rank]))
        total += rank
    if total != d:
        raise RuntimeError(f"eigenspace ranks {[b.shape[1] for b in bases]} do not sum to {d}")
    return tuple(bases)


def _run_restart(d: int, basis: np.ndarray, x0: np.ndarray, max_nfev: int | None):
    m = basis.shape[1]
    mu = 1.0 / (d + 1)

    def residuals(x: np.ndarray) -> np.ndarray:
        v = basis @ (x[:m] + 1j * x[m:])
        n2 = float(np.vdot(v, v).real)
        if n2 < 1e-9:
            return np.full(d * d - 1, 1.0)
        g = raw_overlap_grid(v)
        r = (np.abs(g) ** 2 / n2 ** 2 - mu).ravel()
        return r[1:]

    res = least_squares(residuals, x0, method="lm",
                        xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=max_nfev)
    return 2.0 * res.cost, res.x


def search_fiducial(d: int, opts: SearchOptions | None = None, **kw) -> Fiducial:
    """Search for a unit vector with frame potential below opts.tol.

    Deterministic for a fixed seed: every restart draws from its own seeded
    stream, all restarts in the budget are run, and the lowest-potential
    result wins (ties broken by restart index).  Raises FiducialNotFound with
    the best residual when the budget is exhausted.
    """
    if d < 2:
        raise ValueError(f"search requires d >= 2, got {d}")
    if opts is None:
        opts = SearchOptions(**kw)
    elif kw:
        raise TypeError("pass either opts or keyword options, not both")

    bases = zauner_eigenbasis(d)
    if opts.eigenspace is not None:
        candidates = [bases[opts.eigenspace]]
    else:
        top = max(b.shape[1] for b in bases)
        candidates = [b for b in bases if b.shape[1] == top]

    jobs = []
    for i in range(opts.restarts):
        basis = candidates[i % len(candidates)]
        rng = np.random.default_rng([opts.seed, i])
        jobs.append((basis, rng.standard_normal(2 * basis.shape[1])))

    workers = opts.workers
    if workers is None:
        workers = int(os.environ.get("SICLAB_THREADS", "1"))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(
                lambda job: _run_restart(d, job[0], job[1], opts.max_nfev), jobs))
    else:
        results = [_run_restart(d, basis, x0, opts.max_nfev) for basis, x0 in jobs]

    best_idx = min(range(len(results)), key=lambda i: (results[i][0], i))
    best_potential, best_x = results[best_idx]
    if not best_potential < opts.tol:
        raise FiducialNotFound(d, opts.restarts, best_potential)

    basis = jobs[best_idx][0]
    m = basis.shape[1]
    v = basis @ (best_x[:m] + 1j * best_x[m:])
    v = v / np.linalg.norm(v)
    # Deterministic global phase: largest-modulus component positive real.
    k = int(np.argmax(np.abs(v)))
    v = v * (abs(v[k]) / v[k])
    return Fiducial(d=d, v=v, residual=equiangularity_residual(v),
                    seed=opts.seed, symmetry="Fz")
