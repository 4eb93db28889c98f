"""Well-separated point sets on the sphere built by repeated solver calls."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import cap_volume
from .solver import GuaranteeBound, SolverConfig, solve

log = logging.getLogger(__name__)


@dataclass
class PackingResult:
    points: np.ndarray
    max_pair_inner: float
    radius: float
    density: float
    certified_bound: GuaranteeBound
    step_values: np.ndarray
    elapsed: float

    @property
    def m(self) -> int:
        return self.points.shape[0]


def max_pairwise_inner(points: np.ndarray) -> float:
    G = points @ points.T
    np.fill_diagonal(G, -np.inf)
    return float(G.max())


def generate_packing(n: int, m: int, config: SolverConfig | None = None, progress=None) -> PackingResult:
    """m points on S^{n-1}: v_1 = e_1, then v_k = solve({v_1, ..., v_{k-1}}).

    Each new point has inner product at most the bound of its own solve
    against every earlier point, so all pairs are bounded by the largest
    bound used (the one with the largest padded instance). Caps of radius
    arccos(max_pair_inner)/2 around the points are disjoint.
    ``progress(k, m)`` is called after each point when given.
    """
    if int(n) != n or n < 6:
        raise DomainError("n must be an integer >= 6")
    if int(m) != m or m < 2:
        raise DomainError("m must be an integer >= 2")
    start = time.perf_counter()
    pts = np.zeros((m, n))
    pts[0, 0] = 1.0
    values = np.empty(m - 1)
    worst = None
    for k in range(1, m):
        res = solve(pts[:k], config)
        pts[k] = res.x
        values[k - 1] = res.value
        if worst is None or res.bound.value > worst.value or (
            res.bound.value == worst.value and res.bound.m > worst.m
        ):
            worst = res.bound
        if progress is not None:
            progress(k + 1, m)
        log.debug("point %d/%d value %.6f bound %.6f", k + 1, m, res.value, res.bound.value)
    mpi = max_pairwise_inner(pts)
    radius = 0.5 * math.acos(min(1.0, max(-1.0, mpi)))
    density = m * cap_volume(n, radius)
    return PackingResult(pts, mpi, radius, density, worst, values, time.perf_counter() - start)
