"""Partial coloring random walk and the spherical Komlos reduction.

The walk takes Gaussian steps of size gamma, projected orthogonally to the
coordinates already near +-1 and to the rows whose discrepancy is close to
its threshold. Each step is shortened when needed so that x never leaves
the cube and no unfrozen row crosses its threshold; both postconditions
therefore hold by construction and an attempt only fails when too few
coordinates got close to +-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExhausted, DomainError

HEAVY_ROW_NORM = 20.0
LIGHT_THRESHOLD = 50.0
KOMLOS_APPROX = 0.5
CERTIFIED_K = LIGHT_THRESHOLD * HEAVY_ROW_NORM * 2.0 * math.sqrt(2.0)
CONSTRAINT_SLACK = 1e-6
_ORTH_TOL = 1e-9


@dataclass(frozen=True)
class ColoringProblem:
    """Rows v_j (m x n), thresholds c_j >= 0, start point in [-1, 1]^n, approx in (0, 1)."""

    rows: np.ndarray
    thresholds: np.ndarray
    start: np.ndarray
    approx: float = 0.5

    def __post_init__(self):
        start = np.asarray(self.start, dtype=float)
        if start.ndim != 1 or start.size < 1:
            raise DomainError("start must be a nonempty vector")
        n = start.size
        rows = np.asarray(self.rows, dtype=float).reshape(-1, n)
        c = np.asarray(self.thresholds, dtype=float).reshape(-1)
        if c.size != rows.shape[0]:
            raise DomainError("one threshold per row is required")
        if not (np.all(np.isfinite(rows)) and np.all(np.isfinite(c)) and np.all(np.isfinite(start))):
            raise DomainError("inputs must be finite")
        if np.any(c < 0):
            raise DomainError("thresholds must be nonnegative")
        if np.any(np.abs(start) > 1.0):
            raise DomainError("start must lie in [-1, 1]^n")
        if not (0.0 < self.approx < 1.0):
            raise DomainError("approx must lie in (0, 1)")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "thresholds", c)
        object.__setattr__(self, "start", start)

    @property
    def n(self) -> int:
        return self.start.size

    @property
    def m(self) -> int:
        return self.rows.shape[0]

    def hypothesis_sum(self) -> float:
        """sum_j exp(-c_j^2 / 16); the walk is guaranteed when this is <= n/32."""
        return float(np.sum(np.exp(-self.thresholds ** 2 / 16.0)))

    def hypothesis_holds(self) -> bool:
        return self.hypothesis_sum() <= self.n / 32.0


def _orthonormal_rows(A: np.ndarray) -> np.ndarray:
    """Orthonormal basis (as columns) of the row space of A, Gram-Schmidt twice."""
    k = A.shape[1]
    Q = np.zeros((k, 0))
    for r in A:
        nr = np.linalg.norm(r)
        if nr == 0.0:
            continue
        q = r / nr
        for _ in range(2):
            q = q - Q @ (Q.T @ q)
        nq = np.linalg.norm(q)
        if nq > _ORTH_TOL:
            Q = np.column_stack([Q, q / nq])
    return Q


def walk_parameters(problem: ColoringProblem, zeta: float = 1e-3) -> tuple[float, int]:
    """(gamma, step budget): gamma = approx / sqrt(ln(max(m,1) n / zeta)), steps = ceil(16/gamma^2)."""
    gamma = problem.approx / math.sqrt(math.log(max(problem.m, 1) * problem.n / zeta))
    return gamma, math.ceil(16.0 / gamma ** 2)


def _walk(problem: ColoringProblem, rng: np.random.Generator, zeta: float) -> np.ndarray:
    V = problem.rows
    x0 = problem.start
    x = x0.copy()
    norms = np.linalg.norm(V, axis=1)
    active = norms > 0.0
    bounds = problem.thresholds * norms
    gamma, steps = walk_parameters(problem, zeta)
    edge = 1.0 - problem.approx

    def frozen_rows(disc):
        return active & (bounds - np.abs(disc) <= gamma * norms)

    disc = V @ (x - x0)
    for _ in range(steps):
        free = np.abs(x) < edge
        if not free.any():
            break
        fr = frozen_rows(disc)
        F = np.flatnonzero(free)
        Q = _orthonormal_rows(V[np.ix_(fr, F)])
        if Q.shape[1] >= F.size:
            break
        g = rng.standard_normal(F.size)
        for _ in range(2):
            g = g - Q @ (Q.T @ g)
        step = gamma * g
        alpha = 1.0
        xf = x[F]
        up = step > 0
        dn = step < 0
        if up.any():
            alpha = min(alpha, float(np.min((1.0 - xf[up]) / step[up])))
        if dn.any():
            alpha = min(alpha, float(np.min((-1.0 - xf[dn]) / step[dn])))
        live = np.flatnonzero(active & ~fr)
        if live.size:
            s = V[np.ix_(live, F)] @ step
            cur = disc[live]
            b = bounds[live]
            pos = s > 0
            neg = s < 0
            if pos.any():
                alpha = min(alpha, float(np.min((b[pos] - cur[pos]) / s[pos])))
            if neg.any():
                alpha = min(alpha, float(np.min((-b[neg] - cur[neg]) / s[neg])))
        alpha = max(alpha, 0.0)
        x[F] = np.clip(xf + alpha * step, -1.0, 1.0)
        disc = V @ (x - x0)
    return x


def coloring_succeeded(problem: ColoringProblem, x: np.ndarray) -> bool:
    """Both postconditions: row discrepancies within thresholds, half the coordinates near +-1."""
    norms = np.linalg.norm(problem.rows, axis=1)
    disc = np.abs(problem.rows @ (x - problem.start))
    rows_ok = bool(np.all(disc <= problem.thresholds * norms + CONSTRAINT_SLACK))
    near = int(np.count_nonzero(np.abs(x) >= 1.0 - problem.approx))
    return rows_ok and 2 * near >= problem.n


def attempt_rng(seed: int, attempt: int) -> np.random.Generator:
    """Philox stream for one attempt: the seed's stream jumped ``attempt`` times."""
    return np.random.Generator(np.random.Philox(seed).jumped(attempt))


def partial_coloring_run(problem: ColoringProblem, seed: int, budget: int = 200,
                         zeta: float = 1e-3, check_hypothesis: bool = True) -> tuple[np.ndarray, int]:
    """Like :func:`partial_coloring` but also returns the index of the successful attempt."""
    if budget < 1:
        raise DomainError("budget must be positive")
    if check_hypothesis and not problem.hypothesis_holds():
        raise DomainError(
            f"sum exp(-c^2/16) = {problem.hypothesis_sum():.6g} exceeds n/32 = {problem.n / 32:.6g}"
        )
    for attempt in range(budget):
        x = _walk(problem, attempt_rng(seed, attempt), zeta)
        if coloring_succeeded(problem, x):
            return x, attempt
    raise BudgetExhausted(f"no successful walk in {budget} attempts")


def partial_coloring(problem: ColoringProblem, seed: int, budget: int = 200,
                     zeta: float = 1e-3, check_hypothesis: bool = True) -> np.ndarray:
    """Point x in [-1,1]^n with |<v_j, x - x0>| <= c_j |v_j| and |x_i| >= 1 - approx for half the i.

    Attempts use independent Philox streams derived from ``seed``; the first
    success (lowest attempt index) is returned. The hypothesis
    sum_j exp(-c_j^2/16) <= n/32 is checked up front unless disabled.
    """
    return partial_coloring_run(problem, seed, budget, zeta, check_hypothesis)[0]


@dataclass
class KomlosResult:
    x: np.ndarray
    certified_K: float
    heavy_rows: np.ndarray
    raw: np.ndarray
    discrepancy: float
    attempt: int

    def __iter__(self):
        return iter((self.x, self.certified_K))


def spherical_komlos(W, seed: int, budget: int = 200) -> KomlosResult:
    """Unit x with ||W x||_inf <= CERTIFIED_K / sqrt(n) for W with columns of norm <= 1.

    Rows of norm >= 20 get threshold 0 (so W x is exactly 0 there), all
    other rows threshold 50; the walk starts at 0 with approx 1/2. At least
    n/2 coordinates end with |x_i| >= 1/2, so ||x|| >= sqrt(n)/(2 sqrt 2),
    and every light row has |<v_j, x>| <= 50 * 20.
    """
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[1] < 1:
        raise DomainError("W must be a 2-d array with at least one column")
    if not np.all(np.isfinite(W)):
        raise DomainError("W must be finite")
    n = W.shape[1]
    col = np.linalg.norm(W, axis=0)
    if np.any(col > 1.0 + 1e-9):
        raise DomainError(f"column {int(np.argmax(col))} has norm {col.max():.12g} > 1")
    row = np.linalg.norm(W, axis=1)
    heavy = np.flatnonzero(row >= HEAVY_ROW_NORM)
    # sum of squared row norms equals sum of squared column norms <= n
    if heavy.size * 400 > n:
        raise AssertionError(f"{heavy.size} heavy rows exceed n/400")
    c = np.full(W.shape[0], LIGHT_THRESHOLD)
    c[heavy] = 0.0
    problem = ColoringProblem(W, c, np.zeros(n), KOMLOS_APPROX)
    if not problem.hypothesis_holds():
        raise AssertionError("threshold hypothesis fails for the Komlos parameters")
    x, attempt = partial_coloring_run(problem, seed, budget)
    xn = x / np.linalg.norm(x)
    disc = float(np.max(np.abs(W @ xn))) if W.shape[0] else 0.0
    return KomlosResult(xn, CERTIFIED_K, heavy, x, disc, attempt)
