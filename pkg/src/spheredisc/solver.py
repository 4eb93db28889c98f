"""Deterministic multiplicative-weights solver for spherical discrepancy.

Given unit vectors v_1..v_m in R^n, ``solve`` returns a unit x with a
certified upper bound on max_i <v_i, x>. The walk starts at x = 0 and takes
T steps of length delta. Each step direction y is orthogonal to x, to the
weighted sum of the v_i, to every heavy v_i (weight >= 2), and to the top
n - |I| - 3 eigenvectors of M = sum over light i of w_i v_i v_i^T. After
each step every weight is multiplied by exp(lam*delta*<v_i, y>) * rho.

Exact duplicate input vectors are merged into one row with a multiplicity;
every weight, sum and heavy count is identical to the expanded instance.
"""

from __future__ import annotations

import logging
import math
import os
import time
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from threadpoolctl import threadpool_limits

from .errors import DimensionTooSmall, DomainError, NoConvergence, SolverTimeout, StepTooLarge, SubspaceExhausted
from .linalg import RANK_TOL, _bottom_eig, _complement_kernel

log = logging.getLogger(__name__)

UNIT_TOL = 1e-9
HEAVY = 2.0
# the weight cap 2*exp(lam*delta) <= 3 needs lam*delta <= ln(3/2)
MAX_LAM_DELTA = math.log(1.5)

# per-run maxima collected by the step kernel
_S_PHI_RATIO = 0
_S_NORM_ERR = 1
_S_MAX_W = 2
_S_QUAD_EXCESS = 3
_S_ORTH_X = 4
_S_ORTH_G = 5
_S_ORTH_HEAVY = 6
_S_HEAVY = 7
_S_EIG_RES = 8
_S_QUAD_RATIO = 9
_N_STATS = 10


def threads_from_env() -> int:
    try:
        return max(1, int(os.environ.get("SPHERE_DISC_THREADS", "1")))
    except ValueError:
        return 1


# --------------------------------------------------------------------------
# parameters and the certified bound
# --------------------------------------------------------------------------


def is_trivial(n: int, m: int) -> bool:
    """True when m >= n e^{n/2}; any unit vector then meets the bound 1."""
    return math.log(m) >= math.log(n) + 0.5 * n


def padded_size(n: int, m: int) -> int:
    return max(m, 16 * n)


def default_T(n: int, m: int) -> int:
    """Iteration count making the step-size term a tenth of the main term.

    With T = 200 (n-5) n^2 lam^2 we get lam*delta*n = 0.1, so
    term_stepsize / term_main = lam*delta*n/2 = 0.05.
    """
    if n < 6:
        raise DimensionTooSmall(f"n={n} < 6")
    lam2 = math.log(padded_size(n, m) / n)
    return math.ceil(200 * (n - 5) * n * n * lam2)


@dataclass(frozen=True)
class GuaranteeBound:
    """Certified bound on max_i <v_i, x/||x||> after T steps.

    ``raw`` is term_main + term_stepsize + term_log3 as computed;
    ``value`` is that sum clamped to 1 (or exactly 1 in the trivial regime).
    """

    value: float
    term_main: float
    term_stepsize: float
    term_log3: float
    n: int
    m: int
    T: int
    lam: float
    delta: float
    trivial: bool = False

    @property
    def raw(self) -> float:
        return self.term_main + self.term_stepsize + self.term_log3

    @property
    def components(self) -> tuple[float, float, float]:
        return (self.term_main, self.term_stepsize, self.term_log3)


def step_parameters(n: int, m: int, T: int) -> tuple[float, float, float]:
    """(lam, delta, rho) for an instance of padded size m."""
    lam = math.sqrt(math.log(m / n))
    delta = math.sqrt(2.0 * (n - 5) / T)
    rho = math.exp(-(delta * delta * lam * lam) / (2.0 * (n - 5)) * (1.0 + lam * delta * n))
    return lam, delta, rho


def guarantee_bound(n: int, m: int, T: int | None = None) -> GuaranteeBound:
    """Certified value B(n, m, T).

    With delta*sqrt(T) = sqrt(2(n-5)):
    term_main = lam sqrt(2/(n-5)), term_stepsize = lam^2 delta n / sqrt(2(n-5)),
    term_log3 = ln 3 / (lam sqrt(2(n-5))). When m >= n e^{n/2} the value is 1.
    ``T=None`` uses :func:`default_T`.
    """
    if n < 1 or m < 1:
        raise DomainError("n and m must be positive")
    if T is not None and T < 1:
        raise DomainError("T must be a positive integer")
    if is_trivial(n, m):
        nan = float("nan")
        return GuaranteeBound(1.0, nan, nan, nan, n, m, 0 if T is None else int(T), nan, nan, True)
    if n < 6:
        raise DimensionTooSmall(f"n={n} < 6 outside the trivial regime")
    if m < 16 * n:
        raise DomainError(f"m={m} < 16n; pad the instance first")
    if T is None:
        T = default_T(n, m)
    T = int(T)
    lam, delta, _ = step_parameters(n, m, T)
    if lam * delta > MAX_LAM_DELTA:
        raise StepTooLarge(f"lam*delta={lam * delta:.4g} exceeds ln(3/2); increase T")
    r = math.sqrt(2.0 * (n - 5))
    main = lam * math.sqrt(2.0 / (n - 5))
    stepsize = lam * lam * delta * n / r
    log3 = math.log(3.0) / (lam * r)
    return GuaranteeBound(min(1.0, main + stepsize + log3), main, stepsize, log3, n, m, T, lam, delta)


# --------------------------------------------------------------------------
# data types
# --------------------------------------------------------------------------


@dataclass
class SolverConfig:
    """T=None picks :func:`default_T`; trace_stride=None picks max(1, T // 10**4)."""

    T: int | None = None
    tau_eig: float = 1e-10
    trace_stride: int | None = None
    record_states: bool = False
    time_limit: float | None = None
    pad: bool = True

    def __post_init__(self):
        if self.T is not None and (int(self.T) != self.T or self.T < 1):
            raise DomainError("T must be a positive integer")
        if not (0.0 < self.tau_eig <= 1e-6):
            raise DomainError("tau_eig must lie in (0, 1e-6]")
        if self.trace_stride is not None and self.trace_stride < 1:
            raise DomainError("trace_stride must be positive")


@dataclass
class SolverTrace:
    """Rows (t, phi, heavy_count, x_norm, max_weight) in increasing t.

    ``states`` holds (t, x, w) snapshots when requested; ``w`` is per
    distinct row, expand with ``w[inverse]``.
    """

    t: np.ndarray
    phi: np.ndarray
    heavy_count: np.ndarray
    x_norm: np.ndarray
    max_weight: np.ndarray
    states: list = field(default_factory=list)
    inverse: np.ndarray | None = None

    def rows(self):
        return list(zip(self.t.tolist(), self.phi.tolist(), self.heavy_count.tolist(),
                        self.x_norm.tolist(), self.max_weight.tolist()))

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("t,phi,heavy_count,x_norm,max_weight\n")
            for t, phi, h, xn, mw in self.rows():
                fh.write(f"{t},{phi:.17g},{h},{xn:.17g},{mw:.17g}\n")


@dataclass(frozen=True)
class StepStats:
    """Worst case over all steps of the per-step invariant checks."""

    max_phi_ratio: float
    max_norm_rel_err: float
    max_weight: float
    max_quad_excess: float
    max_orth_x: float
    max_orth_g_rel: float
    max_orth_heavy: float
    max_heavy: int
    max_eig_residual: float
    max_quad_ratio: float

    @classmethod
    def from_array(cls, s):
        return cls(float(s[0]), float(s[1]), float(s[2]), float(s[3]), float(s[4]),
                   float(s[5]), float(s[6]), int(s[7]), float(s[8]), float(s[9]))


@dataclass
class SolveResult:
    x: np.ndarray
    value: float
    bound: GuaranteeBound
    trace: SolverTrace
    stats: StepStats | None
    m: int
    m_padded: int
    T: int
    elapsed: float

    @property
    def trivial(self) -> bool:
        return self.bound.trivial


# --------------------------------------------------------------------------
# kernel
# --------------------------------------------------------------------------


@njit
def _eig_defect(M, vals, B):
    """max(residual / ||M||_F, orthonormality error) for eigenvector rows B."""
    kb, n = B.shape
    fro = np.sqrt(np.sum(M * M))
    R = np.dot(B, M)
    worst = 0.0
    for p in range(kb):
        r2 = 0.0
        for j in range(n):
            d = R[p, j] - vals[p] * B[p, j]
            r2 += d * d
        if r2 > worst:
            worst = r2
    res = np.sqrt(worst) / fro if fro > 0.0 else 0.0
    G = np.dot(B, B.T)
    for p in range(kb):
        for q in range(kb):
            e = abs(G[p, q] - (1.0 if p == q else 0.0))
            if e > res:
                res = e
    return res


@njit
def _run_steps(V, mult, x, w, t0, t1, lam, delta, rho, tau_eig, stats):
    md, n = V.shape
    n5 = n - 5.0
    ld = lam * delta
    S = np.empty((md, n))
    mw = np.empty(md)
    C = np.empty((md + 2, n))
    eye = np.eye(n)
    for t in range(t0, t1):
        phi = 0.0
        heavy = 0
        nh = 0
        for i in range(md):
            mw[i] = mult[i] * w[i]
            phi += mw[i]
            if w[i] >= HEAVY:
                heavy += mult[i]
                nh += 1
        if heavy > stats[7]:
            stats[7] = heavy
        for i in range(md):
            s = 0.0
            if w[i] < HEAVY:
                s = np.sqrt(mw[i])
            for j in range(n):
                S[i, j] = s * V[i, j]
        M = np.dot(S.T, S)
        g = np.dot(V.T, mw)
        ktop = n - heavy - 3
        if ktop <= 0:
            B = eye
        else:
            kb = n - ktop
            vals, B, info = _bottom_eig(M, kb)
            res = _eig_defect(M, vals, B) if info == 0 else np.inf
            if res > tau_eig:
                # MRRR can lose accuracy on big clusters; redo with the full solver
                allv, allz = np.linalg.eigh(M)
                vals = allv[:kb].copy()
                B = np.ascontiguousarray(allz[:, :kb].T)
                res = _eig_defect(M, vals, B)
            if res > stats[8]:
                stats[8] = res
            if res > tau_eig:
                return t, 3
        # constraints: x, g, heavy rows (the kernel normalizes and drops zeros)
        for j in range(n):
            C[0, j] = x[j]
            C[1, j] = g[j]
        r = 2
        for i in range(md):
            if w[i] >= HEAVY:
                for j in range(n):
                    C[r, j] = V[i, j]
                r += 1
        y, probe, status = _complement_kernel(B, C[:r], 1e-8)
        if status != 0:
            return t, 1
        a = np.dot(V, y)
        quad = 0.0
        yg = 0.0
        oh = 0.0
        for i in range(md):
            yg += mw[i] * a[i]
            if w[i] < HEAVY:
                quad += mw[i] * a[i] * a[i]
            elif abs(a[i]) > oh:
                oh = abs(a[i])
        yx = 0.0
        for j in range(n):
            yx += y[j] * x[j]
        excess = quad - phi / n5
        if excess > stats[3]:
            stats[3] = excess
        qr = quad * n5 / phi
        if qr > stats[9]:
            stats[9] = qr
        if abs(yx) > stats[4]:
            stats[4] = abs(yx)
        if abs(yg) / phi > stats[5]:
            stats[5] = abs(yg) / phi
        if oh > stats[6]:
            stats[6] = oh
        for j in range(n):
            x[j] += delta * y[j]
        phi_new = 0.0
        wmax = 0.0
        for i in range(md):
            w[i] = w[i] * np.exp(ld * a[i]) * rho
            phi_new += mult[i] * w[i]
            if w[i] > wmax:
                wmax = w[i]
        if phi_new / phi > stats[0]:
            stats[0] = phi_new / phi
        if wmax > stats[2]:
            stats[2] = wmax
        target = delta * np.sqrt(t + 1.0)
        xn = np.sqrt(np.sum(x * x))
        err = abs(xn - target) / target
        if err > stats[1]:
            stats[1] = err
    return t1, 0


# --------------------------------------------------------------------------
# driver
# --------------------------------------------------------------------------


def validate_vectors(vectors, n: int | None = None) -> np.ndarray:
    V = np.asarray(vectors, dtype=float)
    if V.ndim == 1:
        V = V.reshape(1, -1)
    if V.ndim != 2 or V.shape[0] < 1 or V.shape[1] < 1:
        raise DomainError(f"expected an (m, n) array with m, n >= 1, got shape {V.shape}")
    if n is not None and V.shape[1] != n:
        raise DomainError(f"dimension mismatch: vectors have n={V.shape[1]}, expected {n}")
    if not np.all(np.isfinite(V)):
        raise DomainError("vectors must be finite")
    norms = np.linalg.norm(V, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > UNIT_TOL)
    if bad.size:
        raise DomainError(f"vector {bad[0]} has norm {norms[bad[0]]!r}, not 1 within 1e-9")
    return np.ascontiguousarray(V)


def max_inner(V: np.ndarray, x: np.ndarray) -> float:
    """max_i <v_i, x>; the single evaluation routine used everywhere."""
    return float(np.max(V @ x))


def pad_cyclic(V: np.ndarray) -> np.ndarray:
    """Repeat rows cyclically until there are at least 16n of them."""
    m, n = V.shape
    target = padded_size(n, m)
    if target == m:
        return V
    return V[np.arange(target) % m]


def compress_duplicates(V: np.ndarray):
    """Distinct rows in first-occurrence order, their counts and the expansion map."""
    index: dict[bytes, int] = {}
    inverse = np.empty(V.shape[0], dtype=np.int64)
    for i, row in enumerate(V):
        key = row.tobytes()
        inverse[i] = index.setdefault(key, len(index))
    first = np.empty(len(index), dtype=np.int64)
    first[inverse[::-1]] = np.arange(V.shape[0])[::-1]
    counts = np.bincount(inverse, minlength=len(index)).astype(np.int64)
    return np.ascontiguousarray(V[first]), counts, inverse


def trivial_point(V: np.ndarray) -> np.ndarray:
    """Best of -normalized(sum v_i) and +-e_j by objective value; first wins ties."""
    n = V.shape[1]
    cands = []
    s = V.sum(axis=0)
    ns = np.linalg.norm(s)
    if ns > RANK_TOL:
        cands.append(-s / ns)
    eye = np.eye(n)
    for j in range(n):
        cands.append(eye[j])
        cands.append(-eye[j])
    values = [max_inner(V, c) for c in cands]
    return np.array(cands[int(np.argmin(values))])


def solve(vectors, config: SolverConfig | None = None) -> SolveResult:
    """Run the multiplicative-weights walk on unit vectors (rows of ``vectors``).

    Instances with m < 16n are padded by cyclic duplication. If the padded
    count reaches n e^{n/2} the loop is skipped and a deterministic best
    candidate among -sum(v)/|sum(v)| and +-e_j is returned with bound 1.
    """
    cfg = config or SolverConfig()
    V = validate_vectors(vectors)
    m, n = V.shape
    Vp = pad_cyclic(V) if cfg.pad else V
    mp = Vp.shape[0]
    start = time.perf_counter()

    if is_trivial(n, mp):
        x = trivial_point(V)
        w0 = n / mp
        trace = SolverTrace(np.array([0]), np.array([float(n)]), np.array([0]),
                            np.array([0.0]), np.array([w0]))
        return SolveResult(x, max_inner(V, x), guarantee_bound(n, mp, cfg.T), trace, None,
                           m, mp, 0, time.perf_counter() - start)

    if n < 6:
        raise DimensionTooSmall(f"n={n} < 6")
    T = int(cfg.T) if cfg.T is not None else default_T(n, mp)
    bound = guarantee_bound(n, mp, T)
    lam, delta, rho = step_parameters(n, mp, T)
    stride = cfg.trace_stride or max(1, T // 10**4)

    U, mult, inverse = compress_duplicates(Vp)
    x = np.zeros(n)
    w = np.full(U.shape[0], math.exp(-lam * lam))
    stats = np.zeros(_N_STATS)
    rows = []
    states = []

    def snapshot(t):
        rows.append((t, float(mult @ w), int(mult[w >= HEAVY].sum()), float(np.linalg.norm(x)), float(w.max())))
        if cfg.record_states:
            states.append((t, x.copy(), w.copy()))

    log.debug("solve n=%d m=%d (padded %d, distinct %d) T=%d lam*delta=%.3g", n, m, mp, U.shape[0], T, lam * delta)
    snapshot(0)
    t = 0
    with threadpool_limits(limits=threads_from_env()):
        while t < T:
            stop = min(T, t + stride)
            t_reached, status = _run_steps(U, mult, x, w, t, stop, lam, delta, rho, cfg.tau_eig, stats)
            if status == 1:
                raise SubspaceExhausted(int(t_reached), int(mult[w >= HEAVY].sum()), n)
            if status == 3:
                                raise NoConvergence(f"eigen residual {stats[_S_EIG_RES]:.3g} above tau_eig at step {t_reached}")
            t = stop
            snapshot(t)
            if cfg.time_limit is not None and t < T:
                elapsed = time.perf_counter() - start
                if elapsed > cfg.time_limit:
                    raise SolverTimeout(t, T, elapsed)

    xn = x / np.linalg.norm(x)
    arr = np.array(rows, dtype=float)
    trace = SolverTrace(arr[:, 0].astype(np.int64), arr[:, 1], arr[:, 2].astype(np.int64),
                        arr[:, 3], arr[:, 4], states, inverse)
    return SolveResult(xn, max_inner(V, xn), bound, trace, StepStats.from_array(stats),
                       m, mp, T, time.perf_counter() - start)
