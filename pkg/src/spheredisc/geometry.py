"""Spherical caps, Gaussian tails and the cap/halfspace measure comparison."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Gauss-Kronrod 7/15 nodes (nonnegative half) and weights
_XGK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG_FULL = np.zeros(15)
_WG_FULL[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])

QUAD_RTOL = 1e-10
INVERSE_TOL = 1e-12
GAUSS_C = math.exp(-0.5) * (1.0 - math.exp(-1.0))


@dataclass(frozen=True)
class Cap:
    pole: np.ndarray
    angle: float

    def __post_init__(self):
        pole = np.asarray(self.pole, dtype=float)
        if pole.ndim != 1 or abs(np.linalg.norm(pole) - 1.0) > 1e-9:
            raise DomainError("cap pole must be a unit vector")
        if not (0.0 < self.angle <= math.pi):
            raise DomainError("cap angle must lie in (0, pi]")
        object.__setattr__(self, "pole", pole)

    def contains(self, x) -> bool:
        return float(self.pole @ np.asarray(x, dtype=float)) >= math.cos(self.angle)

    def to_halfspace(self) -> "Halfspace":
        n = self.pole.shape[0]
        return Halfspace(self.pole, math.sqrt(n) * math.cos(self.angle))


@dataclass(frozen=True)
class Halfspace:
    """{x : <x, normal> >= threshold}, threshold in standard deviations."""

    normal: np.ndarray
    threshold: float

    def __post_init__(self):
        normal = np.asarray(self.normal, dtype=float)
        if normal.ndim != 1 or abs(np.linalg.norm(normal) - 1.0) > 1e-9:
            raise DomainError("halfspace normal must be a unit vector")
        if not math.isfinite(self.threshold):
            raise DomainError("threshold must be finite")
        object.__setattr__(self, "normal", normal)

    def gaussian_measure(self) -> float:
        return gaussian_tail(self.threshold)


# --------------------------------------------------------------------------
# adaptive quadrature
# --------------------------------------------------------------------------


def _gk15(f, a, b):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fx = f(c + h * _NODES)
    k = h * float(fx @ _WK)
    g = h * float(fx @ _WG_FULL)
    return k, abs(k - g)


def adaptive_gk(f, points, rtol=QUAD_RTOL, max_intervals=20000):
    """Globally adaptive Gauss-Kronrod 7/15 over consecutive ``points``.

    ``f`` must accept numpy arrays. The interval with the largest error
    estimate is bisected until the summed estimate is below ``rtol`` times
    the absolute integral.
    """
    heap = []
    total = 0.0
    err = 0.0
    for a, b in zip(points[:-1], points[1:]):
        if b <= a:
            continue
        k, e = _gk15(f, a, b)
        total += k
        err += e
        heapq.heappush(heap, (-e, a, b, k))
    while err > rtol * abs(total) and len(heap) < max_intervals:
        e, a, b, k = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        k1, e1 = _gk15(f, a, mid)
        k2, e2 = _gk15(f, mid, b)
        total += k1 + k2 - k
        err += e1 + e2 + e
        heapq.heappush(heap, (-e1, a, mid, k1))
        heapq.heappush(heap, (-e2, mid, b, k2))
    return total, err


# --------------------------------------------------------------------------
# caps
# --------------------------------------------------------------------------


def _log_normalizer(n: int) -> float:
    # log of Gamma(n/2) / (sqrt(pi) Gamma((n-1)/2))
    return math.lgamma(n / 2) - math.lgamma((n - 1) / 2) - 0.5 * math.log(math.pi)


def _check_dim(n) -> int:
    if int(n) != n or n < 2:
        raise DomainError("dimension must be an integer >= 2")
    return int(n)


def _cap_volume_small(n: int, theta: float) -> float:
    """Normalized volume for theta in (0, pi/2]."""
    if n == 2:
        return theta / math.pi
    p = n - 2
    ref = math.log(math.sin(theta))
    # sin^p decays away from theta on the scale 1/(p cot theta) (or 1/sqrt(p) near pi/2)
    cot = math.cos(theta) / math.sin(theta)
    scale = min(1.0 / (p * cot) if cot > 0 else math.inf, 1.0 / math.sqrt(p))
    pts = {0.0, theta}
    for k in (1, 4, 16, 64):
        if k * scale < theta:
            pts.add(theta - k * scale)
    points = sorted(pts)

    def f(x):
        return np.exp(p * (np.log(np.sin(x)) - ref))

    integral, _ = adaptive_gk(f, points)
    return float(math.exp(_log_normalizer(n) + p * ref) * integral)


def cap_volume(n: int, angle: float) -> float:
    """Normalized surface measure of a cap of angular radius ``angle`` on S^{n-1}.

    vol = Gamma(n/2)/(sqrt(pi) Gamma((n-1)/2)) * int_0^angle sin^{n-2}(x) dx,
    integrated adaptively with the integrand scaled by sin(angle)^{n-2}
    in log space. Angles above pi/2 use vol(theta) = 1 - vol(pi - theta).
    """
    n = _check_dim(n)
    if not (0.0 < angle <= math.pi):
        raise DomainError("angle must lie in (0, pi]")
    if angle == math.pi:
        return 1.0
    if angle > 0.5 * math.pi:
        return 1.0 - _cap_volume_small(n, math.pi - angle)
    return _cap_volume_small(n, angle)


def _cap_log_density(n: int, theta: float) -> float:
    # log d vol / d theta
    return _log_normalizer(n) + (n - 2) * math.log(math.sin(theta))


def cap_angle_from_volume(n: int, delta: float) -> float:
    """Angle theta with cap_volume(n, theta) = delta (safeguarded Newton)."""
    n = _check_dim(n)
    if not (0.0 < delta < 1.0):
        raise DomainError("volume must lie in (0, 1)")
    lo, hi = 0.0, math.pi
    theta = 0.5 * math.pi
    for _ in range(200):
        v = cap_volume(n, theta)
        r = v - delta
        if abs(r) <= min(INVERSE_TOL, 1e-9 * delta):
            return theta
        if r > 0:
            hi = theta
        else:
            lo = theta
        step = r / math.exp(_cap_log_density(n, theta))
        cand = theta - step
        if not (lo < cand < hi) or not math.isfinite(cand):
            cand = 0.5 * (lo + hi)
        if hi - lo < 1e-16:
            return theta
        theta = cand
    return theta


# --------------------------------------------------------------------------
# Gaussian tails
# --------------------------------------------------------------------------


def gaussian_density(t: float) -> float:
    return math.exp(-0.5 * t * t) / math.sqrt(2.0 * math.pi)


def gaussian_tail(t: float) -> float:
    """Upper tail P(Z >= t) of a standard normal via erfc (no cancellation)."""
    if not math.isfinite(t):
        raise DomainError("t must be finite")
    return 0.5 * math.erfc(t / math.sqrt(2.0))


def gaussian_tail_bounds(t: float) -> tuple[float, float]:
    """(C phi(t)/t, phi(t)/t) with C = e^{-1/2}(1 - 1/e), valid for t >= 1."""
    if not t >= 1.0:
        raise DomainError("the sandwich is stated for t >= 1")
    u = gaussian_density(t) / t
    return GAUSS_C * u, u


def gaussian_tail_inverse(delta: float) -> tuple[float, float]:
    """(numeric, asymptotic) solutions of gaussian_tail(t) = delta.

    numeric: bisection to 1e-12; asymptotic: with L = ln(1/delta),
    sqrt(2L) - ln(2 sqrt(pi))/sqrt(2L) - ln(L)/(2 sqrt(2L)).
    """
    if not (0.0 < delta <= 0.5):
        raise DomainError("delta must lie in (0, 1/2]")
    lo, hi = 0.0, 1.0
    while gaussian_tail(hi) > delta:
        hi *= 2.0
    while hi - lo > INVERSE_TOL:
        mid = 0.5 * (lo + hi)
        if gaussian_tail(mid) > delta:
            lo = mid
        else:
            hi = mid
    numeric = 0.5 * (lo + hi)
    L = math.log(1.0 / delta)
    r = math.sqrt(2.0 * L)
    asym = r - math.log(2.0 * math.sqrt(math.pi)) / r - math.log(L) / (2.0 * r) if L > 0 else float("nan")
    return numeric, asym


def measure_comparison(n: int, phi: float) -> tuple[float, float, float]:
    """(cap volume at angle pi/2 - phi, Gaussian measure of the matching halfspace, tail at sqrt(n) phi)."""
    n = _check_dim(n)
    if not (0.0 < phi < 0.5 * math.pi):
        raise DomainError("phi must lie in (0, pi/2)")
    root = math.sqrt(n)
    return (cap_volume(n, 0.5 * math.pi - phi),
            gaussian_tail(root * math.sin(phi)),
            gaussian_tail(root * phi))
