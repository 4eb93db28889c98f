"""Witness points outside candidate cap/halfspace covers and certified density bounds.

If every pole satisfies <v_i, x> <= B for a unit x, then x avoids every cap
of angle theta with cos(theta) > B, and sqrt(n) x avoids every halfspace
{<z, v_i> >= t} with t > sqrt(n) B. So halfspaces of Gaussian measure below
gaussian_tail(sqrt(n) B) can never cover the sqrt(n)-sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import Cap, Halfspace, cap_volume, gaussian_tail
from .solver import GuaranteeBound, SolverConfig, guarantee_bound, max_inner, padded_size, solve

# strict-separation margin; guards cos(pi/2) ~ 6e-17 style round-off
CERT_MARGIN = 1e-9
UNIFORM_TOL = 1e-12


@dataclass(frozen=True)
class CoverInstance:
    """Candidate cover by caps (common angle) or halfspaces (common threshold)."""

    n: int
    kind: str
    centers: np.ndarray
    level: float

    def __post_init__(self):
        if self.kind not in ("cap", "halfspace"):
            raise DomainError("kind must be 'cap' or 'halfspace'")
        V = np.asarray(self.centers, dtype=float)
        if V.ndim != 2 or V.shape[0] < 1 or V.shape[1] != self.n:
            raise DomainError(f"expected an (m, {self.n}) array of centers")
        object.__setattr__(self, "centers", V)
        if self.kind == "cap" and not (0.0 < self.level <= math.pi):
            raise DomainError("cap angle must lie in (0, pi]")

    @classmethod
    def from_bodies(cls, bodies) -> "CoverInstance":
        bodies = list(bodies)
        if not bodies:
            raise DomainError("a cover needs at least one body")
        if all(isinstance(b, Cap) for b in bodies):
            levels = [b.angle for b in bodies]
            centers = [b.pole for b in bodies]
            kind = "cap"
        elif all(isinstance(b, Halfspace) for b in bodies):
            levels = [b.threshold for b in bodies]
            centers = [b.normal for b in bodies]
            kind = "halfspace"
        else:
            raise DomainError("mixed cap/halfspace covers are not supported")
        if max(levels) - min(levels) > UNIFORM_TOL:
            raise DomainError("all bodies must share one angle (or threshold)")
        return cls(len(centers[0]), kind, np.array(centers), levels[0])

    @classmethod
    def caps(cls, poles, angle: float) -> "CoverInstance":
        poles = np.asarray(poles, dtype=float)
        return cls(poles.shape[1], "cap", poles, float(angle))

    @classmethod
    def halfspaces(cls, normals, threshold: float) -> "CoverInstance":
        normals = np.asarray(normals, dtype=float)
        return cls(normals.shape[1], "halfspace", normals, float(threshold))

    @property
    def m(self) -> int:
        return self.centers.shape[0]


@dataclass
class WitnessReport:
    """``witness`` is unit for caps and has norm sqrt(n) for halfspaces."""

    witness: np.ndarray
    max_inner: float
    certified: bool
    certified_bound: GuaranteeBound
    threshold: float


def find_uncovered_point(cover: CoverInstance, config: SolverConfig | None = None) -> WitnessReport:
    """Run the solver on the centers and test whether its output escapes every body.

    ``max_inner`` is max_i <center_i, x> for the unit solver output x.
    Caps: certified iff max_inner < cos(angle) - 1e-9.
    Halfspaces: certified iff sqrt(n) max_inner < threshold - sqrt(n) 1e-9.
    """
    res = solve(cover.centers, config)
    x = res.x
    value = max_inner(cover.centers, x)
    root = math.sqrt(cover.n)
    if cover.kind == "cap":
        thr = math.cos(cover.level)
        certified = value < thr - CERT_MARGIN
        witness = x
    else:
        thr = cover.level
        certified = root * value < thr - root * CERT_MARGIN
        witness = root * x
    return WitnessReport(witness, value, bool(certified), res.bound, thr)


def certified_density_bound(n: int, m: int, T: int | None = None) -> float:
    """delta_min = gaussian_tail(sqrt(n) B(n, m', T)) with m' the padded count.

    No m halfspaces of common Gaussian measure below delta_min cover the
    sqrt(n)-sphere: the solver exhibits an uncovered point.
    """
    b = guarantee_bound(n, padded_size(n, m), T)
    return gaussian_tail(math.sqrt(n) * b.value)


def cap_density_bound(n: int, m: int, T: int | None = None) -> float:
    """Cap-side analogue: m caps of volume below this never cover S^{n-1}."""
    b = guarantee_bound(n, padded_size(n, m), T)
    return cap_volume(n, math.acos(b.value)) if b.value < 1.0 else 0.0


def density_bounds_for_value(n: int, value: float) -> tuple[float, float]:
    """(halfspace-side, cap-side) volume thresholds implied by a bound ``value`` in [0, 1)."""
    if not (0.0 <= value < 1.0):
        raise DomainError("value must lie in [0, 1)")
    return gaussian_tail(math.sqrt(n) * value), cap_volume(n, math.acos(value))
