import math
from itertools import combinations

import numpy as np
import pytest
from scipy.special import betainc

from spheredisc.errors import DomainError
from spheredisc.packing import generate_packing, max_pairwise_inner
from spheredisc.solver import SolverConfig


def beta_cap(n, theta):
    half = 0.5 * betainc((n - 1) / 2, 0.5, math.sin(theta) ** 2)
    return half if theta <= math.pi / 2 else 1.0 - half


@pytest.fixture(scope="module")
def small():
    return generate_packing(8, 12, SolverConfig(T=20000))


def test_two_points():
    res = generate_packing(6, 2, SolverConfig(T=20000))
    e1 = np.zeros(6)
    e1[0] = 1.0
    assert np.array_equal(res.points[0], e1)
    assert res.points[1] @ e1 <= res.certified_bound.value + 1e-6
    assert abs(np.linalg.norm(res.points[1]) - 1) <= 1e-9


def test_pairs_within_bound_exhaustive(small):
    P = small.points
    worst = max(P[i] @ P[j] for i, j in combinations(range(small.m), 2))
    assert worst == small.max_pair_inner
    assert worst <= small.certified_bound.value + 1e-6
    assert np.all(small.step_values <= small.certified_bound.value + 1e-6)


def test_caps_are_disjoint(small):
    P = small.points
    for i, j in combinations(range(small.m), 2):
        angle = math.acos(min(1.0, P[i] @ P[j]))
        assert angle >= 2 * small.radius - 1e-12


def test_density_matches_beta_oracle(small):
    ref = small.m * beta_cap(8, small.radius)
    assert abs(small.density / ref - 1) <= 1e-9


def test_deterministic():
    a = generate_packing(6, 5, SolverConfig(T=5000))
    b = generate_packing(6, 5, SolverConfig(T=5000))
    assert np.array_equal(a.points, b.points)


def test_progress_callback():
    seen = []
    generate_packing(6, 4, SolverConfig(T=2000), progress=lambda k, m: seen.append((k, m)))
    assert seen == [(2, 4), (3, 4), (4, 4)]


def test_max_pairwise_inner():
    P = np.array([[1.0, 0.0], [0.0, 1.0], [math.sqrt(0.5), math.sqrt(0.5)]])
    assert abs(max_pairwise_inner(P) - math.sqrt(0.5)) < 1e-15


def test_domain():
    with pytest.raises(DomainError):
        generate_packing(5, 10)
    with pytest.raises(DomainError):
        generate_packing(8, 1)
