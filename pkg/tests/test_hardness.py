import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spheredisc.errors import DomainError, MalformedClause
from spheredisc.hardness import (
    NAEFormula,
    check_instance,
    coloring_vector,
    evaluate_instance,
    format_formula,
    gap_constant,
    parse_formula,
    reduce_nae_e3sat,
)
from spheredisc.solver import SolverConfig, solve


def test_single_clause():
    inst = reduce_nae_e3sat(NAEFormula(4, ((1, -2, 3),)))
    assert inst.m == 10 and inst.n == 4
    s = 1 / math.sqrt(3)
    np.testing.assert_array_equal(inst.vectors[0], [s, -s, s, 0])
    np.testing.assert_array_equal(inst.vectors[1], [-s, s, -s, 0])
    assert inst.tags[:2] == [("clause", 0, 1), ("clause", 0, -1)]
    assert inst.tags[2] == ("axis", 0, 1)
    np.testing.assert_allclose(np.linalg.norm(inst.vectors, axis=1), 1.0, rtol=0, atol=1e-15)
    check_instance(inst)


def test_empty_formula():
    inst = reduce_nae_e3sat(NAEFormula(3))
    assert inst.m == 6
    np.testing.assert_array_equal(inst.vectors[::2], np.eye(3))
    np.testing.assert_array_equal(inst.vectors[1::2], -np.eye(3))


@pytest.mark.parametrize("clause", [(1, 1, 2), (1, 2), (0, 1, 2), (1, 2, 9), (1, -1, 2)])
def test_malformed_clauses(clause):
    with pytest.raises(MalformedClause):
        NAEFormula(4, (clause,))


def test_occurrence_bound():
    f = ((1, 2, 3), (1, 2, 4), (1, 3, 4))
    NAEFormula(4, f, occurrence_bound=3)
    with pytest.raises(DomainError):
        NAEFormula(4, f, occurrence_bound=2)


def test_nae_satisfied():
    f = NAEFormula(3, ((1, 2, 3), (1, -2, 3)))
    np.testing.assert_array_equal(f.nae_satisfied([1, 1, 1]), [False, True])
    np.testing.assert_array_equal(f.nae_satisfied([1, -1, 1]), [True, False])


def test_gap_constant():
    # 50-digit evaluation of sqrt((6 - 9/160) / (6 - 1/10))
    assert abs(gap_constant(6, 0.9) - 1.0037007792351703338) <= 1e-15
    for B in (3, 4, 10, 1000):
        for g in (0.01, 0.5, 0.99):
            v = gap_constant(B, g)
            assert 1 < v < 3 * math.sqrt(3) / 4
    assert gap_constant(3, 0.5) > gap_constant(30, 0.5)
    with pytest.raises(DomainError):
        gap_constant(2, 0.5)
    with pytest.raises(DomainError):
        gap_constant(5, 1.0)


def test_formula_roundtrip():
    f = NAEFormula(5, ((1, -2, 3), (-4, 5, 1)))
    text = format_formula(f)
    assert text.splitlines()[0] == "p nae3 5 2"
    assert parse_formula(text) == f
    assert parse_formula("c comment\n# another\np nae3 5 2\n1 -2 3\n-4 5 1 0\n") == f


@pytest.mark.parametrize("text", [
    "1 2 3\n",
    "p nae3 3 2\n1 2 3\n",
    "p cnf 3 1\n1 2 3\n",
    "",
])
def test_parse_errors(text):
    with pytest.raises(DomainError):
        parse_formula(text)


def test_parse_bad_clause():
    with pytest.raises(MalformedClause):
        parse_formula("p nae3 4 1\n1 2 3 4\n")


def test_coloring_vector():
    x = coloring_vector([1, -1, 1, 1])
    np.testing.assert_array_equal(x, [0.5, -0.5, 0.5, 0.5])
    with pytest.raises(DomainError):
        coloring_vector([1, 0, 1])


def test_evaluate_instance_checks():
    inst = reduce_nae_e3sat(NAEFormula(3))
    with pytest.raises(DomainError):
        evaluate_instance(inst, np.ones(3))
    with pytest.raises(DomainError):
        evaluate_instance(inst, np.array([1.0, 0.0]))
    assert evaluate_instance(inst.vectors, np.array([0.6, 0.8, 0.0])) == 0.8


@st.composite
def formulas(draw):
    n = draw(st.integers(3, 12))
    k = draw(st.integers(0, 15))
    clauses = []
    for _ in range(k):
        vs = draw(st.permutations(range(1, n + 1)))[:3]
        signs = draw(st.lists(st.sampled_from([1, -1]), min_size=3, max_size=3))
        clauses.append(tuple(s * v for s, v in zip(signs, vs)))
    return NAEFormula(n, tuple(clauses))


@settings(max_examples=100, deadline=None)
@given(formulas(), st.data())
def test_coloring_value_dichotomy(f, data):
    a = np.array(data.draw(st.lists(st.sampled_from([1, -1]), min_size=f.num_vars, max_size=f.num_vars)))
    value = evaluate_instance(reduce_nae_e3sat(f), coloring_vector(a))
    n = f.num_vars
    if f.nae_satisfied(a).all():
        assert abs(value - 1 / math.sqrt(n)) <= 1e-12
    else:
        assert abs(value - math.sqrt(3 / n)) <= 1e-12


def test_solver_on_reduced_instance():
    f = NAEFormula(8, ((1, 2, 3), (4, 5, 6), (6, 7, 8), (-1, 4, 7), (2, -5, 8)))
    inst = reduce_nae_e3sat(f)
    res = solve(inst.vectors, SolverConfig(T=20000))
    # the +-e_i vectors force value >= max |x_i| >= 1/sqrt(n)
    assert 1 / math.sqrt(8) - 1e-12 <= res.value <= res.bound.value + 1e-6
