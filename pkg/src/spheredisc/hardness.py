"""Gadget reduction from Max NAE-E3-SAT to spherical discrepancy.

Each clause C contributes +-(1/sqrt 3) times its signed indicator vector,
each variable contributes +-e_i. For a +-1 coloring x/sqrt(n), a clause
whose literals are not all equal has |<1_C, x>| = 1 and contributes
1/sqrt(3n); a violated clause contributes 3/sqrt(3n) = sqrt(3/n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, MalformedClause
from .solver import max_inner, validate_vectors

Clause = tuple[int, int, int]


@dataclass(frozen=True)
class NAEFormula:
    """Clauses are triples of nonzero signed 1-based variable indices (DIMACS style)."""

    num_vars: int
    clauses: tuple[Clause, ...] = ()
    occurrence_bound: int | None = None

    def __post_init__(self):
        if int(self.num_vars) != self.num_vars or self.num_vars < 1:
            raise DomainError("num_vars must be a positive integer")
        clauses = tuple(tuple(int(l) for l in c) for c in self.clauses)
        counts = np.zeros(self.num_vars + 1, dtype=int)
        for c in clauses:
            if len(c) != 3:
                raise MalformedClause(f"clause {c} does not have exactly 3 literals")
            vars_ = [abs(l) for l in c]
            if 0 in vars_ or max(vars_) > self.num_vars:
                raise MalformedClause(f"clause {c} has a literal outside 1..{self.num_vars}")
            if len(set(vars_)) != 3:
                raise MalformedClause(f"clause {c} repeats a variable")
            counts[vars_] += 1
        if self.occurrence_bound is not None:
            B = self.occurrence_bound
            if counts.max(initial=0) > B:
                raise DomainError(f"a variable occurs {counts.max()} > {B} times")
            if 3 * len(clauses) > B * self.num_vars:
                raise DomainError("clause count exceeds B n / 3")
        object.__setattr__(self, "clauses", clauses)

    @property
    def m(self) -> int:
        return len(self.clauses)

    def nae_satisfied(self, assignment) -> np.ndarray:
        """Per-clause NAE truth for a +-1 assignment (index i-1 for variable i)."""
        a = np.asarray(assignment)
        out = np.empty(self.m, dtype=bool)
        for k, c in enumerate(self.clauses):
            vals = {int(np.sign(l)) * int(a[abs(l) - 1]) for l in c}
            out[k] = len(vals) == 2
        return out


@dataclass
class DiscrepancyInstance:
    """Unit vectors with provenance: ("clause", k, sign) or ("axis", i, sign)."""

    vectors: np.ndarray
    tags: list = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    @property
    def m(self) -> int:
        return self.vectors.shape[0]


def reduce_nae_e3sat(formula: NAEFormula) -> DiscrepancyInstance:
    """Emit +-(1/sqrt 3) * signed indicator per clause, then +-e_i per variable."""
    n = formula.num_vars
    rows = []
    tags = []
    s = 1.0 / math.sqrt(3.0)
    for k, c in enumerate(formula.clauses):
        ind = np.zeros(n)
        for l in c:
            ind[abs(l) - 1] = s if l > 0 else -s
        rows.append(ind)
        rows.append(-ind)
        tags.append(("clause", k, 1))
        tags.append(("clause", k, -1))
    eye = np.eye(n)
    for i in range(n):
        rows.append(eye[i])
        rows.append(-eye[i])
        tags.append(("axis", i, 1))
        tags.append(("axis", i, -1))
    return DiscrepancyInstance(np.array(rows), tags)


def evaluate_instance(instance, x) -> float:
    """max_i <v_i, x> for a unit x (same routine the solver uses for its value)."""
    V = instance.vectors if isinstance(instance, DiscrepancyInstance) else np.asarray(instance, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or V.ndim != 2 or x.size != V.shape[1]:
        raise DomainError(f"dimension mismatch: x has {x.size} entries, vectors have {V.shape[-1]}")
    if abs(np.linalg.norm(x) - 1.0) > 1e-9:
        raise DomainError("x must be a unit vector")
    return max_inner(V, x)


def coloring_vector(assignment) -> np.ndarray:
    """Normalized +-1 coloring x / sqrt(n)."""
    a = np.asarray(assignment, dtype=float)
    if not np.all(np.abs(a) == 1.0):
        raise DomainError("assignment entries must be +-1")
    return a / math.sqrt(a.size)


def gap_constant(B: int, gamma: float) -> float:
    """min(sqrt((B - (9/16)(1-gamma)) / (B - (1-gamma))), 3 sqrt(3) / 4).

    For B >= 3 the first term never exceeds 3 sqrt(3)/4, so it is the value.
    """
    if int(B) != B or B < 3:
        raise DomainError("B must be an integer >= 3")
    if not (0.0 < gamma < 1.0):
        raise DomainError("gamma must lie in (0, 1)")
    g = 1.0 - gamma
    return min(math.sqrt((B - 9.0 / 16.0 * g) / (B - g)), 3.0 * math.sqrt(3.0) / 4.0)


# --------------------------------------------------------------------------
# formula files
# --------------------------------------------------------------------------


def parse_formula(text: str) -> NAEFormula:
    """Parse "p nae3 <n> <m>" followed by clauses of three signed integers (optional trailing 0)."""
    n = m = None
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "c#":
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "nae3":
                raise DomainError(f"line {lineno}: expected 'p nae3 <n> <m>'")
            n, m = int(parts[2]), int(parts[3])
            continue
        if n is None:
            raise DomainError(f"line {lineno}: clause before header")
        lits = [int(p) for p in parts]
        if lits and lits[-1] == 0:
            lits = lits[:-1]
        if len(lits) != 3:
            raise MalformedClause(f"line {lineno}: expected three literals")
        clauses.append(tuple(lits))
    if n is None:
        raise DomainError("missing 'p nae3' header")
    if m != len(clauses):
        raise DomainError(f"header announces {m} clauses, found {len(clauses)}")
    return NAEFormula(n, tuple(clauses))


def format_formula(formula: NAEFormula) -> str:
    lines = [f"p nae3 {formula.num_vars} {formula.m}"]
    lines += [" ".join(str(l) for l in c) + " 0" for c in formula.clauses]
    return "\n".join(lines) + "\n"


def check_instance(instance: DiscrepancyInstance) -> None:
    validate_vectors(instance.vectors)
