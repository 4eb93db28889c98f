"""Spherical discrepancy: a deterministic multiplicative-weights solver and its applications."""

from .covering import (
    CoverInstance,
    WitnessReport,
    cap_density_bound,
    certified_density_bound,
    find_uncovered_point,
)
from .errors import (
    BudgetExhausted,
    DimensionTooSmall,
    DomainError,
    MalformedClause,
    NoConvergence,
    NonSymmetric,
    SolverTimeout,
    SphereDiscError,
    StepTooLarge,
    SubspaceExhausted,
    TrivialComplement,
)
from .geometry import (
    Cap,
    Halfspace,
    cap_angle_from_volume,
    cap_volume,
    gaussian_tail,
    gaussian_tail_bounds,
    gaussian_tail_inverse,
    measure_comparison,
)
from .hardness import NAEFormula, evaluate_instance, gap_constant, reduce_nae_e3sat
from .komlos import ColoringProblem, partial_coloring, spherical_komlos
from .linalg import EigenDecomposition, complement_unit_vector, lowest_eigenpairs, sym_eig
from .packing import PackingResult, generate_packing
from .solver import GuaranteeBound, SolverConfig, SolverTrace, default_T, guarantee_bound, solve

__version__ = "0.1.0"

__all__ = [
    "CoverInstance",
    "WitnessReport",
    "cap_density_bound",
    "certified_density_bound",
    "find_uncovered_point",
    "BudgetExhausted",
    "DimensionTooSmall",
    "DomainError",
    "MalformedClause",
    "NoConvergence",
    "NonSymmetric",
    "SolverTimeout",
    "SphereDiscError",
    "StepTooLarge",
    "SubspaceExhausted",
    "TrivialComplement",
    "Cap",
    "Halfspace",
    "cap_angle_from_volume",
    "cap_volume",
    "gaussian_tail",
    "gaussian_tail_bounds",
    "gaussian_tail_inverse",
    "measure_comparison",
    "NAEFormula",
    "evaluate_instance",
    "gap_constant",
    "reduce_nae_e3sat",
    "ColoringProblem",
    "partial_coloring",
    "spherical_komlos",
    "EigenDecomposition",
    "complement_unit_vector",
    "lowest_eigenpairs",
    "sym_eig",
    "PackingResult",
    "generate_packing",
    "GuaranteeBound",
    "SolverConfig",
    "SolverTrace",
    "default_T",
    "guarantee_bound",
    "solve",
]
