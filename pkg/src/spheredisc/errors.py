"""Exception types shared across the package."""


class SphereDiscError(Exception):
    """Base class for all library errors."""


class DomainError(SphereDiscError, ValueError):
    """An argument lies outside the domain of the operation."""


class NonSymmetric(DomainError):
    """Matrix failed the symmetry check."""


class NoConvergence(SphereDiscError, ArithmeticError):
    """An iterative kernel ran out of its iteration budget."""


class TrivialComplement(SphereDiscError):
    """The spanning set already spans the whole space."""


class DimensionTooSmall(DomainError):
    """The solver needs n >= 6 whenever its main loop runs."""


class StepTooLarge(DomainError):
    """The step size violates the range the potential argument needs."""


class SubspaceExhausted(SphereDiscError, RuntimeError):
    """No admissible step direction was left during a solver iteration."""

    def __init__(self, t: int, heavy: int, n: int):
        super().__init__(f"no admissible direction at step {t} (|I|={heavy}, n={n})")
        self.t = t
        self.heavy = heavy


class SolverTimeout(SphereDiscError, TimeoutError):
    """The solver hit its wall-clock limit before finishing all steps."""

    def __init__(self, t_done: int, T: int, elapsed: float):
        rate = t_done / elapsed if elapsed > 0 else float("inf")
        projected = T / rate if rate > 0 else float("inf")
        super().__init__(
            f"stopped after {t_done}/{T} steps in {elapsed:.1f}s; "
            f"projected full run {projected:.0f}s"
        )
        self.t_done = t_done
        self.T = T
        self.elapsed = elapsed
        self.projected = projected


class BudgetExhausted(SphereDiscError, RuntimeError):
    """No randomized attempt succeeded within the retry budget."""


class MalformedClause(DomainError):
    """A clause does not have three distinct variables."""
