"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""


class PropagationError(RuntimeError):
    """The ODE integrator failed (step underflow, non-finite Hamiltonian, ...)."""
