"""Error types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the domain an operation is defined on."""


class CapacityError(RuntimeError):
    """A request exceeds a configured resource cap (qubits, enumeration work)."""
