"""Exception types shared across the toolkit."""


class VirialNlsError(Exception):
    """Base class for all toolkit errors."""


class GridError(VirialNlsError):
    """Invalid grid construction or mismatched field/grid pairing."""


class DomainEscapeError(VirialNlsError):
    """Significant mass reached the edge of the computational domain."""


class CutoffConstraintError(VirialNlsError):
    """A cutoff profile violates one of its certified constraints."""

    def __init__(self, constraint: str, margin: float, location: float):
        self.constraint = constraint
        self.margin = margin
        self.location = location
        super().__init__(
            f"cutoff constraint '{constraint}' violated (margin {margin:.3e} "
            f"at r = {location:.6g})"
        )


class GroundStateError(VirialNlsError):
    """Ground-state solver failure (non-convergence, collapse to zero, bad range)."""


class BoostError(VirialNlsError):
    """Galilean boost requested with a velocity off the wavenumber lattice."""


class ConfigError(VirialNlsError):
    """Scenario configuration failed validation."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"config field '{field}': {message}")
