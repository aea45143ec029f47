"""Exception types shared across the package."""


class GeometryError(ValueError):
    """A geometry definition violates an invariant. `field` names the offender."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class GeometryParseError(ValueError):
    """A geometry file could not be parsed into a known schema."""


class SingularPoseError(RuntimeError):
    """A cable length collapsed below the degeneracy threshold at this pose."""

    def __init__(self, kind: str, index: int):
        self.kind = kind  # "driven" or "counterbalance"
        self.index = index  # 1-based cable index
        super().__init__(f"degenerate {kind} cable {index}: length below threshold")


class SingularConfigurationError(RuntimeError):
    """The driven-cable structure matrix is rank deficient at this pose."""


class ConfigurationError(ValueError):
    """An operation was requested that the geometry does not support."""
