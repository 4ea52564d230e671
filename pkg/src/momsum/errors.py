"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """A parameter or evaluation point violates a documented precondition."""


class ShapeError(ValueError):
    """Mismatched truncations, variables, or sequence lengths."""


class AccuracyError(RuntimeError):
    """A numeric procedure cannot reach its accuracy contract."""


class SingularDirectionError(RuntimeError):
    """A genuine singularity of the Borel continuation lies on the ray."""

    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole


class DegenerateInputError(ValueError):
    """Input carries no usable signal (e.g. all-zero magnitudes)."""


class ConfigError(ValueError):
    """Invalid experiment configuration."""
