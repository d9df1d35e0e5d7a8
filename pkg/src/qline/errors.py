"""Exception and warning types shared across the package."""


class QlineError(Exception):
    """Base class for all qline errors."""


class FieldError(QlineError, ValueError):
    """A sampled field violates its invariants (non-finite values, zero norm, ...)."""


class GridMismatchError(QlineError, ValueError):
    """Two fields that must share a grid do not."""


class DomainError(QlineError, ValueError):
    """An argument is outside the physically meaningful domain."""


class ConfigError(QlineError, ValueError):
    """A scenario configuration is malformed.

    ``issues`` is a list of (path, expected, got) triples, one per offending
    field, so callers can report every problem at once.
    """

    def __init__(self, issues):
        self.issues = list(issues)
        lines = [f"  {path}: expected {expected}, got {got!r}"
                 for path, expected, got in self.issues]
        super().__init__("invalid scenario configuration:\n" + "\n".join(lines))


class NumericalError(QlineError, RuntimeError):
    """A solver failed or left its validity envelope (instability, norm drift, ...)."""


class AccuracyWarning(UserWarning):
    """The requested computation is likely under-resolved on the given grid."""


class ValidityWarning(UserWarning):
    """Inputs stray outside the weak-perturbation regime the model assumes."""
