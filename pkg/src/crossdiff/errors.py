"""Exception types shared across the package."""


class CrossDiffError(Exception):
    """Base class for all crossdiff errors."""


class PositiveDefinitenessViolation(CrossDiffError):
    """The 2x2 diffusion matrix fails the positive-definiteness conditions."""


class ZeroCouplingError(CrossDiffError):
    """Edge detection requested but the coupling entry d21 is zero."""


class DegenerateResidual(CrossDiffError):
    """Reference and test signals match exactly; a ratio metric is undefined."""


class MalformedFile(CrossDiffError):
    """A signal or image file violates its format."""


class IoFailure(CrossDiffError):
    """An underlying file operation failed."""


class Requires2D(CrossDiffError):
    """The operation is defined for two-dimensional fields only."""


class UnknownKind(CrossDiffError):
    """Unrecognized test-pattern name."""


class UsageError(CrossDiffError):
    """Invalid command-line arguments or run configuration."""
