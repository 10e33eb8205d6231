"""Exception and warning types shared across the package."""


class NoonLabError(Exception):
    """Base class for all noonlab errors."""


class TruncationError(NoonLabError):
    """Fock-space cutoff too small for the requested tolerance."""


class TruncationWarning(UserWarning):
    """Truncation deficit exceeded the configured tolerance (non-strict mode)."""


class DegenerateSubspaceError(NoonLabError):
    """Requested photon-number subspace carries no amplitude."""


class ConvergenceError(NoonLabError):
    """Deterministic optimizer exhausted its iteration budget."""


class ConditioningError(NoonLabError):
    """Least-squares design matrix is rank deficient or otherwise unusable."""


class PatternError(NoonLabError):
    """Click pattern incompatible with the detector configuration."""
