"""Exception hierarchy and the exit-code contract used by the CLI.

Exit codes: 0 analysis completed (any verdict), 2 input error,
3 size or enumeration limit, 4 internal inconsistency.
"""


class EntrankError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InputError(EntrankError, ValueError):
    """Invalid user input: files, parameters, malformed states."""

    exit_code = 2


class ShapeError(InputError):
    """Matrix or vector dimensions incompatible with the operation."""


class SymmetryError(InputError):
    """Matrix is not Hermitian within tolerance."""


class NormalizationError(InputError):
    """State vector norm, trace, or mixture weights off by more than tolerance."""


class PartitionError(InputError):
    """Subsystem sets out of range, overlapping, or not covering all particles."""


class StateFileError(InputError):
    """State file unreadable or structurally invalid."""


class SizeLimitError(EntrankError, ValueError):
    """Joint dimension exceeds the configured maximum."""

    exit_code = 3


class EnumerationLimitError(SizeLimitError):
    """Subset enumeration exceeds the configured cap."""


class InternalInconsistencyError(EntrankError, RuntimeError):
    """A runtime self-check failed; results cannot be trusted."""

    exit_code = 4
