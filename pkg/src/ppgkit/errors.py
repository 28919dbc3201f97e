"""Exception hierarchy shared across the toolkit.

DataError covers malformed or out-of-contract inputs (files, shapes,
parameter ranges). AlgorithmError covers inputs that are well-formed but
cannot be processed (too few peaks, untemplateable signals). The CLI maps
these onto distinct exit codes.
"""


class PpgKitError(Exception):
    """Base class for all toolkit errors."""


class DataError(PpgKitError):
    """Malformed input data or out-of-range parameters."""


class AlgorithmError(PpgKitError):
    """Valid input on which the algorithm cannot produce a result."""


class InsufficientPeaksError(AlgorithmError):
    """Fewer than two usable pulse peaks were found."""


class UntemplateableError(AlgorithmError):
    """Signal does not yield enough pulse waves to build a template."""
