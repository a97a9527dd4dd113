"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: guard violations and
resource limits exit 3, parse problems exit 2, self-test mismatches 4.
"""


class TardykitError(Exception):
    """Base class for all package-specific errors."""


class EmptyInstanceError(TardykitError):
    """Raised when a solver entry point receives an instance with no jobs."""


class InfeasibleSelectionError(TardykitError):
    """Raised when an objective is requested for a non-EDF-feasible set."""


class SizeGuardError(TardykitError):
    """Raised when an input exceeds a brute-force or resource guard."""


class MagnitudeError(TardykitError):
    """Raised when convolution values exceed the documented exactness bound."""


class FormatError(TardykitError):
    """Raised on malformed input files or unknown export formats."""
