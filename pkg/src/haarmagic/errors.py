"""Exception hierarchy shared by all modules.

The CLI maps these onto its exit codes: ConfigurationError -> 2,
CapabilityError -> 3, RunError (and raw OSError) -> 4.
"""


class ConfigurationError(ValueError):
    """Invalid parameters: bad qubit counts, masks, cuts, config values."""


class CapabilityError(RuntimeError):
    """Request exceeds what an exact dense computation can do (e.g. N > 14)."""


class DataError(ValueError):
    """Numeric input violates a contract (non-finite sample, bad spectrum)."""


class RunError(RuntimeError):
    """A campaign failed mid-flight; partial outputs may exist."""
