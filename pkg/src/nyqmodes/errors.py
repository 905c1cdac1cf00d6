"""Exception hierarchy.

Config/usage problems are ValueErrors (CLI exit code 2); solver failures are
RuntimeErrors (CLI exit code 3) and always indicate a bug or an invalid operator,
never a silently degraded result.
"""


class NyqmodesError(Exception):
    """Base class for every error raised by this package."""


class GridError(NyqmodesError, ValueError):
    """Invalid grid construction or a coordinate outside the periodic domain."""


class PotentialError(NyqmodesError, ValueError):
    """Invalid potential parameters or a grid-binding mismatch."""


class ConfigError(NyqmodesError, ValueError):
    """Invalid experiment configuration (carries a field-level message)."""


class SolverError(NyqmodesError, RuntimeError):
    """Base class for eigensolver failures."""


class CholeskyError(SolverError):
    """Mass matrix not positive definite — the generalized assembly is invalid."""


class ConvergenceError(SolverError):
    """Implicit-shift iteration exceeded its sweep budget (solver bug, not data)."""


class SelectionError(SolverError):
    """Largest-magnitude and largest-algebraic selection disagree for this operator."""
