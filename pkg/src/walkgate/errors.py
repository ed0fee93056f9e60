"""Exception types shared across the library.

Two failure families are distinguished so that callers (and the CLI exit
codes) can tell malformed input apart from a request that is well formed
but mathematically unsatisfiable.
"""


class WalkgateError(Exception):
    """Base class for all library errors."""


class InputError(WalkgateError, ValueError):
    """Malformed or inconsistent input: bad shapes, indices, ranges, parses."""


class DomainError(WalkgateError, ArithmeticError):
    """Well-formed request with no valid answer: infeasible targets,
    out-of-range interpolation, a unitary that hosts no CNOT encoding,
    phases of near-zero amplitudes."""
