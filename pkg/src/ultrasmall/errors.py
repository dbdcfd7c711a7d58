"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: parameter/input problems exit 2,
file problems exit 3, internal consistency failures exit 4.
"""


class ParameterError(ValueError):
    """A parameter violates its documented range or constraint."""


class InputError(ValueError):
    """Structurally invalid input data (bad endpoint, repeated path vertex, ...)."""


class GraphFileError(Exception):
    """A graph file is missing, truncated, or has a bad magic/version."""


class ConsistencyError(RuntimeError):
    """An internal self-check failed (dominance violation, certification failure)."""
