"""Exception hierarchy shared by every cbnet module.

Each class carries the CLI exit code it maps to.
"""

from __future__ import annotations


class CbnetError(Exception):
    exit_code = 1


class StructuralInputError(CbnetError):
    """Malformed graph input: self-loops, bad ids, unparsable lines."""


class PreconditionError(CbnetError):
    """An operation was called outside its documented domain."""


class InfeasibleError(PreconditionError):
    """The requested parameters admit no feasible structure."""


class ModelViolationError(CbnetError):
    """The input contradicts a structural property the analysis relies on."""

    exit_code = 2


class InvariantError(CbnetError):
    """An internal consistency check failed (never silently ignored)."""

    exit_code = 2


class ConstructionError(InvariantError):
    """A built digraph failed its own certification."""


class CapacityError(CbnetError):
    """Exact search requested beyond the size it can handle."""

    exit_code = 3
