"""Exception types shared across the package.

The CLI maps these onto exit codes: validation problems (bad parameters,
mismatched offsets, out-of-range queries) exit with 2, numeric failures
(uncertifiable tails, schedule blow-ups) exit with 3.
"""


class ShiftDynError(Exception):
    """Base class for all package errors."""


class ValidationError(ShiftDynError, ValueError):
    """A precondition or invariant on inputs was violated."""


class OverflowNotRepresentable(ShiftDynError):
    """A log-domain value cannot be materialized as a native float."""


class IndexBelowOffset(ValidationError):
    """A weight or basis index below the sequence's valid range."""


class TableRangeError(ValidationError):
    """A table-backed weight sequence was queried outside the table."""


class OffsetMismatch(ValidationError):
    """Two vectors/operators with different base offsets were combined."""


class TailNotCertifiable(ShiftDynError):
    """A truncated series tail could not be bounded within the hard cap."""


class QTooSmall(ValidationError):
    """Periodicity order too small for the target's support."""


class ScheduleOverflow(ShiftDynError):
    """A hypercyclic schedule exceeded the iteration cap."""
