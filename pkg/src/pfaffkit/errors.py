"""Error taxonomy shared by the library and the command line driver.

Each class maps to one process exit code so scripted callers can tell
bad input (1), violated mathematical preconditions (2) and failed
internal cross-checks (3) apart without parsing messages.
"""

from __future__ import annotations


class PfaffkitError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InputError(PfaffkitError):
    """Malformed or inconsistent input: parse errors, degree mismatches,
    non-homogeneous data, out-of-range indices."""

    exit_code = 1


class PreconditionError(PfaffkitError):
    """Input is well-formed but violates a documented precondition of the
    requested operation (e.g. a non-integrable generator set handed to a
    tangent-space computation)."""

    exit_code = 2


class OracleMismatch(PfaffkitError):
    """An internal cross-check failed.  Always a bug or a misused
    surrogate, never a property of valid input."""

    exit_code = 3
