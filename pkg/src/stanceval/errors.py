"""Exception hierarchy shared across the toolkit.

Each class carries the process exit code the CLI maps it to:
2 = unusable input file, 3 = empty or misaligned data, 4 = bad configuration.
"""

from __future__ import annotations


class StancevalError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class ParseError(StancevalError):
    """A label file is malformed and cannot be read."""

    exit_code = 2


class DuplicateIdError(ParseError):
    """The same instance id occurs more than once in one file."""


class AlignmentError(StancevalError):
    """Gold and prediction id sets cannot be paired as requested."""

    exit_code = 3


class EmptyEvaluationError(AlignmentError):
    """Every candidate system was dropped; nothing is left to score."""


class DegenerateInputError(StancevalError):
    """Input is empty where at least one instance is required."""

    exit_code = 3


class AbsentClassError(StancevalError):
    """A schema class has no gold instances (raised in strict mode only)."""

    exit_code = 3


class SchemaError(StancevalError):
    """A label or class name does not belong to the schema in use."""

    exit_code = 4


class ConfigurationError(StancevalError):
    """Weights, formats, or other run configuration are invalid."""

    exit_code = 4
