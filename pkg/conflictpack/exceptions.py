# Copyright 2024 conflictpack authors.
# See LICENSE file for licensing details.

"""Exceptions used by the conflict packing kernels."""


class ConflictPackError(Exception):
    """Base class of the errors raised by conflictpack.

    Attrs:
        msg (str): Explanation of the error.
    """

    def __init__(self, msg: str):
        """Initialize a new instance of the ConflictPackError exception.

        Args:
            msg (str): Explanation of the error.
        """
        super().__init__(msg)
        self.msg = msg


class InstanceFormatError(ConflictPackError):
    """Exception raised when an instance file is malformed or incomplete.

    Attrs:
        msg (str): Explanation of the error.
        line (int | None): 1-based line number of the offending line, if any.
    """

    def __init__(self, msg: str, line: int | None = None):
        """Initialize a new instance of the InstanceFormatError exception.

        Args:
            msg (str): Explanation of the error.
            line (int | None): 1-based line number of the offending line, if any.
        """
        super().__init__(msg if line is None else f"line {line}: {msg}")
        self.line = line


class InvalidConfigError(ConflictPackError):
    """Exception raised when a run configuration is found to be invalid."""


class OracleLimitError(ConflictPackError):
    """Exception raised when an exact solver is asked for an instance above its size limit."""


class KernelInvariantError(ConflictPackError):
    """Exception raised when a guarantee of the kernelization argument does not hold.

    Reaching it means a bug, never a property of the input.
    """


class PreconditionError(ConflictPackError, ValueError):
    """Exception raised when a caller hands a function an argument it does not accept.

    Covers malformed cores, budgets out of range and instances of the wrong problem.
    """
