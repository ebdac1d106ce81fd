"""Errors raised by the library. Everything derives from FeslError so the CLI can catch them."""


class FeslError(Exception):
    """Base class for every error raised by fesl."""


class InvalidInputError(FeslError, ValueError):
    """An argument is malformed: wrong dimension, non-finite value, label/kind mismatch."""


class StateError(FeslError, RuntimeError):
    """An operation was called in the wrong lifecycle state."""


class SingularSystemError(FeslError, ArithmeticError):
    """The overlap accumulators cannot be solved without regularization."""


class FormatError(FeslError, ValueError):
    """A file could not be parsed."""

    def __init__(self, message, path=None, line=None):
        """Init the error.

        Args:
            message: what went wrong
            path: the file being parsed
            line: 1-based line number of the offending line, if known
        """
        self.path = path
        self.line = line
        location = ''
        if path is not None:
            location = '{!s}'.format(path)
            if line is not None:
                location = '{!s}:{:d}'.format(location, line)
            location += ': '
        super().__init__('{!s}{!s}'.format(location, message))
        self._message = message

    def __reduce__(self):
        return type(self), (self._message, self.path, self.line)


class RunError(FeslError):
    """A module error raised while a method was processing a stream."""

    def __init__(self, round_index, error):
        self.round = round_index
        self.error = error
        super().__init__('round {:d}: {!s}'.format(round_index, error))

    def __reduce__(self):
        return type(self), (self.round, self.error)
