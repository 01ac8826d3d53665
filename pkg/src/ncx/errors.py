"""Exception types raised by the engine."""


class NCXError(Exception):
    """Base class for engine errors."""


class RingError(NCXError, ValueError):
    pass


class ContainmentViolation(NCXError):
    """A denominator is not contained in the numerator of a subquotient."""


class NotSolvable(NCXError):
    pass


class NotExactInput(NCXError):
    """A sequence that was promised to be short exact is not."""


class NonPrimitiveQ(NCXError):
    """The designated q is not a primitive N-th root of unity."""


class NotPID(NCXError):
    pass


class Unclassified(NCXError):
    """A direct or inverse system did not match any recognised pattern."""

    def __init__(self, message, dump=None):
        super().__init__(message)
        self.dump = dump


class InconsistentTransitions(NCXError):
    pass


class OutOfCatalogue(NCXError):
    pass


class ParseError(NCXError):
    def __init__(self, message, line=None, column=None):
        loc = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(message + loc)
        self.line = line
        self.column = column


class SchemaError(NCXError):
    def __init__(self, field, message=None):
        super().__init__(message or f"invalid or missing field {field!r}")
        self.field = field
