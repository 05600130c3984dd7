"""Exception hierarchy shared by every module."""


class LdimError(Exception):
    """Base class; the CLI maps any subclass to exit code 1."""


class ParseError(LdimError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CycleError(LdimError):
    pass


class RangeError(LdimError):
    pass


class EmptySummandError(LdimError):
    pass


class DuplicateElementError(LdimError):
    pass


class InvalidListError(LdimError):
    pass


class ParameterError(LdimError):
    pass


class DegreeError(LdimError):
    pass


class NotARealiserError(LdimError):
    pass


class TrivialListError(LdimError):
    pass


class EmptyRealiserError(LdimError):
    pass


class GrammarError(LdimError):
    pass


class HeaderRangeError(LdimError):
    pass


class NotADistributionError(LdimError):
    pass


class NotTwoLevelError(LdimError):
    pass


class Exceeded(LdimError):
    """A search hit its node/time/d budget before deciding.

    ``lower_bound`` is the largest value proven to be a lower bound so far.
    """

    def __init__(self, lower_bound, reason="budget"):
        self.lower_bound = lower_bound
        self.reason = reason
        super().__init__(f"exceeded ({reason}) lower_bound={lower_bound}")
