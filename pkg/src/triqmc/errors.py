"""Exception types raised by triqmc."""


class TriQMCError(ValueError):
    """Base class for all library errors."""


class DegenerateTriangle(TriQMCError):
    pass


class OutOfRange(TriQMCError):
    pass


class BadDigit(TriQMCError):
    pass


class DepthTooSmall(TriQMCError):
    pass


class NotAdmissible(TriQMCError):
    pass


class EmptySampleSet(TriQMCError):
    pass


class WrongDomain(TriQMCError):
    pass


class MissingExactIntegral(TriQMCError):
    pass
