"""Exception hierarchy. Every data/validation failure derives from BenchprioError."""


class BenchprioError(Exception):
    """Base class for all data and validation errors."""


class ParseError(BenchprioError):
    pass


class DuplicateBenchmark(BenchprioError):
    pass


class NegativeChange(BenchprioError):
    pass


class MissingDiff(BenchprioError):
    pass


class PermutationMismatch(BenchprioError):
    pass


class EmptyFront(BenchprioError):
    pass


class DegenerateInput(BenchprioError):
    pass


class ZeroTotalChange(BenchprioError):
    pass


class SuiteTooSmall(BenchprioError):
    pass
