"""Exception hierarchy.

Data/format problems derive from :class:`DataError`, numerical failures from
:class:`NumericalError`. The CLI maps these to exit codes 3 and 4.
"""


class GSPError(Exception):
    """Base class for all errors raised by this package."""


class DataError(GSPError, ValueError):
    pass


class NumericalError(GSPError, ArithmeticError):
    pass


# graph construction
class NegativeWeight(DataError):
    pass


class SelfLoop(DataError):
    pass


class ConflictingDuplicateEdge(DataError):
    pass


class DuplicateStationId(DataError):
    pass


class IsolatedVertexInNormalized(DataError):
    pass


class FormatError(DataError):
    """Malformed input file (CSV/JSON)."""


# shapes and index sets
class NotSymmetric(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class IndexOutOfRange(DataError):
    pass


class SetMismatch(DataError):
    pass


class EmptyComplement(DataError):
    pass


class SizeOutOfRange(DataError):
    pass


# numerics
class EigensolverFailure(NumericalError):
    pass


class ConditionViolated(NumericalError):
    """The sampling condition ||B D^c||_2 < 1 does not hold."""


class SingularSystem(NumericalError):
    pass


class RankNormDisagreement(NumericalError):
    """Norm and rank forms of the sampling condition disagree."""


class NoValidTrials(NumericalError):
    pass
