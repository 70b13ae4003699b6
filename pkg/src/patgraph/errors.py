"""Exception hierarchy.

Every error raised on bad input derives from :class:`DataError`; the CLI maps
those to exit status 3, ``UsageError`` to 2 and ``OSError`` to 4.
"""


class PatgraphError(Exception):
    """Base class for all library errors."""


class UsageError(PatgraphError):
    pass


class ConfigError(UsageError):
    pass


class DataError(PatgraphError):
    pass


class MalformedIpc(DataError):
    def __init__(self, token, context=None):
        self.token = token
        self.context = context
        msg = f"malformed IPC code {token!r}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class MissingField(DataError):
    def __init__(self, field, context=None):
        self.field = field
        msg = f"missing required field {field!r}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class DuplicateRegistrationId(DataError):
    pass


class EmptyGraph(DataError):
    pass


class NoConnectedPairs(DataError):
    pass


class InsufficientData(DataError):
    pass


class DegenerateDistribution(DataError):
    pass


class NotConverged(DataError):
    def __init__(self, max_iter, last):
        self.max_iter = max_iter
        self.last = last
        super().__init__(f"no convergence after {max_iter} iterations")


class UncoveredNode(DataError):
    pass


class EmptyCorpus(DataError):
    pass


class NonFiniteLoss(DataError):
    pass


class MalformedHeader(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class DuplicateKey(DataError):
    pass


class TooFewPoints(DataError):
    pass


class PerplexityTooLarge(DataError):
    pass


class UnknownKey(DataError):
    pass


class KindMismatch(DataError):
    pass


class ZeroVector(DataError):
    pass
