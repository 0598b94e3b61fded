"""Exception hierarchy shared by every dgdual module."""


class DgdualError(Exception):
    """Base class for all errors raised by dgdual."""


class MalformedInput(DgdualError, ValueError):
    """Input text does not follow the matrix or trace file format."""


class IndexOutOfRange(DgdualError, IndexError):
    pass


class OrderTooSmall(DgdualError, ValueError):
    pass


class NotARelation(DgdualError, ValueError):
    """The requested cell holds 0, so there is no relation to subdivide."""


class BoundExceeded(DgdualError, RuntimeError):
    """A normalization loop used more subdivisions than the proven bound."""


class NotQuasicanonical(DgdualError, ValueError):
    pass


class InconsistentBlocks(DgdualError, RuntimeError):
    pass


class LabelMismatch(DgdualError, ValueError):
    pass


class TraceMismatch(DgdualError, ValueError):
    pass


class NotContractible(DgdualError, ValueError):
    pass


class WouldMergeParallel(DgdualError, ValueError):
    """Contraction would overwrite an existing relation and drop the cyclomatic number."""


class WouldCreateLoop(DgdualError, ValueError):
    pass


class InvalidPartial(DgdualError, ValueError):
    pass


class TooLarge(DgdualError, ValueError):
    """Input order exceeds the cap of an exhaustive oracle."""
