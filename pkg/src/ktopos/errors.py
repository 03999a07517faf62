"""Exception hierarchy shared by every module of the package."""


class KtoposError(Exception):
    """Base class for all library errors."""


class CycleError(KtoposError):
    """The reflexive-transitive closure of a relation is not antisymmetric."""


class DuplicateLabelError(KtoposError):
    pass


class UnknownElementError(KtoposError, KeyError):
    pass


class SizeError(KtoposError):
    """An enumeration would exceed its configured bound."""


class NotMonotoneError(KtoposError):
    pass


class NotOpenError(KtoposError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CodomainMismatchError(KtoposError):
    pass


class ParallelPairError(KtoposError):
    pass


class NotUpsetError(KtoposError):
    pass


class NotALatticeError(KtoposError):
    pass


class NotDistributiveError(KtoposError):
    pass


class FormulaSyntaxError(KtoposError, SyntaxError):
    """Raised by the formula parser; ``position`` is a 0-based offset."""

    def __init__(self, message, text="", position=0):
        super().__init__(f"{message} at position {position}")
        self.text = text
        self.position = position


class UnboundVariableError(KtoposError):
    pass


class ResourceError(KtoposError):
    """A proof or countermodel search exceeded its step budget."""


class NotCoverError(KtoposError):
    pass


class SearchExhaustedError(KtoposError):
    pass


class NotRootedError(KtoposError):
    pass


class BaseMismatchError(KtoposError):
    pass


class NotMeetPreservingError(KtoposError):
    pass
