"""Exception hierarchy shared by every l0lab module."""


class L0Error(ValueError):
    """Base class for all l0lab errors."""


class NonPositiveProb(L0Error):
    pass


class ProbSumNotOne(L0Error):
    pass


class InvalidAtomIndex(L0Error):
    pass


class SpaceMismatch(L0Error):
    pass


class UndefinedExtendedArith(L0Error):
    """Raised for (+inf) + (-inf) and similar indeterminate forms."""


class NotRepresentable(L0Error):
    """The result would not be an eventually-constant random variable."""


class PartitionMismatch(L0Error):
    pass


class EngineUnsupported(L0Error):
    pass


class NotAbsorbedHere(L0Error):
    pass


class PrerequisiteFailed(L0Error):
    pass


class DescriptorError(L0Error):
    """A CLI descriptor string could not be parsed."""
