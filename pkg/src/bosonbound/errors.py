"""Exception hierarchy shared by all modules."""


class BosonBoundError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(BosonBoundError, ValueError):
    pass


class SizeLimitError(BosonBoundError, ValueError):
    pass


class ContractError(BosonBoundError, ValueError):
    """An input violates a numerical precondition (unitarity, normalization)."""


class ParameterError(BosonBoundError, ValueError):
    pass


class SpecError(BosonBoundError, ValueError):
    """Row/column multiplicities of a submatrix request do not balance."""


class InputStateError(BosonBoundError, ValueError):
    pass


class StructureError(BosonBoundError, ValueError):
    """A network layer contains components acting on overlapping modes."""


class DecompositionError(BosonBoundError, ValueError):
    pass
