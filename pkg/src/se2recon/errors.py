"""Exception hierarchy shared by all modules."""


class SE2Error(Exception):
    """Base class for errors raised by se2recon."""


class DimensionError(SE2Error, ValueError):
    """Array shapes do not fit together (grid size, angle count)."""


class ContractError(SE2Error, ValueError):
    """An operation was called with input violating its precondition."""


class FormatError(SE2Error, ValueError):
    """A file could not be decoded."""


class SizeGuardError(SE2Error, ValueError):
    """A dense oracle computation was requested above the size limit."""


class NumericalError(SE2Error, ArithmeticError):
    """Base class for numerical failures."""


class IllConditionedError(NumericalError):
    """The Calderon lower bound vanishes numerically on the band."""


class NotSolvableError(NumericalError):
    """The sampled system has no unique solution."""


class DivergenceError(NumericalError):
    """Non-finite values appeared during the iteration."""
