"""Exception hierarchy shared by all conhist modules."""


class HistoriesError(Exception):
    """Base class for every error raised by conhist."""


class DimError(HistoriesError, ValueError):
    """Operands have incompatible dimensions."""


class NonFiniteError(HistoriesError, ValueError):
    """A NaN or infinite entry reached a public operation."""


class HermiticityError(HistoriesError, ValueError):
    pass


class ConvergenceError(HistoriesError, RuntimeError):
    pass


class DegenerateStateError(HistoriesError, ValueError):
    """A state vector is too close to zero to define a ray."""


class ProjectorError(HistoriesError, ValueError):
    """Matrix is not a Hermitian idempotent."""


class DecompositionError(HistoriesError, ValueError):
    """Projectors are not mutually orthogonal or do not resolve the identity."""


class UnitVectorError(HistoriesError, ValueError):
    pass


class FormulaDomainError(HistoriesError, ValueError):
    """A closed-form expression is evaluated at one of its singular points."""


class FrameworkError(HistoriesError, ValueError):
    """A history framework violates one of its structural invariants."""


class SizeError(HistoriesError, ValueError):
    pass


class InconsistencyError(HistoriesError):
    """Probabilities were requested for a framework that does not decohere."""


class UndefinedConditional(HistoriesError):
    """Conditioning event has (numerically) zero probability."""


class SharedEventMismatchError(HistoriesError, ValueError):
    pass


class DomainError(HistoriesError, ValueError):
    """Parameter lies outside the admissible interval of a formula."""
