"""Exception and warning types shared across the package."""


class RoundDistError(Exception):
    """Base class for analysis errors."""


class SingularDivisionError(RoundDistError):
    """Division by a random variable whose support touches zero."""


class FeasibilityError(RoundDistError):
    """The requested exact computation would enumerate too many representables."""


class UnboundVariableError(RoundDistError):
    """A term variable has no distribution bound in the probabilistic context."""


class UnsupportedSemanticsError(RoundDistError):
    """Parsed construct whose semantics are outside the implemented fragment."""


class TermShapeError(RoundDistError):
    """A term repeats a variable, so its sub-results are not independent."""


class SpecError(RoundDistError):
    """An analysis specification file is malformed."""


class PieceCapWarning(UserWarning):
    """A piecewise density hit its piece-count cap before reaching tolerance."""
