"""Exception hierarchy shared by every module."""


class CurveInterpError(Exception):
    """Base class for all library errors."""


class InvalidInput(CurveInterpError, ValueError):
    """Input violates a documented precondition (CLI exit code 2)."""


class FieldTooSmall(CurveInterpError, ValueError):
    """The working field cannot host the requested number of distinct points."""


class ResamplingExhausted(CurveInterpError, RuntimeError):
    """A rejection-sampling loop ran out of its retry budget."""


class GluingError(CurveInterpError, ValueError):
    """Node data is inconsistent: images disagree or the dual graph is disconnected."""


class SolverFailure(CurveInterpError, RuntimeError):
    """The incidence solver could not produce a valid witness."""
