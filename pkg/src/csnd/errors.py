"""Exception hierarchy shared by every module."""


class CSNDError(Exception):
    """Base class for all library errors."""


class InvariantViolation(CSNDError, ValueError):
    """Input breaks a structural invariant (asymmetric matrix, duplicate labels, ...)."""


class DegenerateInput(CSNDError, ValueError):
    pass


class LabelError(CSNDError, KeyError):
    """Unknown label, or a label clash when gluing two labeled objects."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class HypothesisNotMet(CSNDError):
    """An operation was called on input outside its mathematical hypothesis.

    ``hypothesis`` names the failed condition (e.g. ``"cnd"``, ``"schoenberg"``)
    so that callers such as the CLI can report a machine-readable reason.
    """

    def __init__(self, hypothesis: str, message: str | None = None):
        self.hypothesis = hypothesis
        super().__init__(message or f"hypothesis not met: {hypothesis}")


class NumericalInconsistency(CSNDError, ArithmeticError):
    pass


class ConnectivityError(CSNDError, ValueError):
    def __init__(self, u: str, v: str):
        self.u, self.v = u, v
        super().__init__(f"graph is disconnected: no path from {u!r} to {v!r}")


class NumericalIdentificationError(CSNDError, ArithmeticError):
    """Two group elements could not be told apart reliably from floating matrices."""


class PresentationError(CSNDError, ValueError):
    pass
