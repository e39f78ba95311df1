"""Exception hierarchy shared by every layer of the package."""


class CutQueryError(Exception):
    """Base class for all package errors."""


class ParameterError(CutQueryError, ValueError):
    """An argument is outside its valid domain."""


class ModeError(CutQueryError):
    """An oracle operation was requested in the wrong oracle mode."""


class DisjointnessError(CutQueryError, ValueError):
    """Two vertex sets that must be disjoint overlap."""


class CapacityError(CutQueryError):
    """A brute-force routine was asked to exceed its size limit."""


class SimulationIntegrityError(CutQueryError):
    """A privileged shortcut disagreed with the oracle it stands in for.

    This signals a bug in the simulator, never a statistical event.
    """


class RecoveryFailure(CutQueryError):
    """A randomized algorithm hit its failure event.

    Parameters
    ----------
    message : str
        Human readable description.
    report : dict, optional
        Structured details, serialized by the CLI as the failure report.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = dict(report or {})
        self.report.setdefault("event", type(self).__name__)
        self.report.setdefault("message", message)


class DecodingAmbiguity(RecoveryFailure):
    """A sketch signature has two or more sparse preimages."""

    def __init__(self, message, candidates=()):
        self.candidates = [list(map(int, c)) for c in candidates]
        super().__init__(message, {"candidates": self.candidates})


class NonTerminationError(RecoveryFailure):
    """The working supervertex list stopped shrinking."""


class RankError(CutQueryError, ValueError):
    """A matrix expected to have independent columns does not."""


class SolvableError(CutQueryError, ValueError):
    """The target vector lies in the column span, so no certificate exists."""
