"""Exception hierarchy shared by all boolsynth modules."""

from typing import Any, Optional


class BoolSynthError(Exception):
    """Base class for every error raised by boolsynth."""


class InvalidTransitionSystemError(BoolSynthError):
    def __init__(self, report: Any):
        self.report = report
        super().__init__(f"Invalid transition system: {report.summary()}")


class IsomorphismError(BoolSynthError):
    """A state/interaction mapping does not preserve the type's transitions."""


class ReachabilityCapExceeded(BoolSynthError):
    def __init__(self, cap: int, reached: int):
        self.cap = cap
        self.reached = reached
        super().__init__(f"Reachability graph exceeds cap of {cap} markings (reached {reached})")


class UnknownTransitionError(BoolSynthError):
    pass


class InadmissibleRegionSetError(BoolSynthError):
    def __init__(self, message: str, atom: Optional[Any] = None):
        self.atom = atom
        super().__init__(message)


class UnsupportedInputError(BoolSynthError):
    """Input outside the preconditions of a specialized decider."""


class InvalidInstanceError(BoolSynthError):
    def __init__(self, message: str, clause: Optional[int] = None):
        self.clause = clause
        super().__init__(message if clause is None else f"clause {clause}: {message}")


class OracleLimitError(BoolSynthError):
    pass


class GadgetError(BoolSynthError):
    pass


class NotAModelError(BoolSynthError):
    pass


class FormatError(BoolSynthError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")
