from typing import Optional


class PeanoBergError(Exception):
    """Base error of the pipeline; carries the failing stage and a hint"""

    exit_code = 1

    def __init__(self, message: str, stage: str = 'pipeline', hint: Optional[str] = None):
        self.stage = stage
        self.hint = hint
        super().__init__(message)

    def __str__(self) -> str:
        text = f"[{self.stage}] {super().__str__()}"
        if self.hint:
            text += f" (hint: {self.hint})"
        return text


class ValidationError(PeanoBergError, ValueError):
    """Bad input or configuration"""

    exit_code = 2


class PreconditionError(PeanoBergError):
    """A mathematical precondition of a stage does not hold"""

    exit_code = 3


class NormalityError(PreconditionError):
    pass


class NotCyclicError(PreconditionError):
    pass


class ResolutionError(PreconditionError):
    """The grid is too coarse to separate the spectrum"""
    pass


class SolverError(PreconditionError):
    pass
