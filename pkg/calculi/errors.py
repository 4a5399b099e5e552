"""
Exception hierarchy shared by every workbench package.

The CLI maps these onto exit codes: input problems (parse, reserved names,
malformed renamings) exit with 2, violated properties with 1.
"""
from typing import Optional, Sequence, Tuple


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


class ParseError(WorkbenchError):
    """Raised when surface text does not belong to the grammar."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class ReservedNameError(ParseError):
    """Raised when a session-calculus source uses one of the encoder's reserved names."""


class DuplicateLabelError(ParseError):
    """Raised for repeated labels in a branching or repeated label/polarity pairs in a choice type."""


class SubstitutionError(WorkbenchError):
    """Raised when a non-name value would land in a channel position."""


class CanonicalFormError(WorkbenchError):
    """Raised when a level is too symmetric for the canonical-form search to finish."""


class EvaluationError(WorkbenchError):
    """Raised when an expression with free variables is evaluated."""


class NotASessionTypeError(WorkbenchError):
    """Raised when duality is asked of a payload type such as bool or unit."""


class TypeCheckError(WorkbenchError):
    """
    A rejected typing judgement.

    Carries the rule that failed, the occurrence path of the offending
    subterm and the names or labels involved so reports can point at them.
    """

    def __init__(
        self,
        rule: str,
        message: str,
        path: Tuple[int, ...] = (),
        names: Sequence[str] = ()
    ):
        self.rule = rule
        self.path = tuple(path)
        self.names = tuple(names)
        super().__init__(f"{rule}: {message}")

    def to_dict(self):
        return {
            'rule': self.rule,
            'message': str(self),
            'path': list(self.path),
            'names': list(self.names),
        }


class EncodingError(WorkbenchError):
    """Raised when a derivation does not fit any case of the encoding."""


class DifferentOriginError(WorkbenchError):
    """Raised when steps or executions from different states are compared."""


class PreconditionError(WorkbenchError):
    """Raised when an analysis is invoked outside the situation it is defined for."""
