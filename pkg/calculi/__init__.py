from .errors import (
    WorkbenchError,
    ParseError,
    ReservedNameError,
    DuplicateLabelError,
    SubstitutionError,
    CanonicalFormError,
    EvaluationError,
    NotASessionTypeError,
    TypeCheckError,
    EncodingError,
    DifferentOriginError,
    PreconditionError
)
from .names import Name, NameKind, NameSupply, make_name, fresh_name
from .syntax import Calculus, Qualifier, Polarity, View, Label

__all__ = [
    'WorkbenchError',
    'ParseError',
    'ReservedNameError',
    'DuplicateLabelError',
    'SubstitutionError',
    'CanonicalFormError',
    'EvaluationError',
    'NotASessionTypeError',
    'TypeCheckError',
    'EncodingError',
    'DifferentOriginError',
    'PreconditionError',
    'Name',
    'NameKind',
    'NameSupply',
    'make_name',
    'fresh_name',
    'Calculus',
    'Qualifier',
    'Polarity',
    'View',
    'Label'
]
