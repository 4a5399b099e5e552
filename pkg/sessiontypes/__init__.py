from .types import (
    End,
    UnitType,
    BoolType,
    TypeVar,
    Rec,
    MixBranchType,
    MixChoiceType,
    ComType,
    ChoiceType,
    END,
    UNIT_TYPE,
    BOOL_TYPE,
    dualize,
    un_pred
)
from .relations import type_equiv, dual, subtype
from .context import TypingContext, un_ctx, ctx_split, ctx_add, is_split
from .derivation import Judgement, ContextSplit, ContextAdd, Derivation, validate
from .checker import MixChecker, CmvChecker, typecheck_cmvplus, typecheck_cmv, is_typable

__all__ = [
    'End',
    'UnitType',
    'BoolType',
    'TypeVar',
    'Rec',
    'MixBranchType',
    'MixChoiceType',
    'ComType',
    'ChoiceType',
    'END',
    'UNIT_TYPE',
    'BOOL_TYPE',
    'dualize',
    'un_pred',
    'type_equiv',
    'dual',
    'subtype',
    'TypingContext',
    'un_ctx',
    'ctx_split',
    'ctx_add',
    'is_split',
    'Judgement',
    'ContextSplit',
    'ContextAdd',
    'Derivation',
    'validate',
    'MixChecker',
    'CmvChecker',
    'typecheck_cmvplus',
    'typecheck_cmv',
    'is_typable'
]
