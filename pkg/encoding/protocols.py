"""
Translation of CMV+ session types into the CMV protocols the encoder's
output follows.

    lin #{l*T.U, ...}   ->  lin #{l$m: lin *[T].[U], ...}
    un  #{l*T.U, ...}   ->  un !C.[U]  (+)   or   un ?C.[U]  (&)

where m is the mangling of the branch and C = lin &{l$m: lin *'[T].end, ...}
is the type of the private channel end c sent over the endpoint. An
unrestricted choice type translates only when all its continuations agree.
"""
from typing import Tuple

from calculi.errors import EncodingError
from calculi.syntax import Polarity, Qualifier, View

from sessiontypes.context import TypingContext
from sessiontypes.relations import type_equiv
from sessiontypes.types import (
    END, BoolType, ChoiceType, ComType, End, MixChoiceType, Rec, TypeVar, UnitType, dualize
)

from .gadgets import mangle


def encode_type(t):
    """
    [T].

    Raises:
        EncodingError: for an unrestricted choice whose continuations differ,
            or a CMV type given as input
    """
    if isinstance(t, (End, UnitType, BoolType, TypeVar)):
        return t
    if isinstance(t, Rec):
        return Rec(t.var, encode_type(t.body))
    if isinstance(t, MixChoiceType):
        if t.qualifier is Qualifier.LIN:
            return ChoiceType(Qualifier.LIN, t.view, _sorted(
                (mangle(b.label, b.polarity, t.view),
                 ComType(Qualifier.LIN, b.polarity, encode_type(b.payload), encode_type(b.cont)))
                for b in t.branches
            ))
        continuation = _common_continuation(t)
        channel, _ = channel_types(t)
        polarity = Polarity.OUT if t.view is View.INTERNAL else Polarity.IN
        return ComType(Qualifier.UN, polarity, channel, encode_type(continuation))
    raise EncodingError(f"cannot translate {t!r}: not a CMV+ type")


def channel_types(t: MixChoiceType) -> Tuple:
    """
    (C, D): the types of c and d in (new c d) for an unrestricted choice type.

    d stays with the internal side and drives the exchange, c travels over
    the endpoint.
    """
    if t.view is View.INTERNAL:
        driver = ChoiceType(Qualifier.LIN, View.INTERNAL, _sorted(
            (mangle(b.label, b.polarity, View.INTERNAL),
             ComType(Qualifier.LIN, b.polarity, encode_type(b.payload), END))
            for b in t.branches
        ))
        return dualize(driver), driver
    travelling = ChoiceType(Qualifier.LIN, View.EXTERNAL, _sorted(
        (mangle(b.label, b.polarity, View.EXTERNAL),
         ComType(Qualifier.LIN, b.polarity, encode_type(b.payload), END))
        for b in t.branches
    ))
    return travelling, dualize(travelling)


def _sorted(branches):
    return tuple(sorted(branches, key=lambda item: item[0]))


def _common_continuation(t: MixChoiceType):
    first = t.branches[0].cont
    for branch in t.branches[1:]:
        if not type_equiv(branch.cont, first):
            raise EncodingError(
                f"unrestricted choice on {branch.label} continues differently; "
                f"only uniform continuations translate"
            )
    return first


def encode_context(context, policy):
    """⟦Γ⟧: every name renamed by the policy and its type translated."""
    return TypingContext((policy(name), encode_type(t)) for name, t in context)
