"""
Coinductive relations on session types: equivalence, duality and subtyping.

Each check walks both types in lock step, unfolding recursion on either
side, and records every pair it visits. Meeting a recorded pair again
succeeds, which yields the greatest fixpoint. All three rule systems are
conjunctive, so one shared assumption set per top-level query is sound;
on contractive types the set is bounded by the product of the two
subterm closures, which makes every query terminate.
"""
import logging
from typing import Set, Tuple

from calculi.syntax import Polarity, View

from .types import (
    BoolType, ChoiceType, ComType, End, MixChoiceType, Rec, TypeVar, UnitType, unfold
)

logger = logging.getLogger('Workbench.Types')

_BASE = (End, UnitType, BoolType)


def type_equiv(t, u) -> bool:
    """
    T ≃ U.

    Example:
        rec t. un +{l!bool.t}  ≃  un +{l!bool.rec t. un +{l!bool.t}}
    """
    return _equiv(t, u, set())


def _equiv(t, u, seen: Set[Tuple]) -> bool:
    if (t, u) in seen:
        return True
    seen.add((t, u))
    if isinstance(t, Rec) or isinstance(u, Rec):
        return _equiv(unfold(t), unfold(u), seen)
    if isinstance(t, _BASE) or isinstance(u, _BASE):
        return type(t) is type(u)
    if isinstance(t, TypeVar) or isinstance(u, TypeVar):
        return t == u
    if isinstance(t, MixChoiceType) and isinstance(u, MixChoiceType):
        if t.qualifier is not u.qualifier or t.view is not u.view:
            return False
        if {b.key for b in t.branches} != {b.key for b in u.branches}:
            return False
        for branch in t.branches:
            other = u.lookup(branch.label, branch.polarity)
            if not (_equiv(branch.payload, other.payload, seen) and _equiv(branch.cont, other.cont, seen)):
                return False
        return True
    if isinstance(t, ComType) and isinstance(u, ComType):
        return (t.qualifier is u.qualifier and t.polarity is u.polarity
                and _equiv(t.payload, u.payload, seen) and _equiv(t.cont, u.cont, seen))
    if isinstance(t, ChoiceType) and isinstance(u, ChoiceType):
        if t.qualifier is not u.qualifier or t.view is not u.view:
            return False
        if {label for label, _ in t.branches} != {label for label, _ in u.branches}:
            return False
        return all(_equiv(cont, u.lookup(label), seen) for label, cont in t.branches)
    return False


def dual(t, u) -> bool:
    """
    ⊥(T, U): views and polarities flip, payloads are equivalent, continuations dual.

    Example:
        un +{l!bool.end, l?bool.end} and un &{l?bool.end, l!bool.end} are dual
    """
    return _dual(t, u, set())


def _dual(t, u, seen: Set[Tuple]) -> bool:
    if (t, u) in seen:
        return True
    seen.add((t, u))
    if isinstance(t, Rec) or isinstance(u, Rec):
        return _dual(unfold(t), unfold(u), seen)
    if isinstance(t, End) and isinstance(u, End):
        return True
    if isinstance(t, TypeVar) and isinstance(u, TypeVar):
        return t == u
    if isinstance(t, MixChoiceType) and isinstance(u, MixChoiceType):
        if t.qualifier is not u.qualifier or u.view is not t.view.flip():
            return False
        if {(b.label, b.polarity.flip()) for b in t.branches} != {b.key for b in u.branches}:
            return False
        for branch in t.branches:
            other = u.lookup(branch.label, branch.polarity.flip())
            if not (type_equiv(branch.payload, other.payload) and _dual(branch.cont, other.cont, seen)):
                return False
        return True
    if isinstance(t, ComType) and isinstance(u, ComType):
        return (t.qualifier is u.qualifier and u.polarity is t.polarity.flip()
                and type_equiv(t.payload, u.payload) and _dual(t.cont, u.cont, seen))
    if isinstance(t, ChoiceType) and isinstance(u, ChoiceType):
        if t.qualifier is not u.qualifier or u.view is not t.view.flip():
            return False
        if {label for label, _ in t.branches} != {label for label, _ in u.branches}:
            return False
        return all(_dual(cont, u.lookup(label), seen) for label, cont in t.branches)
    return False


def subtype(t, u) -> bool:
    """
    T <: U.

    Internal choices may drop branches in the supertype, external choices may
    add them; output payloads are contravariant, input payloads covariant.

    Example:
        lin +{l!bool.end, m!bool.end} <: lin +{l!bool.end}
    """
    return _sub(t, u, set())


def _payload(polarity: Polarity, t, u, seen) -> bool:
    if polarity is Polarity.OUT:
        return _sub(u, t, seen)
    return _sub(t, u, seen)


def _covered(view: View, sub_keys, super_keys) -> bool:
    if view is View.INTERNAL:
        return super_keys <= sub_keys
    return sub_keys <= super_keys


def _sub(t, u, seen: Set[Tuple]) -> bool:
    if (t, u) in seen:
        return True
    seen.add((t, u))
    if isinstance(t, Rec) or isinstance(u, Rec):
        return _sub(unfold(t), unfold(u), seen)
    if isinstance(t, _BASE) or isinstance(u, _BASE):
        return type(t) is type(u)
    if isinstance(t, TypeVar) or isinstance(u, TypeVar):
        return t == u
    if isinstance(t, MixChoiceType) and isinstance(u, MixChoiceType):
        if t.qualifier is not u.qualifier or t.view is not u.view:
            return False
        t_keys = {b.key for b in t.branches}
        u_keys = {b.key for b in u.branches}
        if not _covered(t.view, t_keys, u_keys):
            return False
        for key in t_keys & u_keys:
            left, right = t.lookup(*key), u.lookup(*key)
            if not (_payload(key[1], left.payload, right.payload, seen) and _sub(left.cont, right.cont, seen)):
                return False
        return True
    if isinstance(t, ComType) and isinstance(u, ComType):
        return (t.qualifier is u.qualifier and t.polarity is u.polarity
                and _payload(t.polarity, t.payload, u.payload, seen) and _sub(t.cont, u.cont, seen))
    if isinstance(t, ChoiceType) and isinstance(u, ChoiceType):
        if t.qualifier is not u.qualifier or t.view is not u.view:
            return False
        t_labels = {label for label, _ in t.branches}
        u_labels = {label for label, _ in u.branches}
        if not _covered(t.view, t_labels, u_labels):
            return False
        return all(_sub(t.lookup(label), u.lookup(label), seen) for label in t_labels & u_labels)
    return False
