"""
Session types of CMV+ and CMV.

Core Concepts:
- CMV+ types: mixed choice types q#{l*T.U, ...} where # is a view and * a polarity
- CMV types: communication q*T.U and plain choice q#{l:T, ...}
- shared: end, unit, bool, recursion rec t.T and type variables

Types are frozen dataclasses so they can label restrictions inside hashable
process terms. Structural helpers (unfolding, substitution, contractivity,
duality of the session structure) live here; the coinductive relations
live in ``relations``.
"""
from dataclasses import dataclass
from typing import Any, FrozenSet, Tuple

from calculi.errors import NotASessionTypeError
from calculi.syntax import Label, Polarity, Qualifier, View


class _Dualizable:
    """``t.dual()`` is ``dualize(t)``."""

    def dual(self):
        return dualize(self)


@dataclass(frozen=True)
class End(_Dualizable):
    pass


@dataclass(frozen=True)
class UnitType(_Dualizable):
    pass


@dataclass(frozen=True)
class BoolType(_Dualizable):
    pass


@dataclass(frozen=True)
class TypeVar(_Dualizable):
    name: str


@dataclass(frozen=True)
class Rec(_Dualizable):
    var: str
    body: Any


@dataclass(frozen=True)
class MixBranchType:
    label: Label
    polarity: Polarity
    payload: Any
    cont: Any

    @property
    def key(self) -> Tuple[Label, Polarity]:
        return (self.label, self.polarity)


@dataclass(frozen=True)
class MixChoiceType(_Dualizable):
    qualifier: Qualifier
    view: View
    branches: Tuple[MixBranchType, ...]

    def lookup(self, label: Label, polarity: Polarity):
        for branch in self.branches:
            if branch.label == label and branch.polarity is polarity:
                return branch
        return None


@dataclass(frozen=True)
class ComType(_Dualizable):
    qualifier: Qualifier
    polarity: Polarity
    payload: Any
    cont: Any


@dataclass(frozen=True)
class ChoiceType(_Dualizable):
    qualifier: Qualifier
    view: View
    branches: Tuple[Tuple[Label, Any], ...]

    def lookup(self, label: Label):
        for candidate, cont in self.branches:
            if candidate == label:
                return cont
        return None


END = End()
UNIT_TYPE = UnitType()
BOOL_TYPE = BoolType()


def is_session(t) -> bool:
    return not isinstance(t, (UnitType, BoolType))


def qualifier_of(t):
    """The qualifier of a choice or communication type, None otherwise."""
    if isinstance(t, (MixChoiceType, ComType, ChoiceType)):
        return t.qualifier
    return None


def substitute_type(t, var: str, replacement):
    """Replace free occurrences of the type variable ``var``."""
    if isinstance(t, TypeVar):
        return replacement if t.name == var else t
    if isinstance(t, Rec):
        if t.var == var:
            return t
        return Rec(t.var, substitute_type(t.body, var, replacement))
    if isinstance(t, MixChoiceType):
        return MixChoiceType(t.qualifier, t.view, tuple(
            MixBranchType(b.label, b.polarity,
                          substitute_type(b.payload, var, replacement),
                          substitute_type(b.cont, var, replacement))
            for b in t.branches
        ))
    if isinstance(t, ComType):
        return ComType(t.qualifier, t.polarity,
                       substitute_type(t.payload, var, replacement),
                       substitute_type(t.cont, var, replacement))
    if isinstance(t, ChoiceType):
        return ChoiceType(t.qualifier, t.view, tuple(
            (label, substitute_type(cont, var, replacement)) for label, cont in t.branches
        ))
    return t


def unfold(t):
    """Unfold leading recursions until the head is not a Rec."""
    while isinstance(t, Rec):
        t = substitute_type(t.body, t.var, t)
    return t


def free_type_vars(t) -> FrozenSet[str]:
    if isinstance(t, TypeVar):
        return frozenset({t.name})
    if isinstance(t, Rec):
        return free_type_vars(t.body) - {t.var}
    if isinstance(t, MixChoiceType):
        names = frozenset()
        for b in t.branches:
            names |= free_type_vars(b.payload) | free_type_vars(b.cont)
        return names
    if isinstance(t, ComType):
        return free_type_vars(t.payload) | free_type_vars(t.cont)
    if isinstance(t, ChoiceType):
        names = frozenset()
        for _, cont in t.branches:
            names |= free_type_vars(cont)
        return names
    return frozenset()


def is_contractive(t, pending: Tuple[str, ...] = ()) -> bool:
    """
    False iff ``t`` contains a chain rec t1. ... rec tn. ti.

    ``pending`` holds the variables bound by recursions met since the last
    type constructor.
    """
    if isinstance(t, TypeVar):
        return t.name not in pending
    if isinstance(t, Rec):
        return is_contractive(t.body, pending + (t.var,))
    if isinstance(t, MixChoiceType):
        return all(is_contractive(b.payload) and is_contractive(b.cont) for b in t.branches)
    if isinstance(t, ComType):
        return is_contractive(t.payload) and is_contractive(t.cont)
    if isinstance(t, ChoiceType):
        return all(is_contractive(cont) for _, cont in t.branches)
    return True


def _close_payloads(t, var: str, whole):
    """Replace ``var`` by ``whole`` in payload positions only."""
    if isinstance(t, Rec):
        if t.var == var:
            return t
        return Rec(t.var, _close_payloads(t.body, var, whole))
    if isinstance(t, MixChoiceType):
        return MixChoiceType(t.qualifier, t.view, tuple(
            MixBranchType(b.label, b.polarity, substitute_type(b.payload, var, whole),
                          _close_payloads(b.cont, var, whole))
            for b in t.branches
        ))
    if isinstance(t, ComType):
        return ComType(t.qualifier, t.polarity, substitute_type(t.payload, var, whole),
                       _close_payloads(t.cont, var, whole))
    if isinstance(t, ChoiceType):
        return ChoiceType(t.qualifier, t.view, tuple(
            (label, _close_payloads(cont, var, whole)) for label, cont in t.branches
        ))
    return t


def dualize(t):
    """
    The dual of a session type: views and polarities flip, payloads stay.

    Recursion variables used as payloads are closed first so the payload
    keeps denoting the original (non-dualized) type.

    Raises:
        NotASessionTypeError: for unit and bool
    """
    if isinstance(t, (UnitType, BoolType)):
        raise NotASessionTypeError(f"{type(t).__name__} has no dual")
    if isinstance(t, (End, TypeVar)):
        return t
    if isinstance(t, Rec):
        return Rec(t.var, dualize(_close_payloads(t.body, t.var, t)))
    if isinstance(t, MixChoiceType):
        return MixChoiceType(t.qualifier, t.view.flip(), tuple(
            MixBranchType(b.label, b.polarity.flip(), b.payload, dualize(b.cont))
            for b in t.branches
        ))
    if isinstance(t, ComType):
        return ComType(t.qualifier, t.polarity.flip(), t.payload, dualize(t.cont))
    if isinstance(t, ChoiceType):
        return ChoiceType(t.qualifier, t.view.flip(), tuple(
            (label, dualize(cont)) for label, cont in t.branches
        ))
    raise NotASessionTypeError(f"unknown type {t!r}")


def un_pred(t) -> bool:
    """un(T): end, unit, bool and un-qualified types, looking through recursion."""
    t = unfold(t)
    if isinstance(t, (End, UnitType, BoolType)):
        return True
    if isinstance(t, (MixChoiceType, ComType, ChoiceType)):
        return t.qualifier is Qualifier.UN
    return False
