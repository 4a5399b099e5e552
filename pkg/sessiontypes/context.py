"""
Typing contexts and their split (∘) and add (+) algebra.
"""
import itertools
from typing import Iterator, List, Optional, Tuple

from calculi.names import Name

from .relations import type_equiv
from .types import un_pred


class TypingContext:
    """
    An ordered assignment of types to pairwise distinct names.

    Contexts are immutable; every operation returns a new one.
    """

    def __init__(self, entries=()):
        entries = tuple(entries)
        names = [name for name, _ in entries]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate names in context: {', '.join(str(n) for n in names)}")
        self.entries: Tuple[Tuple[Name, object], ...] = entries

    def __iter__(self) -> Iterator[Tuple[Name, object]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, name) -> bool:
        return any(existing == name for existing, _ in self.entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, TypingContext) and dict(self.entries) == dict(other.entries)

    def __hash__(self) -> int:
        return hash(frozenset(self.entries))

    def __repr__(self) -> str:
        return f"TypingContext({self.render()})"

    def render(self, show_type=repr) -> str:
        if not self.entries:
            return '·'
        return ', '.join(f"{name}: {show_type(t)}" for name, t in self.entries)

    def lookup(self, name: Name):
        for existing, t in self.entries:
            if existing == name:
                return t
        return None

    def names(self) -> Tuple[Name, ...]:
        return tuple(name for name, _ in self.entries)

    def extend(self, name: Name, t) -> 'TypingContext':
        """Γ, x:T; x must be new."""
        if name in self:
            raise ValueError(f"{name} is already in the context")
        return TypingContext(self.entries + ((name, t),))

    def without(self, *names: Name) -> 'TypingContext':
        return TypingContext(e for e in self.entries if e[0] not in names)

    def only(self, names) -> 'TypingContext':
        keep = set(names)
        return TypingContext(e for e in self.entries if e[0] in keep)

    def unrestricted(self) -> 'TypingContext':
        return TypingContext(e for e in self.entries if un_pred(e[1]))

    def linear_names(self) -> Tuple[Name, ...]:
        return tuple(name for name, t in self.entries if not un_pred(t))


def un_ctx(context: TypingContext) -> bool:
    """un(Γ): every assignment is unrestricted."""
    return all(un_pred(t) for _, t in context)


def ctx_split(context: TypingContext) -> List[Tuple[TypingContext, TypingContext]]:
    """
    Every (Γ1, Γ2) with Γ = Γ1 ∘ Γ2.

    Unrestricted assignments go to both sides, each linear one to exactly one.

    Example:
        ctx_split(x: lin T) gives (x: lin T, ·) and (·, x: lin T)
    """
    linear = context.linear_names()
    splits = []
    for sides in itertools.product((0, 1), repeat=len(linear)):
        left_side = {name for name, side in zip(linear, sides) if side == 0}
        left = TypingContext(e for e in context if un_pred(e[1]) or e[0] in left_side)
        right = TypingContext(e for e in context if un_pred(e[1]) or (e[0] in linear and e[0] not in left_side))
        splits.append((left, right))
    return splits


def is_split(whole: TypingContext, left: TypingContext, right: TypingContext) -> bool:
    """True iff whole = left ∘ right."""
    if set(left.names()) | set(right.names()) != set(whole.names()):
        return False
    for name, t in whole:
        in_left, in_right = name in left, name in right
        if un_pred(t):
            if not (in_left and in_right and left.lookup(name) == t and right.lookup(name) == t):
                return False
        elif in_left == in_right or (left.lookup(name) if in_left else right.lookup(name)) != t:
            return False
    return True


def ctx_add(context: TypingContext, name: Name, t) -> Optional[TypingContext]:
    """
    Γ + x:T, or None where the sum is undefined.

    Defined when x is new, or when x:T is already present with the same
    unrestricted type.
    """
    existing = context.lookup(name)
    if existing is None:
        return context.extend(name, t)
    if un_pred(t) and type_equiv(existing, t):
        return context
    return None
