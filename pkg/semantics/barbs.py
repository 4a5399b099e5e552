"""
Barbs: the observable capabilities of a process.

pi barbs are polarised (an output barb on 3 is written ``3!``); the session
calculi observe an unguarded choice, output, input, selection or branching
on a free endpoint, without polarity.
"""
from dataclasses import dataclass
from typing import FrozenSet, Set

from calculi.names import Name
from calculi.syntax import (
    Bang, Calculus, Choice, In, New, NewPair, Offer, Out, Par, Receive, Select,
    Send, Sum, calculus_of
)


@dataclass(frozen=True, order=True)
class Barb:
    name: Name
    polarity: str = ''

    def __str__(self) -> str:
        return f"{self.name}{self.polarity}"

    @property
    def is_numeral(self) -> bool:
        return self.name.is_numeral


def barbs(term, calculus=None) -> FrozenSet[Barb]:
    """
    The strong barbs of ``term``.

    Examples:
        pi:   3! | (nu n) S      gives {3!}
        CMV+: lin y(l!true.0)    gives {y} when y is free
        CMV+: (new y z)(lin y(...) | lin z(...)) gives nothing
    """
    calculus = Calculus(calculus) if calculus is not None else calculus_of(term)
    found: Set[Barb] = set()
    _collect(term, calculus, frozenset(), found)
    return frozenset(found)


def _collect(term, calculus: Calculus, bound: FrozenSet[Name], found: Set[Barb]):
    if isinstance(term, Par):
        for component in term.components:
            _collect(component, calculus, bound, found)
    elif isinstance(term, New):
        _collect(term.body, calculus, bound | {term.name}, found)
    elif isinstance(term, NewPair):
        _collect(term.body, calculus, bound | {term.left, term.right}, found)
    elif isinstance(term, Bang):
        _collect(term.body, calculus, bound, found)
    elif isinstance(term, Sum):
        for summand in term.summands:
            prefix = summand.prefix
            if isinstance(prefix, Out) and prefix.subject not in bound:
                found.add(Barb(prefix.subject, '!'))
            elif isinstance(prefix, In) and prefix.subject not in bound:
                found.add(Barb(prefix.subject, '?'))
    elif isinstance(term, (Choice, Send, Receive, Select, Offer)):
        if term.endpoint not in bound:
            found.add(Barb(term.endpoint))


def numeral_barbs(found) -> FrozenSet[Barb]:
    """The barbs on leader ids."""
    return frozenset(b for b in found if b.is_numeral)
