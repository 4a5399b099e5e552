"""
Names: channels, endpoints, variables, numeral leader ids and the
encoder's reserved names.

Equality and hashing go through the rendered text only, so a parsed
``c0`` and an encoder-generated ``c`` with index 0 are the same name.
The ``origin`` field is a provenance hint that survives alpha-renaming
and never takes part in comparisons.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Tuple

RESERVED_TEXTS = frozenset({'c', 'd', 'u', 'v', 's', 't'})


class NameKind(str, Enum):
    CHANNEL = 'channel'
    ENDPOINT = 'endpoint'
    VARIABLE = 'variable'
    NUMERAL = 'numeral-id'
    RESERVED = 'reserved'
    BOUND = 'bound'


@dataclass(frozen=True, eq=False)
class Name:
    """An atom of the calculi."""
    text: str
    index: Optional[int] = None
    kind: NameKind = NameKind.CHANNEL
    origin: Optional[str] = field(default=None, compare=False)

    def __str__(self) -> str:
        if self.index is None:
            return self.text
        return f"{self.text}{self.index}"

    def __repr__(self) -> str:
        return f"Name({str(self)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Name) and str(self) == str(other)

    def __hash__(self) -> int:
        return hash(str(self))

    def __lt__(self, other: 'Name') -> bool:
        return self.sort_key() < other.sort_key()

    @property
    def is_numeral(self) -> bool:
        return str(self).isdigit()

    def sort_key(self) -> Tuple:
        """Numerals first, compared numerically; everything else by text."""
        rendered = str(self)
        if rendered.isdigit():
            return (0, int(rendered), '')
        return (1, 0, rendered)

    def provenance(self) -> str:
        """The original name this one descends from through renamings."""
        return self.origin or str(self)


def make_name(text: str) -> Name:
    """Build a name from surface text, classifying numerals."""
    if text.isdigit():
        return Name(text, kind=NameKind.NUMERAL)
    return Name(text)


def fresh_name(base: Name, avoid: Iterable[Name]) -> Name:
    """
    Return a variant of ``base`` (priming its text) that is not in ``avoid``.

    Numeral ids are never generated as bound names, so a numeral base is
    turned into a variable first.

    Example:
        >>> str(fresh_name(Name('x'), {Name('x')}))
        "x'"
    """
    taken = set(avoid)
    text = str(base)
    kind = base.kind
    if base.is_numeral:
        text = f"n{text}"
        kind = NameKind.VARIABLE
    candidate = Name(text, kind=kind, origin=base.provenance())
    while candidate in taken:
        text = f"{text}'"
        candidate = Name(text, kind=kind, origin=base.provenance())
    return candidate


class NameSupply:
    """
    Hands out indexed names per base text (c0, c1, ... ; s0, s1, ...).

    Indices are drawn in call order, so two runs over the same input draw
    the same names.
    """

    def __init__(self, kind: NameKind = NameKind.RESERVED):
        self.kind = kind
        self._counters = {}
        self.drawn = []

    def next(self, text: str) -> Name:
        index = self._counters.get(text, 0)
        self._counters[text] = index + 1
        name = Name(text, index=index, kind=self.kind)
        self.drawn.append(name)
        return name

    def pair(self, left: str, right: str) -> Tuple[Name, Name]:
        """Draw two names sharing one index, like (c0, d0)."""
        index = max(self._counters.get(left, 0), self._counters.get(right, 0))
        self._counters[left] = index + 1
        self._counters[right] = index + 1
        names = (Name(left, index=index, kind=self.kind), Name(right, index=index, kind=self.kind))
        self.drawn.extend(names)
        return names
