"""
The renaming policy of the encoder.

Source names are prefixed with ``n_``; the encoder's own names (c, d, u,
v, s, t and the discarded variables ``_``) are drawn from a NameSupply
with per-expansion indices, so no source name can ever meet one of them.
"""
from dataclasses import dataclass
from typing import Iterable, Mapping

from calculi.errors import PreconditionError
from calculi.names import Name, NameKind
from calculi.syntax import And, Not, Or

PREFIX = 'n_'


@dataclass(frozen=True)
class RenamingPolicy:
    """φ(n) = prefix + n; injective, and its range avoids every reserved name."""
    prefix: str = PREFIX

    def __call__(self, name: Name) -> Name:
        kind = NameKind.VARIABLE if name.is_numeral else name.kind
        return Name(f"{self.prefix}{name}", kind=kind, origin=name.provenance())

    def value(self, value):
        """φ on a value or boolean expression; constants are kept."""
        if isinstance(value, Name):
            return self(value)
        if isinstance(value, Not):
            return Not(self.value(value.operand))
        if isinstance(value, And):
            return And(self.value(value.left), self.value(value.right))
        if isinstance(value, Or):
            return Or(self.value(value.left), self.value(value.right))
        return value

    def invert(self, name: Name) -> Name:
        text = str(name)
        if not text.startswith(self.prefix):
            raise PreconditionError(f"{name} is not in the range of the renaming policy")
        return Name(text[len(self.prefix):], origin=name.origin)

    def in_range(self, name: Name) -> bool:
        return str(name).startswith(self.prefix)


def induced_renaming(policy: RenamingPolicy, sigma: Mapping[Name, Name]) -> dict:
    """σ′ with σ′(φ(a)) = φ(σ(a)), the target-side image of a source renaming."""
    return {policy(a): policy(b) for a, b in sigma.items()}


def is_injective(sigma: Mapping[Name, Name], domain: Iterable[Name] = ()) -> bool:
    """True when no two names of ``domain`` (plus the keys of ``sigma``) collide."""
    names = set(domain) | set(sigma)
    images = [sigma.get(n, n) for n in names]
    return len(set(images)) == len(images)
