"""
Subterm occurrences addressed by tree paths.

A path is the sequence of child indices (see ``syntax.children``) from the
root, so two identical subterms at different places have different paths.
"""
from dataclasses import dataclass
from typing import Any, List, Tuple

from .syntax import Choice, If, Offer, Receive, Select, Send, Sum, children

Path = Tuple[int, ...]

GUARDS = (Sum, Choice, Send, Receive, Select, Offer, If)


@dataclass(frozen=True)
class Occurrence:
    path: Path
    term: Any
    guarded: bool


def subterms(term) -> List[Occurrence]:
    """
    All occurrences of subterms of ``term``, the term itself first.

    A subterm is guarded when some node strictly above it is a prefix, a
    choice or a conditional: it cannot take part in a step before that
    node is consumed.

    Example:
        a.0 + b.0 gives the root and the two continuations, both guarded
    """
    result = []
    stack = [((), term, False)]
    while stack:
        path, node, guarded = stack.pop()
        result.append(Occurrence(path, node, guarded))
        below = guarded or (isinstance(node, GUARDS) and not (isinstance(node, Sum) and not node.summands))
        kids = children(node)
        for index in reversed(range(len(kids))):
            stack.append((path + (index,), kids[index], below))
    return result


def subterm_at(term, path: Path):
    node = term
    for index in path:
        node = children(node)[index]
    return node


def is_guarded(term, path: Path) -> bool:
    node = term
    for index in path:
        if isinstance(node, GUARDS):
            return True
        node = children(node)[index]
    return False
