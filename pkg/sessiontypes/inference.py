"""
Restriction annotations reconstructed from the usage of both endpoints.

Only one-shot protocols are reconstructed: every top-level action on an
endpoint becomes a branch whose continuation is ``end``. Anything richer
needs an explicit ``(new x y : T)`` annotation.
"""
import logging
from typing import List, Optional

from calculi.binding import free_names
from calculi.names import Name
from calculi.syntax import (
    FALSE, TRUE, UNIT, Bang, Choice, If, NewPair, Offer, Par, Polarity,
    Qualifier, Receive, Select, Send, View
)

from .types import (
    BOOL_TYPE, END, UNIT_TYPE, ChoiceType, ComType, MixBranchType, MixChoiceType, dualize
)

logger = logging.getLogger('Workbench.Types')


def constant_type(value):
    """bool or unit for a constant, None for anything else."""
    if value in (TRUE, FALSE):
        return BOOL_TYPE
    if value == UNIT:
        return UNIT_TYPE
    return None


def top_level_actions(term, endpoint: Name) -> List:
    """
    The unguarded prefixes (choices, sends, receives, selections, offers)
    whose subject is ``endpoint``, looking through composition, inner
    restrictions and both arms of a conditional.
    """
    found = []

    def walk(node):
        if isinstance(node, Par):
            for component in node.components:
                walk(component)
        elif isinstance(node, NewPair):
            if endpoint not in (node.left, node.right):
                walk(node.body)
        elif isinstance(node, If):
            walk(node.then)
            walk(node.orelse)
        elif isinstance(node, Bang):
            walk(node.body)
        elif isinstance(node, (Choice, Send, Receive, Select, Offer)):
            if node.endpoint == endpoint:
                found.append(node)

    walk(term)
    return found


def _continuations(action) -> List:
    if isinstance(action, Choice):
        return [b.cont for b in action.branches]
    if isinstance(action, Offer):
        return [cont for _, cont in action.branches]
    return [action.cont]


def _one_shot(endpoint: Name, actions) -> bool:
    return all(endpoint not in free_names(cont) for a in actions for cont in _continuations(a))


def infer_mix_annotation(restriction: NewPair) -> Optional[MixChoiceType]:
    """
    The type of the left endpoint of a CMV+ restriction, or None.

    The left endpoint gets an internal choice covering every label/polarity
    pair used on it and the dual of every pair used on the right endpoint.
    Payloads come from constants sent on either side.

    Example:
        (new x y)(lin x(l!true.0 + l?z.0) | lin y(l?z.0 + l!false.0))
        gives lin +{l!bool.end, l?bool.end}
    """
    x, y = restriction.left, restriction.right
    on_x = [a for a in top_level_actions(restriction.body, x) if isinstance(a, Choice)]
    on_y = [a for a in top_level_actions(restriction.body, y) if isinstance(a, Choice)]
    if not on_x and not on_y:
        logger.debug(f"No choices on {x} or {y}; cannot infer an annotation")
        return None
    if not (_one_shot(x, on_x) and _one_shot(y, on_y)):
        logger.debug(f"An endpoint of ({x} {y}) is used again after its first choice")
        return None

    keys = []
    for choice in on_x:
        keys.extend(b.key for b in choice.branches)
    for choice in on_y:
        keys.extend((b.label, b.polarity.flip()) for b in choice.branches)
    keys = sorted(set(keys), key=lambda key: (key[0], key[1].value))

    branches = []
    for label, polarity in keys:
        # the sender of the pair fixes the payload
        senders = on_x if polarity is Polarity.OUT else on_y
        payload = None
        for choice in senders:
            for branch in choice.branches:
                if branch.label == label and branch.polarity is Polarity.OUT:
                    payload = payload or constant_type(branch.arg)
        if payload is None:
            logger.debug(f"No constant payload for {label}{polarity.value} on ({x} {y})")
            return None
        branches.append(MixBranchType(label, polarity, payload, END))

    qualifier = Qualifier.UN if len(on_x) > 1 or len(on_y) > 1 else Qualifier.LIN
    return MixChoiceType(qualifier, View.INTERNAL, tuple(branches))


def _cmv_side(endpoint: Name, actions, partner_actions, qualifier: Qualifier):
    kinds = {type(a) for a in actions}
    if len(kinds) != 1:
        return None
    kind = kinds.pop()
    if kind is Send:
        payloads = {constant_type(a.value) for a in actions}
        if len(payloads) != 1 or None in payloads:
            return None
        return ComType(qualifier, Polarity.OUT, payloads.pop(), END)
    if kind is Receive:
        payloads = {constant_type(a.value) for a in partner_actions if isinstance(a, Send)}
        if len(payloads) != 1 or None in payloads:
            return None
        return ComType(qualifier, Polarity.IN, payloads.pop(), END)
    if kind is Select:
        labels = sorted({a.label for a in actions} | {
            label for a in partner_actions if isinstance(a, Offer) for label, _ in a.branches
        })
        return ChoiceType(qualifier, View.INTERNAL, tuple((label, END) for label in labels))
    labels = sorted({label for a in actions for label, _ in a.branches})
    return ChoiceType(qualifier, View.EXTERNAL, tuple((label, END) for label in labels))


def infer_cmv_annotation(restriction: NewPair):
    """The type of the left endpoint of a CMV restriction, or None."""
    x, y = restriction.left, restriction.right
    on_x = top_level_actions(restriction.body, x)
    on_y = top_level_actions(restriction.body, y)
    if not on_x and not on_y:
        return None
    if not (_one_shot(x, on_x) and _one_shot(y, on_y)):
        return None
    shared = len(on_x) > 1 or len(on_y) > 1 or any(
        isinstance(a, Receive) and a.qualifier is Qualifier.UN for a in on_x + on_y
    )
    qualifier = Qualifier.UN if shared else Qualifier.LIN
    if on_x:
        return _cmv_side(x, on_x, on_y, qualifier)
    right = _cmv_side(y, on_y, on_x, qualifier)
    return dualize(right) if right is not None else None


__all__ = ['infer_mix_annotation', 'infer_cmv_annotation', 'top_level_actions', 'constant_type']
