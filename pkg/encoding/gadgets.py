"""
Building blocks of the encoder: grouping mixed branches, the
non-deterministic choice gadget and collection of the junk it leaves.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from calculi.binding import free_names
from calculi.canonical import assemble_level, binder_names, canonicalize, split_level
from calculi.errors import EncodingError
from calculi.names import NameSupply
from calculi.syntax import (
    Branch, Calculus, Inact, Label, NewPair, Offer, Par, Polarity, Qualifier,
    Select, View, children, rebuild
)
from sessiontypes.types import END, ChoiceType

logger = logging.getLogger('Workbench.Encoding')


@dataclass(frozen=True)
class LabelGroup:
    """The send and receive branches of one label, in source order."""
    label: Label
    sends: Tuple[Branch, ...]
    receives: Tuple[Branch, ...]

    def parts(self):
        """(polarity, branches) for the non-empty halves, sends first."""
        result = []
        if self.sends:
            result.append((Polarity.OUT, self.sends))
        if self.receives:
            result.append((Polarity.IN, self.receives))
        return result


def reorder_choice(branches: Sequence[Branch]) -> Tuple[LabelGroup, ...]:
    """
    Group mixed branches by label, sends before receives.

    Labels come out sorted; within each half the source order is kept.

    Example:
        [m?x.Q, l!v.P] gives (l: sends [l!v.P]), (m: receives [m?x.Q])
    """
    labels = sorted({b.label for b in branches})
    return tuple(
        LabelGroup(
            label,
            tuple(b for b in branches if b.label == label and b.polarity is Polarity.OUT),
            tuple(b for b in branches if b.label == label and b.polarity is Polarity.IN),
        )
        for label in labels
    )


def mangle(label: Label, polarity: Polarity, view: View) -> Label:
    """
    l! under an internal view and l? under an external one become l$snd,
    the other two become l$rcv, so dual branches meet on the same label.
    """
    sends = (polarity is Polarity.OUT) == (view is View.INTERNAL)
    return Label(label.text, 'snd' if sends else 'rcv')


def option_labels(count: int) -> Tuple[Label, ...]:
    return tuple(Label(f"opt{i}") for i in range(1, count + 1))


def nd_choice_type(count: int) -> ChoiceType:
    """The annotation of s in (new s t)(s>>{opt_i: P_i} | t<+opt_i ...)."""
    return ChoiceType(Qualifier.UN, View.EXTERNAL, tuple((label, END) for label in option_labels(count)))


def nd_choice(options: Sequence, supply: Optional[NameSupply] = None):
    """
    (new s t)(s>>{opt1: P1, ..., optn: Pn} | t<+opt1.0 | ... | t<+optn.0)

    One step commits to some P_j and leaves the stuck selections on t as junk.

    Raises:
        EncodingError: for an empty option list
    """
    options = list(options)
    if not options:
        raise EncodingError("nd_choice needs at least one option")
    supply = supply or NameSupply()
    s, t = supply.pair('s', 't')
    labels = option_labels(len(options))
    offer = Offer(s, tuple(zip(labels, options)))
    selections = tuple(Select(t, label, Inact()) for label in labels)
    return NewPair(s, t, Par((offer,) + selections), nd_choice_type(len(options)))


# ---------------------------------------------------------------- junk

def _is_junk(binder: NewPair, threads) -> Tuple[bool, List[int]]:
    """
    Whether the threads using the pair are all ``e<+l.0`` on one endpoint
    e, and the indices of those threads.
    """
    names = set(binder_names(binder))
    using = [i for i, thread in enumerate(threads) if free_names(thread) & names]
    if not using:
        return False, []
    endpoints = set()
    for i in using:
        thread = threads[i]
        if not (isinstance(thread, Select) and isinstance(thread.cont, Inact)):
            return False, []
        endpoints.add(thread.endpoint)
    return len(endpoints) == 1, using


def _collect(term):
    if not isinstance(term, (Par, NewPair)):
        kids = children(term)
        return rebuild(term, tuple(_collect(kid) for kid in kids)) if kids else term
    binders, threads = split_level(term)
    binders = list(binders)
    threads = [_collect(thread) for thread in threads]
    changed = True
    while changed:
        changed = False
        for binder in binders:
            if not isinstance(binder, NewPair):
                continue
            junk, using = _is_junk(binder, threads)
            if junk:
                logger.debug(f"Collecting junk on ({binder.left} {binder.right})")
                threads = [t for i, t in enumerate(threads) if i not in using]
                binders.remove(binder)
                changed = True
                break
    return assemble_level(binders, threads, Calculus.CMV)


def gc_junk(term):
    """
    Rewrite every (new y z)(y<+l1.0 | ... | y<+ln.0) to 0, to a fixpoint,
    and return the canonical result.

    Example:
        (new s t)(t<+opt1.0 | t<+opt2.0) | P  becomes  P
    """
    current = canonicalize(term, Calculus.CMV)
    while True:
        collected = canonicalize(_collect(current), Calculus.CMV)
        if collected == current:
            return current
        current = collected


def is_junk(term) -> bool:
    """True when the term collects to 0."""
    return isinstance(gc_junk(term), Inact)
