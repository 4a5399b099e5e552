"""
Reduction steps of the three calculi, annotated with the occurrences they use.

Every engine works on the canonical form of its input. The top level of a
canonical term is a block of restrictions over threads (sums, choices,
prefixes, conditionals, replications); a step picks one or two threads,
replaces them by their continuations and canonicalizes the result.

Occurrence paths address threads inside the canonical source (see
``calculi.occurrences``). A step's ``consumed`` set holds the threads it
reduces; ``replicated`` holds threads of a replicated body it fires a fresh
copy of. Two steps from one state are in conflict iff their consumed sets
intersect.

Rules:
- pi: Com on any name (nullary output meets nullary input), Tau
- CMV+: the four lin/un combinations across the endpoints of one restriction, If
- CMV: LinCom, UnCom, Case across the endpoints of one restriction, If
"""
import hashlib
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, FrozenSet, List, Optional, Tuple

from calculi.binding import all_names, apply_subst, rename_binders
from calculi.canonical import BinderSupply, assemble_level, canonicalize, split_level
from calculi.errors import EvaluationError, SubstitutionError
from calculi.names import Name
from calculi.occurrences import Path
from calculi.syntax import (
    FALSE, TRUE, Bang, Calculus, Choice, If, In, NewPair, Offer, Out, Polarity,
    Qualifier, Receive, Select, Send, Sum, Tau, calculus_of
)
from sessiontypes.types import ChoiceType, ComType, MixChoiceType, unfold

from .expressions import evaluate

logger = logging.getLogger('Workbench.Reduction')


class StepKind(str, Enum):
    TAU = 'tau'
    COM = 'com'
    IF_TRUE = 'if-true'
    IF_FALSE = 'if-false'
    LIN_LIN = 'lin-lin'
    LIN_UN = 'lin-un'
    UN_LIN = 'un-lin'
    UN_UN = 'un-un'
    LIN_COM = 'lin-com'
    UN_COM = 'un-com'
    CASE = 'case'


@dataclass(frozen=True)
class StepLabel:
    """
    Identity and metadata of one reduction step.

    Attributes:
        calculus: calculus of the source state
        kind: the rule that fired
        consumed: paths of the threads the step reduces
        channel: the pi channel, or (sender, receiver) endpoints
        labels: branch labels with polarities, per side
        qualifiers: qualifiers of the two sides, where the calculus has them
        detail: indices of the summands or branches used
        replicated: paths of replicated threads a copy was taken from
        origin: digest of the canonical source state
    """
    calculus: Calculus
    kind: StepKind
    consumed: FrozenSet[Path]
    channel: Tuple[Name, ...] = ()
    labels: Tuple[str, ...] = ()
    qualifiers: Tuple[str, ...] = ()
    detail: Tuple[int, ...] = ()
    replicated: FrozenSet[Path] = frozenset()
    origin: str = ''

    def sort_key(self) -> Tuple:
        return (
            tuple(sorted(self.consumed)),
            tuple(sorted(self.replicated)),
            self.detail,
            self.kind.value,
            tuple(str(n) for n in self.channel),
        )

    def describe(self) -> str:
        parts = [self.kind.value]
        if self.channel:
            parts.append(','.join(str(n) for n in self.channel))
        if self.labels:
            parts.append(' '.join(self.labels))
        return ' '.join(parts)

    def to_dict(self) -> dict:
        return {
            'calculus': self.calculus.value,
            'kind': self.kind.value,
            'consumed': [list(p) for p in sorted(self.consumed)],
            'replicated': [list(p) for p in sorted(self.replicated)],
            'channel': [str(n) for n in self.channel],
            'labels': list(self.labels),
            'qualifiers': list(self.qualifiers),
            'detail': list(self.detail),
            'origin': self.origin,
        }


@dataclass(frozen=True)
class Step:
    label: StepLabel
    target: Any


def origin_of(term) -> str:
    """A short digest identifying a canonical state."""
    return hashlib.sha1(repr(term).encode('utf-8')).hexdigest()[:16]


# ---------------------------------------------------------------- dispatch

def steps(term, calculus=None, assume_canonical: bool = False, preserve_order: bool = False) -> List[Step]:
    """
    All one-step reducts of ``term`` with their labels, in a fixed order.

    Args:
        term: process of any calculus
        calculus: Calculus or tag; guessed from the term when omitted
        assume_canonical: skip canonicalization of the source
        preserve_order: take the source as given and build each target as
            the untouched threads in source order followed by the new ones,
            without canonicalizing

    Returns:
        Steps sorted by consumed paths, then detail; targets are canonical
        unless ``preserve_order`` is set
    """
    calculus = Calculus(calculus) if calculus is not None else calculus_of(term)
    engine = {
        Calculus.PI: steps_pi,
        Calculus.MIX: steps_cmvplus,
        Calculus.CMV: steps_cmv,
    }[calculus]
    return engine(term, assume_canonical=assume_canonical, preserve_order=preserve_order)


@dataclass
class _Level:
    calculus: Calculus
    source: Any
    binders: Tuple
    threads: Tuple
    paths: List[Path]
    origin: str
    preserve_order: bool = False

    def reduct(self, binders, threads):
        if self.preserve_order:
            return assemble_level(tuple(binders), tuple(threads), self.calculus)
        return canonicalize(assemble_level(tuple(binders), tuple(threads), self.calculus), self.calculus)

    def label(self, kind: StepKind, consumed, **fields) -> StepLabel:
        return StepLabel(self.calculus, kind, frozenset(consumed), origin=self.origin, **fields)


def _open(term, calculus: Calculus, assume_canonical: bool, preserve_order: bool = False) -> _Level:
    source = term if assume_canonical or preserve_order else canonicalize(term, calculus)
    binders, threads = split_level(source)
    return _Level(
        calculus, source, binders, threads, _level_paths(binders, threads), origin_of(source), preserve_order
    )


def _level_paths(binders, threads) -> List[Path]:
    prefix = (0,) * len(binders)
    if len(threads) == 1:
        return [prefix]
    return [prefix + (i,) for i in range(len(threads))]


def _sorted(found: List[Step]) -> List[Step]:
    return sorted(found, key=lambda s: (s.label.sort_key(), repr(s.target)))


def _if_steps(level: _Level) -> List[Step]:
    found = []
    for i, thread in enumerate(level.threads):
        if not isinstance(thread, If):
            continue
        try:
            value = evaluate(thread.condition)
        except EvaluationError as e:
            logger.debug(f"Conditional at {level.paths[i]} is stuck: {e}")
            continue
        if value == TRUE:
            branch, kind = thread.then, StepKind.IF_TRUE
        elif value == FALSE:
            branch, kind = thread.orelse, StepKind.IF_FALSE
        else:
            continue
        rest = level.threads[:i] + (branch,) + level.threads[i + 1:]
        found.append(Step(level.label(kind, {level.paths[i]}), level.reduct(level.binders, rest)))
    return found


# ---------------------------------------------------------------- pi

@dataclass(frozen=True)
class _Site:
    """A sum at the top level, or inside the body of a top-level replication."""
    path: Path
    thread: int
    inner: Optional[int] = None


def _pi_sites(level: _Level) -> List[_Site]:
    sites = []
    for i, thread in enumerate(level.threads):
        if isinstance(thread, Sum):
            sites.append(_Site(level.paths[i], i))
        elif isinstance(thread, Bang):
            inner_binders, inner_threads = split_level(thread.body)
            inner_paths = _level_paths(inner_binders, inner_threads)
            for j, inner in enumerate(inner_threads):
                if isinstance(inner, Sum):
                    sites.append(_Site(level.paths[i] + (0,) + inner_paths[j], i, j))
    return sites


def _site_sum(level: _Level, site: _Site) -> Sum:
    thread = level.threads[site.thread]
    if site.inner is None:
        return thread
    return split_level(thread.body)[1][site.inner]


def _materialize(level: _Level, sites: List[_Site], supply):
    """
    Resolve sites to concrete sums.

    Each replication involved is unfolded once with fresh binders, twice when
    both sites are the same replicated thread. The replication itself stays.

    Returns:
        (sums, binders, remaining threads)
    """
    removed = set()
    copies = []
    sums = []
    for site in sites:
        if site.inner is None:
            sums.append(level.threads[site.thread])
            removed.add(site.thread)
            continue
        copy = next((c for c in copies if c[0] == site.thread and site.inner not in c[3]), None)
        if copy is None:
            copy_binders, copy_threads = split_level(rename_binders(level.threads[site.thread].body, supply))
            copy = (site.thread, copy_binders, copy_threads, set())
            copies.append(copy)
        sums.append(copy[2][site.inner])
        copy[3].add(site.inner)

    binders = list(level.binders)
    remaining = [t for k, t in enumerate(level.threads) if k not in removed]
    for _, copy_binders, copy_threads, used in copies:
        binders.extend(copy_binders)
        remaining.extend(t for k, t in enumerate(copy_threads) if k not in used)
    return sums, binders, remaining


def _split_consumed(sites: List[_Site]):
    consumed = {s.path for s in sites if s.inner is None}
    replicated = {s.path for s in sites if s.inner is not None}
    return consumed, frozenset(replicated)


def steps_pi(term, assume_canonical: bool = False, preserve_order: bool = False) -> List[Step]:
    """
    Com and Tau steps of a pi process, replications unfolded lazily.

    Example:
        a!<z>.P | a?(x).Q has one step, to P | Q{z/x}
    """
    level = _open(term, Calculus.PI, assume_canonical, preserve_order)
    sites = _pi_sites(level)
    found = []

    def supply():
        return BinderSupply('_r', set(all_names(level.source)))

    for site in sites:
        for k, summand in enumerate(_site_sum(level, site).summands):
            if not isinstance(summand.prefix, Tau):
                continue
            (concrete,), binders, rest = _materialize(level, [site], supply())
            consumed, replicated = _split_consumed([site])
            found.append(Step(
                level.label(StepKind.TAU, consumed, detail=(k,), replicated=replicated),
                level.reduct(binders, rest + [concrete.summands[k].cont])
            ))

    for sender in sites:
        sender_sum = _site_sum(level, sender)
        for si, out in enumerate(sender_sum.summands):
            if not isinstance(out.prefix, Out):
                continue
            for receiver in sites:
                if receiver == sender and sender.inner is None:
                    continue
                receiver_sum = _site_sum(level, receiver)
                for ri, inp in enumerate(receiver_sum.summands):
                    prefix = inp.prefix
                    if not isinstance(prefix, In) or prefix.subject != out.prefix.subject:
                        continue
                    if (prefix.param is None) != (out.prefix.obj is None):
                        continue
                    step = _pi_com(level, sender, si, receiver, ri, supply())
                    if step is not None:
                        found.append(step)

    result = _sorted(found)
    logger.debug(f"pi state {level.origin} has {len(result)} steps")
    return result


def _pi_com(level: _Level, sender: _Site, si: int, receiver: _Site, ri: int, supply) -> Optional[Step]:
    (out_sum, in_sum), binders, rest = _materialize(level, [sender, receiver], supply)
    out = out_sum.summands[si]
    inp = in_sum.summands[ri]
    # names bound inside a replicated body differ between two copies
    if out.prefix.subject != inp.prefix.subject:
        return None
    cont = inp.cont
    if inp.prefix.param is not None:
        cont = apply_subst(cont, {inp.prefix.param: out.prefix.obj})
    consumed, replicated = _split_consumed([sender, receiver])
    label = level.label(
        StepKind.COM, consumed,
        channel=(out.prefix.subject,),
        labels=('!', '?'),
        detail=(si, ri),
        replicated=replicated
    )
    return Step(label, level.reduct(binders, rest + [out.cont, cont]))


# ---------------------------------------------------------------- CMV+

def _endpoint_threads(level: _Level, kinds) -> dict:
    index = {}
    for i, thread in enumerate(level.threads):
        if isinstance(thread, kinds):
            index.setdefault(thread.endpoint, []).append(i)
    return index


def _pairs(level: _Level):
    """(binder position, endpoint a, endpoint b) for both orientations of each top-level pair."""
    for position, binder in enumerate(level.binders):
        if isinstance(binder, NewPair):
            yield position, binder.left, binder.right
            yield position, binder.right, binder.left


def _with_annotation(binders, position: int, annotation):
    binder = binders[position]
    updated = NewPair(binder.left, binder.right, None, annotation)
    return binders[:position] + (updated,) + binders[position + 1:]


def _advance_mix(annotation, label, polarity: Polarity):
    """The type of the left endpoint after it used branch (label, polarity)."""
    if annotation is None:
        return None
    t = unfold(annotation)
    if isinstance(t, MixChoiceType) and t.qualifier is Qualifier.LIN:
        branch = t.lookup(label, polarity)
        if branch is not None:
            return branch.cont
    return annotation


def steps_cmvplus(term, assume_canonical: bool = False, preserve_order: bool = False) -> List[Step]:
    """
    Steps of a CMV+ process: choice interaction and conditionals.

    A lin choice is consumed by the interaction; an un choice persists.

    Example:
        (new y z)(lin y(l!true.P) | lin z(l?(x).Q)) steps to (new y z)(P | Q{true/x})
    """
    level = _open(term, Calculus.MIX, assume_canonical, preserve_order)
    choices = _endpoint_threads(level, Choice)
    found = _if_steps(level)

    for position, sender_end, receiver_end in _pairs(level):
        binder = level.binders[position]
        for i in choices.get(sender_end, ()):
            for j in choices.get(receiver_end, ()):
                found.extend(_mix_coms(level, position, binder, i, j, sender_end))

    result = _sorted(found)
    logger.debug(f"CMV+ state {level.origin} has {len(result)} steps")
    return result


def _mix_coms(level: _Level, position: int, binder: NewPair, i: int, j: int, sender_end: Name) -> List[Step]:
    sender, receiver = level.threads[i], level.threads[j]
    found = []
    for bi, out in enumerate(sender.branches):
        if out.polarity is not Polarity.OUT:
            continue
        for bj, inp in enumerate(receiver.branches):
            if inp.polarity is not Polarity.IN or inp.label != out.label:
                continue
            try:
                received = apply_subst(inp.cont, {inp.arg: out.arg})
            except SubstitutionError as e:
                logger.debug(f"Skipping ill-formed interaction on {sender.endpoint}: {e}")
                continue

            persistent = [
                level.threads[k] for k in (i, j)
                if level.threads[k].qualifier is Qualifier.UN
            ]
            rest = [t for k, t in enumerate(level.threads) if k not in (i, j)] + persistent
            if sender_end == binder.left:
                annotation = _advance_mix(binder.annotation, out.label, Polarity.OUT)
            else:
                annotation = _advance_mix(binder.annotation, inp.label, Polarity.IN)
            binders = _with_annotation(level.binders, position, annotation)

            kind = StepKind(f"{sender.qualifier.value}-{receiver.qualifier.value}")
            label = level.label(
                kind, {level.paths[i], level.paths[j]},
                channel=(sender.endpoint, receiver.endpoint),
                labels=(f"{out.label}!", f"{inp.label}?"),
                qualifiers=(sender.qualifier.value, receiver.qualifier.value),
                detail=(bi, bj)
            )
            found.append(Step(label, level.reduct(binders, rest + [out.cont, received])))
    return found


# ---------------------------------------------------------------- CMV

def _advance_cmv(annotation, label=None):
    if annotation is None:
        return None
    t = unfold(annotation)
    if isinstance(t, ComType) and t.qualifier is Qualifier.LIN:
        return t.cont
    if isinstance(t, ChoiceType) and t.qualifier is Qualifier.LIN and label is not None:
        cont = t.lookup(label)
        if cont is not None:
            return cont
    return annotation


def steps_cmv(term, assume_canonical: bool = False, preserve_order: bool = False) -> List[Step]:
    """
    Steps of a CMV process: LinCom, UnCom, Case and conditionals.

    Example:
        (new x y)(x!true.P | un y?z.Q) steps to (new x y)(P | Q{true/z} | un y?z.Q)
    """
    level = _open(term, Calculus.CMV, assume_canonical, preserve_order)
    sends = _endpoint_threads(level, Send)
    receives = _endpoint_threads(level, Receive)
    selects = _endpoint_threads(level, Select)
    offers = _endpoint_threads(level, Offer)
    found = _if_steps(level)

    for position, a, b in _pairs(level):
        binder = level.binders[position]
        for i in sends.get(a, ()):
            for j in receives.get(b, ()):
                step = _cmv_com(level, position, binder, i, j)
                if step is not None:
                    found.append(step)
        for i in selects.get(a, ()):
            for j in offers.get(b, ()):
                step = _cmv_case(level, position, binder, i, j)
                if step is not None:
                    found.append(step)

    result = _sorted(found)
    logger.debug(f"CMV state {level.origin} has {len(result)} steps")
    return result


def _cmv_com(level: _Level, position: int, binder: NewPair, i: int, j: int) -> Optional[Step]:
    send, receive = level.threads[i], level.threads[j]
    try:
        received = apply_subst(receive.cont, {receive.var: send.value})
    except SubstitutionError as e:
        logger.debug(f"Skipping ill-formed communication on {send.endpoint}: {e}")
        return None
    rest = [t for k, t in enumerate(level.threads) if k not in (i, j)]
    if receive.qualifier is Qualifier.UN:
        rest.append(receive)
        kind = StepKind.UN_COM
    else:
        kind = StepKind.LIN_COM
    binders = _with_annotation(level.binders, position, _advance_cmv(binder.annotation))
    label = level.label(
        kind, {level.paths[i], level.paths[j]},
        channel=(send.endpoint, receive.endpoint),
        labels=('!', '?'),
        qualifiers=('', receive.qualifier.value)
    )
    return Step(label, level.reduct(binders, rest + [send.cont, received]))


def _cmv_case(level: _Level, position: int, binder: NewPair, i: int, j: int) -> Optional[Step]:
    select, offer = level.threads[i], level.threads[j]
    chosen = offer.lookup(select.label)
    if chosen is None:
        return None
    index = [label for label, _ in offer.branches].index(select.label)
    rest = [t for k, t in enumerate(level.threads) if k not in (i, j)]
    binders = _with_annotation(level.binders, position, _advance_cmv(binder.annotation, select.label))
    label = level.label(
        StepKind.CASE, {level.paths[i], level.paths[j]},
        channel=(select.endpoint, offer.endpoint),
        labels=(f"<+{select.label}", f">>{select.label}"),
        detail=(index,)
    )
    return Step(label, level.reduct(binders, rest + [select.cont, chosen]))


def reducts(term, calculus=None) -> FrozenSet:
    """The set of canonical one-step reducts."""
    return frozenset(step.target for step in steps(term, calculus))
