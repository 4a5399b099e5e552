"""
The type-directed encoding of CMV+ into CMV.

The encoder walks a CMV+ typing derivation. Composition, restriction,
conditionals and 0 translate homomorphically. A choice on y translates
according to the qualifier of the process and the qualifier and view of
the type its derivation gives y:

    lin-int         nd{ y<+l$m.nd{...}, ... }
    lin-ext         y>>{ l$m: nd{...}, ... }
    lin-on-un-int   nd{ (new c d)(y!c.d<+l$m.nd{...}), ... }
    lin-on-un-ext   lin y?c.c>>{ l$m: nd{...}, ... }
    un-int          (new u v)(u!unit | un v?_.nd{ (new c d)(y!c.d<+l$m.nd{... u!unit | P}) })
    un-ext          (new u v)(u!unit | un v?_.lin y?c.c>>{ l$m: nd{... u!unit | P} })

Every translated node leaves an EncodingJudgement behind, so steps of the
target can be traced back to the case that produced them.
"""
import logging
from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional, Tuple

from calculi.errors import EncodingError, PreconditionError
from calculi.names import Name, NameSupply
from calculi.syntax import (
    UNIT, If, Inact, NewPair, Offer, Par, Polarity, Qualifier, Receive, Select, Send, View
)
from parsing.printer import print_term, print_type
from semantics.steps import StepKind, StepLabel
from sessiontypes.context import TypingContext
from sessiontypes.derivation import Derivation
from sessiontypes.types import END, UNIT_TYPE, ComType, MixChoiceType

from .gadgets import mangle, nd_choice, reorder_choice
from .naming import RenamingPolicy
from .protocols import channel_types, encode_context, encode_type

logger = logging.getLogger('Workbench.Encoding')

LIN_INT = 'lin-int'
LIN_EXT = 'lin-ext'
LIN_ON_UN_INT = 'lin-on-un-int'
LIN_ON_UN_EXT = 'lin-on-un-ext'
UN_INT = 'un-int'
UN_EXT = 'un-ext'
INTERNAL_CASES = frozenset({LIN_INT, LIN_ON_UN_INT, UN_INT})

LOOP_TYPE = ComType(Qualifier.UN, Polarity.OUT, UNIT_TYPE, END)


@dataclass(frozen=True)
class EncodingJudgement:
    """Which case translated the source node at ``path``, and what it drew."""
    path: Tuple[int, ...]
    rule: str
    case: str
    endpoint: Optional[Name] = None
    drawn: Tuple[Name, ...] = ()
    starting: Optional[Name] = None

    def to_dict(self) -> dict:
        data = {
            'path': list(self.path),
            'rule': self.rule,
            'case': self.case,
            'drawn': [str(n) for n in self.drawn],
        }
        if self.endpoint is not None:
            data['endpoint'] = str(self.endpoint)
        if self.starting is not None:
            data['starting'] = str(self.starting)
        return data


@dataclass(frozen=True)
class Encoding:
    """An encoded term with its context translation and provenance."""
    term: object
    context: Optional[TypingContext]
    judgements: Tuple[EncodingJudgement, ...]
    drawn: Tuple[Name, ...]
    policy: RenamingPolicy = field(default_factory=RenamingPolicy)

    @property
    def starting_channels(self) -> FrozenSet[str]:
        """Texts of the s endpoints whose nd choice is the first commit of an internal choice."""
        return frozenset(str(j.starting) for j in self.judgements if j.starting is not None)

    def cases(self) -> dict:
        return {j.path: j.case for j in self.judgements}

    def to_dict(self) -> dict:
        return {
            'term': print_term(self.term),
            'context': self.context.render(print_type) if self.context is not None else None,
            'judgements': [j.to_dict() for j in self.judgements],
            'drawn': [str(n) for n in self.drawn],
        }


class _Encoder:
    def __init__(self, policy: RenamingPolicy, supply: NameSupply):
        self.policy = policy
        self.supply = supply
        self.judgements: List[EncodingJudgement] = []
        self.typed = True

    def _record(self, node: Derivation, case: str, endpoint=None, drawn=(), starting=None):
        self.judgements.append(EncodingJudgement(node.path, node.rule, case, endpoint, tuple(drawn), starting))

    def _nd(self, options, ledger: List[Name]):
        gadget = nd_choice(options, self.supply)
        ledger.extend((gadget.left, gadget.right))
        return gadget

    def process(self, node: Derivation):
        rule = node.rule
        if rule == 'T-Inact':
            self._record(node, 'inact')
            return Inact()
        if rule == 'T-Par':
            left = self.process(node.premises[0])
            right = self.process(node.premises[1])
            self._record(node, 'par')
            tail = right.components if node.premises[1].rule == 'T-Par' else (right,)
            return Par((left,) + tuple(tail))
        if rule == 'T-Res':
            term = node.subject
            left_type, _ = node.side_condition('types')
            try:
                annotation = encode_type(left_type)
            except EncodingError as e:
                logger.warning(f"Restriction ({term.left} {term.right}) keeps no annotation: {e}")
                annotation, self.typed = None, False
            body = self.process(node.premises[0])
            self._record(node, 'res')
            return NewPair(self.policy(term.left), self.policy(term.right), body, annotation)
        if rule == 'T-If':
            term = node.subject
            then = self.process(node.premises[1])
            orelse = self.process(node.premises[2])
            self._record(node, 'if')
            return If(self.policy.value(term.condition), then, orelse)
        if rule == 'T-Choice':
            return self._choice(node)
        raise EncodingError(f"no encoding case for a {rule} node")

    # ------------------------------------------------------------ choices

    def _case(self, node: Derivation) -> Tuple[str, MixChoiceType]:
        term = node.subject
        endpoint_type = node.premises[0].conclusion.type
        if not isinstance(endpoint_type, MixChoiceType):
            raise EncodingError(f"{term.endpoint} is not judged at a choice type")
        internal = endpoint_type.view is View.INTERNAL
        if term.qualifier is Qualifier.UN:
            if endpoint_type.qualifier is not Qualifier.UN:
                raise EncodingError(f"un choice on {term.endpoint} at a lin type")
            return (UN_INT if internal else UN_EXT), endpoint_type
        if endpoint_type.qualifier is Qualifier.LIN:
            return (LIN_INT if internal else LIN_EXT), endpoint_type
        return (LIN_ON_UN_INT if internal else LIN_ON_UN_EXT), endpoint_type

    def _groups(self, node: Derivation):
        """(label, polarity, [(branch, continuation derivation)]) in grouping order."""
        term = node.subject
        result = []
        for group in reorder_choice(term.branches):
            for polarity, _ in group.parts():
                members = []
                for index, branch in enumerate(term.branches):
                    if branch.label == group.label and branch.polarity is polarity:
                        premise = node.premises[index + 1]
                        cont = premise.premises[1] if polarity is Polarity.OUT else premise.premises[0]
                        members.append((branch, cont))
                result.append((group.label, polarity, members))
        return result

    def _actions(self, channel: Name, polarity: Polarity, members, ledger, rearm=None):
        """channel!v.[P] or lin channel?x.[P] for each member, optionally re-arming the loop."""
        actions = []
        for branch, cont in members:
            body = self.process(cont)
            if rearm is not None:
                body = Par((Send(rearm, UNIT, Inact()), body))
            if polarity is Polarity.OUT:
                actions.append(Send(channel, self.policy.value(branch.arg), body))
            else:
                actions.append(Receive(Qualifier.LIN, channel, self.policy(branch.arg), body))
        return actions

    def _choice(self, node: Derivation):
        case, endpoint_type = self._case(node)
        y = self.policy(node.subject.endpoint)
        groups = self._groups(node)
        ledger: List[Name] = []
        starting = None

        if case == LIN_INT:
            options = [
                Select(y, mangle(label, polarity, View.INTERNAL),
                       self._nd(self._actions(y, polarity, members, ledger), ledger))
                for label, polarity, members in groups
            ]
            result = self._nd(options, ledger)
            starting = result.left
        elif case == LIN_EXT:
            result = Offer(y, tuple(
                (mangle(label, polarity, View.EXTERNAL), self._nd(self._actions(y, polarity, members, ledger), ledger))
                for label, polarity, members in groups
            ))
        elif case in (LIN_ON_UN_INT, UN_INT):
            u = None
            if case == UN_INT:
                u, v = self.supply.pair('u', 'v')
                ledger.extend((u, v))
            travelling, _ = channel_types(endpoint_type)
            options = []
            for label, polarity, members in groups:
                c, d = self.supply.pair('c', 'd')
                ledger.extend((c, d))
                inner = self._nd(self._actions(d, polarity, members, ledger, rearm=u), ledger)
                selection = Select(d, mangle(label, polarity, View.INTERNAL), inner)
                options.append(NewPair(c, d, Send(y, c, selection), travelling))
            result = self._nd(options, ledger)
            starting = result.left
            if case == UN_INT:
                result = self._loop(u, v, result, ledger)
        else:
            u = None
            if case == UN_EXT:
                u, v = self.supply.pair('u', 'v')
                ledger.extend((u, v))
            c = self.supply.next('c')
            ledger.append(c)
            offer = Offer(c, tuple(
                (mangle(label, polarity, View.EXTERNAL),
                 self._nd(self._actions(c, polarity, members, ledger, rearm=u), ledger))
                for label, polarity, members in groups
            ))
            result = Receive(Qualifier.LIN, y, c, offer)
            if case == UN_EXT:
                result = self._loop(u, v, result, ledger)

        self._record(node, case, y, ledger, starting)
        logger.debug(f"Encoded choice on {node.subject.endpoint} as {case}")
        return result

    def _loop(self, u: Name, v: Name, body, ledger: List[Name]):
        """(new u v)(u!unit.0 | un v?_.body)"""
        discard = self.supply.next('_')
        ledger.append(discard)
        return NewPair(u, v, Par((Send(u, UNIT, Inact()), Receive(Qualifier.UN, v, discard, body))), LOOP_TYPE)


def encode_with_provenance(derivation: Derivation, policy: Optional[RenamingPolicy] = None) -> Encoding:
    """
    ⟦Γ ⊢ P⟧ together with ⟦Γ⟧ and the per-node case record.

    Args:
        derivation: a CMV+ derivation from ``typecheck_cmvplus``
        policy: renaming of source names; ``n_`` prefixing by default

    Returns:
        Encoding; its context is None when some type has no translation
    """
    policy = policy or RenamingPolicy()
    supply = NameSupply()
    encoder = _Encoder(policy, supply)
    term = encoder.process(derivation)
    try:
        context = encode_context(derivation.context, policy) if encoder.typed else None
    except EncodingError as e:
        logger.warning(f"Context has no translation: {e}")
        context = None
    logger.info(f"Encoded {len(encoder.judgements)} nodes, drew {len(supply.drawn)} fresh names")
    return Encoding(term, context, tuple(encoder.judgements), tuple(supply.drawn), policy)


def encode(derivation: Derivation, policy: Optional[RenamingPolicy] = None):
    """
    ⟦Γ ⊢ P⟧ as a CMV process.

    Example:
        >>> print_term(encode(typecheck_cmvplus(None, parse('0', 'cmv+'))))
        '0'
    """
    return encode_with_provenance(derivation, policy).term


def is_starting_step(label: StepLabel, provenance: Optional[Encoding]) -> bool:
    """
    True iff the step commits the first nd choice of an internal-choice
    translation, or reduces a conditional.

    Raises:
        PreconditionError: without provenance
    """
    if provenance is None:
        raise PreconditionError("is_starting_step needs the provenance of the encoded term")
    if label.kind in (StepKind.IF_TRUE, StepKind.IF_FALSE):
        return True
    if label.kind is not StepKind.CASE:
        return False
    return any(name.provenance() in provenance.starting_channels for name in label.channel)
