"""
Typing derivations and their replay against the declarative rules.

A derivation node names its rule, its conclusion and its premises, and
records every context operation the rule performed: each split
Γ = Γ1 ∘ Γ2 and each sum Γ + x:T. The encoder reads those records to
pick the contexts of its recursive calls.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

from calculi.errors import TypeCheckError
from calculi.names import Name
from calculi.syntax import (
    FALSE, TRUE, UNIT, And, Branch, Choice, If, Inact, NewPair, Not, Offer,
    Or, Par, Polarity, Qualifier, Receive, Select, Send, View
)
from parsing.printer import print_branch, print_expr, print_term, print_type

from .context import TypingContext, ctx_add, is_split, un_ctx
from .relations import dual, subtype
from .types import (
    BOOL_TYPE, UNIT_TYPE, ChoiceType, ComType, MixBranchType, MixChoiceType
)

logger = logging.getLogger('Workbench.Types')

PROCESS = 'process'
VALUE = 'value'
BRANCH = 'branch'


@dataclass(frozen=True)
class Judgement:
    """Γ ⊢ P, Γ ⊢ v : T, or Γ ⊢ branch : branch-type."""
    kind: str
    context: TypingContext
    subject: Any
    type: Any = None

    def render(self) -> str:
        context = self.context.render(print_type)
        if self.kind == PROCESS:
            return f"{context} ⊢ {print_term(self.subject)}"
        if self.kind == BRANCH:
            return f"{context} ⊢ {print_branch(self.subject)} : {_branch_type_text(self.type)}"
        return f"{context} ⊢ {print_expr(self.subject)} : {print_type(self.type)}"


def _branch_type_text(t: MixBranchType) -> str:
    return f"{t.label}{t.polarity.value}{print_type(t.payload)}.{print_type(t.cont)}"


@dataclass(frozen=True)
class ContextSplit:
    """whole = left ∘ right."""
    whole: TypingContext
    left: TypingContext
    right: TypingContext

    def to_dict(self) -> dict:
        return {
            'op': 'split',
            'whole': self.whole.render(print_type),
            'left': self.left.render(print_type),
            'right': self.right.render(print_type),
        }


@dataclass(frozen=True)
class ContextAdd:
    """result = base + name:type."""
    base: TypingContext
    name: Name
    type: Any
    result: TypingContext

    def to_dict(self) -> dict:
        return {
            'op': 'add',
            'base': self.base.render(print_type),
            'name': str(self.name),
            'type': print_type(self.type),
            'result': self.result.render(print_type),
        }


@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: Judgement
    premises: Tuple['Derivation', ...] = ()
    records: Tuple[Any, ...] = ()
    side: Tuple[Tuple[str, Any], ...] = ()
    path: Tuple[int, ...] = field(default=(), compare=False)

    @property
    def context(self) -> TypingContext:
        return self.conclusion.context

    @property
    def subject(self):
        return self.conclusion.subject

    def side_condition(self, key: str):
        for name, value in self.side:
            if name == key:
                return value
        return None

    def splits(self) -> List[ContextSplit]:
        return [r for r in self.records if isinstance(r, ContextSplit)]

    def adds(self) -> List[ContextAdd]:
        return [r for r in self.records if isinstance(r, ContextAdd)]

    def walk(self) -> Iterator['Derivation']:
        yield self
        for premise in self.premises:
            yield from premise.walk()

    def rules(self) -> List[str]:
        return [node.rule for node in self.walk()]

    def skeleton(self) -> Tuple:
        """(rule, premise skeletons) with everything else stripped."""
        return (self.rule, tuple(p.skeleton() for p in self.premises))

    def to_dict(self) -> dict:
        data = {
            'rule': self.rule,
            'conclusion': self.conclusion.render(),
            'splits': [r.to_dict() for r in self.records],
            'premises': [p.to_dict() for p in self.premises],
        }
        if self.side:
            data['side'] = {key: _side_text(value) for key, value in self.side}
        return data


def _side_text(value):
    if isinstance(value, tuple):
        return [_side_text(v) for v in value]
    if isinstance(value, (Qualifier, View, Polarity)):
        return value.value
    try:
        return print_type(value)
    except TypeError:
        return str(value)


# ---------------------------------------------------------------- replay

def validate(derivation: Derivation) -> bool:
    """
    Re-check every node of ``derivation`` against the schema of its rule.

    Returns:
        True

    Raises:
        TypeCheckError: naming the first node that does not fit its rule
    """
    for node in derivation.walk():
        checker = _SCHEMAS.get(node.rule)
        if checker is None:
            _fail(node, f"unknown rule {node.rule}")
        checker(node)
    return True


def _fail(node: Derivation, message: str):
    raise TypeCheckError(node.rule, f"replay failed: {message}", node.path)


def _require(node: Derivation, condition: bool, message: str):
    if not condition:
        _fail(node, message)


def _premise(node: Derivation, index: int, kind: str, context: TypingContext, subject=None) -> Derivation:
    _require(node, len(node.premises) > index, f"missing premise {index}")
    premise = node.premises[index]
    _require(node, premise.conclusion.kind == kind, f"premise {index} is not a {kind} judgement")
    _require(node, premise.context == context,
             f"premise {index} context {premise.context.render(print_type)} "
             f"differs from {context.render(print_type)}")
    if subject is not None:
        _require(node, premise.subject == subject, f"premise {index} judges another subject")
    return premise


def _split(node: Derivation, index: int = 0) -> ContextSplit:
    splits = node.splits()
    _require(node, len(splits) > index, "missing context split")
    record = splits[index]
    _require(node, is_split(record.whole, record.left, record.right), "recorded split is not a split")
    return record


def _add(node: Derivation, index: int = 0) -> ContextAdd:
    adds = node.adds()
    _require(node, len(adds) > index, "missing context sum")
    record = adds[index]
    _require(node, ctx_add(record.base, record.name, record.type) == record.result,
             f"recorded sum + {record.name} is undefined or differs")
    return record


def _check_inact(node):
    _require(node, isinstance(node.subject, Inact), "subject is not 0")
    _require(node, un_ctx(node.context), "context is not unrestricted")


def _constant(expected_value, expected_type):
    def check(node):
        _require(node, node.subject == expected_value, f"subject is not {expected_value}")
        _require(node, node.conclusion.type == expected_type, "wrong constant type")
        _require(node, un_ctx(node.context), "context is not unrestricted")
    return check


def _check_var(node):
    name = node.subject
    _require(node, isinstance(name, Name), "subject is not a name")
    _require(node, node.context.lookup(name) == node.conclusion.type, f"{name} has another type in the context")
    _require(node, un_ctx(node.context.without(name)), "remaining context is not unrestricted")


def _check_sub(node):
    premise = _premise(node, 0, VALUE, node.context, node.subject)
    _require(node, subtype(premise.conclusion.type, node.conclusion.type), "subtyping premise fails")


def _check_not(node):
    _require(node, isinstance(node.subject, Not) and node.conclusion.type == BOOL_TYPE, "malformed negation")
    premise = _premise(node, 0, VALUE, node.context, node.subject.operand)
    _require(node, premise.conclusion.type == BOOL_TYPE, "operand is not boolean")


def _check_binary(node):
    _require(node, isinstance(node.subject, (And, Or)) and node.conclusion.type == BOOL_TYPE, "malformed operator")
    record = _split(node)
    _require(node, record.whole == node.context, "split does not start from the conclusion")
    left = _premise(node, 0, VALUE, record.left, node.subject.left)
    right = _premise(node, 1, VALUE, record.right, node.subject.right)
    _require(node, left.conclusion.type == BOOL_TYPE and right.conclusion.type == BOOL_TYPE, "operands are not boolean")


def _check_par(node):
    subject = node.subject
    _require(node, isinstance(subject, Par) and len(subject.components) >= 2, "subject is not a composition")
    record = _split(node)
    _require(node, record.whole == node.context, "split does not start from the conclusion")
    rest = subject.components[1:]
    right_subject = rest[0] if len(rest) == 1 else Par(rest)
    _premise(node, 0, PROCESS, record.left, subject.components[0])
    _premise(node, 1, PROCESS, record.right, right_subject)


def _check_if(node):
    subject = node.subject
    _require(node, isinstance(subject, If), "subject is not a conditional")
    record = _split(node)
    _require(node, record.whole == node.context, "split does not start from the conclusion")
    condition = _premise(node, 0, VALUE, record.left, subject.condition)
    _require(node, condition.conclusion.type == BOOL_TYPE, "condition is not boolean")
    _premise(node, 1, PROCESS, record.right, subject.then)
    _premise(node, 2, PROCESS, record.right, subject.orelse)


def _check_res(node):
    subject = node.subject
    _require(node, isinstance(subject, NewPair), "subject is not a restriction")
    left_type, right_type = node.side_condition('types')
    _require(node, dual(left_type, right_type), "endpoint types are not dual")
    inner = node.context.extend(subject.left, left_type).extend(subject.right, right_type)
    _premise(node, 0, PROCESS, inner, subject.body)


def _qualified(node, qualifier: Qualifier, context: TypingContext):
    if qualifier is Qualifier.UN:
        _require(node, un_ctx(context), "un process needs an unrestricted context")


def _endpoint(node, record: ContextSplit, endpoint: Name, expected_class):
    premise = _premise(node, 0, VALUE, record.left, endpoint)
    endpoint_type = premise.conclusion.type
    _require(node, isinstance(endpoint_type, expected_class), f"{endpoint} has no {expected_class.__name__}")
    return endpoint_type


def _continuation_context(node, record: ContextSplit, add_index: int, endpoint: Name, t) -> TypingContext:
    added = _add(node, add_index)
    _require(node, added.base == record.right.without(endpoint), "sum does not start from the right part")
    _require(node, added.name == endpoint and added.type == t, "sum adds the wrong assignment")
    return added.result


def _check_choice(node):
    subject = node.subject
    _require(node, isinstance(subject, Choice), "subject is not a choice")
    record = _split(node)
    _require(node, record.whole == node.context, "split does not start from the conclusion")
    _qualified(node, subject.qualifier, node.context)
    choice_type = _endpoint(node, record, subject.endpoint, MixChoiceType)
    _require(node, {b.key for b in subject.branches} == {b.key for b in choice_type.branches},
             "branches of the choice and of its type differ")
    for index, branch in enumerate(subject.branches):
        branch_type = choice_type.lookup(branch.label, branch.polarity)
        context = _continuation_context(node, record, index, subject.endpoint, branch_type.cont)
        premise = _premise(node, index + 1, BRANCH, context, branch)
        _require(node, premise.conclusion.type == branch_type, "branch judged against another branch type")


def _check_out_branch(node):
    branch, branch_type = node.subject, node.conclusion.type
    _require(node, isinstance(branch, Branch) and branch.polarity is Polarity.OUT, "subject is not an output branch")
    _require(node, branch_type.polarity is Polarity.OUT and branch_type.label == branch.label, "branch type mismatch")
    record = _split(node)
    _require(node, record.whole == node.context, "split does not start from the conclusion")
    value = _premise(node, 0, VALUE, record.left, branch.arg)
    _require(node, value.conclusion.type == branch_type.payload, "payload type mismatch")
    _premise(node, 1, PROCESS, record.right, branch.cont)


def _check_in_branch(node):
    branch, branch_type = node.subject, node.conclusion.type
    _require(node, isinstance(branch, Branch) and branch.polarity is Polarity.IN, "subject is not an input branch")
    _require(node, branch_type.polarity is Polarity.IN and branch_type.label == branch.label, "branch type mismatch")
    _require(node, branch.arg not in node.context, f"{branch.arg} is already in the context")
    _premise(node, 0, PROCESS, node.context.extend(branch.arg, branch_type.payload), branch.cont)


def _check_send(node):
    subject = node.subject
    _require(node, isinstance(subject, Send), "subject is not an output")
    record = _split(node, 0)
    _require(node, record.whole == node.context, "split does not start from the conclusion")
    com = _endpoint(node, record, subject.endpoint, ComType)
    _require(node, com.polarity is Polarity.OUT, f"{subject.endpoint} is not typed for output")
    after = _continuation_context(node, record, 0, subject.endpoint, com.cont)
    inner = _split(node, 1)
    _require(node, inner.whole == after, "second split does not start from the sum")
    value = _premise(node, 1, VALUE, inner.left, subject.value)
    _require(node, value.conclusion.type == com.payload, "payload type mismatch")
    _premise(node, 2, PROCESS, inner.right, subject.cont)


def _check_receive(node):
    subject = node.subject
    _require(node, isinstance(subject, Receive), "subject is not an input")
    record = _split(node)
    _require(node, record.whole == node.context, "split does not start from the conclusion")
    _qualified(node, subject.qualifier, node.context)
    com = _endpoint(node, record, subject.endpoint, ComType)
    _require(node, com.polarity is Polarity.IN, f"{subject.endpoint} is not typed for input")
    after = _continuation_context(node, record, 0, subject.endpoint, com.cont)
    _require(node, subject.var not in after, f"{subject.var} is already in the context")
    _premise(node, 1, PROCESS, after.extend(subject.var, com.payload), subject.cont)


def _check_branch(node):
    subject = node.subject
    _require(node, isinstance(subject, Offer), "subject is not a branching")
    record = _split(node)
    _require(node, record.whole == node.context, "split does not start from the conclusion")
    choice = _endpoint(node, record, subject.endpoint, ChoiceType)
    _require(node, choice.view is View.EXTERNAL, "branching needs an external choice type")
    _require(node, {l for l, _ in choice.branches} == {l for l, _ in subject.branches}, "label sets differ")
    for index, (label, cont) in enumerate(subject.branches):
        context = _continuation_context(node, record, index, subject.endpoint, choice.lookup(label))
        _premise(node, index + 1, PROCESS, context, cont)


def _check_select(node):
    subject = node.subject
    _require(node, isinstance(subject, Select), "subject is not a selection")
    record = _split(node)
    _require(node, record.whole == node.context, "split does not start from the conclusion")
    choice = _endpoint(node, record, subject.endpoint, ChoiceType)
    _require(node, choice.view is View.INTERNAL and len(choice.branches) == 1
             and choice.branches[0][0] == subject.label, "selection needs a one-branch internal choice type")
    context = _continuation_context(node, record, 0, subject.endpoint, choice.branches[0][1])
    _premise(node, 1, PROCESS, context, subject.cont)


_SCHEMAS: Dict[str, Any] = {
    'T-Inact': _check_inact,
    'T-Unit': _constant(UNIT, UNIT_TYPE),
    'T-True': _constant(TRUE, BOOL_TYPE),
    'T-False': _constant(FALSE, BOOL_TYPE),
    'T-Var': _check_var,
    'T-Sub': _check_sub,
    'T-Not': _check_not,
    'T-And': _check_binary,
    'T-Or': _check_binary,
    'T-Par': _check_par,
    'T-If': _check_if,
    'T-Res': _check_res,
    'T-Choice': _check_choice,
    'T-Out': _check_out_branch,
    'T-In': _check_in_branch,
    'T-Send': _check_send,
    'T-Recv': _check_receive,
    'T-Branch': _check_branch,
    'T-Sel': _check_select,
}


def find(derivation: Derivation, rule: str) -> List[Derivation]:
    return [node for node in derivation.walk() if node.rule == rule]


def subject_derivation(derivation: Derivation, subject) -> Optional[Derivation]:
    """The first process node judging ``subject``."""
    for node in derivation.walk():
        if node.conclusion.kind == PROCESS and node.subject == subject:
            return node
    return None


__all__ = [
    'Judgement', 'ContextSplit', 'ContextAdd', 'Derivation', 'validate', 'find',
    'subject_derivation', 'PROCESS', 'VALUE', 'BRANCH',
]
