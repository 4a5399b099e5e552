"""
Algorithmic type checking for CMV+ and CMV.

Instead of guessing context splits, the checkers thread the available
context through the term and report which linear names each subterm
consumed. A node's conclusion context is always the unrestricted part of
what was available plus the linear entries it consumed, which makes every
split explicit and lets the resulting derivation replay against the
declarative rules (see ``derivation.validate``).
"""
import logging
from typing import FrozenSet, Optional, Tuple

from calculi.errors import NotASessionTypeError, TypeCheckError
from calculi.names import Name
from calculi.syntax import (
    FALSE, TRUE, UNIT, And, Branch, Calculus, Choice, Const, If, Inact, NewPair, Not, Offer,
    Or, Par, Polarity, Qualifier, Receive, Select, Send, View
)
from parsing.printer import print_term, print_type

from .context import TypingContext, ctx_add
from .derivation import (
    BRANCH, PROCESS, VALUE, ContextAdd, ContextSplit, Derivation, Judgement
)
from .inference import infer_cmv_annotation, infer_mix_annotation
from .relations import dual, subtype
from .types import (
    BOOL_TYPE, UNIT_TYPE, ChoiceType, ComType, MixBranchType, MixChoiceType,
    dualize, is_contractive, un_pred, unfold
)

logger = logging.getLogger('Workbench.Types')

Used = FrozenSet[Name]

_CONSTANT_RULES = {TRUE: ('T-True', BOOL_TYPE), FALSE: ('T-False', BOOL_TYPE), UNIT: ('T-Unit', UNIT_TYPE)}


def restrict(context: TypingContext, used) -> TypingContext:
    """The unrestricted entries of ``context`` plus the linear ones in ``used``."""
    return TypingContext(e for e in context if un_pred(e[1]) or e[0] in used)


class _Checker:
    """Shared rules: values, 0, composition, conditionals and restriction."""

    calculus = None

    def check(self, context: TypingContext, term) -> Derivation:
        for name, t in context:
            if not is_contractive(t):
                raise TypeCheckError('context', f"type of {name} is not contractive", (), (str(name),))
        derivation, used = self._process(context, term, ())
        leftover = [n for n in context.linear_names() if n not in used]
        if leftover:
            raise TypeCheckError(
                'T-Inact', f"linear names never consumed: {', '.join(str(n) for n in leftover)}",
                (), tuple(str(n) for n in leftover)
            )
        logger.debug(f"Typed {print_term(term)} with {len(derivation.rules())} rule instances")
        return derivation

    # ------------------------------------------------------------ values

    def _value(self, context: TypingContext, value, path) -> Tuple[Derivation, Used]:
        """Γ ⊢ v : T for the type T the value has in Γ."""
        if isinstance(value, Const):
            rule, t = _CONSTANT_RULES[value]
            return Derivation(rule, Judgement(VALUE, context.unrestricted(), value, t), path=path), frozenset()
        if isinstance(value, Name):
            t = context.lookup(value)
            if t is None:
                raise TypeCheckError('T-Var', f"{value} is not in the context", path, (str(value),))
            used = frozenset({value}) if not un_pred(t) else frozenset()
            return Derivation('T-Var', Judgement(VALUE, restrict(context, used), value, t), path=path), used
        if isinstance(value, Not):
            premise, used = self._expect(context, value.operand, BOOL_TYPE, path)
            return Derivation('T-Not', Judgement(VALUE, premise.context, value, BOOL_TYPE), (premise,), path=path), used
        if isinstance(value, (And, Or)):
            left, left_used = self._expect(context, value.left, BOOL_TYPE, path)
            right, right_used = self._expect(context.without(*left_used), value.right, BOOL_TYPE, path)
            used = left_used | right_used
            whole = restrict(context, used)
            rule = 'T-And' if isinstance(value, And) else 'T-Or'
            return Derivation(
                rule, Judgement(VALUE, whole, value, BOOL_TYPE), (left, right),
                (ContextSplit(whole, left.context, right.context),), path=path
            ), used
        raise TypeCheckError('T-Var', f"cannot type the value {value!r}", path)

    def _expect(self, context: TypingContext, value, expected, path) -> Tuple[Derivation, Used]:
        """Γ ⊢ v : expected, inserting T-Sub where the value's own type differs."""
        derivation, used = self._value(context, value, path)
        actual = derivation.conclusion.type
        if actual == expected:
            return derivation, used
        if not subtype(actual, expected):
            raise TypeCheckError(
                'T-Sub', f"{value} has type {print_type(actual)}, expected {print_type(expected)}",
                path, (str(value),)
            )
        return Derivation('T-Sub', Judgement(VALUE, derivation.context, value, expected), (derivation,), path=path), used

    # ------------------------------------------------------------ processes

    def _process(self, context: TypingContext, term, path) -> Tuple[Derivation, Used]:
        if isinstance(term, Inact):
            return Derivation('T-Inact', Judgement(PROCESS, context.unrestricted(), term), path=path), frozenset()
        if isinstance(term, Par):
            return self._par(context, term, path)
        if isinstance(term, If):
            return self._if(context, term, path)
        if isinstance(term, NewPair):
            return self._res(context, term, path)
        return self._prefix(context, term, path)

    def _prefix(self, context, term, path):
        raise TypeCheckError('syntax', f"{type(term).__name__} is not a {self.calculus} process", path)

    def _par(self, context: TypingContext, term: Par, path, start: int = 0) -> Tuple[Derivation, Used]:
        """Right-nested binary T-Par; component i keeps the occurrence path + (i,)."""
        components = term.components[start:]
        left, left_used = self._process(context, components[0], path + (start,))
        available = context.without(*left_used)
        if len(components) == 2:
            right, right_used = self._process(available, components[1], path + (start + 1,))
        else:
            right, right_used = self._par(available, term, path, start + 1)
        used = left_used | right_used
        whole = restrict(context, used)
        subject = term if start == 0 else Par(components)
        return Derivation(
            'T-Par', Judgement(PROCESS, whole, subject), (left, right),
            (ContextSplit(whole, left.context, right.context),), path=path
        ), used

    def _if(self, context: TypingContext, term: If, path) -> Tuple[Derivation, Used]:
        condition, condition_used = self._expect(context, term.condition, BOOL_TYPE, path)
        available = context.without(*condition_used)
        then, then_used = self._process(available, term.then, path + (0,))
        orelse, else_used = self._process(available, term.orelse, path + (1,))
        if then_used != else_used:
            raise TypeCheckError(
                'T-If', "both arms must consume the same linear names", path,
                tuple(sorted(str(n) for n in then_used ^ else_used))
            )
        used = condition_used | then_used
        whole = restrict(context, used)
        return Derivation(
            'T-If', Judgement(PROCESS, whole, term), (condition, then, orelse),
            (ContextSplit(whole, condition.context, then.context),), path=path
        ), used

    def _annotation(self, term: NewPair):
        raise NotImplementedError

    def _res(self, context: TypingContext, term: NewPair, path) -> Tuple[Derivation, Used]:
        for endpoint in (term.left, term.right):
            if endpoint in context:
                raise TypeCheckError('T-Res', f"{endpoint} shadows a name of the context", path, (str(endpoint),))
        left_type = term.annotation if term.annotation is not None else self._annotation(term)
        if left_type is None:
            raise TypeCheckError(
                'T-Res', f"cannot infer a type for ({term.left} {term.right}); add an annotation",
                path, (str(term.left), str(term.right))
            )
        if not is_contractive(left_type):
            raise TypeCheckError('T-Res', f"annotation of {term.left} is not contractive", path, (str(term.left),))
        try:
            right_type = dualize(left_type)
        except NotASessionTypeError as e:
            raise TypeCheckError('T-Res', str(e), path, (str(term.left),)) from e
        if not dual(left_type, right_type):
            raise TypeCheckError('T-Res', "endpoint types are not dual", path, (str(term.left), str(term.right)))

        inner = context.extend(term.left, left_type).extend(term.right, right_type)
        body, body_used = self._process(inner, term.body, path + (0,))
        for endpoint, t in ((term.left, left_type), (term.right, right_type)):
            if not un_pred(t) and endpoint not in body_used:
                raise TypeCheckError(
                    'T-Res', f"linear endpoint {endpoint} is never consumed", path, (str(endpoint),)
                )
        used = body_used - {term.left, term.right}
        return Derivation(
            'T-Res', Judgement(PROCESS, restrict(context, used), term), (body,),
            side=(('types', (left_type, right_type)),), path=path
        ), used

    # ------------------------------------------------------------ endpoints

    def _endpoint(self, context: TypingContext, endpoint: Name, kind, path, target=None):
        """
        Γ1 ⊢ x : T where T is the unfolded context type, or ``target`` when
        given; T-Sub bridges recursion and dropped branches.
        """
        declared = context.lookup(endpoint)
        if declared is None:
            raise TypeCheckError('T-Var', f"{endpoint} is not in the context", path, (str(endpoint),))
        shape = unfold(declared)
        if not isinstance(shape, kind):
            raise TypeCheckError(
                'T-Var', f"{endpoint} has type {print_type(declared)}, expected a {kind.__name__}",
                path, (str(endpoint),)
            )
        wanted = target if target is not None else shape
        if wanted == declared:
            return self._value(context, endpoint, path)
        return self._expect(context, endpoint, wanted, path)

    def _continue(self, outer: TypingContext, endpoint: Name, cont_type, used: Used, rule: str, path):
        """
        Γ2 and Γ2 + x:U for a continuation that consumed ``used`` (which may
        include the endpoint itself).
        """
        outer_used = used - {endpoint}
        right = restrict(outer, outer_used)
        base = right.without(endpoint)
        result = ctx_add(base, endpoint, cont_type)
        if result is None:
            raise TypeCheckError(rule, f"cannot add {endpoint}: {print_type(cont_type)}", path, (str(endpoint),))
        if not un_pred(cont_type) and endpoint not in used:
            raise TypeCheckError(
                rule, f"continuation never consumes {endpoint}: {print_type(cont_type)}", path, (str(endpoint),)
            )
        return right, ContextAdd(base, endpoint, cont_type, result), outer_used

    def _bind(self, context: TypingContext, var: Name, t, rule: str, path) -> TypingContext:
        if var in context:
            raise TypeCheckError(rule, f"bound name {var} shadows a name of the context", path, (str(var),))
        return context.extend(var, t)

    def _same_consumption(self, rule: str, consumed, path):
        distinct = set(consumed)
        if len(distinct) > 1:
            differing = set.union(*map(set, distinct)) - set.intersection(*map(set, distinct))
            raise TypeCheckError(
                rule, "branches must consume the same linear names", path,
                tuple(sorted(str(n) for n in differing))
            )


class MixChecker(_Checker):
    """Γ ⊢ P for CMV+ processes."""

    calculus = 'CMV+'

    def _annotation(self, term: NewPair):
        return infer_mix_annotation(term)

    def _prefix(self, context, term, path):
        if isinstance(term, Choice):
            return self._choice(context, term, path)
        return super()._prefix(context, term, path)

    def _choice_type(self, context: TypingContext, term: Choice, path) -> Optional[MixChoiceType]:
        declared = context.lookup(term.endpoint)
        shape = unfold(declared) if declared is not None else None
        if not isinstance(shape, MixChoiceType):
            return None
        process_keys = {b.key for b in term.branches}
        type_keys = {b.key for b in shape.branches}
        if process_keys == type_keys:
            return shape
        if shape.view is View.INTERNAL and process_keys < type_keys:
            return MixChoiceType(shape.qualifier, shape.view, tuple(b for b in shape.branches if b.key in process_keys))
        missing = sorted(f"{label}{pol.value}" for label, pol in process_keys ^ type_keys)
        raise TypeCheckError(
            'T-Choice', f"branches of {term.endpoint} do not match its type", path, tuple(missing)
        )

    def _choice(self, context: TypingContext, term: Choice, path) -> Tuple[Derivation, Used]:
        choice_type = self._choice_type(context, term, path)
        endpoint, endpoint_used = self._endpoint(context, term.endpoint, MixChoiceType, path, choice_type)
        choice_type = endpoint.conclusion.type
        available = context.without(*endpoint_used)

        branches, consumed = [], []
        for index, branch in enumerate(term.branches):
            branch_type = choice_type.lookup(branch.label, branch.polarity)
            branch_context = ctx_add(available.without(term.endpoint), term.endpoint, branch_type.cont)
            derivation, used = self._branch(branch_context, branch, branch_type, path + (index,))
            branches.append(derivation)
            consumed.append(used)
        outer = [used - {term.endpoint} for used in consumed]
        self._same_consumption('T-Choice', [frozenset(u) for u in outer], path)

        adds = []
        right = None
        for branch, used in zip(term.branches, consumed):
            branch_type = choice_type.lookup(branch.label, branch.polarity)
            right, add, _ = self._continue(available, term.endpoint, branch_type.cont, used, 'T-Choice', path)
            adds.append(add)
        used = endpoint_used | outer[0]
        whole = restrict(context, used)
        if term.qualifier is Qualifier.UN and whole.linear_names():
            raise TypeCheckError(
                'T-Choice', "an un choice may not consume linear names", path,
                tuple(str(n) for n in whole.linear_names())
            )
        return Derivation(
            'T-Choice', Judgement(PROCESS, whole, term), (endpoint,) + tuple(branches),
            (ContextSplit(whole, endpoint.context, right),) + tuple(adds), path=path
        ), used

    def _branch(self, context: TypingContext, branch: Branch, branch_type: MixBranchType, path):
        if branch.polarity is Polarity.OUT:
            value, value_used = self._expect(context, branch.arg, branch_type.payload, path)
            cont, cont_used = self._process(context.without(*value_used), branch.cont, path)
            used = value_used | cont_used
            whole = restrict(context, used)
            return Derivation(
                'T-Out', Judgement(BRANCH, whole, branch, branch_type), (value, cont),
                (ContextSplit(whole, value.context, cont.context),), path=path
            ), used
        inner = self._bind(context, branch.arg, branch_type.payload, 'T-In', path)
        cont, cont_used = self._process(inner, branch.cont, path)
        if not un_pred(branch_type.payload) and branch.arg not in cont_used:
            raise TypeCheckError('T-In', f"linear variable {branch.arg} is never consumed", path, (str(branch.arg),))
        used = cont_used - {branch.arg}
        return Derivation(
            'T-In', Judgement(BRANCH, restrict(context, used), branch, branch_type), (cont,), path=path
        ), used


class CmvChecker(_Checker):
    """Γ ⊢ P for CMV processes."""

    calculus = 'CMV'

    def _annotation(self, term: NewPair):
        return infer_cmv_annotation(term)

    def _prefix(self, context, term, path):
        if isinstance(term, Send):
            return self._send(context, term, path)
        if isinstance(term, Receive):
            return self._receive(context, term, path)
        if isinstance(term, Offer):
            return self._offer(context, term, path)
        if isinstance(term, Select):
            return self._select(context, term, path)
        return super()._prefix(context, term, path)

    def _com(self, context, term, polarity: Polarity, path):
        endpoint, endpoint_used = self._endpoint(context, term.endpoint, ComType, path)
        com = endpoint.conclusion.type
        if com.polarity is not polarity:
            raise TypeCheckError(
                'T-Send' if polarity is Polarity.OUT else 'T-Recv',
                f"{term.endpoint} is typed {print_type(com)}", path, (str(term.endpoint),)
            )
        return endpoint, endpoint_used, com

    def _send(self, context: TypingContext, term: Send, path) -> Tuple[Derivation, Used]:
        endpoint, endpoint_used, com = self._com(context, term, Polarity.OUT, path)
        available = context.without(*endpoint_used)
        after = ctx_add(available.without(term.endpoint), term.endpoint, com.cont)
        value, value_used = self._expect(after, term.value, com.payload, path)
        cont, cont_used = self._process(after.without(*value_used), term.cont, path + (0,))
        inner_used = value_used | cont_used
        right, add, outer_used = self._continue(available, term.endpoint, com.cont, inner_used, 'T-Send', path)
        used = endpoint_used | outer_used
        whole = restrict(context, used)
        sum_context = add.result
        return Derivation(
            'T-Send', Judgement(PROCESS, whole, term), (endpoint, value, cont),
            (ContextSplit(whole, endpoint.context, right), add,
             ContextSplit(sum_context, value.context, cont.context)), path=path
        ), used

    def _receive(self, context: TypingContext, term: Receive, path) -> Tuple[Derivation, Used]:
        endpoint, endpoint_used, com = self._com(context, term, Polarity.IN, path)
        available = context.without(*endpoint_used)
        after = ctx_add(available.without(term.endpoint), term.endpoint, com.cont)
        inner = self._bind(after, term.var, com.payload, 'T-Recv', path)
        cont, cont_used = self._process(inner, term.cont, path + (0,))
        if not un_pred(com.payload) and term.var not in cont_used:
            raise TypeCheckError('T-Recv', f"linear variable {term.var} is never consumed", path, (str(term.var),))
        right, add, outer_used = self._continue(
            available, term.endpoint, com.cont, cont_used - {term.var}, 'T-Recv', path
        )
        used = endpoint_used | outer_used
        whole = restrict(context, used)
        if term.qualifier is Qualifier.UN and whole.linear_names():
            raise TypeCheckError(
                'T-Recv', "an un receive may not consume linear names", path,
                tuple(str(n) for n in whole.linear_names())
            )
        return Derivation(
            'T-Recv', Judgement(PROCESS, whole, term), (endpoint, cont),
            (ContextSplit(whole, endpoint.context, right), add), path=path
        ), used

    def _offer(self, context: TypingContext, term: Offer, path) -> Tuple[Derivation, Used]:
        endpoint, endpoint_used = self._endpoint(context, term.endpoint, ChoiceType, path)
        choice = endpoint.conclusion.type
        offered = {label for label, _ in term.branches}
        typed = {label for label, _ in choice.branches}
        if choice.view is not View.EXTERNAL or offered != typed:
            raise TypeCheckError(
                'T-Branch', f"{term.endpoint} offers labels its type does not", path,
                tuple(sorted(str(label) for label in offered ^ typed)) or (str(term.endpoint),)
            )
        available = context.without(*endpoint_used)
        premises, consumed = [], []
        for index, (label, cont) in enumerate(term.branches):
            branch_context = ctx_add(available.without(term.endpoint), term.endpoint, choice.lookup(label))
            derivation, used = self._process(branch_context, cont, path + (index,))
            premises.append(derivation)
            consumed.append(used)
        self._same_consumption('T-Branch', [frozenset(u - {term.endpoint}) for u in consumed], path)
        adds, right, outer_used = [], None, frozenset()
        for (label, _), used in zip(term.branches, consumed):
            right, add, outer_used = self._continue(available, term.endpoint, choice.lookup(label), used, 'T-Branch', path)
            adds.append(add)
        used = endpoint_used | outer_used
        whole = restrict(context, used)
        return Derivation(
            'T-Branch', Judgement(PROCESS, whole, term), (endpoint,) + tuple(premises),
            (ContextSplit(whole, endpoint.context, right),) + tuple(adds), path=path
        ), used

    def _select(self, context: TypingContext, term: Select, path) -> Tuple[Derivation, Used]:
        declared = context.lookup(term.endpoint)
        shape = unfold(declared) if declared is not None else None
        target = None
        if isinstance(shape, ChoiceType) and shape.view is View.INTERNAL:
            cont_type = shape.lookup(term.label)
            if cont_type is None:
                raise TypeCheckError('T-Sel', f"{term.endpoint} cannot select {term.label}", path, (str(term.label),))
            target = ChoiceType(shape.qualifier, View.INTERNAL, ((term.label, cont_type),))
        endpoint, endpoint_used = self._endpoint(context, term.endpoint, ChoiceType, path, target)
        choice = endpoint.conclusion.type
        if choice.view is not View.INTERNAL:
            raise TypeCheckError('T-Sel', f"{term.endpoint} is not typed for selection", path, (str(term.endpoint),))
        cont_type = choice.branches[0][1]
        available = context.without(*endpoint_used)
        cont_context = ctx_add(available.without(term.endpoint), term.endpoint, cont_type)
        cont, cont_used = self._process(cont_context, term.cont, path + (0,))
        right, add, outer_used = self._continue(available, term.endpoint, cont_type, cont_used, 'T-Sel', path)
        used = endpoint_used | outer_used
        whole = restrict(context, used)
        return Derivation(
            'T-Sel', Judgement(PROCESS, whole, term), (endpoint, cont),
            (ContextSplit(whole, endpoint.context, right), add), path=path
        ), used


def _context(context) -> TypingContext:
    if context is None:
        return TypingContext()
    if isinstance(context, TypingContext):
        return context
    return TypingContext(context)


def typecheck_cmvplus(context, term) -> Derivation:
    """
    Γ ⊢ P in CMV+.

    Args:
        context: TypingContext (or (name, type) pairs) for the free names
        term: CMV+ process

    Returns:
        A Derivation whose root judges ``term`` under ``context``

    Raises:
        TypeCheckError: naming the rule, the occurrence and the names involved

    Example:
        >>> typecheck_cmvplus(None, parse(PM_SOURCE, 'cmv+')).rules()[:2]
        ['T-Res', 'T-Par']
    """
    return MixChecker().check(_context(context), term)


def typecheck_cmv(context, term) -> Derivation:
    """Γ ⊢ P in CMV; same contract as ``typecheck_cmvplus``."""
    return CmvChecker().check(_context(context), term)


def is_typable(context, term, calculus) -> Optional[Derivation]:
    """The derivation, or None when the checker rejects ``term``."""
    check = typecheck_cmv if Calculus(calculus) is Calculus.CMV else typecheck_cmvplus
    try:
        return check(context, term)
    except TypeCheckError as e:
        logger.debug(f"Rejected: {e}")
        return None


__all__ = ['MixChecker', 'CmvChecker', 'typecheck_cmvplus', 'typecheck_cmv', 'is_typable', 'restrict']
