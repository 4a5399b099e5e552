"""
Binding structure: free names, capture-avoiding substitution and
alpha-equivalence for all three calculi.

Binders:
- pi: In(y, x) binds x in the continuation; New(x, P) binds x
- CMV+: an input branch l?x.P binds x; NewPair(y, z, P) binds y and z
- CMV: Receive(q, y, z, P) binds z; NewPair as in CMV+
"""
import logging
from typing import Dict, FrozenSet, Mapping, Set, Tuple

from .errors import SubstitutionError
from .names import Name, fresh_name
from .syntax import (
    And, Bang, Branch, Choice, Const, If, In, Inact, New, NewPair, Not, Offer,
    Or, Out, Par, Receive, Select, Send, Sum, Summand, Tau, children
)

logger = logging.getLogger('Workbench.Syntax')


def value_names(value) -> Set[Name]:
    """Names occurring in a value or expression."""
    if isinstance(value, Name):
        return {value}
    if isinstance(value, Not):
        return value_names(value.operand)
    if isinstance(value, (And, Or)):
        return value_names(value.left) | value_names(value.right)
    return set()


def free_names(term) -> FrozenSet[Name]:
    """
    Return the names of ``term`` not captured by a binder.

    Example:
        a!<z>.0 + b?(x).x!<x>.0 has free names {a, z, b}
    """
    return frozenset(_free(term))


def _free(term) -> Set[Name]:
    if isinstance(term, Sum):
        names = set()
        for summand in term.summands:
            names |= _summand_free(summand)
        return names
    if isinstance(term, Par):
        names = set()
        for component in term.components:
            names |= _free(component)
        return names
    if isinstance(term, New):
        return _free(term.body) - {term.name}
    if isinstance(term, NewPair):
        return _free(term.body) - {term.left, term.right}
    if isinstance(term, Bang):
        return _free(term.body)
    if isinstance(term, If):
        return value_names(term.condition) | _free(term.then) | _free(term.orelse)
    if isinstance(term, Choice):
        names = {term.endpoint}
        for branch in term.branches:
            names |= _branch_free(branch)
        return names
    if isinstance(term, Send):
        return {term.endpoint} | value_names(term.value) | _free(term.cont)
    if isinstance(term, Receive):
        return {term.endpoint} | (_free(term.cont) - {term.var})
    if isinstance(term, Select):
        return {term.endpoint} | _free(term.cont)
    if isinstance(term, Offer):
        names = {term.endpoint}
        for _, cont in term.branches:
            names |= _free(cont)
        return names
    return set()


def _summand_free(summand: Summand) -> Set[Name]:
    prefix = summand.prefix
    inner = _free(summand.cont)
    if isinstance(prefix, Out):
        names = {prefix.subject} | inner
        if prefix.obj is not None:
            names.add(prefix.obj)
        return names
    if isinstance(prefix, In):
        if prefix.param is not None:
            inner = inner - {prefix.param}
        return {prefix.subject} | inner
    return inner


def _branch_free(branch: Branch) -> Set[Name]:
    inner = _free(branch.cont)
    if branch.polarity.value == '?':
        return inner - {branch.arg}
    return value_names(branch.arg) | inner


def all_names(term) -> Set[Name]:
    """Every name occurring in ``term``, free or bound."""
    names = set(_free(term))
    stack = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, New):
            names.add(node.name)
        elif isinstance(node, NewPair):
            names.update((node.left, node.right))
        elif isinstance(node, Receive):
            names.add(node.var)
        elif isinstance(node, Sum):
            for summand in node.summands:
                if isinstance(summand.prefix, In) and summand.prefix.param is not None:
                    names.add(summand.prefix.param)
        elif isinstance(node, Choice):
            for branch in node.branches:
                if branch.polarity.value == '?':
                    names.add(branch.arg)
        stack.extend(children(node))
    return names


# ---------------------------------------------------------------- substitution

def apply_subst(term, sigma: Mapping[Name, object]):
    """
    Simultaneously replace the free names in the domain of ``sigma``.

    Binders that would capture a name in the range are alpha-converted
    first. Values other than names may only reach value positions; a
    constant landing in a channel position raises SubstitutionError.

    Example:
        (a?(x).x!<z>.0){x/z} becomes a?(x').x'!<x>.0
    """
    mapping = {k: v for k, v in sigma.items() if k != v}
    if not mapping:
        return term
    return _subst(term, mapping)


def _range_names(mapping: Mapping[Name, object]) -> Set[Name]:
    names = set()
    for value in mapping.values():
        names |= value_names(value)
    return names


def _channel(name: Name, mapping) -> Name:
    image = mapping.get(name, name)
    if not isinstance(image, Name):
        raise SubstitutionError(f"cannot substitute {image} for channel {name}")
    return image


def _value(value, mapping):
    if isinstance(value, Name):
        return mapping.get(value, value)
    if isinstance(value, Not):
        return Not(_value(value.operand, mapping))
    if isinstance(value, And):
        return And(_value(value.left, mapping), _value(value.right, mapping))
    if isinstance(value, Or):
        return Or(_value(value.left, mapping), _value(value.right, mapping))
    return value


def _enter(binders: Tuple[Name, ...], body, mapping):
    """Restrict ``mapping`` under ``binders`` and rename binders that would capture."""
    inner = {k: v for k, v in mapping.items() if k not in binders}
    body_free = _free(body)
    inner = {k: v for k, v in inner.items() if k in body_free}
    if not inner:
        return binders, inner
    captured = _range_names(inner)
    renamed = []
    for binder in binders:
        if binder in captured:
            avoid = body_free | captured | set(inner) | set(binders) | set(renamed)
            replacement = fresh_name(binder, avoid)
            logger.debug(f"Renaming binder {binder} to {replacement} to avoid capture")
            inner[binder] = replacement
            renamed.append(replacement)
        else:
            renamed.append(binder)
    return tuple(renamed), inner


def _subst(term, mapping):
    if not mapping:
        return term
    if isinstance(term, (Inact, Tau)) or (isinstance(term, Sum) and not term.summands):
        return term
    if isinstance(term, Sum):
        return Sum(tuple(_subst_summand(s, mapping) for s in term.summands))
    if isinstance(term, Par):
        return Par(tuple(_subst(c, mapping) for c in term.components))
    if isinstance(term, Bang):
        return Bang(_subst(term.body, mapping))
    if isinstance(term, New):
        (name,), inner = _enter((term.name,), term.body, mapping)
        return New(name, _subst(term.body, inner))
    if isinstance(term, NewPair):
        (left, right), inner = _enter((term.left, term.right), term.body, mapping)
        return NewPair(left, right, _subst(term.body, inner), term.annotation)
    if isinstance(term, If):
        return If(_value(term.condition, mapping), _subst(term.then, mapping), _subst(term.orelse, mapping))
    if isinstance(term, Choice):
        return Choice(
            term.qualifier,
            _channel(term.endpoint, mapping),
            tuple(_subst_branch(b, mapping) for b in term.branches)
        )
    if isinstance(term, Send):
        return Send(_channel(term.endpoint, mapping), _value(term.value, mapping), _subst(term.cont, mapping))
    if isinstance(term, Receive):
        (var,), inner = _enter((term.var,), term.cont, mapping)
        return Receive(term.qualifier, _channel(term.endpoint, mapping), var, _subst(term.cont, inner))
    if isinstance(term, Select):
        return Select(_channel(term.endpoint, mapping), term.label, _subst(term.cont, mapping))
    if isinstance(term, Offer):
        return Offer(
            _channel(term.endpoint, mapping),
            tuple((label, _subst(cont, mapping)) for label, cont in term.branches)
        )
    return term


def _subst_summand(summand: Summand, mapping) -> Summand:
    prefix = summand.prefix
    if isinstance(prefix, Out):
        obj = None if prefix.obj is None else _channel(prefix.obj, mapping)
        return Summand(Out(_channel(prefix.subject, mapping), obj), _subst(summand.cont, mapping))
    if isinstance(prefix, In):
        subject = _channel(prefix.subject, mapping)
        if prefix.param is None:
            return Summand(In(subject), _subst(summand.cont, mapping))
        (param,), inner = _enter((prefix.param,), summand.cont, mapping)
        return Summand(In(subject, param), _subst(summand.cont, inner))
    return Summand(prefix, _subst(summand.cont, mapping))


def _subst_branch(branch: Branch, mapping) -> Branch:
    if branch.polarity.value == '?':
        (var,), inner = _enter((branch.arg,), branch.cont, mapping)
        return Branch(branch.label, branch.polarity, var, _subst(branch.cont, inner))
    return Branch(branch.label, branch.polarity, _value(branch.arg, mapping), _subst(branch.cont, mapping))


def rename_binders(term, supply) -> object:
    """
    Give every binder of ``term`` a name drawn from ``supply(old_name)``.

    Used by canonicalization so that scope extrusion never needs side
    conditions: after this pass all binders are pairwise distinct and
    distinct from the free names.
    """
    return _freshen(term, {}, supply)


def _freshen(term, env: Dict[Name, Name], supply):
    def rn(name):
        return env.get(name, name)

    def val(value):
        return _value(value, env) if env else value

    if isinstance(term, Sum):
        summands = []
        for summand in term.summands:
            prefix = summand.prefix
            if isinstance(prefix, Out):
                obj = None if prefix.obj is None else rn(prefix.obj)
                summands.append(Summand(Out(rn(prefix.subject), obj), _freshen(summand.cont, env, supply)))
            elif isinstance(prefix, In):
                if prefix.param is None:
                    summands.append(Summand(In(rn(prefix.subject)), _freshen(summand.cont, env, supply)))
                else:
                    new = supply(prefix.param)
                    summands.append(Summand(
                        In(rn(prefix.subject), new),
                        _freshen(summand.cont, {**env, prefix.param: new}, supply)
                    ))
            else:
                summands.append(Summand(prefix, _freshen(summand.cont, env, supply)))
        return Sum(tuple(summands))
    if isinstance(term, Par):
        return Par(tuple(_freshen(c, env, supply) for c in term.components))
    if isinstance(term, Bang):
        return Bang(_freshen(term.body, env, supply))
    if isinstance(term, New):
        new = supply(term.name)
        return New(new, _freshen(term.body, {**env, term.name: new}, supply))
    if isinstance(term, NewPair):
        left, right = supply(term.left), supply(term.right)
        inner = {**env, term.left: left, term.right: right}
        return NewPair(left, right, _freshen(term.body, inner, supply), term.annotation)
    if isinstance(term, If):
        return If(val(term.condition), _freshen(term.then, env, supply), _freshen(term.orelse, env, supply))
    if isinstance(term, Choice):
        branches = []
        for branch in term.branches:
            if branch.polarity.value == '?':
                new = supply(branch.arg)
                branches.append(Branch(branch.label, branch.polarity, new,
                                       _freshen(branch.cont, {**env, branch.arg: new}, supply)))
            else:
                branches.append(Branch(branch.label, branch.polarity, val(branch.arg),
                                       _freshen(branch.cont, env, supply)))
        return Choice(term.qualifier, rn(term.endpoint), tuple(branches))
    if isinstance(term, Send):
        return Send(rn(term.endpoint), val(term.value), _freshen(term.cont, env, supply))
    if isinstance(term, Receive):
        new = supply(term.var)
        return Receive(term.qualifier, rn(term.endpoint), new, _freshen(term.cont, {**env, term.var: new}, supply))
    if isinstance(term, Select):
        return Select(rn(term.endpoint), term.label, _freshen(term.cont, env, supply))
    if isinstance(term, Offer):
        return Offer(rn(term.endpoint), tuple((label, _freshen(cont, env, supply)) for label, cont in term.branches))
    return term


# ---------------------------------------------------------------- alpha

def structure_key(term, env=None):
    """
    A nested-tuple key of ``term`` in which every binder is replaced by
    its de Bruijn level, so alpha-equivalent terms get equal keys.

    ``env`` may give free names a stand-in key; integer stand-ins count as
    enclosing binders.
    """
    return _key(term, dict(env or {}))


def _name_key(name: Name, env):
    if name in env:
        return ('b', env[name])
    return ('f', str(name))


def _value_key(value, env):
    if isinstance(value, Name):
        return ('n', _name_key(value, env))
    if isinstance(value, Const):
        return ('c', value.value)
    if isinstance(value, Not):
        return ('not', _value_key(value.operand, env))
    if isinstance(value, And):
        return ('and', _value_key(value.left, env), _value_key(value.right, env))
    if isinstance(value, Or):
        return ('or', _value_key(value.left, env), _value_key(value.right, env))
    return ('?', repr(value))


def _bind(env, *names):
    inner = dict(env)
    for name in names:
        inner[name] = max((level for level in inner.values() if isinstance(level, int)), default=-1) + 1
    return inner


def _key(term, env):
    if isinstance(term, Sum):
        keys = []
        for summand in term.summands:
            prefix = summand.prefix
            if isinstance(prefix, Out):
                obj = None if prefix.obj is None else _name_key(prefix.obj, env)
                keys.append(('out', _name_key(prefix.subject, env), obj, _key(summand.cont, env)))
            elif isinstance(prefix, In):
                if prefix.param is None:
                    keys.append(('in', _name_key(prefix.subject, env), None, _key(summand.cont, env)))
                else:
                    inner = _bind(env, prefix.param)
                    keys.append(('in', _name_key(prefix.subject, env), 'x', _key(summand.cont, inner)))
            else:
                keys.append(('tau', _key(summand.cont, env)))
        return ('sum', tuple(keys))
    if isinstance(term, Par):
        return ('par', tuple(_key(c, env) for c in term.components))
    if isinstance(term, Bang):
        return ('bang', _key(term.body, env))
    if isinstance(term, New):
        return ('new', _key(term.body, _bind(env, term.name)))
    if isinstance(term, NewPair):
        return ('newpair', term.annotation, _key(term.body, _bind(env, term.left, term.right)))
    if isinstance(term, Inact):
        return ('inact',)
    if isinstance(term, If):
        return ('if', _value_key(term.condition, env), _key(term.then, env), _key(term.orelse, env))
    if isinstance(term, Choice):
        keys = []
        for branch in term.branches:
            if branch.polarity.value == '?':
                inner = _bind(env, branch.arg)
                keys.append((branch.label, '?', None, _key(branch.cont, inner)))
            else:
                keys.append((branch.label, '!', _value_key(branch.arg, env), _key(branch.cont, env)))
        return ('choice', term.qualifier, _name_key(term.endpoint, env), tuple(keys))
    if isinstance(term, Send):
        return ('send', _name_key(term.endpoint, env), _value_key(term.value, env), _key(term.cont, env))
    if isinstance(term, Receive):
        return ('recv', term.qualifier, _name_key(term.endpoint, env), _key(term.cont, _bind(env, term.var)))
    if isinstance(term, Select):
        return ('select', _name_key(term.endpoint, env), term.label, _key(term.cont, env))
    if isinstance(term, Offer):
        return ('offer', _name_key(term.endpoint, env),
                tuple((label, _key(cont, env)) for label, cont in term.branches))
    return ('?', repr(term))


def alpha_eq(left, right) -> bool:
    """True iff the two terms differ only in the names of their binders."""
    return structure_key(left) == structure_key(right)
