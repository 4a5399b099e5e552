"""
Canonical forms modulo structural congruence.

A canonical term is organised in levels. A level is a process position
(the whole term, a continuation, the body of a replication, a branch of a
conditional) and has the shape

    (new b_i ...)(thread_1 | ... | thread_n)

where every thread is a sum, choice, prefix, conditional or replication,
restrictions are hoisted as far out as the congruence allows, unused
restrictions and inactive components are dropped, threads and summands are
sorted, and binders are numbered _b0, _b1, ... in traversal order.

Replication unfolding !P = P | !P is not part of the canonical form; the
step engine unfolds lazily.

Algorithm:
1. give every binder a unique name, so scope extrusion has no side conditions
2. shape every level bottom-up: flatten, hoist, drop
3. arrange every level top-down. The threads of a level split into
   components joined by the restricted names they share. Per component the
   restricted names are coloured by refinement over a key that ignores
   their spelling; remaining ties are broken by individualizing one name
   at a time. Every discrete colouring gives one candidate order and the
   least candidate wins. Components are then sorted by their text.
4. order binders and orient restricted pairs by first use, number binders
"""
import logging
from collections import Counter
from typing import Dict, Iterator, List, Optional, Set, Tuple

from .binding import free_names, rename_binders, structure_key
from .errors import CanonicalFormError, NotASessionTypeError
from .names import Name, NameKind
from .syntax import (
    And, Bang, Branch, Calculus, Choice, If, In, New, NewPair, Not, Offer, Or, Out,
    Par, Receive, Select, Send, Sum, Summand, calculus_of, children, is_nil,
    parallel, rebuild
)

logger = logging.getLogger('Workbench.Syntax')

LEAF_LIMIT = 20000


class BinderSupply:
    """Hands out ``<prefix>0``, ``<prefix>1``, ... skipping names in ``avoid``."""

    def __init__(self, prefix: str, avoid: Set[Name]):
        self.prefix = prefix
        self.avoid = avoid
        self.counter = 0

    def __call__(self, old: Name) -> Name:
        while True:
            name = Name(self.prefix, index=self.counter, kind=NameKind.BOUND, origin=old.provenance())
            self.counter += 1
            if name not in self.avoid:
                return name


def flip_annotation(annotation):
    """The annotation of a restricted pair as seen from its other endpoint."""
    flip = getattr(annotation, 'dual', None)
    if flip is None:
        return annotation
    try:
        return flip()
    except NotASessionTypeError:
        return annotation


# ---------------------------------------------------------------- levels

def split_level(term) -> Tuple[Tuple, Tuple]:
    """
    Peel the restrictions and parallel components of one level.

    Binders come back with an empty body. Only sound when binder names are
    pairwise distinct and distinct from free names, which holds for
    canonical terms.

    Returns:
        (binders, threads)
    """
    binders = []
    threads = []

    def walk(node):
        if isinstance(node, Par):
            for component in node.components:
                walk(component)
        elif isinstance(node, New):
            binders.append(New(node.name, None))
            walk(node.body)
        elif isinstance(node, NewPair):
            binders.append(NewPair(node.left, node.right, None, node.annotation))
            walk(node.body)
        elif not is_nil(node):
            threads.append(node)

    walk(term)
    return tuple(binders), tuple(threads)


def assemble_level(binders, threads, calculus: Calculus):
    """Inverse of split_level."""
    body = parallel(threads, calculus)
    for binder in reversed(tuple(binders)):
        if isinstance(binder, New):
            body = New(binder.name, body)
        else:
            body = NewPair(binder.left, binder.right, body, binder.annotation)
    return body


def binder_names(binder) -> Tuple[Name, ...]:
    if isinstance(binder, New):
        return (binder.name,)
    return (binder.left, binder.right)


# ---------------------------------------------------------------- entry point

def canonicalize(term, calculus: Optional[Calculus] = None):
    """
    Return the canonical representative of the congruence class of ``term``.

    Two terms are structurally congruent (replication unfolding aside) iff
    their canonical forms are equal.

    Raises:
        CanonicalFormError: a level has more than LEAF_LIMIT symmetric orders

    Example:
        a!<z>.0 | (nu x) 0  becomes  a!<z>
    """
    calculus = calculus or calculus_of(term)
    avoid = set(free_names(term))
    fresh = rename_binders(term, BinderSupply('_f', avoid))
    arranged = _arrange(_shape(fresh, calculus), calculus, {}, 0)
    return rename_binders(_orient(arranged, calculus), BinderSupply('_b', avoid))


def is_canonical(term, calculus: Optional[Calculus] = None) -> bool:
    return canonicalize(term, calculus) == term


# ---------------------------------------------------------------- shaping

def _shape(term, calculus: Calculus):
    binders, threads = split_level(term)
    threads = [_shape_thread(thread, calculus) for thread in threads]
    used = set()
    for thread in threads:
        used |= free_names(thread)
    binders = [b for b in binders if set(binder_names(b)) & used]
    return assemble_level(binders, threads, calculus)


def _shape_thread(thread, calculus: Calculus):
    if isinstance(thread, Sum):
        return Sum(tuple(Summand(s.prefix, _shape(s.cont, calculus)) for s in thread.summands))
    if isinstance(thread, Choice):
        return Choice(thread.qualifier, thread.endpoint, tuple(
            Branch(b.label, b.polarity, b.arg, _shape(b.cont, calculus)) for b in thread.branches
        ))
    if isinstance(thread, Offer):
        return Offer(thread.endpoint, tuple((label, _shape(cont, calculus)) for label, cont in thread.branches))
    return rebuild(thread, tuple(_shape(kid, calculus) for kid in children(thread)))


# ---------------------------------------------------------------- coarse keys

def _coarse_name(name: Name, env):
    if name in env:
        return ('b', env[name])
    if name.kind is NameKind.BOUND:
        return ('*',)
    return ('f', str(name))


def _coarse_value(value, env):
    if isinstance(value, Name):
        return ('n', _coarse_name(value, env))
    if isinstance(value, Not):
        return ('not', _coarse_value(value.operand, env))
    if isinstance(value, (And, Or)):
        return (type(value).__name__, _coarse_value(value.left, env), _coarse_value(value.right, env))
    return ('c', str(value))


def _bind(env, name):
    inner = dict(env)
    inner[name] = max((level for level in inner.values() if isinstance(level, int)), default=-1) + 1
    return inner


def _annotation_key(annotation):
    if annotation is None:
        return ()
    return tuple(sorted({repr(annotation), repr(flip_annotation(annotation))}))


def _coarse_level(term, env):
    binders, threads = split_level(term)
    binder_keys = sorted(
        repr(('new',)) if isinstance(b, New) else repr(('pair', _annotation_key(b.annotation)))
        for b in binders
    )
    return ('level', tuple(binder_keys), tuple(sorted(repr(_coarse(t, env)) for t in threads)))


def _coarse_summand(summand: Summand, env):
    prefix = summand.prefix
    if isinstance(prefix, Out):
        obj = ('-',) if prefix.obj is None else _coarse_name(prefix.obj, env)
        return ('out', _coarse_name(prefix.subject, env), obj, _coarse_level(summand.cont, env))
    if isinstance(prefix, In):
        if prefix.param is None:
            return ('in', _coarse_name(prefix.subject, env), ('-',), _coarse_level(summand.cont, env))
        inner = _bind(env, prefix.param)
        return ('in', _coarse_name(prefix.subject, env), ('x',), _coarse_level(summand.cont, inner))
    return ('tau', ('-',), ('-',), _coarse_level(summand.cont, env))


def _coarse_branch(branch: Branch, env):
    if branch.polarity.value == '?':
        inner = _bind(env, branch.arg)
        return (str(branch.label), '?', ('x',), _coarse_level(branch.cont, inner))
    return (str(branch.label), '!', _coarse_value(branch.arg, env), _coarse_level(branch.cont, env))


def _coarse(thread, env):
    """A key invariant under congruence and the spelling of restricted names."""
    if isinstance(thread, Sum):
        return ('sum', tuple(sorted(repr(_coarse_summand(s, env)) for s in thread.summands)))
    if isinstance(thread, Choice):
        return ('choice', thread.qualifier.value, _coarse_name(thread.endpoint, env),
                tuple(sorted(repr(_coarse_branch(b, env)) for b in thread.branches)))
    if isinstance(thread, Bang):
        return ('bang', _coarse_level(thread.body, env))
    if isinstance(thread, If):
        return ('if', _coarse_value(thread.condition, env),
                _coarse_level(thread.then, env), _coarse_level(thread.orelse, env))
    if isinstance(thread, Send):
        return ('send', _coarse_name(thread.endpoint, env), _coarse_value(thread.value, env),
                _coarse_level(thread.cont, env))
    if isinstance(thread, Receive):
        return ('recv', thread.qualifier.value, _coarse_name(thread.endpoint, env),
                _coarse_level(thread.cont, _bind(env, thread.var)))
    if isinstance(thread, Select):
        return ('select', _coarse_name(thread.endpoint, env), str(thread.label),
                _coarse_level(thread.cont, env))
    if isinstance(thread, Offer):
        return ('offer', _coarse_name(thread.endpoint, env),
                tuple(sorted(repr((str(label), _coarse_level(cont, env))) for label, cont in thread.branches)))
    if isinstance(thread, (Par, New, NewPair)) or is_nil(thread):
        return _coarse_level(thread, env)
    return ('?', repr(thread))


# ---------------------------------------------------------------- arrangement

def _exact(term, env) -> str:
    return repr(structure_key(term, env))


def _arrange(term, calculus: Calculus, env, depth: int):
    """Fix the order of every level of ``term``; ``env`` keys the enclosing binders."""
    binders, threads = split_level(term)
    parts = []
    for part_binders, part_threads in _components(binders, threads):
        part_binders, part_threads = _arrange_component(part_binders, part_threads, calculus, env, depth)
        text = _exact(assemble_level(part_binders, part_threads, calculus), env)
        parts.append((text, part_binders, part_threads))
    parts.sort(key=lambda part: part[0])
    return assemble_level(
        tuple(b for _, part_binders, _ in parts for b in part_binders),
        tuple(t for _, _, part_threads in parts for t in part_threads),
        calculus
    )


def _components(binders, threads) -> List[Tuple[Tuple, Tuple]]:
    """Group threads that share restricted names of this level."""
    owner = {}
    for index, binder in enumerate(binders):
        for name in binder_names(binder):
            owner[name] = index
    parent = list(range(len(binders)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    anchors = []
    for thread in threads:
        used = sorted({owner[n] for n in free_names(thread) if n in owner})
        for other in used[1:]:
            parent[find(other)] = find(used[0])
        anchors.append(used[0] if used else None)

    groups: Dict[object, Tuple[List, List]] = {}
    for index, binder in enumerate(binders):
        groups.setdefault(find(index), ([], []))[0].append(binder)
    loose = []
    for thread, anchor in zip(threads, anchors):
        if anchor is None:
            loose.append(((), (thread,)))
        else:
            groups[find(anchor)][1].append(thread)
    return [(tuple(b), tuple(t)) for b, t in groups.values()] + loose


def _arrange_component(binders, threads, calculus: Calculus, env, depth: int):
    names = [n for b in binders for n in binder_names(b)]
    partner, side = {}, {}
    for binder in binders:
        if isinstance(binder, NewPair):
            partner[binder.left], partner[binder.right] = binder.right, binder.left
            side[binder.left] = 'pair ' + repr(binder.annotation)
            side[binder.right] = 'pair ' + repr(flip_annotation(binder.annotation))
        else:
            side[binder.name] = 'new'
    uses = {n: [] for n in names}
    for thread in threads:
        for name in free_names(thread):
            if name in uses:
                uses[name].append(thread)

    def refine(colors):
        while True:
            stand_in = dict(env)
            stand_in.update((n, ('k', colors[n])) for n in names)
            signature = {}
            for name in names:
                marked = dict(stand_in)
                marked[name] = ('m',)
                mate = colors[partner[name]] if name in partner else -1
                signature[name] = (colors[name], side[name], mate,
                                   tuple(sorted(repr(_coarse(t, marked)) for t in uses[name])))
            refined = _ranked(signature)
            if len(set(refined.values())) == len(set(colors.values())):
                return refined
            colors = refined

    leaves = []

    def search(colors):
        colors = refine(colors)
        counts = Counter(colors.values())
        tied = [color for color, count in counts.items() if count > 1]
        if not tied:
            leaves.append(colors)
            if len(leaves) > LEAF_LIMIT:
                raise CanonicalFormError(f"More than {LEAF_LIMIT} symmetric orders of one level")
            return
        cell = min(tied)
        for chosen in sorted((n for n in names if colors[n] == cell), key=str):
            search(_ranked({
                n: (c, 0 if c != cell or n == chosen else 1) for n, c in colors.items()
            }))

    search({n: 0 for n in names})
    if len(leaves) > 1:
        logger.debug(f"Level at depth {depth} has {len(leaves)} symmetric orders")

    best = None
    for colors in leaves:
        inner = dict(env)
        inner.update((n, ('c', depth, colors[n])) for n in names)
        arranged = sorted((_arrange_thread(t, calculus, inner, depth + 1) for t in threads),
                          key=lambda t: _exact(t, inner))
        oriented = sorted((_orient_by(b, colors) for b in binders),
                          key=lambda b: min(colors[n] for n in binder_names(b)))
        text = _exact(assemble_level(oriented, arranged, calculus), env)
        if best is None or text < best[0]:
            best = (text, tuple(oriented), tuple(arranged))
    return best[1], best[2]


def _ranked(keys) -> Dict[Name, int]:
    order = {key: rank for rank, key in enumerate(sorted(set(keys.values())))}
    return {name: order[key] for name, key in keys.items()}


def _orient_by(binder, colors):
    if isinstance(binder, NewPair) and colors[binder.right] < colors[binder.left]:
        return NewPair(binder.right, binder.left, None, flip_annotation(binder.annotation))
    return binder


def _arrange_thread(thread, calculus: Calculus, env, depth: int):
    if isinstance(thread, Sum):
        summands = []
        for s in thread.summands:
            inner = env
            if isinstance(s.prefix, In) and s.prefix.param is not None:
                inner = _bind(env, s.prefix.param)
            summands.append(Summand(s.prefix, _arrange(s.cont, calculus, inner, depth)))
        summands.sort(key=lambda s: _exact(Sum((s,)), env))
        return Sum(tuple(summands))
    if isinstance(thread, Choice):
        branches = []
        for b in thread.branches:
            inner = _bind(env, b.arg) if b.polarity.value == '?' else env
            branches.append(Branch(b.label, b.polarity, b.arg, _arrange(b.cont, calculus, inner, depth)))
        branches.sort(key=lambda b: _exact(Choice(thread.qualifier, thread.endpoint, (b,)), env))
        return Choice(thread.qualifier, thread.endpoint, tuple(branches))
    if isinstance(thread, Offer):
        branches = sorted(
            ((label, _arrange(cont, calculus, env, depth)) for label, cont in thread.branches),
            key=lambda pair: (pair[0].text, pair[0].mangled or '')
        )
        return Offer(thread.endpoint, tuple(branches))
    if isinstance(thread, Receive):
        return Receive(thread.qualifier, thread.endpoint, thread.var,
                       _arrange(thread.cont, calculus, _bind(env, thread.var), depth))
    return rebuild(thread, tuple(_arrange(kid, calculus, env, depth) for kid in children(thread)))


# ---------------------------------------------------------------- orientation

def names_in_order(term) -> Iterator[Name]:
    """Every name occurrence of ``term`` in printing order, binders included."""
    if isinstance(term, Sum):
        for summand in term.summands:
            prefix = summand.prefix
            if isinstance(prefix, Out):
                yield prefix.subject
                if prefix.obj is not None:
                    yield prefix.obj
            elif isinstance(prefix, In):
                yield prefix.subject
                if prefix.param is not None:
                    yield prefix.param
            yield from names_in_order(summand.cont)
    elif isinstance(term, New):
        yield term.name
        yield from names_in_order(term.body)
    elif isinstance(term, NewPair):
        yield term.left
        yield term.right
        yield from names_in_order(term.body)
    elif isinstance(term, If):
        yield from _value_in_order(term.condition)
        yield from names_in_order(term.then)
        yield from names_in_order(term.orelse)
    elif isinstance(term, Choice):
        yield term.endpoint
        for branch in term.branches:
            yield from _value_in_order(branch.arg)
            yield from names_in_order(branch.cont)
    elif isinstance(term, Send):
        yield term.endpoint
        yield from _value_in_order(term.value)
        yield from names_in_order(term.cont)
    elif isinstance(term, Receive):
        yield term.endpoint
        yield term.var
        yield from names_in_order(term.cont)
    elif isinstance(term, (Select, Offer)):
        yield term.endpoint
        for kid in children(term):
            yield from names_in_order(kid)
    else:
        for kid in children(term):
            yield from names_in_order(kid)


def _value_in_order(value) -> Iterator[Name]:
    if isinstance(value, Name):
        yield value
    elif isinstance(value, Not):
        yield from _value_in_order(value.operand)
    elif isinstance(value, (And, Or)):
        yield from _value_in_order(value.left)
        yield from _value_in_order(value.right)


def _orient(term, calculus: Calculus):
    """Order the binders of every level by first use and orient restricted pairs."""
    binders, threads = split_level(term)
    threads = tuple(rebuild(t, tuple(_orient(kid, calculus) for kid in children(t))) for t in threads)
    if not binders:
        return assemble_level(binders, threads, calculus)

    first_use = {}
    position = 0
    for thread in threads:
        for name in names_in_order(thread):
            first_use.setdefault(name, position)
            position += 1
    never = position + 1

    oriented = []
    for binder in binders:
        if isinstance(binder, NewPair):
            left_at = first_use.get(binder.left, never)
            right_at = first_use.get(binder.right, never)
            if right_at < left_at:
                binder = NewPair(binder.right, binder.left, None, flip_annotation(binder.annotation))
        oriented.append(binder)
    oriented.sort(key=lambda b: min(first_use.get(n, never) for n in binder_names(b)))
    return assemble_level(oriented, threads, calculus)


def restricted_names(term) -> Set[Name]:
    """Names bound by the outermost level of restrictions."""
    binders, _ = split_level(term)
    names = set()
    for binder in binders:
        names.update(binder_names(binder))
    return names
