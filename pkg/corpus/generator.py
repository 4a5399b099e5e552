"""
Generated corpora: random flat CMV+ networks and the well-typed CMV+
terms the operational-correspondence checks run over.

Everything here is driven by an explicit ``random.Random`` or is fully
deterministic, so equal seeds give equal corpora.
"""
import logging
import random
from itertools import combinations
from typing import Dict, List, Sequence, Tuple

from calculi.names import Name, NameKind
from calculi.syntax import (
    FALSE, TRUE, Branch, Calculus, Choice, Inact, Label, NewPair, Par, Polarity, Qualifier
)

from .library import PATTERN_M, TRANSLATION, CorpusEntry, worked_entry

logger = logging.getLogger('Workbench.Syntax')

ENDPOINT_PAIRS = (('x', 'y'), ('p', 'q'))
LABELS = ('l', 'm')
MAX_THREADS = 5

KEYS = (('l', '!'), ('l', '?'), ('m', '!'))
KEY_TAGS = {'!': 'o', '?': 'i'}
OBSERVERS = ('o1', 'o2', 'o3')
OBSERVER_CONTEXT = tuple(f"#free {o} : un &{{k?bool.end}}" for o in OBSERVERS)


# ---------------------------------------------------------------- random networks

def _random_branch(rng: random.Random, label: str, polarity: Polarity, endpoints, depth: int) -> Branch:
    if depth > 0 and rng.random() < 0.3:
        cont = _random_choice(rng, endpoints, depth - 1)
    else:
        cont = Inact()
    if polarity is Polarity.OUT:
        return Branch(Label(label), polarity, rng.choice((TRUE, FALSE)), cont)
    return Branch(Label(label), polarity, Name('z', kind=NameKind.VARIABLE), cont)


def _random_choice(rng: random.Random, endpoints: Sequence[Name], depth: int) -> Choice:
    qualifier = Qualifier.UN if rng.random() < 0.25 else Qualifier.LIN
    keys = [(label, polarity) for label in LABELS for polarity in Polarity]
    chosen = rng.sample(keys, rng.randint(1, 2))
    branches = tuple(_random_branch(rng, label, polarity, endpoints, depth) for label, polarity in chosen)
    return Choice(qualifier, rng.choice(endpoints), branches)


def random_mix_network(rng: random.Random, max_threads: int = MAX_THREADS):
    """
    A flat CMV+ network (new x y)[(new p q)](C1 | ... | Cn) of 3..max_threads
    choices, unannotated.

    Each choice picks lin (or, one time in four, un), an endpoint, and one
    or two distinct label/polarity branches; continuations are 0 or, now
    and then, one more choice.
    """
    pairs = ENDPOINT_PAIRS[:rng.randint(1, len(ENDPOINT_PAIRS))]
    endpoints = [Name(e, kind=NameKind.ENDPOINT) for pair in pairs for e in pair]
    threads = tuple(_random_choice(rng, endpoints, depth=1) for _ in range(rng.randint(3, max_threads)))
    term = Par(threads)
    for left, right in reversed(pairs):
        term = NewPair(Name(left, kind=NameKind.ENDPOINT), Name(right, kind=NameKind.ENDPOINT), term)
    return term


def random_injective_renaming(rng: random.Random, names: Sequence[Name]) -> Dict[Name, Name]:
    """A random injective renaming of ``names`` onto fresh names r0, r1, ..."""
    targets = [Name(f"r{i}") for i in range(len(names))]
    rng.shuffle(targets)
    return dict(zip(sorted(names), targets))


# ---------------------------------------------------------------- the OC corpus

def _tag(keys) -> str:
    return '.'.join(f"{label}{KEY_TAGS[polarity]}" for label, polarity in keys)


def _type(qualifier: str, keys) -> str:
    return f"{qualifier} +{{{', '.join(f'{label}{pol}bool.end' for label, pol in keys)}}}"


def _internal(qualifier: str, keys) -> str:
    branches = [f"{label}!true.0" if pol == '!' else f"{label}?z.0" for label, pol in keys]
    return f"{qualifier} x({' + '.join(branches)})"


def _external(qualifier: str, keys, observe: bool = True) -> str:
    branches = []
    for index, (label, pol) in enumerate(keys):
        cont = f"(lin {OBSERVERS[index]}(k?w.0))" if observe else '0'
        if pol == '!':
            branches.append(f"{label}?z.{cont}")
        else:
            branches.append(f"{label}!false.{cont}")
    return f"{qualifier} y({' + '.join(branches)})"


def _source(body: str, context: Tuple[str, ...] = OBSERVER_CONTEXT) -> str:
    return '\n'.join(('#calculus cmv+',) + tuple(context) + (body,)) + '\n'


def _entry(name: str, body: str, description: str, context: Tuple[str, ...] = OBSERVER_CONTEXT) -> CorpusEntry:
    return CorpusEntry(name, Calculus.MIX, _source(body, context), description)


def _subsets(items) -> List[Tuple]:
    return [subset for size in range(1, len(items) + 1) for subset in combinations(items, size)]


def _linear_family() -> List[CorpusEntry]:
    entries = []
    for keys in _subsets(KEYS):
        for chosen in _subsets(keys):
            body = f"(new x y : {_type('lin', keys)}) ({_internal('lin', chosen)} | {_external('lin', keys)})"
            entries.append(_entry(
                f"oc-lin-{_tag(keys)}-{_tag(chosen)}", body,
                "linear channel; internal choice on x, external on y"
            ))
    return entries


def _linear_on_unrestricted_family() -> List[CorpusEntry]:
    entries = []
    for keys in _subsets(KEYS[:2]):
        for senders in (1, 2):
            for receivers in (1, 2):
                threads = [_internal('lin', keys)] * senders + [_external('lin', keys)] * receivers
                body = f"(new x y : {_type('un', keys)}) ({' | '.join(threads)})"
                entries.append(_entry(
                    f"oc-lin-on-un-{_tag(keys)}-{senders}x{receivers}", body,
                    "linear choices on an unrestricted channel"
                ))
    return entries


def _unrestricted_family() -> List[CorpusEntry]:
    entries = []
    for keys in _subsets(KEYS[:2]):
        for x_qualifier, y_qualifier in (('un', 'lin'), ('lin', 'un'), ('un', 'un')):
            observe = not (x_qualifier == y_qualifier == 'un')
            body = (
                f"(new x y : {_type('un', keys)}) "
                f"({_internal(x_qualifier, keys)} | {_external(y_qualifier, keys, observe)})"
            )
            entries.append(_entry(
                f"oc-{x_qualifier}-{y_qualifier}-{_tag(keys)}", body,
                "unrestricted choices replicate"
            ))
    return entries


def _conditional_family() -> List[CorpusEntry]:
    bodies = {
        'oc-if-top': "if true then lin o1(k?w.0) else lin o2(k?w.0)",
        'oc-if-not': "if not false then 0 else lin o1(k?w.0)",
        'oc-if-received': (
            "(new x y : lin +{l!bool.end}) (lin x(l!true.0) | "
            "lin y(l?z.(if z then lin o1(k?w.0) else lin o2(k?w.0))))"
        ),
        'oc-if-or': (
            "(new x y : lin +{l!bool.end}) (lin x(l!false.0) | "
            "lin y(l?z.(if z or false then lin o1(k?w.0) else lin o2(k?w.0))))"
        ),
        'oc-if-branches': (
            "(new x y : lin +{l!bool.end, m!bool.end}) (lin x(l!false.0 + m!true.0) | "
            "lin y(l?z.(if z and true then lin o1(k?w.0) else 0) + m?z.(lin o2(k?w.0))))"
        ),
    }
    return [_entry(name, body, "conditionals in the source") for name, body in bodies.items()]


def _open_family() -> List[CorpusEntry]:
    specs = [
        ('oc-open-lin-int', "lin y(l!true.0)", ("#free y : lin +{l!bool.end}",)),
        ('oc-open-lin-ext', "lin y(l?z.0 + m!false.0)", ("#free y : lin &{l?bool.end, m!bool.end}",)),
        ('oc-open-un-int', "un y(l!true.0)", ("#free y : un +{l!bool.end}",)),
        ('oc-open-un-ext', "un y(l?z.0)", ("#free y : un &{l?bool.end}",)),
        ('oc-open-pair', "lin y(l!true.0) | lin o1(k?w.0)", ("#free y : lin +{l!bool.end}",) + OBSERVER_CONTEXT),
        ('oc-open-sequence', "lin y(l!true.(lin y(m?z.0)))", ("#free y : lin +{l!bool.lin &{m?bool.end}}",)),
    ]
    return [_entry(name, body, "free endpoints are observable", context) for name, body, context in specs]


def oc_corpus() -> List[CorpusEntry]:
    """
    The well-typed CMV+ terms of the operational-correspondence checks.

    Between them the terms exercise every encoder case: linear and
    unrestricted choices, on linear and unrestricted channels, on the
    internal and on the external side.
    """
    entries = [_entry('oc-inact', '0', "the inactive process", ())]
    entries += _linear_family()
    entries += _linear_on_unrestricted_family()
    entries += _unrestricted_family()
    entries += _conditional_family()
    entries += _open_family()
    entries += [worked_entry(PATTERN_M), worked_entry(TRANSLATION)]
    logger.debug(f"Generated {len(entries)} corpus terms")
    return entries
