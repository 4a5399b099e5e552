"""
Abstract syntax of the three calculi.

Core Concepts:
- pi: guarded sums of prefixes, restriction of one name, parallel, replication
- CMV+ (mixed sessions): choices mixing send and receive branches on one endpoint
- CMV (classic sessions): send, receive, select and branch prefixes
- Par, NewPair, If and Inact are shared by the two session calculi

All nodes are frozen dataclasses holding tuples, so terms are hashable and
safe to share. Parallel composition is n-ary; the empty pi Sum is the pi
inactive process while session calculi use Inact.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional, Tuple, Union

from .names import Name


class Calculus(str, Enum):
    PI = 'pi'
    MIX = 'cmv+'
    CMV = 'cmv'


class Qualifier(str, Enum):
    LIN = 'lin'
    UN = 'un'


class Polarity(str, Enum):
    OUT = '!'
    IN = '?'

    def flip(self) -> 'Polarity':
        return Polarity.IN if self is Polarity.OUT else Polarity.OUT


class View(str, Enum):
    INTERNAL = '+'
    EXTERNAL = '&'

    def flip(self) -> 'View':
        return View.EXTERNAL if self is View.INTERNAL else View.INTERNAL


@dataclass(frozen=True, order=True)
class Label:
    """A branch label; ``mangled`` is 'snd' or 'rcv' on encoder output only."""
    text: str
    mangled: Optional[str] = None

    def __str__(self) -> str:
        if self.mangled:
            return f"{self.text}${self.mangled}"
        return self.text


# ---------------------------------------------------------------- values

@dataclass(frozen=True)
class Const:
    """The constants true, false and unit."""
    value: str

    def __str__(self) -> str:
        return self.value


TRUE = Const('true')
FALSE = Const('false')
UNIT = Const('unit')

Value = Union[Name, Const]


@dataclass(frozen=True)
class Not:
    operand: Any


@dataclass(frozen=True)
class And:
    left: Any
    right: Any


@dataclass(frozen=True)
class Or:
    left: Any
    right: Any


Expression = Union[Name, Const, Not, And, Or]


# ---------------------------------------------------------------- shared

@dataclass(frozen=True)
class Par:
    components: Tuple[Any, ...]


@dataclass(frozen=True)
class Inact:
    pass


@dataclass(frozen=True)
class NewPair:
    """(new left right : annotation) body; the annotation types ``left``."""
    left: Name
    right: Name
    body: Any
    annotation: Any = None


@dataclass(frozen=True)
class If:
    condition: Any
    then: Any
    orelse: Any


# ---------------------------------------------------------------- pi

@dataclass(frozen=True)
class Out:
    """Output prefix; ``obj`` is None for the nullary form a!."""
    subject: Name
    obj: Optional[Name] = None


@dataclass(frozen=True)
class In:
    """Input prefix; ``param`` is None for the nullary form a?."""
    subject: Name
    param: Optional[Name] = None


@dataclass(frozen=True)
class Tau:
    pass


@dataclass(frozen=True)
class Summand:
    prefix: Union[Out, In, Tau]
    cont: Any


@dataclass(frozen=True)
class Sum:
    summands: Tuple[Summand, ...] = ()


@dataclass(frozen=True)
class New:
    name: Name
    body: Any


@dataclass(frozen=True)
class Bang:
    body: Any


PI_NIL = Sum(())


# ---------------------------------------------------------------- CMV+

@dataclass(frozen=True)
class Branch:
    """One summand l*arg.cont; arg is a value for ! and a variable for ?."""
    label: Label
    polarity: Polarity
    arg: Any
    cont: Any

    @property
    def key(self) -> Tuple[Label, Polarity]:
        return (self.label, self.polarity)


@dataclass(frozen=True)
class Choice:
    qualifier: Qualifier
    endpoint: Name
    branches: Tuple[Branch, ...]


# ---------------------------------------------------------------- CMV

@dataclass(frozen=True)
class Send:
    endpoint: Name
    value: Any
    cont: Any


@dataclass(frozen=True)
class Receive:
    qualifier: Qualifier
    endpoint: Name
    var: Name
    cont: Any


@dataclass(frozen=True)
class Select:
    endpoint: Name
    label: Label
    cont: Any


@dataclass(frozen=True)
class Offer:
    endpoint: Name
    branches: Tuple[Tuple[Label, Any], ...]

    def lookup(self, label: Label):
        for candidate, cont in self.branches:
            if candidate == label:
                return cont
        return None


# ---------------------------------------------------------------- traversal

def children(term) -> Tuple[Any, ...]:
    """
    The immediate process subterms of ``term`` in occurrence order.

    Prefixes, values and labels are not processes, so a sum a.P + b.Q has
    the children (P, Q).
    """
    if isinstance(term, Par):
        return term.components
    if isinstance(term, (New, NewPair, Bang)):
        return (term.body,)
    if isinstance(term, Sum):
        return tuple(s.cont for s in term.summands)
    if isinstance(term, Choice):
        return tuple(b.cont for b in term.branches)
    if isinstance(term, If):
        return (term.then, term.orelse)
    if isinstance(term, (Send, Receive, Select)):
        return (term.cont,)
    if isinstance(term, Offer):
        return tuple(cont for _, cont in term.branches)
    return ()


def rebuild(term, kids: Tuple[Any, ...]):
    """Replace the process children of ``term`` positionally."""
    if isinstance(term, Par):
        return Par(tuple(kids))
    if isinstance(term, New):
        return New(term.name, kids[0])
    if isinstance(term, NewPair):
        return NewPair(term.left, term.right, kids[0], term.annotation)
    if isinstance(term, Bang):
        return Bang(kids[0])
    if isinstance(term, Sum):
        return Sum(tuple(Summand(s.prefix, k) for s, k in zip(term.summands, kids)))
    if isinstance(term, Choice):
        return Choice(term.qualifier, term.endpoint, tuple(
            Branch(b.label, b.polarity, b.arg, k) for b, k in zip(term.branches, kids)
        ))
    if isinstance(term, If):
        return If(term.condition, kids[0], kids[1])
    if isinstance(term, Send):
        return Send(term.endpoint, term.value, kids[0])
    if isinstance(term, Receive):
        return Receive(term.qualifier, term.endpoint, term.var, kids[0])
    if isinstance(term, Select):
        return Select(term.endpoint, term.label, kids[0])
    if isinstance(term, Offer):
        return Offer(term.endpoint, tuple((label, k) for (label, _), k in zip(term.branches, kids)))
    return term


def is_nil(term) -> bool:
    return isinstance(term, Inact) or (isinstance(term, Sum) and not term.summands)


def nil_for(calculus: Calculus):
    return PI_NIL if calculus is Calculus.PI else Inact()


def parallel(components, calculus: Calculus):
    """Compose ``components`` in parallel, dropping inactive ones."""
    flat = []
    for component in components:
        if isinstance(component, Par):
            flat.extend(component.components)
        elif not is_nil(component):
            flat.append(component)
    if not flat:
        return nil_for(calculus)
    if len(flat) == 1:
        return flat[0]
    return Par(tuple(flat))


def calculus_of(term) -> Calculus:
    """Guess the calculus of a term from its first distinctive node."""
    stack = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, (Sum, New, Bang)):
            return Calculus.PI
        if isinstance(node, Choice):
            return Calculus.MIX
        if isinstance(node, (Send, Receive, Select, Offer)):
            return Calculus.CMV
        stack.extend(children(node))
    return Calculus.MIX
