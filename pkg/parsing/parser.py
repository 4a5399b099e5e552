"""
Parser for .picl sources and bare terms.

A source file looks like:

    #calculus cmv+
    #free b1 : un +{ok!unit.end}
    #def S1 = lin b1(ok!unit.0)
    (new x y) (@S1 | ...)

``#def`` macros are expanded textually (parenthesised) before parsing and
may use earlier macros; recursion is rejected. ``#free`` declarations form
the typing context of the term.
"""
import logging
import re
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from lark import Lark, Transformer
from lark.exceptions import UnexpectedInput, VisitError

from calculi.errors import DuplicateLabelError, ParseError, ReservedNameError
from calculi.names import Name, make_name
from calculi.syntax import (
    FALSE, PI_NIL, TRUE, UNIT, And, Bang, Branch, Calculus, Choice, If, In, Inact,
    Label, New, NewPair, Not, Offer, Or, Out, Par, Polarity, Qualifier, Receive,
    Select, Send, Sum, Summand, Tau, View
)
from sessiontypes.types import (
    BOOL_TYPE, END, UNIT_TYPE, ChoiceType, ComType, MixBranchType, MixChoiceType,
    Rec, TypeVar, is_contractive
)

from . import grammar

logger = logging.getLogger('Workbench.Syntax')

RESERVED_PATTERN = re.compile(r"^[cduvst][0-9]*$")
MACRO_REFERENCE = re.compile(r"@([A-Za-z_][A-Za-z0-9_]*)")

_PARSERS: Dict[str, Lark] = {}


def _parser(kind: str) -> Lark:
    if kind not in _PARSERS:
        source = {
            Calculus.PI.value: grammar.PI,
            Calculus.MIX.value: grammar.MIX,
            Calculus.CMV.value: grammar.CMV,
            'type': grammar.TYPE,
        }[kind]
        _PARSERS[kind] = Lark(source, parser='lalr', propagate_positions=True)
    return _PARSERS[kind]


@dataclass
class SourceFile:
    """A parsed .picl file."""
    calculus: Calculus
    term: object
    context: Tuple[Tuple[Name, object], ...] = ()
    definitions: Dict[str, str] = field(default_factory=dict)


# ---------------------------------------------------------------- transformers

class _TypeBuilder(Transformer):

    def label(self, children):
        token = children[0]
        if token.type == 'MANGLED':
            text, mangled = str(token).split('$')
            return Label(text, mangled)
        return Label(str(token))

    def lin(self, _):
        return Qualifier.LIN

    def un(self, _):
        return Qualifier.UN

    def internal(self, _):
        return View.INTERNAL

    def external(self, _):
        return View.EXTERNAL

    def pol_out(self, _):
        return Polarity.OUT

    def pol_in(self, _):
        return Polarity.IN

    def end(self, _):
        return END

    def unit_type(self, _):
        return UNIT_TYPE

    def bool_type(self, _):
        return BOOL_TYPE

    def tvar(self, children):
        return TypeVar(str(children[0]))

    def rec(self, children):
        return Rec(str(children[0]), children[1])

    def com_type(self, children):
        qualifier, polarity, payload, cont = children
        return ComType(qualifier, polarity, payload, cont)

    def mix_tbranch(self, children):
        label, polarity, payload, cont = children
        return MixBranchType(label, polarity, payload, cont)

    def plain_tbranch(self, children):
        return (children[0], children[1])

    def mix_choice_type(self, children):
        qualifier, view, *branches = children
        keys = [b.key for b in branches]
        if len(set(keys)) != len(keys):
            raise DuplicateLabelError(f"repeated label/polarity pair in {qualifier.value} {view.value}{{...}}")
        return MixChoiceType(qualifier, view, tuple(branches))

    def choice_type(self, children):
        qualifier, view, *branches = children
        labels = [label for label, _ in branches]
        if len(set(labels)) != len(labels):
            raise DuplicateLabelError(f"repeated label in {qualifier.value} {view.value}{{...}}")
        return ChoiceType(qualifier, view, tuple(branches))

    def start(self, children):
        return children[0]


class _TermBuilder(_TypeBuilder):
    """Builds process terms; rejects reserved names in CMV+ sources."""

    def __init__(self, calculus: Calculus):
        super().__init__()
        self.calculus = calculus

    def name(self, children):
        token = children[0]
        if self.calculus is Calculus.MIX and RESERVED_PATTERN.match(str(token)):
            raise ReservedNameError(
                f"name '{token}' is reserved for the encoder", token.line, token.column
            )
        return make_name(str(token))

    # values and expressions
    def true(self, _):
        return TRUE

    def false(self, _):
        return FALSE

    def unit(self, _):
        return UNIT

    def var(self, children):
        return children[0]

    def not_(self, children):
        return Not(children[0])

    def and_expr(self, children):
        result = children[0]
        for operand in children[1:]:
            result = And(result, operand)
        return result

    def or_expr(self, children):
        result = children[0]
        for operand in children[1:]:
            result = Or(result, operand)
        return result

    # shared
    def nil(self, _):
        return PI_NIL if self.calculus is Calculus.PI else Inact()

    def par(self, children):
        left, right = children
        parts = list(left.components) if isinstance(left, Par) else [left]
        parts += list(right.components) if isinstance(right, Par) else [right]
        return Par(tuple(parts))

    def restrict(self, children):
        if self.calculus is Calculus.PI:
            return New(children[0], children[1])
        if len(children) == 4:
            left, right, annotation, body = children
        else:
            (left, right, body), annotation = children, None
        if left == right:
            raise ParseError(f"restriction binds {left} twice")
        return NewPair(left, right, body, annotation)

    def ifte(self, children):
        return If(children[0], children[1], children[2])

    def _cont(self, children, count):
        return children[count] if len(children) > count else self.nil(None)

    # pi
    def out(self, children):
        return Out(children[0], children[1])

    def out_nullary(self, children):
        return Out(children[0])

    def inp(self, children):
        return In(children[0], children[1])

    def in_nullary(self, children):
        return In(children[0])

    def tau(self, _):
        return Tau()

    def summand(self, children):
        return Summand(children[0], self._cont(children, 1))

    def sum(self, children):
        return Sum(tuple(children))

    def single(self, children):
        return Sum((children[0],))

    def bang(self, children):
        return Bang(children[0])

    # cmv+
    def out_branch(self, children):
        return Branch(children[0], Polarity.OUT, children[1], self._cont(children, 2))

    def in_branch(self, children):
        return Branch(children[0], Polarity.IN, children[1], self._cont(children, 2))

    def choice(self, children):
        qualifier, endpoint, *branches = children
        return Choice(qualifier, endpoint, tuple(branches))

    # cmv
    def send(self, children):
        return Send(children[0], children[1], self._cont(children, 2))

    def receive(self, children):
        return Receive(children[0], children[1], children[2], self._cont(children, 3))

    def select(self, children):
        return Select(children[0], children[1], self._cont(children, 2))

    def offer_branch(self, children):
        return (children[0], children[1])

    def offer(self, children):
        endpoint, *branches = children
        labels = [label for label, _ in branches]
        if len(set(labels)) != len(labels):
            raise DuplicateLabelError(f"repeated label in branching on {endpoint}")
        return Offer(endpoint, tuple(branches))


# ---------------------------------------------------------------- entry points

def _run(kind: str, text: str, builder: Transformer):
    try:
        tree = _parser(kind).parse(text)
        return builder.transform(tree)
    except UnexpectedInput as e:
        logger.debug(f"Parse failure in {kind} text: {e}")
        first_line = str(e).strip().splitlines()[0] if str(e).strip() else 'unexpected input'
        raise ParseError(first_line, e.line, e.column) from e
    except VisitError as e:
        if isinstance(e.orig_exc, ParseError):
            raise e.orig_exc from None
        raise


def parse(text: str, calculus) -> object:
    """
    Parse a term of ``calculus``; ``#def`` directives and ``@NAME`` references are honoured.

    Args:
        text: surface text
        calculus: Calculus or its tag ('pi', 'cmv+', 'cmv')

    Returns:
        The process AST

    Raises:
        ParseError: with line and column on syntax errors
        ReservedNameError: for c, d, u, v, s, t (optionally indexed) in CMV+ sources
        DuplicateLabelError: for repeated labels in a CMV branching

    Example:
        >>> parse("lin x (l!true.0 + l?(z).0)", 'cmv+')
    """
    calculus = Calculus(calculus)
    body, definitions = _preprocess(text)
    return _run(calculus.value, _expand(body, definitions), _TermBuilder(calculus))


def parse_type(text: str):
    """
    Parse a session type.

    Raises:
        ParseError: on syntax errors and on non-contractive recursion
        DuplicateLabelError: for repeated label/polarity pairs
    """
    t = _run('type', text, _TermBuilder(Calculus.MIX))
    if not is_contractive(t):
        raise ParseError(f"recursive type is not contractive: {text.strip()}")
    return t


def parse_source(text: str, calculus: Optional[Calculus] = None) -> SourceFile:
    """
    Parse a whole .picl source with its ``#calculus`` header and ``#free`` context.

    An explicit ``calculus`` overrides the header.
    """
    body, definitions = _preprocess(text)
    header = None
    context = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith('#calculus'):
            header = stripped[len('#calculus'):].strip()
        elif stripped.startswith('#free'):
            declaration = stripped[len('#free'):].strip()
            if ':' not in declaration:
                raise ParseError("#free expects 'name : type'", line_number, 1)
            name_text, type_text = declaration.split(':', 1)
            name = make_name(name_text.strip())
            if any(existing == name for existing, _ in context):
                raise ParseError(f"{name} declared twice", line_number, 1)
            context.append((name, parse_type(type_text)))

    chosen = calculus or header
    if chosen is None:
        raise ParseError("missing #calculus header")
    try:
        chosen = Calculus(chosen)
    except ValueError:
        raise ParseError(f"unknown calculus '{chosen}'") from None

    term = _run(chosen.value, _expand(body, definitions), _TermBuilder(chosen))
    logger.debug(f"Parsed {chosen.value} source with {len(context)} free declarations")
    return SourceFile(calculus=chosen, term=term, context=tuple(context), definitions=definitions)


def _preprocess(text: str) -> Tuple[str, Dict[str, str]]:
    """Split directives from the term body; directive lines become blank to keep line numbers."""
    definitions = {}
    lines = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith('#def'):
            declaration = stripped[len('#def'):].strip()
            if '=' not in declaration:
                raise ParseError("#def expects 'NAME = TERM'", line_number, 1)
            macro, body = declaration.split('=', 1)
            macro = macro.strip()
            if macro in definitions:
                raise ParseError(f"macro {macro} defined twice", line_number, 1)
            definitions[macro] = body.strip()
            lines.append('')
        elif stripped.startswith('#'):
            lines.append('')
        else:
            lines.append(line)
    return '\n'.join(lines), definitions


def _expand(text: str, definitions: Dict[str, str], active: Tuple[str, ...] = ()) -> str:
    def replace(match):
        macro = match.group(1)
        if macro not in definitions:
            raise ParseError(f"undefined macro @{macro}")
        if macro in active:
            raise ParseError(f"recursive macro @{macro}")
        return '(' + _expand(definitions[macro], definitions, active + (macro,)) + ')'

    return MACRO_REFERENCE.sub(replace, text)
