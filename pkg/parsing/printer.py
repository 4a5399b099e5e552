"""
Pretty-printer producing text the parser reads back.

Trailing .0 continuations are omitted; restrictions, conditionals and
compound continuations are parenthesised where the grammar needs it.
"""
from sessiontypes.types import (
    BoolType, ChoiceType, ComType, End, MixChoiceType, Rec, TypeVar, UnitType
)
from calculi.names import Name
from calculi.syntax import (
    And, Bang, Choice, Const, If, In, New, NewPair, Not, Offer, Or, Out, Par,
    Receive, Select, Send, Sum, Tau, is_nil
)


def print_term(term) -> str:
    """
    Render a process of any calculus.

    Example:
        >>> print_term(parse("a!<z>.0 + b?(x).0", 'pi'))
        'a!<z> + b?(x)'
    """
    if isinstance(term, Par):
        return ' | '.join(_component(c) for c in term.components)
    if isinstance(term, New):
        return f"(nu {term.name}) {print_term(term.body)}"
    if isinstance(term, NewPair):
        if term.annotation is None:
            return f"(new {term.left} {term.right}) {print_term(term.body)}"
        return f"(new {term.left} {term.right} : {print_type(term.annotation)}) {print_term(term.body)}"
    if isinstance(term, If):
        return (f"if {print_expr(term.condition)} then {_guarded(term.then)} "
                f"else {print_term(term.orelse)}")
    return _simple(term)


def _component(term) -> str:
    if isinstance(term, (New, NewPair, If, Par)):
        return f"({print_term(term)})"
    return _simple(term)


def _guarded(term) -> str:
    if isinstance(term, If):
        return f"({print_term(term)})"
    return print_term(term)


def _simple(term) -> str:
    if is_nil(term):
        return '0'
    if isinstance(term, Sum):
        return ' + '.join(_summand(s) for s in term.summands)
    if isinstance(term, Bang):
        return f"!{_cont(term.body)}"
    if isinstance(term, Choice):
        branches = ' + '.join(print_branch(b) for b in term.branches)
        return f"{term.qualifier.value} {term.endpoint}({branches})"
    if isinstance(term, Send):
        return f"{term.endpoint}!{print_expr(term.value)}{_then(term.cont)}"
    if isinstance(term, Receive):
        return f"{term.qualifier.value} {term.endpoint}?{term.var}{_then(term.cont)}"
    if isinstance(term, Select):
        return f"{term.endpoint}<+{term.label}{_then(term.cont)}"
    if isinstance(term, Offer):
        branches = ', '.join(f"{label}: {print_term(cont)}" for label, cont in term.branches)
        return f"{term.endpoint}>>{{{branches}}}"
    return f"({print_term(term)})"


def _then(cont) -> str:
    if is_nil(cont):
        return ''
    return f".{_cont(cont)}"


def _cont(term) -> str:
    """A continuation: one summand, a choice, a prefix, a bang, or parenthesised."""
    if is_nil(term):
        return '0'
    if isinstance(term, Sum) and len(term.summands) == 1:
        return _summand(term.summands[0])
    if isinstance(term, (Bang, Choice, Send, Receive, Select, Offer)):
        return _simple(term)
    return f"({print_term(term)})"


def _summand(summand) -> str:
    prefix = summand.prefix
    if isinstance(prefix, Out):
        head = f"{prefix.subject}!" if prefix.obj is None else f"{prefix.subject}!<{prefix.obj}>"
    elif isinstance(prefix, In):
        head = f"{prefix.subject}?" if prefix.param is None else f"{prefix.subject}?({prefix.param})"
    elif isinstance(prefix, Tau):
        head = 'tau'
    else:
        raise TypeError(f"not a prefix: {prefix!r}")
    return head + _then(summand.cont)


def print_branch(branch) -> str:
    """One CMV+ branch, as it appears inside a choice."""
    if branch.polarity.value == '!':
        head = f"{branch.label}!{print_expr(branch.arg)}"
    else:
        head = f"{branch.label}?({branch.arg})"
    return head + _then(branch.cont)


def print_expr(expr) -> str:
    if isinstance(expr, (Name, Const)):
        return str(expr)
    if isinstance(expr, Not):
        return f"not {_expr_atom(expr.operand)}"
    if isinstance(expr, And):
        return f"{_expr_atom(expr.left)} and {_expr_atom(expr.right)}"
    if isinstance(expr, Or):
        return f"{_expr_atom(expr.left)} or {_expr_atom(expr.right)}"
    raise TypeError(f"not an expression: {expr!r}")


def _expr_atom(expr) -> str:
    if isinstance(expr, (And, Or)):
        return f"({print_expr(expr)})"
    return print_expr(expr)


# ---------------------------------------------------------------- types

def print_type(t) -> str:
    """
    Render a session type.

    Example:
        >>> print_type(parse_type("un +{l!bool.end, l?bool.end}"))
        'un +{l!bool.end, l?bool.end}'
    """
    if isinstance(t, End):
        return 'end'
    if isinstance(t, UnitType):
        return 'unit'
    if isinstance(t, BoolType):
        return 'bool'
    if isinstance(t, TypeVar):
        return t.name
    if isinstance(t, Rec):
        return f"rec {t.var}.{print_type(t.body)}"
    if isinstance(t, MixChoiceType):
        branches = ', '.join(
            f"{b.label}{b.polarity.value}{_type_atom(b.payload)}.{print_type(b.cont)}" for b in t.branches
        )
        return f"{t.qualifier.value} {t.view.value}{{{branches}}}"
    if isinstance(t, ComType):
        return f"{t.qualifier.value} {t.polarity.value}{_type_atom(t.payload)}.{print_type(t.cont)}"
    if isinstance(t, ChoiceType):
        branches = ', '.join(f"{label}: {print_type(cont)}" for label, cont in t.branches)
        return f"{t.qualifier.value} {t.view.value}{{{branches}}}"
    raise TypeError(f"not a type: {t!r}")


def _type_atom(t) -> str:
    if isinstance(t, (Rec, ComType)):
        return f"({print_type(t)})"
    return print_type(t)
