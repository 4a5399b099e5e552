import pytest

from calculi.canonical import canonicalize
from calculi.errors import DuplicateLabelError, ParseError, ReservedNameError
from calculi.names import Name
from calculi.syntax import Calculus, Choice, NewPair, Par, Polarity, Qualifier, View
from parsing.parser import parse, parse_source, parse_type
from parsing.printer import print_term, print_type
from sessiontypes.relations import dual
from sessiontypes.types import MixChoiceType, dualize


def test_pi_round_trip():
    term = parse("a!<z>.0 + b?(x).0", 'pi')
    assert print_term(term) == "a!<z> + b?(x)"


def test_nullary_prefixes():
    assert print_term(parse("a! + b?.c!", 'pi')) == "a! + b?.c!"


def test_numerals_are_names():
    term = parse("1!", 'pi')
    assert print_term(term) == "1!"


def test_mixed_choice():
    term = parse("lin x(l!true.0 + l?(z).0)", 'cmv+')
    assert isinstance(term, Choice)
    assert term.qualifier is Qualifier.LIN
    assert [b.polarity for b in term.branches] == [Polarity.OUT, Polarity.IN]


def test_restriction_reaches_right():
    term = parse("(new x y) lin x(l!true.0) | lin y(l?z.0)", 'cmv+')
    assert isinstance(term, NewPair)
    assert isinstance(term.body, Par)


def test_reserved_names_rejected_in_cmvplus():
    with pytest.raises(ReservedNameError):
        parse("lin c(l!true.0)", 'cmv+')
    with pytest.raises(ReservedNameError):
        parse("lin y(l?s3.0)", 'cmv+')


def test_reserved_names_allowed_in_pi():
    parse("c! + d?.v!", 'pi')


def test_duplicate_branching_labels_rejected():
    with pytest.raises(DuplicateLabelError):
        parse("x>>{l: 0, l: 0}", 'cmv')


def test_syntax_errors_carry_a_position():
    with pytest.raises(ParseError) as excinfo:
        parse("a!<z>> b!", 'pi')
    assert excinfo.value.line == 1


def test_macros_expand_parenthesised():
    source = "#calculus pi\n#def P = a! | b!\n@P | c?\n"
    parsed = parse_source(source)
    assert parsed.calculus is Calculus.PI
    assert parsed.definitions == {'P': 'a! | b!'}
    assert print_term(parsed.term) == "a! | b! | c?"


def test_undefined_macro():
    with pytest.raises(ParseError):
        parse_source("#calculus pi\n@Q\n")


def test_free_declarations():
    parsed = parse_source("#calculus cmv+\n#free y : lin +{l!bool.end}\nlin y(l!true.0)\n")
    assert parsed.context[0][0] == Name('y')
    assert print_type(parsed.context[0][1]) == "lin +{l!bool.end}"


def test_missing_header_needs_an_explicit_calculus():
    with pytest.raises(ParseError):
        parse_source("a!")
    assert parse_source("a!", Calculus.PI).calculus is Calculus.PI


def test_mix_choice_type_and_its_dual():
    t = parse_type("un +{l!bool.end, l?bool.end}")
    assert isinstance(t, MixChoiceType)
    assert t.view is View.INTERNAL
    u = parse_type("un &{l?bool.end, l!bool.end}")
    assert dual(t, u)
    assert dual(t, dualize(t))


def test_non_contractive_types_rejected():
    with pytest.raises(ParseError):
        parse_type("rec a. a")


def test_repeated_type_branches_rejected():
    with pytest.raises(DuplicateLabelError):
        parse_type("lin +{l!bool.end, l!bool.end}")


def test_worked_sources_parse(lepi, pspi, pm, translation):
    assert lepi.calculus is Calculus.PI
    assert pspi.calculus is Calculus.PI
    assert pm.calculus is Calculus.MIX
    assert len(translation.context) == 4


def test_canonical_lepi_prints_stably(lepi):
    text = print_term(canonicalize(lepi.term, Calculus.PI))
    assert text == print_term(canonicalize(parse(text, 'pi'), Calculus.PI))
