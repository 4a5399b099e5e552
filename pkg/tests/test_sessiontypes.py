from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from calculi.binding import free_names
from calculi.errors import NotASessionTypeError, TypeCheckError
from calculi.names import Name
from calculi.syntax import Calculus
from corpus import oc_corpus
from parsing.parser import parse, parse_type
from parsing.printer import print_term
from semantics.lts import explore
from sessiontypes.checker import is_typable, typecheck_cmv, typecheck_cmvplus
from sessiontypes.context import TypingContext
from sessiontypes.derivation import validate
from sessiontypes.relations import dual, subtype, type_equiv
from sessiontypes.types import BOOL_TYPE, dualize, un_pred


def ctx(**entries):
    return TypingContext((Name(name), parse_type(text)) for name, text in entries.items())


# ---------------------------------------------------------------- relations

def test_recursive_types_are_equal_to_their_unfolding():
    assert type_equiv(parse_type("rec a. un !bool.a"), parse_type("un !bool.rec a. un !bool.a"))
    assert not type_equiv(parse_type("un !bool.end"), parse_type("lin !bool.end"))


def test_mixed_choice_duality():
    t1 = parse_type("un +{l!bool.end, l?bool.end}")
    t2 = parse_type("un &{l?bool.end, l!bool.end}")
    assert dual(t1, t2)
    assert not dual(t1, t1)
    assert dual(dualize(t2), t2)


def test_internal_choices_may_drop_branches():
    wide = parse_type("lin +{l!bool.end, m!bool.end}")
    narrow = parse_type("lin +{l!bool.end}")
    assert subtype(wide, narrow)
    assert not subtype(narrow, wide)


def test_external_choices_may_add_branches():
    narrow = parse_type("lin &{l?bool.end}")
    wide = parse_type("lin &{l?bool.end, m?bool.end}")
    assert subtype(narrow, wide)
    assert not subtype(wide, narrow)


def test_payload_types_have_no_dual():
    with pytest.raises(NotASessionTypeError):
        dualize(BOOL_TYPE)


def test_unrestricted_predicate():
    assert un_pred(parse_type("end"))
    assert un_pred(parse_type("un !bool.end"))
    assert not un_pred(parse_type("lin !bool.end"))


# ---------------------------------------------------------------- CMV+

def test_pattern_m_typechecks(pm):
    derivation = typecheck_cmvplus(pm.context, pm.term)
    rules = derivation.rules()
    assert rules[:2] == ['T-Res', 'T-Par']
    assert rules.count('T-Par') == 3
    assert rules.count('T-Choice') == 4
    assert validate(derivation)


def test_translation_source_typechecks(translation):
    derivation = typecheck_cmvplus(translation.context, translation.term)
    assert validate(derivation)


def test_annotations_are_inferred_for_one_shot_protocols():
    term = parse("(new x y)(lin x(l!true.0) | lin y(l?z.0))", 'cmv+')
    derivation = typecheck_cmvplus(None, term)
    assert derivation.rules()[0] == 'T-Res'


def test_free_endpoints_need_a_type():
    with pytest.raises(TypeCheckError) as excinfo:
        typecheck_cmvplus(None, parse("lin y(l!true.0)", 'cmv+'))
    assert excinfo.value.rule == 'T-Var'
    assert excinfo.value.names == ('y',)


def test_linear_names_must_be_consumed():
    with pytest.raises(TypeCheckError):
        typecheck_cmvplus(ctx(y="lin +{l!bool.end}"), parse("0", 'cmv+'))


def test_internal_view_may_use_fewer_branches():
    context = ctx(y="lin +{l!bool.end, m!bool.end}")
    assert is_typable(context, parse("lin y(l!true.0)", 'cmv+'), 'cmv+') is not None


def test_external_view_must_match_exactly():
    context = ctx(y="lin &{l?bool.end, m?bool.end}")
    with pytest.raises(TypeCheckError) as excinfo:
        typecheck_cmvplus(context, parse("lin y(l?z.0)", 'cmv+'))
    assert excinfo.value.rule == 'T-Choice'


def test_wrong_payload_is_rejected():
    context = ctx(y="lin +{l!bool.end}")
    assert is_typable(context, parse("lin y(l!unit.0)", 'cmv+'), 'cmv+') is None


def test_unrestricted_choice_cannot_use_linear_names():
    context = ctx(y="un +{l!bool.end}", o="lin +{k!bool.end}")
    with pytest.raises(TypeCheckError) as excinfo:
        typecheck_cmvplus(context, parse("un y(l!true.lin o(k!true.0))", 'cmv+'))
    assert excinfo.value.rule == 'T-Choice'


def test_conditional_arms_consume_alike():
    context = ctx(o="lin +{k!bool.end}")
    with pytest.raises(TypeCheckError) as excinfo:
        typecheck_cmvplus(context, parse("if true then lin o(k!true.0) else 0", 'cmv+'))
    assert excinfo.value.rule == 'T-If'


def test_shadowing_is_rejected():
    context = ctx(x="un +{l!bool.end}")
    term = parse("(new x y : lin +{l!bool.end})(lin x(l!true.0) | lin y(l?z.0))", 'cmv+')
    with pytest.raises(TypeCheckError) as excinfo:
        typecheck_cmvplus(context, term)
    assert excinfo.value.rule == 'T-Res'


def test_derivations_serialise():
    derivation = typecheck_cmvplus(ctx(y="lin +{l!bool.end}"), parse("lin y(l!true.0)", 'cmv+'))
    data = derivation.to_dict()
    assert data['rule'] == 'T-Choice'
    assert derivation.skeleton()[0] == 'T-Choice'


# ---------------------------------------------------------------- CMV

def test_cmv_send_and_receive():
    term = parse("(new x y : lin !bool.end)(x!true.0 | lin y?z.0)", 'cmv')
    rules = typecheck_cmv(None, term).rules()
    assert 'T-Send' in rules
    assert 'T-Recv' in rules


def test_cmv_select_and_branch():
    term = parse("(new x y : lin +{l: end, m: end})(x<+m.0 | y>>{l: 0, m: 0})", 'cmv')
    rules = typecheck_cmv(None, term).rules()
    assert 'T-Sel' in rules
    assert 'T-Branch' in rules


def test_cmv_send_on_a_receiving_endpoint():
    with pytest.raises(TypeCheckError) as excinfo:
        typecheck_cmv(ctx(y="lin ?bool.end"), parse("y!true.0", 'cmv'))
    assert excinfo.value.rule == 'T-Send'


# ---------------------------------------------------------------- subject reduction

CMV_PROTOCOLS = (
    "(new x y : lin !bool.end)(x!true.0 | lin y?z.0)",
    "(new x y : lin !bool.lin ?bool.end)(x!true.lin x?w.0 | lin y?z.y!false.0)",
    "(new x y : lin +{l: lin !bool.end, m: end})(x<+l.x!true.0 | y>>{l: lin y?z.0, m: 0})",
    "(new x y)(x!true.0 | lin y?z.0)",
)


def assert_reachable_states_typable(term, context, calculus):
    system = explore(term, calculus)
    assert system.complete
    for state in system.states:
        assert is_typable(context.only(free_names(state)), state, calculus) is not None, print_term(state)


def test_worked_cmvplus_terms_stay_typable_along_steps(pm, translation):
    for source in (pm, translation):
        assert_reachable_states_typable(source.term, TypingContext(source.context), Calculus.MIX)


def test_cmv_protocols_stay_typable_along_steps():
    for text in CMV_PROTOCOLS:
        assert_reachable_states_typable(parse(text, 'cmv'), TypingContext(), Calculus.CMV)


@pytest.mark.slow
def test_oc_corpus_stays_typable_along_steps():
    for entry in oc_corpus():
        source = entry.load()
        assert_reachable_states_typable(source.term, TypingContext(source.context), Calculus.MIX)


# ---------------------------------------------------------------- relation laws

LABELS = [('l', '!'), ('l', '?'), ('m', '!'), ('m', '?')]


def session_types(depth=2):
    """Finite mixed-choice session types as surface text."""
    if depth == 0:
        return st.just('end')
    branch = st.tuples(st.sampled_from(['bool', 'unit']), session_types(depth - 1))
    choice = st.builds(
        lambda qualifier, view, keys, bodies: f"{qualifier} {view}{{" + ', '.join(
            f"{label}{polarity}{payload}.{rest}" for (label, polarity), (payload, rest) in zip(keys, bodies)
        ) + "}",
        st.sampled_from(['lin', 'un']),
        st.sampled_from(['+', '&']),
        st.lists(st.sampled_from(LABELS), min_size=1, max_size=4, unique=True),
        st.lists(branch, min_size=4, max_size=4),
    )
    return st.one_of(st.just('end'), choice)


@given(session_types())
@settings(max_examples=150, deadline=None)
def test_equivalence_and_subtyping_are_reflexive(text):
    t = parse_type(text)
    assert type_equiv(t, t)
    assert subtype(t, t)


@given(session_types())
@settings(max_examples=150, deadline=None)
def test_dualize_is_an_involution_and_dual(text):
    t = parse_type(text)
    assert type_equiv(dualize(dualize(t)), t)
    assert dual(t, dualize(t))
    assert dual(dualize(t), t)


@given(session_types(), session_types())
@settings(max_examples=150, deadline=None)
def test_equivalence_is_mutual_subtyping(left, right):
    t, u = parse_type(left), parse_type(right)
    assert type_equiv(t, u) == (subtype(t, u) and subtype(u, t))
