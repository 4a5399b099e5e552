import pytest

from calculi.canonical import canonicalize
from calculi.errors import EncodingError, PreconditionError
from calculi.names import Name, NameKind, make_name
from calculi.syntax import Calculus, Inact, Label, Polarity, View
from encoding.encoder import INTERNAL_CASES, encode, encode_with_provenance, is_starting_step
from encoding.gadgets import gc_junk, is_junk, mangle, nd_choice, reorder_choice
from encoding.naming import RenamingPolicy, induced_renaming, is_injective
from parsing.parser import parse
from parsing.printer import print_term
from semantics.barbs import barbs
from semantics.lts import explore
from semantics.steps import StepKind, steps
from sessiontypes.checker import typecheck_cmv, typecheck_cmvplus


def cmv(text):
    return parse(text, 'cmv')


# ---------------------------------------------------------------- gadgets

@pytest.mark.parametrize("arity", [1, 2, 3, 5])
def test_nd_choice_commits_to_exactly_one_option(arity):
    options = [cmv(f"o{i}!true.0") for i in range(1, arity + 1)]
    gadget = nd_choice(options)
    found = steps(gadget, Calculus.CMV)
    assert len(found) == arity
    assert all(step.label.kind is StepKind.CASE for step in found)
    for first in found:
        for second in found:
            if first is not second:
                assert first.label.consumed & second.label.consumed
    committed = sorted(print_term(gc_junk(step.target)) for step in found)
    assert committed == sorted(print_term(canonicalize(o, Calculus.CMV)) for o in options)


def test_nd_choice_needs_options():
    with pytest.raises(EncodingError):
        nd_choice([])


def test_leftover_selections_are_inert_junk():
    junk = cmv("(new s t)(t<+opt1.0 | t<+opt2.0)")
    assert is_junk(junk)
    assert steps(junk, Calculus.CMV) == []
    assert barbs(junk, Calculus.CMV) == frozenset()


def test_live_gadgets_are_not_junk():
    assert not is_junk(cmv("(new s t)(t<+opt1.0 | s>>{opt1: 0})"))
    assert print_term(gc_junk(cmv("(new s t)(t<+opt1.0) | o!true.0"))) == "o!true"


def test_mangling_matches_dual_branches():
    label = Label('l')
    assert str(mangle(label, Polarity.OUT, View.INTERNAL)) == 'l$snd'
    assert str(mangle(label, Polarity.IN, View.EXTERNAL)) == 'l$snd'
    assert str(mangle(label, Polarity.IN, View.INTERNAL)) == 'l$rcv'
    assert str(mangle(label, Polarity.OUT, View.EXTERNAL)) == 'l$rcv'


def test_reorder_choice_groups_by_label():
    choice = parse("lin x(m?z.0 + l!true.0 + l?w.0)", 'cmv+')
    groups = reorder_choice(choice.branches)
    assert [str(g.label) for g in groups] == ['l', 'm']
    assert len(groups[0].sends) == 1
    assert len(groups[0].receives) == 1
    assert [p for p, _ in groups[1].parts()] == [Polarity.IN]


# ---------------------------------------------------------------- naming

def test_renaming_policy_prefixes_names():
    policy = RenamingPolicy()
    assert policy(Name('x')) == Name('n_x')
    assert policy.invert(Name('n_x')) == Name('x')
    assert policy.in_range(Name('n_x'))
    with pytest.raises(PreconditionError):
        policy.invert(Name('x'))


def test_renamed_numerals_are_variables():
    assert RenamingPolicy()(make_name('1')).kind is NameKind.VARIABLE


def test_induced_renaming_commutes_with_the_policy():
    policy = RenamingPolicy()
    induced = induced_renaming(policy, {Name('a'): Name('b')})
    assert induced == {Name('n_a'): Name('n_b')}


def test_injectivity():
    a, b = Name('a'), Name('b')
    assert is_injective({a: b, b: a})
    assert not is_injective({a: b}, [b])


# ---------------------------------------------------------------- encoder

def test_inactive_process_encodes_to_inaction():
    assert print_term(encode(typecheck_cmvplus(None, parse('0', 'cmv+')))) == '0'


def test_linear_protocol_encoding_runs_to_completion():
    term = parse("(new x y)(lin x(l!true.0) | lin y(l?z.0))", 'cmv+')
    encoding = encode_with_provenance(typecheck_cmvplus(None, term))
    typecheck_cmv(encoding.context, encoding.term)
    lts = explore(encoding.term, Calculus.CMV, normalize=gc_junk)
    assert lts.complete
    assert [print_term(lts.states[s]) for s in lts.stuck_states()] == ['0']


def test_encoded_worked_terms_typecheck_in_cmv(pm, translation):
    for source in (pm, translation):
        encoding = encode_with_provenance(typecheck_cmvplus(source.context, source.term))
        assert encoding.context is not None
        typecheck_cmv(encoding.context, encoding.term)
        assert all(str(name).startswith('n_') for name, _ in encoding.context)


def test_internal_choices_record_a_starting_channel(translation):
    encoding = encode_with_provenance(typecheck_cmvplus(translation.context, translation.term))
    assert any(case in INTERNAL_CASES for case in encoding.cases().values())
    assert encoding.starting_channels
    first = steps(encoding.term, Calculus.CMV)
    assert any(is_starting_step(step.label, encoding) for step in first)


def test_starting_steps_need_provenance():
    step = steps(cmv("(new s t)(t<+opt1.0 | s>>{opt1: 0})"), Calculus.CMV)[0]
    with pytest.raises(PreconditionError):
        is_starting_step(step.label, None)


def test_encoding_is_deterministic(pm):
    derivation = typecheck_cmvplus(pm.context, pm.term)
    assert encode_with_provenance(derivation).to_dict() == encode_with_provenance(derivation).to_dict()
