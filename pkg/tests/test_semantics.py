import random

import pytest

from calculi.canonical import split_level
from calculi.errors import EvaluationError, PreconditionError
from calculi.names import Name
from calculi.syntax import FALSE, TRUE, And, Calculus, Choice, NewPair, Not, Or, UNIT
from corpus.generator import random_mix_network
from parsing.parser import parse
from parsing.printer import print_term
from semantics.barbs import Barb, barbs
from semantics.expressions import evaluate, is_closed
from semantics.lts import Bounds, explore
from semantics.steps import StepKind, reducts, steps


# ---------------------------------------------------------------- expressions

def test_evaluate_closed_expressions():
    assert evaluate(Not(And(TRUE, FALSE))) == TRUE
    assert evaluate(Or(FALSE, Not(TRUE))) == FALSE


def test_open_expressions_do_not_evaluate():
    with pytest.raises(EvaluationError):
        evaluate(And(TRUE, Name('z')))
    assert not is_closed(Name('z'))


def test_unit_is_not_a_boolean():
    with pytest.raises(EvaluationError):
        evaluate(Not(UNIT))


# ---------------------------------------------------------------- π

def test_pi_communication_passes_the_object():
    found = steps(parse("(nu a)(a!<z> | a?(x).x!)", 'pi'))
    assert len(found) == 1
    assert found[0].label.kind is StepKind.COM
    assert print_term(found[0].target) == "z!"


def test_nullary_and_monadic_prefixes_do_not_meet():
    assert steps(parse("a! | a?(x)", 'pi')) == []
    assert steps(parse("a!<z> | a?", 'pi')) == []


def test_mixed_sum_discards_the_other_summand():
    found = steps(parse("a! + b? | a?", 'pi'))
    assert len(found) == 1
    assert print_term(found[0].target) == "0"


def test_tau_step():
    found = steps(parse("tau.a!", 'pi'))
    assert [s.label.kind for s in found] == [StepKind.TAU]


def test_replication_offers_a_copy():
    targets = reducts(parse("!a?.b! | a!", 'pi'))
    assert len(targets) == 1


def test_pi_barbs():
    found = barbs(parse("3! | (nu n) n?", 'pi'))
    assert found == frozenset({Barb(Name('3'), '!')})


# ---------------------------------------------------------------- CMV+

def test_linear_mixed_choices_synchronise():
    term = parse("(new x y)(lin x(l!true.0 + m?z.0) | lin y(l?w.0 + n!false.0))", 'cmv+')
    found = steps(term, Calculus.MIX)
    assert len(found) == 1
    assert found[0].label.kind is StepKind.LIN_LIN


def test_mismatched_labels_do_not_synchronise():
    term = parse("(new x y)(lin x(l!true.0) | lin y(m?w.0))", 'cmv+')
    assert steps(term, Calculus.MIX) == []


def test_unrestricted_choice_survives_its_step():
    term = parse("(new x y)(un x(l!true.0) | lin y(l?w.0) | lin y(l?w.0))", 'cmv+')
    lts = explore(term, Calculus.MIX)
    assert lts.complete
    assert len(lts.states) == 3
    assert all(e.label.kind is StepKind.UN_LIN for e in lts.edges)


def test_received_values_are_substituted():
    term = parse("(new x y)(lin x(l!true.0) | lin y(l?z.(if z then lin o(k!true.0) else 0)))", 'cmv+')
    lts = explore(term, Calculus.MIX)
    final = lts.states[max(range(len(lts)), key=lambda s: lts.depth[s])]
    assert print_term(final) == "lin o(k!true)"


def test_conditionals_step():
    found = steps(parse("if not false then lin o(k!true.0) else 0", 'cmv+'))
    assert [s.label.kind for s in found] == [StepKind.IF_TRUE]


def test_session_barbs_only_on_free_endpoints():
    assert barbs(parse("lin y(l!true.0)", 'cmv+')) == frozenset({Barb(Name('y'))})
    assert barbs(parse("(new y z)(lin y(l!true.0) | lin z(l?w.0))", 'cmv+')) == frozenset()


MIX_INTERACTIONS = {StepKind.LIN_LIN, StepKind.LIN_UN, StepKind.UN_LIN, StepKind.UN_UN}


def mix_systems(pm, translation):
    yield explore(pm.term, Calculus.MIX)
    yield explore(translation.term, Calculus.MIX)
    rng = random.Random(11)
    for _ in range(40):
        yield explore(random_mix_network(rng), Calculus.MIX, Bounds(max_depth=6, max_states=2000))


def test_mixed_choice_interactions_use_both_ends_of_one_channel(pm, translation):
    for system in mix_systems(pm, translation):
        for edge in system.edges:
            if edge.label.kind not in MIX_INTERACTIONS:
                continue
            sender, receiver = edge.label.channel
            binders, threads = split_level(system.states[edge.source])
            assert sender != receiver
            assert len(edge.label.consumed) == 2
            assert any(isinstance(b, NewPair) and {b.left, b.right} == {sender, receiver} for b in binders)
            endpoints = {t.endpoint for t in threads if isinstance(t, Choice)}
            assert {sender, receiver} <= endpoints


# ---------------------------------------------------------------- CMV

def test_cmv_send_receive():
    found = steps(parse("(new x y)(x!true.0 | lin y?z.0)", 'cmv'))
    assert [s.label.kind for s in found] == [StepKind.LIN_COM]


def test_cmv_select_branch():
    found = steps(parse("(new x y)(x<+m.0 | y>>{l: 0, m: o!true.0})", 'cmv'))
    assert [s.label.kind for s in found] == [StepKind.CASE]
    assert print_term(found[0].target) == "o!true"


# ---------------------------------------------------------------- LTS

def test_explore_is_deterministic(pspi):
    first = explore(pspi.term, Calculus.PI)
    second = explore(pspi.term, Calculus.PI)
    assert first.to_json() == second.to_json()


def test_pspi_lts(pspi):
    lts = explore(pspi.term, Calculus.PI)
    assert lts.complete
    assert len(lts.successors(lts.initial)) == 5
    assert not lts.has_cycle()


def test_bounds_clear_the_complete_flag():
    lts = explore(parse("!tau.b!", 'pi'), Calculus.PI, Bounds(max_depth=3, max_states=50))
    assert not lts.complete
    assert lts.has_weak_barb(lts.initial, Barb(Name('b'), '!')) is True
    assert lts.has_weak_barb(lts.initial, Barb(Name('c'), '!')) is None


def test_replication_loops_back_to_its_own_state():
    lts = explore(parse("!a! | !a?", 'pi'), Calculus.PI)
    assert lts.complete
    assert len(lts) == 1
    assert lts.has_cycle()


def test_weak_barbs_are_three_valued():
    lts = explore(parse("a! | a?.b!", 'pi'), Calculus.PI)
    assert lts.has_weak_barb(lts.initial, Barb(Name('b'), '!')) is True
    assert lts.has_weak_barb(lts.initial, Barb(Name('c'), '!')) is False


def test_replay_follows_recorded_paths():
    lts = explore(parse("a! | a?.(b! | b?.c!)", 'pi'), Calculus.PI)
    last = max(range(len(lts)), key=lambda s: lts.depth[s])
    path = lts.path(lts.initial, last)
    assert lts.replay(lts.initial, path) == last
    with pytest.raises(PreconditionError):
        lts.replay(last, path)


def test_bounds_must_be_positive():
    with pytest.raises(PreconditionError):
        Bounds(max_depth=0)
