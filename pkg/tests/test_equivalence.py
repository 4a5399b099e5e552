from calculi.syntax import Calculus
from equivalence import (
    NOT_RELATED, RELATED, UNKNOWN, bisimilar, bisimilar_states, coupled_sim, replay_witness, weak_bisim
)
from parsing.parser import parse
from semantics.lts import Bounds, explore


def lts(text, bounds=None):
    return explore(parse(text, 'pi'), Calculus.PI, bounds)


# P commits to b! or c! in one step, Q only after an intermediate choice.
EAGER = "tau.a! + tau.b! + tau.c!"
GRADUAL = "tau.a! + tau.(tau.b! + tau.c!)"


def test_internal_steps_are_invisible():
    assert bisimilar(lts("tau.a!"), lts("a!")) is True


def test_different_barbs_are_distinguished():
    result = weak_bisim(lts("a!"), lts("b!"))
    assert result.verdict == NOT_RELATED
    challenge = result.witness.challenge_for(result.witness.root)
    assert challenge.reason == 'barb'


def test_gradual_commitment_is_not_bisimilar():
    left, right = lts(EAGER), lts(GRADUAL)
    result = weak_bisim(left, right)
    assert result.verdict == NOT_RELATED
    assert replay_witness(result.witness, left, right)


def test_gradual_commitment_is_coupled_similar():
    result = coupled_sim(lts(EAGER), lts(GRADUAL))
    assert result.verdict == RELATED
    assert result.relation


def test_coupled_similarity_still_sees_barbs():
    left, right = lts("a! + tau.b!"), lts("a!")
    result = coupled_sim(left, right)
    assert result.verdict == NOT_RELATED
    assert replay_witness(result.witness, left, right)


def test_a_state_is_bisimilar_to_itself():
    system = lts(GRADUAL)
    assert weak_bisim(system, system, 0, 0).related


def test_bounded_exploration_gives_unknown():
    result = weak_bisim(lts("!tau.b!", Bounds(max_depth=2)), lts("b!"))
    assert result.verdict == UNKNOWN
    assert 'incomplete' in result.detail
    assert bisimilar(lts("!tau.b!", Bounds(max_depth=2)), lts("b!")) is None


def test_bisimilar_states_of_a_reference():
    assert bisimilar_states(lts("tau.a!"), lts("a!")) == frozenset({0, 1})


def test_results_serialise_deterministically():
    left, right = lts(EAGER), lts(GRADUAL)
    assert weak_bisim(left, right).to_json() == weak_bisim(left, right).to_json()


# ---------------------------------------------------------------- laws over a corpus

CORPUS = (
    "0", "a!", "b!", "tau.a!", "tau.tau.a!", "a! + tau.b!", "tau.a! + tau.b!",
    "a! | b!", "(nu x)(x! | x?.a!)", "(nu x)(x! | x?.b!)", EAGER, GRADUAL,
    "tau.a! + tau.b! + tau.c! + tau.0", "(nu x)(x! | x?) | a!",
)


def verdicts(relation, systems):
    return {
        (i, j): relation(left, right).related
        for i, left in enumerate(systems) for j, right in enumerate(systems)
    }


def test_weak_bisimilarity_is_symmetric_and_transitive_on_the_corpus():
    related = verdicts(weak_bisim, [lts(text) for text in CORPUS])
    indices = range(len(CORPUS))
    for i in indices:
        assert related[(i, i)]
        for j in indices:
            assert related[(i, j)] == related[(j, i)]
            for k in indices:
                if related[(i, j)] and related[(j, k)]:
                    assert related[(i, k)]


def test_weak_bisimilarity_implies_coupled_similarity_on_the_corpus():
    systems = [lts(text) for text in CORPUS]
    bisimilar_pairs = verdicts(weak_bisim, systems)
    coupled_pairs = verdicts(coupled_sim, systems)
    assert all(coupled_pairs[pair] for pair, related in bisimilar_pairs.items() if related)
    # the converse fails on gradual commitment
    assert coupled_pairs[(CORPUS.index(EAGER), CORPUS.index(GRADUAL))]
    assert not bisimilar_pairs[(CORPUS.index(EAGER), CORPUS.index(GRADUAL))]


def test_bisimilarity_laws_hold_between_states_of_one_system(pm):
    system = explore(pm.term, Calculus.MIX)
    states = range(len(system))
    related = {(i, j): weak_bisim(system, system, i, j).related for i in states for j in states}
    for i in states:
        for j in states:
            assert related[(i, j)] == related[(j, i)]
            if related[(i, j)]:
                assert coupled_sim(system, system, i, j).related
                assert all(related[(i, k)] for k in states if related[(j, k)])
