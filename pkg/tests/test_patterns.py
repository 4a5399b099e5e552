import pytest

from calculi.errors import DifferentOriginError
from calculi.syntax import Calculus
from parsing.parser import parse
from patterns import (
    PATTERN_M, PATTERN_STAR, automorphism_from_cycles, build_hypergraph, check_symmetry,
    confluence_check, conflict, decompose, detect_m, detect_star, electoral_check,
    find_automorphisms, lemma_pairs, network_size, orbit, orbits, random_confluence, scan_patterns
)
from patterns.confluence import PRECONDITION
from semantics.steps import steps


ROTATION = [[1, 2, 3, 4, 5], ['a', 'b', 'c', 'd', 'e'], ['x', 'y', 'z', 'v', 'w']]


# ---------------------------------------------------------------- conflict

def test_steps_sharing_a_choice_conflict(pspi):
    found = steps(pspi.term, Calculus.PI)
    assert len(found) == 5
    conflicting = sum(1 for a in found for b in found if a is not b and conflict(a.label, b.label))
    # a ring of five: every step conflicts with its two neighbours
    assert conflicting == 10


# ---------------------------------------------------------------- M and star

def test_star_in_the_pi_ring(pspi):
    witness = detect_star(pspi.term)
    assert witness is not None
    assert witness.pattern == PATTERN_STAR
    assert len({step.target for step in witness.steps}) == 5
    labels = [step.label for step in witness.steps]
    for i in range(5):
        assert conflict(labels[i], labels[(i + 1) % 5])
        assert not conflict(labels[i], labels[(i + 2) % 5])


def test_pattern_m_has_an_m_and_no_star(pm):
    witness = detect_m(pm.term)
    assert witness is not None
    assert witness.pattern == PATTERN_M
    a, b, c = (step.label for step in witness.steps)
    assert conflict(a, b) and conflict(b, c)
    assert not conflict(a, c)
    assert detect_star(pm.term) is None


def test_m_reducts_compared_up_to_bisimilarity(pm):
    # every endpoint of PM is restricted, so no reduct shows a barb
    witness = detect_m(pm.term, behavioural=True)
    assert witness.distinct_behaviour is False
    assert detect_m(pm.term).distinct_behaviour is None


def test_independent_steps_have_no_m():
    assert detect_m(parse("a! | a? | b! | b?", 'pi')) is None


def test_small_scan_finds_an_m_and_no_star():
    report = scan_patterns(max_nodes=9, channels=1)
    assert report.star_free
    assert report.m_witness is not None
    assert network_size(report.m_witness.source) <= 9


@pytest.mark.slow
def test_full_scan_is_star_free():
    report = scan_patterns()
    assert report.star_free
    assert report.m_witness is not None


def test_network_size_counts_binders_choices_and_branches(pm):
    assert network_size(pm.term) == 13


# ---------------------------------------------------------------- confluence

def test_interactions_on_different_choices_commute(pm):
    found = steps(pm.term, Calculus.MIX)
    pairs = lemma_pairs(found)
    assert pairs
    for first, second in pairs:
        assert confluence_check(pm.term, first, second).closed


def test_interactions_on_the_same_choice_are_outside_the_lemma(pm):
    found = steps(pm.term, Calculus.MIX)
    first = found[0]
    second = next(s for s in found[1:] if s.label.consumed & first.label.consumed)
    assert confluence_check(pm.term, first, second).verdict == PRECONDITION


def test_steps_from_different_states_cannot_be_compared(pm, translation):
    first = steps(pm.term, Calculus.MIX)[0]
    second = steps(translation.term, Calculus.MIX)[0]
    with pytest.raises(DifferentOriginError):
        confluence_check(pm.term, first, second)


def test_random_diamonds_are_reproducible():
    assert random_confluence(50, seed=7).to_dict() == random_confluence(50, seed=7).to_dict()


@pytest.mark.slow
def test_random_diamonds_close():
    summary = random_confluence(1000, seed=7)
    assert summary.instances == 1000
    assert summary.closed == 1000
    assert summary.counterexamples == ()


# ---------------------------------------------------------------- election

def test_lepi_is_electoral(lepi):
    report = electoral_check(lepi.term, Calculus.PI)
    assert report.electoral is True
    assert report.executions == 10
    assert list(report.leaders) == [1, 1, 2, 2, 3, 3, 4, 4, 5, 5]
    assert len(report.paths) == 10
    assert report.violations == ()


def test_two_announcements_are_not_electoral():
    report = electoral_check(parse("1! | 2!", 'pi'), Calculus.PI)
    assert report.verdict == 'not-electoral'
    assert report.violations


def test_cyclic_state_spaces_are_unsupported():
    assert electoral_check(parse("!a! | !a? | 1!", 'pi'), Calculus.PI).verdict == 'unsupported'


# ---------------------------------------------------------------- hypergraphs and symmetry

def test_lepi_hypergraph(lepi):
    graph = build_hypergraph(decompose(lepi.term, Calculus.PI))
    assert graph.nodes == (1, 2, 3, 4, 5)
    assert len(graph.arcs) == 10
    # every pair of nodes shares exactly one arc
    assert sorted(sorted(graph.incidence[arc]) for arc in graph.arcs) == [
        [i, j] for i in range(1, 6) for j in range(i + 1, 6)
    ]


def test_lepi_has_a_single_orbit_automorphism(lepi):
    graph = build_hypergraph(decompose(lepi.term, Calculus.PI))
    automorphisms = find_automorphisms(graph)
    assert automorphisms[0].is_identity()
    assert any(orbit(sigma, 1) == frozenset({1, 2, 3, 4, 5}) for sigma in automorphisms)


def test_lepi_is_symmetric_under_rotation(lepi):
    net = decompose(lepi.term, Calculus.PI)
    sigma = automorphism_from_cycles(ROTATION, build_hypergraph(net))
    assert orbits(sigma) == [frozenset({1, 2, 3, 4, 5})]
    report = check_symmetry(net, sigma)
    assert report.is_automorphism
    assert report.symmetric is True


def test_a_swap_is_an_automorphism_but_not_a_symmetry(lepi):
    net = decompose(lepi.term, Calculus.PI)
    swap = [[1, 2], ['e', 'w'], ['x', 'b'], ['v', 'y']]
    sigma = automorphism_from_cycles(swap, build_hypergraph(net))
    report = check_symmetry(net, sigma)
    assert report.is_automorphism
    assert report.symmetric is False
