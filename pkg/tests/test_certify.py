import pytest

from calculi.errors import PreconditionError
from calculi.names import Name
from calculi.syntax import Calculus
from certify import (
    FAIL, PASS, UNSUPPORTED, EncodedSystem, certify_corpus, certify_entry, check_barb_sensitiveness,
    check_distributability_structural, check_divergence_reflection, check_name_invariance,
    check_type_preservation, correspondence_report, replays
)
from corpus import CorpusEntry, oc_corpus, worked_entry
from equivalence import bisimilar, weak_bisim
from parsing.parser import parse, parse_type
from sessiontypes.context import TypingContext

PROTOCOL = "(new x y)(lin x(l!true.0) | lin y(l?z.0))"


def mix(text):
    return parse(text, 'cmv+')


def outputs(*names):
    """Every name typed as a linear one-shot output."""
    return TypingContext((Name(n), parse_type("lin +{k!bool.end}")) for n in names)


# ---------------------------------------------------------------- correspondence

def test_linear_protocol_corresponds():
    system = EncodedSystem(mix(PROTOCOL))
    report = correspondence_report(system)
    assert report.verdict == PASS
    assert len(report.completeness) == 1
    assert report.completeness[0].emulated
    assert replays(report, system)


def test_translation_example_corresponds(translation):
    system = EncodedSystem(translation.term, translation.context)
    report = correspondence_report(system)
    assert report.completeness_verdict == PASS
    assert report.soundness_verdict == PASS
    assert replays(report, system)
    # the internal choice commits before it communicates
    assert any('more than one step' in note for note in report.notes)


def test_translation_example_emulates_through_an_intermediate_state(translation):
    system = EncodedSystem(translation.term, translation.context)
    lts, owners = system.target_lts, system.owners()
    start = system.source_lts.initial
    successors = {e.target for e in system.source_lts.successors(start)}
    commits = [
        e for e in lts.edges
        if system.is_starting(e) and owners.get(e.source) == start and e.target not in owners
    ]
    assert commits
    completions = {f.target: f for f in correspondence_report(system).soundness}
    for commit in commits:
        assert commit.source in lts.reachable(lts.initial)
        # the committed state is no translation of any source state
        for state in range(len(system.source_lts)):
            assert bisimilar(lts, system.image(state), commit.target) is False
        finding = completions[commit.target]
        assert finding.completed and finding.without_starting_steps
        assert finding.source_state in successors
        image = system.image(finding.source_state)
        assert weak_bisim(lts, image, finding.end).related
        for later in lts.reachable(finding.end):
            if owners.get(later) == finding.source_state:
                assert weak_bisim(lts, image, later).related


def test_single_step_completions_still_get_the_note(translation):
    report = correspondence_report(EncodedSystem(translation.term, translation.context))
    lengths = {len(f.path) for f in report.soundness if f.completed}
    assert 1 in lengths
    assert any('single-step check would reject' in note for note in report.notes)


def test_reports_serialise_deterministically(translation):
    first = correspondence_report(EncodedSystem(translation.term, translation.context)).to_json()
    second = correspondence_report(EncodedSystem(translation.term, translation.context)).to_json()
    assert first == second


# ---------------------------------------------------------------- criteria

def test_criteria_on_a_linear_protocol():
    system = EncodedSystem(mix(PROTOCOL))
    assert check_type_preservation(system).verdict == PASS
    assert check_barb_sensitiveness(system).verdict == PASS
    assert check_divergence_reflection(system).verdict == PASS


def test_observed_barbs_are_renamed(translation):
    report = check_barb_sensitiveness(EncodedSystem(translation.term, translation.context))
    assert report.verdict == PASS
    assert report.details['target'] == ['n_o1', 'n_o2', 'n_o3', 'n_o4']


def test_name_invariance_under_renaming():
    term = mix("lin o(k!true.0) | lin p(k!true.0)")
    context = outputs('o', 'p')
    assert check_name_invariance(term, context, {}).verdict == PASS
    swapped = {Name('o'): Name('p'), Name('p'): Name('o')}
    assert check_name_invariance(term, context, swapped).verdict == PASS
    fresh = {Name('o'): Name('r0')}
    assert check_name_invariance(term, context, fresh).verdict == PASS


def test_name_invariance_needs_an_injective_renaming():
    term = mix("lin o(k!true.0) | lin p(k!true.0)")
    with pytest.raises(PreconditionError):
        check_name_invariance(term, outputs('o', 'p'), {Name('o'): Name('p')})


def test_distributability_of_parallel_components():
    parts = [mix("lin o(k!true.0)"), mix("lin p(k!true.0)"), mix("lin q(k!true.0)")]
    context = outputs('o', 'p', 'q')
    assert check_distributability_structural(parts[:2], context).verdict == PASS
    report = check_distributability_structural(parts, context)
    assert report.verdict == PASS
    assert report.details['components'] == 3


def test_distributability_needs_components():
    with pytest.raises(PreconditionError):
        check_distributability_structural([])


# ---------------------------------------------------------------- runner

def test_certify_translation_entry():
    report = certify_entry(worked_entry('translation'))
    assert report.verdict == PASS
    assert {c.criterion for c in report.criteria} >= {
        'type-preservation', 'barb-sensitiveness', 'divergence-reflection', 'name-invariance'
    }


def test_pi_entries_are_not_encoded():
    report = certify_entry(worked_entry('lepi'))
    assert report.verdict == UNSUPPORTED
    assert report.criteria[0].criterion == 'applicability'


def test_broken_entries_are_reported():
    unparsable = certify_entry(CorpusEntry('broken', Calculus.MIX, "lin y("))
    assert unparsable.verdict == FAIL
    assert unparsable.error
    untyped = certify_entry(CorpusEntry('untyped', Calculus.MIX, "lin y(l!true.0)"))
    assert untyped.verdict == FAIL
    assert 'T-Var' in untyped.error


def test_closed_terms_pass_name_invariance_trivially():
    report = certify_entry(CorpusEntry('closed', Calculus.MIX, PROTOCOL))
    invariance = next(c for c in report.criteria if c.criterion == 'name-invariance')
    assert invariance.verdict == PASS
    assert 'no free names' in invariance.detail
    assert report.verdict == PASS


def test_certification_is_seeded():
    entry = worked_entry('translation')
    first = certify_entry(entry, seed=3, renamings=2).to_dict()
    assert first == certify_entry(entry, seed=3, renamings=2).to_dict()


def test_oc_corpus_names_are_unique():
    names = [entry.name for entry in oc_corpus()]
    assert len(names) == len(set(names))
    assert all(entry.calculus is Calculus.MIX for entry in oc_corpus())


@pytest.mark.slow
def test_oc_corpus_passes():
    reports = certify_corpus(oc_corpus(), renamings=100)
    failing = [r.name for r in reports if r.verdict != PASS]
    assert failing == []
