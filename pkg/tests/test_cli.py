import json

import pytest
from click.testing import CliRunner

from database.connection import Base
from workbench import cli

PROTOCOL = "(new x y)(lin x(l!true.0) | lin y(l?z.0))"


@pytest.fixture
def run(db_tables):
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(cli, list(args))
    return invoke


def report_of(result):
    return json.loads(result.stdout)


def test_parse_a_corpus_entry(run):
    result = run('parse', 'pm')
    assert result.exit_code == 0
    assert report_of(result)['calculus'] == 'cmv+'


def test_typecheck_a_corpus_entry(run):
    result = run('typecheck', 'pm')
    assert result.exit_code == 0
    report = report_of(result)
    assert report['verdict'] == 'ok'
    assert report['rules'][:2] == ['T-Res', 'T-Par']


def test_typecheck_failure_exits_one(run):
    result = run('typecheck', 'lin y(l!true.0)', '--calculus', 'cmv+')
    assert result.exit_code == 1
    assert report_of(result)['error']['rule'] == 'T-Var'


def test_pi_terms_are_not_typed(run):
    result = run('typecheck', 'lepi')
    assert result.exit_code == 2
    assert report_of(result)['verdict'] == 'unsupported'


def test_parse_errors_exit_two(run):
    result = run('parse', 'lin y(', '--calculus', 'cmv+')
    assert result.exit_code == 2
    assert report_of(result)['verdict'] == 'error'


def test_step_lists_reducts(run):
    result = run('step', 'a! | a?', '--calculus', 'pi')
    assert result.exit_code == 0
    assert len(report_of(result)['steps']) == 1


def test_bounded_exploration_exits_three(run):
    result = run('explore', '!tau.b!', '--calculus', 'pi', '--depth', '1')
    assert result.exit_code == 3
    assert report_of(result)['verdict'] == 'unknown-bounded'


def test_export_dot(run):
    result = run('export', 'tau.a!', '--calculus', 'pi', '--dot')
    assert result.exit_code == 0
    assert 'digraph' in result.stdout


def test_election_on_lepi(run):
    result = run('election', 'lepi')
    assert result.exit_code == 0
    assert report_of(result)['verdict'] == 'electoral'


def test_bisim_exit_codes(run):
    assert run('bisim', 'tau.a!', 'a!', '--calculus', 'pi').exit_code == 0
    differing = run('bisim', 'a!', 'b!', '--calculus', 'pi')
    assert differing.exit_code == 1
    assert report_of(differing)['verdict'] == 'not-related'


def test_coupled_similarity_relates_gradual_commitment(run):
    result = run('coupledsim', 'tau.a! + tau.b! + tau.c!', 'tau.a! + tau.(tau.b! + tau.c!)',
                 '--calculus', 'pi')
    assert result.exit_code == 0


def test_encode_and_recheck(run):
    result = run('encode', PROTOCOL, '--calculus', 'cmv+', '--recheck')
    assert result.exit_code == 0
    assert report_of(result)['recheck'] == 'pass'


def test_oc_check_of_a_protocol(run):
    result = run('oc-check', PROTOCOL, '--calculus', 'cmv+')
    assert result.exit_code == 0
    assert report_of(result)['verdict'] == 'pass'


def test_only_cmvplus_is_encoded(run):
    assert run('encode', 'lepi').exit_code == 2


def test_pattern_detection_always_succeeds(run):
    found = run('pattern', 'star', 'pspi')
    assert found.exit_code == 0
    assert report_of(found)['found'] is True
    missing = run('pattern', 'star', 'pm')
    assert missing.exit_code == 0
    assert report_of(missing)['found'] is False


def test_random_confluence(run):
    result = run('confluence', '--random', '20', '--seed', '1')
    assert result.exit_code == 0
    assert report_of(result)['closed'] == 20


def test_symmetry_of_lepi(run):
    result = run('symmetry', 'lepi', '--cycle', '1 2 3 4 5', '--cycle', 'a b c d e', '--cycle', 'x y z v w')
    assert result.exit_code == 0
    assert report_of(result)['verdict'] == 'related'


def test_reports_are_byte_identical(run):
    first = run('election', 'lepi')
    second = run('election', 'lepi')
    assert first.stdout == second.stdout


def test_config_set_and_get(run):
    assert run('config', 'set', 'max_depth', '5').exit_code == 0
    result = run('config', 'get', 'max_depth')
    assert report_of(result) == {'key': 'max_depth', 'value': 5}
    assert run('config', 'set', 'seed', 'many').exit_code == 2


def test_recorded_runs_are_listed(run):
    assert run('election', 'lepi', '--record').exit_code == 0
    runs = report_of(run('corpus', 'runs', '--command', 'election'))
    assert [r['verdict'] for r in runs] == ['pass']


def test_pure_commands_leave_the_database_alone(monkeypatch):
    created = []
    monkeypatch.setattr(Base.metadata, 'create_all', lambda *args, **kwargs: created.append(kwargs))
    result = CliRunner().invoke(cli, ['parse', 'a! | b!', '--calculus', 'pi'])
    assert result.exit_code == 0
    assert created == []
