import pytest

from calculi.syntax import Calculus
from corpus import CorpusEntry, worked_entries
from database.connection import SessionLocal, database_exists
from database.models import AnalysisRun, Config, CorpusTerm
from seed_database import seed_config, seed_corpus, well_typed
from semantics.lts import DEFAULT_MAX_DEPTH
from utils.report_builder import exit_code, record_run, stored_verdict
from utils.settings import get_setting, list_settings, resolve_bounds, set_setting


@pytest.fixture
def db(db_tables):
    session = SessionLocal()
    yield session
    session.close()


# ---------------------------------------------------------------- settings

def test_defaults_apply_without_configuration(db_tables):
    assert get_setting('max_depth') == DEFAULT_MAX_DEPTH
    assert resolve_bounds().max_depth == DEFAULT_MAX_DEPTH


def test_resolution_order(db_tables, monkeypatch):
    monkeypatch.setenv('WORKBENCH_MAX_DEPTH', '7')
    assert get_setting('max_depth') == 7
    set_setting('max_depth', '5')
    assert get_setting('max_depth') == 5
    assert get_setting('max_depth', 3) == 3
    assert resolve_bounds(depth=4).max_depth == 4


def test_missing_sqlite_files_are_not_created_by_reads(tmp_path, monkeypatch):
    missing = tmp_path / 'absent.db'
    assert not database_exists(f"sqlite:///{missing}")
    assert database_exists("sqlite://")
    monkeypatch.setattr('utils.settings.database_exists', lambda: False)
    assert get_setting('seed') == 0


def test_unknown_settings_are_rejected(db_tables):
    with pytest.raises(KeyError):
        get_setting('colour')
    with pytest.raises(ValueError):
        set_setting('seed', 'many')


def test_settings_listing(db_tables):
    keys = [entry['key'] for entry in list_settings()]
    assert keys == ['max_depth', 'max_states', 'seed', 'star_max_nodes']


def test_config_values_are_typed():
    assert Config(key='k', value='12', value_type='int').get_typed_value() == 12
    assert Config(key='k', value='yes', value_type='bool').get_typed_value() is True
    assert Config(key='k', value='[1, 2]', value_type='json').get_typed_value() == [1, 2]
    assert Config(key='k', value='text', value_type='string').get_typed_value() == 'text'


# ---------------------------------------------------------------- seeding

def test_well_typed_flags():
    entries = {entry.name: entry for entry in worked_entries()}
    assert well_typed(entries['lepi']) is None
    assert well_typed(entries['pm']) is True
    assert well_typed(CorpusEntry('open', Calculus.MIX, "lin y(l!true.0)")) is False


def test_seeding_is_idempotent(db):
    entries = worked_entries()
    assert seed_corpus(db, entries) == (len(entries), 0)
    assert seed_corpus(db, entries) == (0, 0)
    stored = db.query(CorpusTerm).filter(CorpusTerm.name == 'translation').first()
    assert stored.calculus == 'cmv+'
    assert stored.well_typed is True
    assert '#free o1' in stored.free_context


def test_config_seeding(db):
    assert seed_config(db) == 4
    assert seed_config(db) == 0
    assert db.query(Config).filter(Config.key == 'star_max_nodes').first().get_typed_value() == 13


# ---------------------------------------------------------------- runs

def test_verdicts_map_to_exit_codes():
    assert exit_code('pass') == 0
    assert exit_code('electoral') == 0
    assert exit_code('not-related') == 1
    assert exit_code('unsupported') == 2
    assert exit_code('unknown-bounded') == 3


def test_stored_verdicts():
    assert stored_verdict('related') == 'pass'
    assert stored_verdict('not-electoral') == 'fail'
    assert stored_verdict('unknown-bounded') == 'unknown-bounded'


def test_record_run(db):
    run_id = record_run('election', 'lepi', 'electoral', {'verdict': 'electoral'}, seed=0)
    assert run_id is not None
    run = db.query(AnalysisRun).filter(AnalysisRun.id == run_id).first()
    assert run.verdict == 'pass'
    assert run.get_report() == {'verdict': 'electoral'}
