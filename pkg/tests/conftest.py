import os
import sys
import tempfile

import pytest

# The database URL must be set before anything imports database.connection.
_DB_DIR = tempfile.mkdtemp(prefix='workbench-tests-')
os.environ['DATABASE_URL'] = f"sqlite:///{os.path.join(_DB_DIR, 'workbench.db')}"
for _key in ('WORKBENCH_MAX_DEPTH', 'WORKBENCH_MAX_STATES', 'WORKBENCH_SEED', 'WORKBENCH_STAR_MAX_NODES'):
    os.environ.pop(_key, None)

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from corpus.library import LEADER_ELECTION, PATTERN_M, STAR, TRANSLATION, load_worked  # noqa: E402
from database.connection import Base, engine, init_db  # noqa: E402


@pytest.fixture(scope="session")
def lepi():
    return load_worked(LEADER_ELECTION)


@pytest.fixture(scope="session")
def pspi():
    return load_worked(STAR)


@pytest.fixture(scope="session")
def pm():
    return load_worked(PATTERN_M)


@pytest.fixture(scope="session")
def translation():
    return load_worked(TRANSLATION)


@pytest.fixture
def db_tables():
    """Fresh tables for one test."""
    init_db()
    yield
    Base.metadata.drop_all(bind=engine)
