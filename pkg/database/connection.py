import logging
import os

from dotenv import load_dotenv
from sqlalchemy import create_engine
from sqlalchemy.engine import make_url
from sqlalchemy.orm import declarative_base, sessionmaker

logger = logging.getLogger('Workbench.Database')

load_dotenv()

DEFAULT_DATABASE_URL = "sqlite:///workbench.db"

DATABASE_URL = os.getenv("DATABASE_URL") or DEFAULT_DATABASE_URL


def _engine_for(url: str):
    """SQLite files are opened from the CLI and from pytest workers alike."""
    backend = make_url(url).get_backend_name()
    connect_args = {'check_same_thread': False} if backend == 'sqlite' else {}
    logger.debug(f"Database backend: {backend}")
    return create_engine(url, pool_pre_ping=True, echo=False, connect_args=connect_args)


engine = _engine_for(DATABASE_URL)

SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)

Base = declarative_base()


def init_db():
    """
    Create the corpus, run and config tables if they are missing.
    Called by every command that writes the database.
    """
    from . import models  # noqa: F401  registers the tables with Base
    Base.metadata.create_all(bind=engine)


def database_exists(url: str = DATABASE_URL) -> bool:
    """False only for a SQLite file that has not been created yet."""
    parsed = make_url(url)
    if parsed.get_backend_name() != 'sqlite' or parsed.database in (None, '', ':memory:'):
        return True
    return os.path.exists(parsed.database)
