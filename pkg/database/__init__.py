from .connection import engine, SessionLocal, Base, database_exists, init_db
from .models import CorpusTerm, AnalysisRun, Config

__all__ = [
    'engine',
    'SessionLocal',
    'Base',
    'database_exists',
    'init_db',
    'CorpusTerm',
    'AnalysisRun',
    'Config'
]
