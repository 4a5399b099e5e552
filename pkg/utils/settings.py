"""
Workbench settings: command-line flag, then the config table, then the
environment, then the built-in default.
"""
import logging
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from database.connection import SessionLocal, database_exists, init_db
from database.models import Config
from semantics.lts import DEFAULT_MAX_DEPTH, DEFAULT_MAX_STATES, Bounds

logger = logging.getLogger('Workbench.Database')


@dataclass(frozen=True)
class Setting:
    key: str
    env: str
    default: Any
    value_type: str
    description: str


SETTINGS: Dict[str, Setting] = {
    s.key: s for s in (
        Setting('max_depth', 'WORKBENCH_MAX_DEPTH', DEFAULT_MAX_DEPTH, 'int', "Depth bound of every exploration"),
        Setting('max_states', 'WORKBENCH_MAX_STATES', DEFAULT_MAX_STATES, 'int', "State bound of every exploration"),
        Setting('seed', 'WORKBENCH_SEED', 0, 'int', "Seed of the randomized checks"),
        Setting('star_max_nodes', 'WORKBENCH_STAR_MAX_NODES', 13, 'int', "Size bound of the pattern enumeration"),
    )
}

_CASTS = {'int': int, 'float': float, 'string': str, 'bool': lambda v: str(v).lower() in ('true', '1', 'yes')}


def _setting(key: str) -> Setting:
    if key not in SETTINGS:
        raise KeyError(f"unknown setting '{key}', expected one of {', '.join(sorted(SETTINGS))}")
    return SETTINGS[key]


def _stored(key: str) -> Optional[Any]:
    if not database_exists():
        return None
    db = SessionLocal()
    try:
        config = db.query(Config).filter(Config.key == key).first()
        return config.get_typed_value() if config else None
    except Exception as e:
        logger.error(f"Error reading setting {key}: {e}")
        return None
    finally:
        db.close()


def get_setting(key: str, flag: Optional[Any] = None) -> Any:
    """
    Resolve one setting.

    Raises:
        KeyError: for an unknown key
    """
    setting = _setting(key)
    if flag is not None:
        return flag
    stored = _stored(key)
    if stored is not None:
        return stored
    env = os.getenv(setting.env)
    if env:
        return _CASTS[setting.value_type](env)
    return setting.default


def set_setting(key: str, value: str) -> Any:
    """
    Store a setting in the config table and return its typed value.

    Raises:
        KeyError: for an unknown key
        ValueError: when the value does not parse as the setting's type
    """
    setting = _setting(key)
    typed = _CASTS[setting.value_type](value)
    init_db()
    db = SessionLocal()
    try:
        config = db.query(Config).filter(Config.key == key).first()
        if config:
            config.value = str(typed)
        else:
            db.add(Config(key=key, value=str(typed), value_type=setting.value_type, description=setting.description))
        db.commit()
        logger.info(f"Setting {key} = {typed}")
        return typed
    except Exception as e:
        logger.error(f"Error storing setting {key}: {e}")
        db.rollback()
        raise
    finally:
        db.close()


def list_settings() -> List[dict]:
    """Every known setting with its resolved value."""
    return [
        {'key': s.key, 'value': get_setting(s.key), 'env': s.env, 'default': s.default, 'description': s.description}
        for s in SETTINGS.values()
    ]


def resolve_bounds(depth: Optional[int] = None, max_states: Optional[int] = None) -> Bounds:
    return Bounds(get_setting('max_depth', depth), get_setting('max_states', max_states))
