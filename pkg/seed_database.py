#!/usr/bin/env python3
"""
Database Seeding Script for the workbench

This script populates the database with:
- The worked corpus shipped in corpus/sources
- The generated operational-correspondence corpus
- Default config values (bounds, seed, scan size)

Safe to run multiple times - existing rows are updated in place.

Usage:
    python seed_database.py
"""

import logging
import os
import sys
from typing import Iterable, Optional, Tuple

from dotenv import load_dotenv

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from calculi.errors import TypeCheckError, WorkbenchError
from calculi.syntax import Calculus
from corpus.generator import oc_corpus
from corpus.library import CorpusEntry, worked_entries
from database.connection import SessionLocal, init_db
from database.models import Config, CorpusTerm
from sessiontypes.checker import typecheck_cmv, typecheck_cmvplus
from sessiontypes.context import TypingContext
from utils.settings import SETTINGS

logger = logging.getLogger('Workbench.Database')


def well_typed(entry: CorpusEntry) -> Optional[bool]:
    """None for π terms, otherwise whether the term types under its #free context."""
    if entry.calculus is Calculus.PI:
        return None
    try:
        source = entry.load()
        check = typecheck_cmvplus if source.calculus is Calculus.MIX else typecheck_cmv
        check(TypingContext(source.context), source.term)
        return True
    except TypeCheckError:
        return False


def seed_corpus(db, entries: Iterable[CorpusEntry]) -> Tuple[int, int]:
    """
    Insert or update corpus terms by name.

    Returns:
        (added, updated)
    """
    added = 0
    updated = 0
    for entry in entries:
        try:
            typed = well_typed(entry)
        except WorkbenchError as e:
            logger.warning(f"Skipping {entry.name}: {e}")
            continue
        existing = db.query(CorpusTerm).filter(CorpusTerm.name == entry.name).first()
        if existing:
            if existing.source != entry.source or existing.well_typed != typed:
                existing.source = entry.source
                existing.calculus = entry.calculus.value
                existing.free_context = entry.free_context
                existing.well_typed = typed
                existing.description = entry.description
                updated += 1
            continue
        db.add(CorpusTerm(
            name=entry.name,
            calculus=entry.calculus.value,
            source=entry.source,
            free_context=entry.free_context,
            well_typed=typed,
            description=entry.description
        ))
        added += 1

    if added > 0 or updated > 0:
        db.commit()
    logger.info(f"Corpus seeded: {added} added, {updated} updated")
    return added, updated


def seed_config(db) -> int:
    """Add the config rows that are missing; existing values are kept."""
    added = 0
    for setting in SETTINGS.values():
        if db.query(Config).filter(Config.key == setting.key).first():
            continue
        db.add(Config(
            key=setting.key,
            value=str(setting.default),
            value_type=setting.value_type,
            description=setting.description
        ))
        added += 1
    if added > 0:
        db.commit()
    logger.info(f"Config seeded: {added} added")
    return added


def seed_all(db) -> dict:
    added, updated = seed_corpus(db, list(worked_entries()) + oc_corpus())
    return {'corpus_added': added, 'corpus_updated': updated, 'config_added': seed_config(db)}


def main():
    """Main seeding function."""
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    load_dotenv()

    # Initialize database (create tables if they don't exist)
    try:
        init_db()
        logger.info("Database tables initialized")
    except Exception as e:
        logger.error(f"Failed to initialize database: {e}")
        sys.exit(1)

    db = SessionLocal()
    try:
        counts = seed_all(db)
        logger.info(f"Database seeding completed: {counts}")
    except Exception as e:
        db.rollback()
        logger.error(f"Error during seeding: {e}")
        sys.exit(1)
    finally:
        db.close()


if __name__ == "__main__":
    main()
