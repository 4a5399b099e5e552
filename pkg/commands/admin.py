"""
corpus seed|list and config set|get|list.
"""
import logging

import click

from database.connection import SessionLocal, init_db
from database.models import AnalysisRun, CorpusTerm
from seed_database import seed_all
from utils.report_builder import EXIT_INPUT_ERROR, emit_report
from utils.settings import SETTINGS, get_setting, list_settings, set_setting

logger = logging.getLogger('Workbench.CLI')


@click.group('corpus')
def corpus_group():
    """Manage the stored term corpus."""


@corpus_group.command('seed')
def corpus_seed():
    """Load the worked and generated corpora into the database."""
    init_db()
    db = SessionLocal()
    try:
        counts = seed_all(db)
        emit_report(dict(counts, verdict='ok'))
    except Exception as e:
        logger.error(f"Error seeding corpus: {e}")
        db.rollback()
        emit_report({'verdict': 'error', 'error': str(e)})
        raise click.exceptions.Exit(EXIT_INPUT_ERROR)
    finally:
        db.close()


@corpus_group.command('list')
@click.option('--calculus', type=click.Choice(['pi', 'cmv+', 'cmv']), default=None)
def corpus_list(calculus):
    """List stored corpus terms."""
    init_db()
    db = SessionLocal()
    try:
        query = db.query(CorpusTerm)
        if calculus:
            query = query.filter(CorpusTerm.calculus == calculus)
        terms = query.order_by(CorpusTerm.name).all()
        emit_report([
            {
                'name': t.name,
                'calculus': t.calculus,
                'well_typed': t.well_typed,
                'description': t.description,
            }
            for t in terms
        ])
    finally:
        db.close()


@corpus_group.command('runs')
@click.option('--command', 'command_name', default=None, help="Only runs of this command.")
@click.option('--verdict', default=None)
def corpus_runs(command_name, verdict):
    """List recorded analysis runs."""
    init_db()
    db = SessionLocal()
    try:
        query = db.query(AnalysisRun)
        if command_name:
            query = query.filter(AnalysisRun.command == command_name)
        if verdict:
            query = query.filter(AnalysisRun.verdict == verdict)
        emit_report([
            {'id': r.id, 'command': r.command, 'subject': r.subject, 'seed': r.seed, 'verdict': r.verdict}
            for r in query.order_by(AnalysisRun.id).all()
        ])
    finally:
        db.close()


@click.group('config')
def config_group():
    """Read and change stored settings."""


@config_group.command('set')
@click.argument('key', type=click.Choice(sorted(SETTINGS)))
@click.argument('value')
def config_set(key, value):
    """Store VALUE for KEY."""
    try:
        typed = set_setting(key, value)
    except ValueError as e:
        emit_report({'verdict': 'error', 'error': str(e)})
        raise click.exceptions.Exit(EXIT_INPUT_ERROR)
    emit_report({'key': key, 'value': typed})


@config_group.command('get')
@click.argument('key', type=click.Choice(sorted(SETTINGS)))
def config_get(key):
    """Print the resolved value of KEY."""
    emit_report({'key': key, 'value': get_setting(key)})


@config_group.command('list')
def config_list():
    """Print every setting with its resolved value."""
    emit_report(list_settings())


def setup(cli):
    cli.add_command(corpus_group)
    cli.add_command(config_group)
    logger.debug("Loaded admin commands")
