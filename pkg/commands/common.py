"""
Options and plumbing shared by the command modules.
"""
import functools
import logging
import os
from typing import Optional

import click

from calculi.errors import WorkbenchError
from calculi.syntax import Calculus
from corpus.generator import oc_corpus
from corpus.library import CorpusEntry, worked_entry
from parsing.parser import SourceFile, parse_source
from utils.report_builder import EXIT_INPUT_ERROR, emit_report, exit_code, record_run
from utils.settings import get_setting

logger = logging.getLogger('Workbench.CLI')

CALCULUS_CHOICE = click.Choice([c.value for c in Calculus])


def calculus_option(f):
    return click.option(
        '--calculus', type=CALCULUS_CHOICE, default=None,
        help="Calculus of the source; overrides its #calculus header."
    )(f)


def bounds_options(f):
    f = click.option('--max-states', type=int, default=None, help="State bound of every exploration.")(f)
    return click.option('--depth', type=int, default=None, help="Depth bound of every exploration.")(f)


def seed_option(f):
    return click.option('--seed', type=int, default=None, help="Seed of the randomized checks.")(f)


def output_options(f):
    f = click.option('--record', is_flag=True, help="Store the report as an analysis run.")(f)
    return click.option('--out', type=click.Path(dir_okay=False, writable=True), default=None,
                        help="Write the report to a file instead of stdout.")(f)


def find_entry(name: str) -> Optional[CorpusEntry]:
    """A shipped source or a generated corpus term with that name."""
    entry = worked_entry(name)
    if entry is not None:
        return entry
    for generated in oc_corpus():
        if generated.name == name:
            return generated
    return None


def load_subject(source: str, calculus: Optional[str] = None) -> SourceFile:
    """
    Load SOURCE: a .picl file, a corpus name, or the term text itself.

    Raises:
        ParseError: when the text does not parse
    """
    chosen = Calculus(calculus) if calculus else None
    if os.path.isfile(source):
        with open(source, encoding='utf-8') as handle:
            text = handle.read()
        logger.debug(f"Reading source file {source}")
        return parse_source(text, chosen)
    entry = find_entry(source)
    if entry is not None:
        logger.debug(f"Using corpus term {source}")
        return parse_source(entry.source, chosen)
    return parse_source(source, chosen)


def resolved_seed(seed):
    return get_setting('seed', seed)


def finish(command: str, subject: str, verdict: str, report: dict, out=None, record=False, seed=None):
    """Emit the report, optionally record it, and exit with the verdict's code."""
    emit_report(report, out)
    if record:
        record_run(command, subject, verdict, report, seed)
    code = exit_code(verdict)
    if code:
        raise click.exceptions.Exit(code)


def handle_errors(f):
    """Map workbench errors to exit code 2 with a JSON error report."""
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except WorkbenchError as e:
            logger.error(f"{f.__name__}: {e}")
            emit_report({'verdict': 'error', 'error': str(e), 'kind': type(e).__name__})
            raise click.exceptions.Exit(EXIT_INPUT_ERROR)
        except (KeyError, ValueError) as e:
            logger.error(f"{f.__name__}: {e}")
            emit_report({'verdict': 'error', 'error': str(e), 'kind': type(e).__name__})
            raise click.exceptions.Exit(EXIT_INPUT_ERROR)
    return wrapper
