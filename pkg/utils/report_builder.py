"""
Report helpers for the command-line surface.

Reports are JSON with sorted keys and two-space indentation and carry no
timestamps, so equal inputs and seeds give byte-identical output.
"""
import json
import logging
from typing import Any, Optional

import click

from database.connection import SessionLocal, init_db
from database.models import AnalysisRun

logger = logging.getLogger('Workbench.CLI')

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2
EXIT_UNKNOWN = 3

_EXIT_CODES = {
    'ok': EXIT_OK,
    'pass': EXIT_OK,
    'related': EXIT_OK,
    'electoral': EXIT_OK,
    'fail': EXIT_VIOLATION,
    'not-related': EXIT_VIOLATION,
    'not-electoral': EXIT_VIOLATION,
    'unknown-bounded': EXIT_UNKNOWN,
    'unsupported': EXIT_INPUT_ERROR,
}


def dump_report(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)


def emit_report(data: Any, out: Optional[str] = None):
    """Write the report to ``out``, or to stdout when no file is given."""
    text = dump_report(data)
    if out:
        with open(out, 'w', encoding='utf-8') as handle:
            handle.write(text + '\n')
        logger.info(f"Report written to {out}")
    else:
        click.echo(text)


def exit_code(verdict: str) -> int:
    """
    The process exit code of a verdict.

    Unrecognised verdicts count as violations.
    """
    return _EXIT_CODES.get(verdict, EXIT_VIOLATION)


def stored_verdict(verdict: str) -> str:
    """The verdict as the analysis_runs table stores it."""
    if verdict in ('related', 'electoral'):
        return 'pass'
    if verdict in ('not-related', 'not-electoral'):
        return 'fail'
    if verdict in ('ok', 'pass', 'fail', 'unknown-bounded', 'unsupported', 'error'):
        return verdict
    return 'fail'


def record_run(command: str, subject: str, verdict: str, report: Any, seed: Optional[int] = None) -> Optional[int]:
    """
    Persist a report as an AnalysisRun.

    Returns:
        The id of the new row, or None when the database write failed
    """
    init_db()
    db = SessionLocal()
    try:
        run = AnalysisRun(
            command=command,
            subject=subject,
            seed=seed,
            verdict=stored_verdict(verdict),
            report=dump_report(report)
        )
        db.add(run)
        db.commit()
        logger.info(f"Recorded {command} run {run.id} ({run.verdict})")
        return run.id
    except Exception as e:
        logger.error(f"Error recording {command} run: {e}")
        db.rollback()
        return None
    finally:
        db.close()
