"""
parse, typecheck, step, explore and export.
"""
import logging

import click

from calculi.canonical import canonicalize
from calculi.errors import TypeCheckError
from calculi.syntax import Calculus
from encoding.gadgets import gc_junk
from parsing.printer import print_term, print_type
from semantics.lts import explore
from semantics.steps import steps
from sessiontypes.checker import typecheck_cmv, typecheck_cmvplus
from sessiontypes.context import TypingContext
from utils.report_builder import EXIT_INPUT_ERROR, emit_report
from utils.settings import resolve_bounds

from .common import bounds_options, calculus_option, finish, handle_errors, load_subject, output_options

logger = logging.getLogger('Workbench.CLI')


@click.command('parse')
@click.argument('source')
@calculus_option
@click.option('--canonical', is_flag=True, help="Print the canonical representative instead.")
@output_options
@handle_errors
def parse_command(source, calculus, canonical, out, record):
    """Parse SOURCE and print it back."""
    parsed = load_subject(source, calculus)
    term = canonicalize(parsed.term, parsed.calculus) if canonical else parsed.term
    report = {
        'calculus': parsed.calculus.value,
        'term': print_term(term),
        'context': [[str(name), print_type(t)] for name, t in parsed.context],
        'definitions': dict(sorted(parsed.definitions.items())),
    }
    finish('parse', source, 'ok', report, out, record)


@click.command('typecheck')
@click.argument('source')
@calculus_option
@output_options
@handle_errors
def typecheck_command(source, calculus, out, record):
    """Type SOURCE under its #free context and print the derivation."""
    parsed = load_subject(source, calculus)
    if parsed.calculus is Calculus.PI:
        emit_report({'verdict': 'unsupported', 'error': "π terms are untyped"}, out)
        raise click.exceptions.Exit(EXIT_INPUT_ERROR)
    check = typecheck_cmvplus if parsed.calculus is Calculus.MIX else typecheck_cmv
    try:
        derivation = check(TypingContext(parsed.context), parsed.term)
    except TypeCheckError as e:
        logger.info(f"Typing rejected: {e}")
        finish('typecheck', source, 'fail', {'verdict': 'fail', 'error': e.to_dict()}, out, record)
        return
    report = {
        'verdict': 'ok',
        'rules': derivation.rules(),
        'derivation': derivation.to_dict(),
    }
    finish('typecheck', source, 'ok', report, out, record)


@click.command('step')
@click.argument('source')
@calculus_option
@output_options
@handle_errors
def step_command(source, calculus, out, record):
    """List the one-step reducts of SOURCE."""
    parsed = load_subject(source, calculus)
    found = steps(parsed.term, parsed.calculus)
    report = {
        'source': print_term(canonicalize(parsed.term, parsed.calculus)),
        'steps': [{'label': s.label.to_dict(), 'target': print_term(s.target)} for s in found],
    }
    finish('step', source, 'ok', report, out, record)


def _explored(source, calculus, depth, max_states, gc):
    parsed = load_subject(source, calculus)
    normalize = gc_junk if gc and parsed.calculus is Calculus.CMV else None
    return explore(parsed.term, parsed.calculus, resolve_bounds(depth, max_states), normalize=normalize)


@click.command('explore')
@click.argument('source')
@calculus_option
@bounds_options
@click.option('--gc', is_flag=True, help="Collect nd-choice junk after every CMV step.")
@output_options
@handle_errors
def explore_command(source, calculus, depth, max_states, gc, out, record):
    """Explore the reachable states of SOURCE within the bounds."""
    lts = _explored(source, calculus, depth, max_states, gc)
    verdict = 'ok' if lts.complete else 'unknown-bounded'
    report = lts.to_dict()
    report['verdict'] = verdict
    finish('explore', source, verdict, report, out, record)


@click.command('export')
@click.argument('source')
@calculus_option
@bounds_options
@click.option('--gc', is_flag=True, help="Collect nd-choice junk after every CMV step.")
@click.option('--dot', 'fmt', flag_value='dot', help="Graphviz DOT output.")
@click.option('--json', 'fmt', flag_value='json', default=True, help="JSON output (default).")
@click.option('--out', type=click.Path(dir_okay=False, writable=True), default=None)
@handle_errors
def export_command(source, calculus, depth, max_states, gc, fmt, out):
    """Export the explored LTS of SOURCE as DOT or JSON."""
    lts = _explored(source, calculus, depth, max_states, gc)
    if fmt != 'dot':
        emit_report(lts.to_dict(), out)
        return
    text = lts.to_dot()
    if out:
        with open(out, 'w', encoding='utf-8') as handle:
            handle.write(text)
        logger.info(f"DOT written to {out}")
    else:
        click.echo(text)


def setup(cli):
    cli.add_command(parse_command)
    cli.add_command(typecheck_command)
    cli.add_command(step_command)
    cli.add_command(explore_command)
    cli.add_command(export_command)
    logger.debug("Loaded syntax commands")
