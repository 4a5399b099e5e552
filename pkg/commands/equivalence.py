"""
bisim and coupledsim.
"""
import logging

import click

from calculi.syntax import Calculus
from encoding.gadgets import gc_junk
from equivalence.bisimulation import weak_bisim
from equivalence.coupled import coupled_sim
from semantics.lts import explore
from utils.settings import resolve_bounds

from .common import bounds_options, calculus_option, finish, handle_errors, load_subject, output_options

logger = logging.getLogger('Workbench.CLI')


def _systems(left, right, calculus, depth, max_states, gc):
    bounds = resolve_bounds(depth, max_states)
    systems = []
    for source in (left, right):
        parsed = load_subject(source, calculus)
        normalize = gc_junk if gc and parsed.calculus is Calculus.CMV else None
        systems.append(explore(parsed.term, parsed.calculus, bounds, normalize=normalize))
    return systems


def _compare(name, relation, left, right, calculus, depth, max_states, gc, out, record):
    left_lts, right_lts = _systems(left, right, calculus, depth, max_states, gc)
    result = relation(left_lts, right_lts)
    report = result.to_dict()
    report['left'] = left_lts.to_dict()
    report['right'] = right_lts.to_dict()
    finish(name, f"{left} ~ {right}", result.verdict, report, out, record)


@click.command('bisim')
@click.argument('left')
@click.argument('right')
@calculus_option
@bounds_options
@click.option('--gc', is_flag=True, help="Collect nd-choice junk after every CMV step.")
@output_options
@handle_errors
def bisim_command(left, right, calculus, depth, max_states, gc, out, record):
    """Weak barbed bisimilarity of LEFT and RIGHT, with a witness when they differ."""
    _compare('bisim', weak_bisim, left, right, calculus, depth, max_states, gc, out, record)


@click.command('coupledsim')
@click.argument('left')
@click.argument('right')
@calculus_option
@bounds_options
@click.option('--gc', is_flag=True, help="Collect nd-choice junk after every CMV step.")
@output_options
@handle_errors
def coupledsim_command(left, right, calculus, depth, max_states, gc, out, record):
    """Coupled similarity of LEFT and RIGHT; the relation is exported when it holds."""
    _compare('coupledsim', coupled_sim, left, right, calculus, depth, max_states, gc, out, record)


def setup(cli):
    cli.add_command(bisim_command)
    cli.add_command(coupledsim_command)
    logger.debug("Loaded equivalence commands")
