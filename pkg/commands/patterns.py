"""
pattern, confluence, election, hypergraph and symmetry.
"""
import logging

import click

from calculi.syntax import Calculus
from patterns.confluence import confluence_check, lemma_pairs, random_confluence
from patterns.election import electoral_check
from patterns.enumeration import scan_patterns
from patterns.hypergraph import (
    automorphism_from_cycles,
    build_hypergraph,
    check_symmetry,
    decompose,
    find_automorphisms,
    orbits
)
from patterns.synchronization import detect_m, detect_star
from semantics.steps import steps
from utils.settings import get_setting, resolve_bounds

from .common import (
    bounds_options,
    calculus_option,
    finish,
    handle_errors,
    load_subject,
    output_options,
    resolved_seed,
    seed_option
)

logger = logging.getLogger('Workbench.CLI')

DETECTORS = {'m': detect_m, 'star': detect_star}


@click.command('pattern')
@click.argument('kind', type=click.Choice(sorted(DETECTORS)))
@click.argument('source', required=False)
@calculus_option
@bounds_options
@click.option('--behavioural', is_flag=True, help="Also compare the reducts up to weak bisimilarity.")
@click.option('--enumerate', 'scan', is_flag=True, help="Scan every small CMV+ network instead of SOURCE.")
@click.option('--max-nodes', type=int, default=None, help="Size bound of the scan.")
@click.option('--channels', type=click.IntRange(1, 2), default=2, show_default=True)
@output_options
@handle_errors
def pattern_command(kind, source, calculus, depth, max_states, behavioural, scan, max_nodes, channels, out, record):
    """Look for the synchronization pattern M or ★ in SOURCE."""
    if scan:
        max_nodes = get_setting('star_max_nodes', max_nodes)
        result = scan_patterns(max_nodes, channels)
        report = result.to_dict()
        if kind == 'star':
            verdict = 'pass' if result.star_free else 'fail'
        else:
            verdict = 'pass' if result.m_witness is not None else 'fail'
        report['verdict'] = verdict
        finish('pattern', f"{kind} scan up to {max_nodes}", verdict, report, out, record)
        return

    if source is None:
        raise click.UsageError("give a SOURCE or --enumerate")
    parsed = load_subject(source, calculus)
    bounds = resolve_bounds(depth, max_states) if behavioural else None
    witness = DETECTORS[kind](parsed.term, parsed.calculus, behavioural=behavioural, bounds=bounds)
    report = {
        'pattern': kind,
        'found': witness is not None,
        'witness': witness.to_dict() if witness is not None else None,
    }
    finish('pattern', source, 'ok', report, out, record)


@click.command('confluence')
@click.argument('source', required=False)
@calculus_option
@seed_option
@click.option('--random', 'count', type=int, default=None, help="Check COUNT random lemma-shaped instances.")
@output_options
@handle_errors
def confluence_command(source, calculus, seed, count, out, record):
    """Close the diamond for every lemma-shaped pair of steps."""
    if source is None and count is None:
        raise click.UsageError("give a SOURCE or --random COUNT")
    seed = resolved_seed(seed)
    if count is not None:
        summary = random_confluence(count, seed)
        verdict = 'pass' if not summary.counterexamples else 'fail'
        report = summary.to_dict()
        report['verdict'] = verdict
        finish('confluence', f"random {count}", verdict, report, out, record, seed)
        return

    parsed = load_subject(source, calculus)
    if parsed.calculus is not Calculus.MIX:
        raise click.UsageError("the confluence lemma is about CMV+ terms")
    results = [
        confluence_check(parsed.term, first, second)
        for first, second in lemma_pairs(steps(parsed.term, Calculus.MIX))
    ]
    verdict = 'pass' if all(r.closed for r in results) else 'fail'
    report = {'verdict': verdict, 'pairs': len(results), 'results': [r.to_dict() for r in results]}
    finish('confluence', source, verdict, report, out, record, seed)


@click.command('election')
@click.argument('source')
@calculus_option
@bounds_options
@output_options
@handle_errors
def election_command(source, calculus, depth, max_states, out, record):
    """Decide whether SOURCE is an electoral system."""
    parsed = load_subject(source, calculus)
    result = electoral_check(parsed.term, parsed.calculus, resolve_bounds(depth, max_states))
    finish('election', source, result.verdict, result.to_dict(), out, record)


@click.command('hypergraph')
@click.argument('source')
@calculus_option
@click.option('--dot', is_flag=True, help="Print the hypergraph as DOT instead.")
@output_options
@handle_errors
def hypergraph_command(source, calculus, dot, out, record):
    """The hypergraph of SOURCE, its automorphisms and their orbits."""
    parsed = load_subject(source, calculus)
    graph = build_hypergraph(decompose(parsed.term, parsed.calculus))
    if dot:
        click.echo(graph.to_dot())
        return
    automorphisms = find_automorphisms(graph)
    report = {
        'hypergraph': graph.to_dict(),
        'automorphisms': [
            dict(sigma.to_dict(), orbits=[sorted(o) for o in orbits(sigma)])
            for sigma in automorphisms
        ],
    }
    finish('hypergraph', source, 'ok', report, out, record)


@click.command('symmetry')
@click.argument('source')
@click.option('--cycle', 'cycles', multiple=True, required=True,
              help="A cycle of σ, e.g. '1 2 3 4 5' or 'a b c d e'; repeatable.")
@calculus_option
@bounds_options
@output_options
@handle_errors
def symmetry_command(source, cycles, calculus, depth, max_states, out, record):
    """Check that SOURCE is symmetric with respect to σ."""
    parsed = load_subject(source, calculus)
    net = decompose(parsed.term, parsed.calculus)
    sigma = automorphism_from_cycles([c.split() for c in cycles], build_hypergraph(net))
    result = check_symmetry(net, sigma, resolve_bounds(depth, max_states))
    report = result.to_dict()
    report['sigma'] = sigma.to_dict()
    report['orbits'] = [sorted(o) for o in orbits(sigma)]
    if not result.is_automorphism:
        report['verdict'] = 'fail'
        finish('symmetry', source, 'fail', report, out, record)
        return
    report['verdict'] = result.verdict
    finish('symmetry', source, result.verdict, report, out, record)


def setup(cli):
    cli.add_command(pattern_command)
    cli.add_command(confluence_command)
    cli.add_command(election_command)
    cli.add_command(hypergraph_command)
    cli.add_command(symmetry_command)
    logger.debug("Loaded pattern commands")
