"""
encode and oc-check.
"""
import logging

import click

from calculi.errors import TypeCheckError
from calculi.syntax import Calculus
from certify.correspondence import check_operational_correspondence
from certify.report import combine
from certify.runner import certify_corpus, certify_entry
from corpus.generator import oc_corpus
from corpus.library import CorpusEntry
from encoding.encoder import encode_with_provenance
from sessiontypes.checker import typecheck_cmv, typecheck_cmvplus
from sessiontypes.context import TypingContext
from utils.report_builder import EXIT_INPUT_ERROR, emit_report
from utils.settings import resolve_bounds

from .common import (
    bounds_options,
    calculus_option,
    find_entry,
    finish,
    handle_errors,
    load_subject,
    output_options,
    resolved_seed,
    seed_option
)

logger = logging.getLogger('Workbench.CLI')


def _typed_source(source, calculus, out):
    parsed = load_subject(source, calculus)
    if parsed.calculus is not Calculus.MIX:
        emit_report({'verdict': 'unsupported', 'error': "only CMV+ terms are encoded"}, out)
        raise click.exceptions.Exit(EXIT_INPUT_ERROR)
    return parsed


@click.command('encode')
@click.argument('source')
@calculus_option
@click.option('--recheck', is_flag=True, help="Type the translation in CMV under the translated context.")
@output_options
@handle_errors
def encode_command(source, calculus, recheck, out, record):
    """Translate a well-typed CMV+ SOURCE into CMV."""
    parsed = _typed_source(source, calculus, out)
    try:
        derivation = typecheck_cmvplus(TypingContext(parsed.context), parsed.term)
    except TypeCheckError as e:
        finish('encode', source, 'fail', {'verdict': 'fail', 'error': e.to_dict()}, out, record)
        return
    encoding = encode_with_provenance(derivation)
    report = encoding.to_dict()
    verdict = 'ok'
    if recheck and encoding.context is not None:
        try:
            typecheck_cmv(encoding.context, encoding.term)
            report['recheck'] = 'pass'
        except TypeCheckError as e:
            report['recheck'] = e.to_dict()
            verdict = 'fail'
    report['verdict'] = verdict
    finish('encode', source, verdict, report, out, record)


@click.command('oc-check')
@click.argument('source', required=False)
@calculus_option
@bounds_options
@seed_option
@click.option('--corpus', 'whole_corpus', is_flag=True, help="Check every generated corpus term.")
@click.option('--criteria', is_flag=True, help="Also run barb, divergence, naming and distribution checks.")
@click.option('--renamings', type=int, default=100, show_default=True,
              help="Random injective renamings per term for name invariance.")
@output_options
@handle_errors
def oc_check_command(source, calculus, depth, max_states, seed, whole_corpus, criteria, renamings, out, record):
    """Bounded operational correspondence of SOURCE, or of the whole corpus."""
    bounds = resolve_bounds(depth, max_states)
    seed = resolved_seed(seed)

    if whole_corpus:
        reports = certify_corpus(oc_corpus(), bounds, seed, renamings)
        verdict = combine(r.verdict for r in reports)
        report = {
            'verdict': verdict,
            'terms': len(reports),
            'failing': [r.name for r in reports if r.verdict != 'pass'],
            'reports': [r.to_dict() for r in reports],
        }
        finish('oc-check', 'corpus', verdict, report, out, record, seed)
        return

    if source is None:
        raise click.UsageError("give a SOURCE or --corpus")
    if criteria:
        entry = find_entry(source)
        if entry is None:
            parsed = _typed_source(source, calculus, out)
            entry = CorpusEntry(source, parsed.calculus, _as_source(source))
        result = certify_entry(entry, bounds, seed, renamings)
        finish('oc-check', source, result.verdict, result.to_dict(), out, record, seed)
        return

    parsed = _typed_source(source, calculus, out)
    try:
        result = check_operational_correspondence(parsed.term, TypingContext(parsed.context), bounds)
    except TypeCheckError as e:
        finish('oc-check', source, 'fail', {'verdict': 'fail', 'error': e.to_dict()}, out, record, seed)
        return
    finish('oc-check', source, result.verdict, result.to_dict(), out, record, seed)


def _as_source(source: str) -> str:
    """The .picl text of SOURCE, which is a file or the text itself."""
    try:
        with open(source, encoding='utf-8') as handle:
            text = handle.read()
    except OSError:
        text = source
    if '#calculus' not in text:
        text = '#calculus cmv+\n' + text
    return text


def setup(cli):
    cli.add_command(encode_command)
    cli.add_command(oc_check_command)
    logger.debug("Loaded encoding commands")
