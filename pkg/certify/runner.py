"""
Runs every encodability check on corpus entries.
"""
import logging
import random
from typing import Iterable, List, Optional

from calculi.binding import free_names
from calculi.canonical import split_level
from calculi.errors import TypeCheckError, WorkbenchError
from calculi.syntax import Calculus
from corpus.generator import random_injective_renaming
from corpus.library import CorpusEntry
from semantics.lts import Bounds

from .correspondence import EncodedSystem, correspondence_report
from .criteria import (
    DISTRIBUTABILITY,
    NAME_INVARIANCE,
    check_barb_sensitiveness,
    check_distributability_structural,
    check_divergence_reflection,
    check_name_invariance,
    check_type_preservation
)
from .report import PASS, UNSUPPORTED, CertificationReport, CriterionReport

logger = logging.getLogger('Workbench.Certify')


def _name_invariance(source, rng: random.Random, renamings: int) -> CriterionReport:
    names = sorted(set(free_names(source.term)) | {name for name, _ in source.context})
    if not names:
        return CriterionReport(NAME_INVARIANCE, PASS, detail="no free names: the identity is the only renaming")
    report = None
    for _ in range(renamings):
        report = check_name_invariance(source.term, source.context, random_injective_renaming(rng, names))
        if not report.passed:
            break
    return report


def _distributability(source) -> Optional[CriterionReport]:
    binders, threads = split_level(source.term)
    if binders or len(threads) < 2:
        return None
    try:
        return check_distributability_structural(threads, source.context)
    except TypeCheckError as e:
        return CriterionReport(DISTRIBUTABILITY, UNSUPPORTED, e.to_dict(), "components are not separately typable")


def certify_entry(
    entry: CorpusEntry,
    bounds: Optional[Bounds] = None,
    seed: int = 0,
    renamings: int = 1
) -> CertificationReport:
    """
    Operational correspondence plus the structural criteria for one entry.

    Name invariance is checked under ``renamings`` random injective
    renamings of the free names, stopping at the first failure.

    Failures to parse or type the entry are reported, never raised.
    """
    try:
        source = entry.load()
    except WorkbenchError as e:
        return CertificationReport(entry.name, None, error=str(e))
    if source.calculus is not Calculus.MIX:
        return CertificationReport(entry.name, None, (
            CriterionReport('applicability', UNSUPPORTED, detail=f"{source.calculus.value} terms are not encoded"),
        ))

    try:
        system = EncodedSystem(source.term, source.context, bounds)
    except TypeCheckError as e:
        logger.warning(f"{entry.name} is not well typed: {e}")
        return CertificationReport(entry.name, None, error=str(e))

    criteria = [
        check_type_preservation(system),
        check_barb_sensitiveness(system),
        check_divergence_reflection(system),
        _name_invariance(source, random.Random(seed), renamings),
    ]
    distributed = _distributability(source)
    if distributed is not None:
        criteria.append(distributed)

    report = CertificationReport(entry.name, correspondence_report(system), tuple(criteria))
    logger.info(f"Certified {entry.name}: {report.verdict}")
    return report


def certify_corpus(
    entries: Iterable[CorpusEntry],
    bounds: Optional[Bounds] = None,
    seed: int = 0,
    renamings: int = 1
) -> List[CertificationReport]:
    return [certify_entry(entry, bounds, seed, renamings) for entry in entries]
