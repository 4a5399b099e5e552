"""
Reports of the encodability checks.

Reports are plain data: every path they cite is a list of LTS edges that
can be replayed on the systems they were computed on.
"""
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from semantics.lts import Bounds, Edge

PASS = 'pass'
FAIL = 'fail'
UNKNOWN = 'unknown-bounded'
UNSUPPORTED = 'unsupported'


def edge_text(edge: Edge) -> dict:
    return {'source': edge.source, 'target': edge.target, 'step': edge.label.describe()}


def combine(verdicts) -> str:
    """fail beats unknown-bounded beats pass."""
    verdicts = list(verdicts)
    if FAIL in verdicts:
        return FAIL
    if UNKNOWN in verdicts:
        return UNKNOWN
    if UNSUPPORTED in verdicts:
        return UNSUPPORTED
    return PASS


@dataclass(frozen=True)
class EmulationFinding:
    """How one source step S1 -> S2 is emulated, if at all."""
    source_edge: Edge
    start: Optional[int] = None
    end: Optional[int] = None
    path: Tuple[Edge, ...] = ()

    @property
    def emulated(self) -> bool:
        return self.end is not None

    def to_dict(self) -> dict:
        return {
            'source_step': edge_text(self.source_edge),
            'emulated': self.emulated,
            'start': self.start,
            'end': self.end,
            'path': [edge_text(e) for e in self.path],
        }


@dataclass(frozen=True)
class CompletionFinding:
    """
    How a target state T completes to the image of some source state.

    ``path`` is a shortest completion; ``plain_path`` is the shortest one
    avoiding starting steps, when there is one.
    """
    target: int
    source_state: Optional[int] = None
    end: Optional[int] = None
    path: Tuple[Edge, ...] = ()
    plain_path: Optional[Tuple[Edge, ...]] = None

    @property
    def completed(self) -> bool:
        return self.end is not None

    @property
    def without_starting_steps(self) -> bool:
        return self.plain_path is not None

    def to_dict(self) -> dict:
        return {
            'target_state': self.target,
            'completed': self.completed,
            'source_state': self.source_state,
            'end': self.end,
            'path': [edge_text(e) for e in self.path],
            'without_starting_steps': self.without_starting_steps,
            'plain_path': [edge_text(e) for e in self.plain_path] if self.plain_path is not None else None,
        }


@dataclass(frozen=True)
class OcReport:
    """Bounded operational correspondence of one source term."""
    source: str
    bounds: Bounds
    completeness: Tuple[EmulationFinding, ...] = ()
    soundness: Tuple[CompletionFinding, ...] = ()
    completeness_verdict: str = PASS
    soundness_verdict: str = PASS
    notes: Tuple[str, ...] = ()

    @property
    def verdict(self) -> str:
        return combine((self.completeness_verdict, self.soundness_verdict))

    def to_dict(self) -> dict:
        return {
            'source': self.source,
            'bounds': self.bounds.to_dict(),
            'verdict': self.verdict,
            'completeness': {
                'verdict': self.completeness_verdict,
                'findings': [f.to_dict() for f in self.completeness],
            },
            'soundness': {
                'verdict': self.soundness_verdict,
                'findings': [f.to_dict() for f in self.soundness],
            },
            'notes': list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


@dataclass(frozen=True)
class CriterionReport:
    """The verdict of one of the remaining criteria, with its evidence."""
    criterion: str
    verdict: str
    details: Dict = field(default_factory=dict)
    detail: str = ''

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        return {
            'criterion': self.criterion,
            'verdict': self.verdict,
            'details': self.details,
            'detail': self.detail,
        }


@dataclass(frozen=True)
class CertificationReport:
    """Every check run on one corpus term."""
    name: str
    correspondence: Optional[OcReport]
    criteria: Tuple[CriterionReport, ...] = ()
    error: str = ''

    @property
    def verdict(self) -> str:
        if self.error:
            return FAIL
        verdicts: List[str] = [c.verdict for c in self.criteria]
        if self.correspondence is not None:
            verdicts.append(self.correspondence.verdict)
        return combine(verdicts)

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'verdict': self.verdict,
            'correspondence': self.correspondence.to_dict() if self.correspondence is not None else None,
            'criteria': [c.to_dict() for c in self.criteria],
            'error': self.error,
        }
