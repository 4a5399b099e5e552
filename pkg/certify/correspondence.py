"""
Bounded operational correspondence of the CMV+ to CMV encoding.

A source term S and its literal translation ⟦S⟧ are explored side by side.
Every reachable source state S' gets its own translation ⟦S'⟧ (typed under
the original context restricted to the free names of S') and the target
states weakly bisimilar to ⟦S'⟧ are computed once by partition refinement.

Completeness: every source step S1 -> S2 has some T1 ≈ ⟦S1⟧ and a weak
move T1 => T2 with T2 ≈ ⟦S2⟧.

Soundness: every reachable target state T completes, T => T', to a state
T' ≈ ⟦S'⟧ for some reachable S'. The stronger claim also asks for a
completion that performs no starting steps.
"""
import logging
from collections import deque
from typing import Callable, Dict, FrozenSet, List, Optional, Tuple

import networkx as nx

from calculi.binding import free_names
from calculi.syntax import Calculus
from encoding.encoder import Encoding, encode_with_provenance, is_starting_step
from encoding.gadgets import gc_junk
from equivalence.bisimulation import bisimilar_states
from parsing.printer import print_term
from semantics.lts import Bounds, Edge, Lts, explore
from sessiontypes.checker import typecheck_cmvplus
from sessiontypes.context import TypingContext

from .report import FAIL, PASS, UNKNOWN, CompletionFinding, EmulationFinding, OcReport

logger = logging.getLogger('Workbench.Certify')


class EncodedSystem:
    """
    A typed source term, its translation, and the explored systems of both.

    Images of source states are encoded and explored on demand and cached.
    """

    def __init__(self, term, context=None, bounds: Optional[Bounds] = None):
        self.term = term
        self.context = context if isinstance(context, TypingContext) else TypingContext(context or ())
        self.bounds = bounds or Bounds()
        self.derivation = typecheck_cmvplus(self.context, term)
        self.encoding: Encoding = encode_with_provenance(self.derivation)
        self.source_lts = explore(term, Calculus.MIX, self.bounds)
        self.target_lts = explore(self.encoding.term, Calculus.CMV, self.bounds, normalize=gc_junk)
        self._images: Dict[int, Lts] = {}
        self._matches: Dict[int, Optional[FrozenSet[int]]] = {}
        logger.info(
            f"Encoded system: {len(self.source_lts)} source states, {len(self.target_lts)} target states"
        )

    @property
    def complete(self) -> bool:
        return self.source_lts.complete and self.target_lts.complete

    def image(self, state: int) -> Lts:
        """The explored translation of source state ``state``."""
        if state not in self._images:
            term = self.source_lts.states[state]
            derivation = typecheck_cmvplus(self.context.only(free_names(term)), term)
            encoded = encode_with_provenance(derivation).term
            self._images[state] = explore(encoded, Calculus.CMV, self.bounds, normalize=gc_junk)
        return self._images[state]

    def matches(self, state: int) -> Optional[FrozenSet[int]]:
        """Target states weakly bisimilar to ⟦S'⟧, None when undecided."""
        if state not in self._matches:
            self._matches[state] = bisimilar_states(self.target_lts, self.image(state))
        return self._matches[state]

    def owners(self) -> Optional[Dict[int, int]]:
        """For each target state matching some image, the least source state it matches."""
        owners: Dict[int, int] = {}
        for state in range(len(self.source_lts)):
            matched = self.matches(state)
            if matched is None:
                return None
            for target in matched:
                owners.setdefault(target, state)
        return owners

    def is_starting(self, edge: Edge) -> bool:
        return is_starting_step(edge.label, self.encoding)


def _nearest(lts: Lts, start: int, goals, allowed: Callable[[Edge], bool]) -> Optional[Tuple[Edge, ...]]:
    """A shortest path from ``start`` into ``goals`` over allowed edges."""
    if start in goals:
        return ()
    parents: Dict[int, Tuple[int, Edge]] = {}
    seen = {start}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for edge in lts.successors(state):
            if edge.target in seen or not allowed(edge):
                continue
            seen.add(edge.target)
            parents[edge.target] = (state, edge)
            if edge.target in goals:
                path: List[Edge] = []
                current = edge.target
                while current != start:
                    current, step = parents[current]
                    path.append(step)
                return tuple(reversed(path))
            queue.append(edge.target)
    return None


def check_completeness(system: EncodedSystem) -> Tuple[Tuple[EmulationFinding, ...], str]:
    """
    Emulate every explored source step.

    Returns:
        The findings, one per source edge, and the verdict
    """
    findings = []
    undecided = not system.complete
    for edge in system.source_lts.edges:
        starts = system.matches(edge.source)
        ends = system.matches(edge.target)
        if starts is None or ends is None:
            undecided = True
            findings.append(EmulationFinding(edge))
            continue
        finding = EmulationFinding(edge)
        for start in sorted(starts):
            distances = nx.single_source_shortest_path_length(system.target_lts.graph, start)
            reached = sorted((distances[t], t) for t in ends if t in distances)
            if reached:
                end = reached[0][1]
                finding = EmulationFinding(edge, start, end, tuple(system.target_lts.path(start, end)))
                break
        findings.append(finding)

    missing = [f for f in findings if not f.emulated]
    if undecided:
        verdict = UNKNOWN
    elif missing:
        verdict = FAIL
    else:
        verdict = PASS
    logger.info(f"Completeness: {len(findings) - len(missing)}/{len(findings)} source steps emulated, {verdict}")
    return tuple(findings), verdict


def check_soundness(system: EncodedSystem) -> Tuple[Tuple[CompletionFinding, ...], str, Tuple[str, ...]]:
    """
    Complete every explored target state to the image of a source state.

    Returns:
        The findings, the verdict and remarks for the report
    """
    owners = system.owners()
    if owners is None or not system.complete:
        return (), UNKNOWN, ("translations of some reducts were not fully explored",)

    goals = frozenset(owners)
    findings = []
    intermediates = 0
    for target in range(len(system.target_lts)):
        path = _nearest(system.target_lts, target, goals, lambda e: True)
        if path is None:
            findings.append(CompletionFinding(target))
            continue
        plain = _nearest(system.target_lts, target, goals, lambda e: not system.is_starting(e))
        end = path[-1].target if path else target
        findings.append(CompletionFinding(target, owners[end], end, path, plain))
        if path:
            intermediates += 1

    stuck = [f for f in findings if not f.completed]
    starting_only = [f for f in findings if f.completed and not f.without_starting_steps]
    verdict = FAIL if stuck or starting_only else PASS
    notes = []
    if intermediates:
        notes.append(
            f"{intermediates} target states are not translations of source states and need a completing "
            f"step, so soundness takes more than one step and a single-step check would reject this encoding"
        )
    if starting_only:
        notes.append(f"{len(starting_only)} target states only complete through starting steps")
    logger.info(f"Soundness: {len(findings) - len(stuck)}/{len(findings)} target states complete, {verdict}")
    return tuple(findings), verdict, tuple(notes)


def check_operational_correspondence(term, context=None, bounds: Optional[Bounds] = None) -> OcReport:
    """
    Completeness and soundness of ⟦Γ ⊢ S⟧ within ``bounds``.

    Raises:
        TypeCheckError: when Γ ⊢ S is not derivable
    """
    system = EncodedSystem(term, context, bounds)
    return correspondence_report(system)


def correspondence_report(system: EncodedSystem) -> OcReport:
    completeness, completeness_verdict = check_completeness(system)
    soundness, soundness_verdict, notes = check_soundness(system)
    return OcReport(
        print_term(system.term), system.bounds, completeness, soundness,
        completeness_verdict, soundness_verdict, notes
    )


def replays(report: OcReport, system: EncodedSystem) -> bool:
    """Every cited emulation and completion path leads where the report says."""
    lts = system.target_lts
    owners = system.owners() or {}
    for finding in report.completeness:
        if finding.emulated and lts.replay(finding.start, list(finding.path)) != finding.end:
            return False
    for finding in report.soundness:
        if not finding.completed:
            continue
        if lts.replay(finding.target, list(finding.path)) != finding.end or finding.end not in owners:
            return False
        if finding.plain_path is not None:
            if lts.replay(finding.target, list(finding.plain_path)) not in owners:
                return False
    return True
