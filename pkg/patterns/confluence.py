"""
The confluence diamond for CMV+.

Two interactions reducing choices on different endpoints of a network
touch distributable parts of it, so each can still be performed after the
other and both orders meet in a common state D.
"""
import logging
import random
from dataclasses import dataclass
from typing import List, Optional, Tuple

import networkx as nx

from calculi.errors import DifferentOriginError
from calculi.syntax import Calculus
from corpus.generator import random_mix_network
from parsing.printer import print_term
from semantics.steps import Step, StepKind, StepLabel, steps

logger = logging.getLogger('Workbench.Patterns')

CHOICE_KINDS = frozenset({StepKind.LIN_LIN, StepKind.LIN_UN, StepKind.UN_LIN, StepKind.UN_UN})

DIAMOND = 'diamond'
COUNTEREXAMPLE = 'counterexample'
PRECONDITION = 'precondition-violated'


@dataclass(frozen=True)
class ConfluenceResult:
    verdict: str
    source: object
    first: Step
    second: Step
    meet: Optional[object] = None
    closing: Tuple[Optional[StepLabel], Optional[StepLabel]] = (None, None)
    reason: str = ''

    @property
    def closed(self) -> bool:
        return self.verdict == DIAMOND

    def to_dict(self) -> dict:
        data = {
            'verdict': self.verdict,
            'A': print_term(self.source),
            'B': print_term(self.first.target),
            'C': print_term(self.second.target),
            'A->B': self.first.label.to_dict(),
            'A->C': self.second.label.to_dict(),
            'reason': self.reason,
        }
        if self.meet is not None:
            data['D'] = print_term(self.meet)
            data['B->D'] = self.closing[0].to_dict()
            data['C->D'] = self.closing[1].to_dict()
        return data

    def to_dot(self) -> str:
        graph = nx.DiGraph()
        corners = [('A', self.source), ('B', self.first.target), ('C', self.second.target)]
        if self.meet is not None:
            corners.append(('D', self.meet))
        for name, term in corners:
            graph.add_node(name, label=f'"{name}: {print_term(term)}"')
        graph.add_edge('A', 'B', label=f'"{self.first.label.describe()}"')
        graph.add_edge('A', 'C', label=f'"{self.second.label.describe()}"')
        if self.meet is not None:
            graph.add_edge('B', 'D', label=f'"{self.closing[0].describe()}"')
            graph.add_edge('C', 'D', label=f'"{self.closing[1].describe()}"')
        return nx.nx_pydot.to_pydot(graph).to_string()


def lemma_precondition(first: StepLabel, second: StepLabel) -> Optional[str]:
    """
    None when the two steps are interactions reducing different choices,
    otherwise the reason they are not.

    Raises:
        DifferentOriginError: when the steps leave different states
    """
    if first.origin != second.origin:
        raise DifferentOriginError(f"steps leave different states ({first.origin} and {second.origin})")
    for label in (first, second):
        if label.kind not in CHOICE_KINDS:
            return f"{label.describe()} is not a choice interaction"
    if first == second:
        return "the two steps are the same step"
    shared = sorted(first.consumed & second.consumed)
    if shared:
        return f"both steps reduce the choice at {list(shared[0])}"
    return None


def confluence_check(term, first: Step, second: Step, calculus=Calculus.MIX) -> ConfluenceResult:
    """
    Close the diamond A -> B, A -> C with B -> D and C -> D.

    A precondition violation is reported as such, never as a refutation.
    """
    calculus = Calculus(calculus)
    reason = lemma_precondition(first.label, second.label)
    if reason is not None:
        logger.debug(f"Confluence precondition violated: {reason}")
        return ConfluenceResult(PRECONDITION, term, first, second, reason=reason)

    from_b = {}
    for step in steps(first.target, calculus, assume_canonical=True):
        from_b.setdefault(step.target, step.label)
    from_c = {}
    for step in steps(second.target, calculus, assume_canonical=True):
        from_c.setdefault(step.target, step.label)

    common = sorted(set(from_b) & set(from_c), key=repr)
    if not common:
        logger.warning(f"Diamond does not close for {first.label.describe()} / {second.label.describe()}")
        return ConfluenceResult(COUNTEREXAMPLE, term, first, second, reason="no common successor of B and C")
    meet = common[0]
    return ConfluenceResult(DIAMOND, term, first, second, meet, (from_b[meet], from_c[meet]))


def lemma_pairs(found: List[Step]) -> List[Tuple[Step, Step]]:
    """All ordered-once pairs of steps that satisfy the lemma's precondition."""
    return [
        (a, b)
        for i, a in enumerate(found)
        for b in found[i + 1:]
        if lemma_precondition(a.label, b.label) is None
    ]


@dataclass(frozen=True)
class ConfluenceSummary:
    seed: int
    instances: int
    closed: int
    counterexamples: Tuple[ConfluenceResult, ...]
    networks_tried: int

    def to_dict(self) -> dict:
        return {
            'seed': self.seed,
            'instances': self.instances,
            'closed': self.closed,
            'networks_tried': self.networks_tried,
            'counterexamples': [c.to_dict() for c in self.counterexamples],
        }


def random_confluence(count: int, seed: int = 0, generator=None) -> ConfluenceSummary:
    """
    Check ``count`` random lemma-shaped instances.

    Args:
        count: number of (network, step pair) instances
        seed: seed of the random source; equal seeds give equal summaries
        generator: callable(rng) -> CMV+ network; random flat networks by default
    """
    generator = generator or random_mix_network
    rng = random.Random(seed)
    closed = 0
    counterexamples = []
    tried = 0
    instances = 0
    while instances < count:
        tried += 1
        network = generator(rng)
        pairs = lemma_pairs(steps(network, Calculus.MIX))
        if not pairs:
            continue
        first, second = pairs[rng.randrange(len(pairs))]
        result = confluence_check(network, first, second)
        instances += 1
        if result.closed:
            closed += 1
        else:
            counterexamples.append(result)
    logger.info(f"Confluence: {closed}/{instances} diamonds closed over {tried} random networks")
    return ConfluenceSummary(seed, instances, closed, tuple(counterexamples), tried)
