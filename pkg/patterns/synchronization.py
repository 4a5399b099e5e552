"""
Detection of the synchronisation patterns M and star.

M: three steps a, b, c with pairwise different reducts, a and c
distributable, b in conflict with both.

star: five steps forming a conflict cycle a-b-c-d-e-a in which every pair
of non-neighbours is distributable, again with pairwise different reducts.

Reducts are compared as canonical states. Witnesses come out in a fixed
order: the lexicographically least index tuple over the sorted step list.
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Tuple

from calculi.syntax import Calculus, calculus_of
from equivalence.bisimulation import bisimilar
from parsing.printer import print_term
from semantics.lts import Bounds, explore
from semantics.steps import Step, steps

logger = logging.getLogger('Workbench.Patterns')

PATTERN_M = 'M'
PATTERN_STAR = 'star'


@dataclass(frozen=True)
class PatternWitness:
    """
    The steps realising a pattern, in pattern order.

    ``distinct_behaviour`` is filled when the reducts were also compared up
    to weak bisimilarity: True when they are pairwise distinguishable, False
    when some two are bisimilar, None when an exploration was cut short.
    """
    pattern: str
    calculus: Calculus
    source: object
    steps: Tuple[Step, ...]
    distinct_behaviour: Optional[bool] = None

    def to_dict(self) -> dict:
        names = 'abc' if self.pattern == PATTERN_M else 'abcde'
        return {
            'pattern': self.pattern,
            'calculus': self.calculus.value,
            'source': print_term(self.source),
            'steps': {
                name: {'label': step.label.to_dict(), 'target': print_term(step.target)}
                for name, step in zip(names, self.steps)
            },
            'distinct_behaviour': self.distinct_behaviour,
        }


class _ConflictTable:
    def __init__(self, found: List[Step]):
        self.steps = found
        size = len(found)
        self.conflicts = [[False] * size for _ in range(size)]
        for i in range(size):
            for j in range(size):
                if i != j:
                    self.conflicts[i][j] = bool(found[i].label.consumed & found[j].label.consumed)

    def distinct(self, indices) -> bool:
        targets = [self.steps[i].target for i in indices]
        return len(set(targets)) == len(targets)


def _enabled(term, calculus) -> Tuple[Calculus, List[Step]]:
    calculus = Calculus(calculus) if calculus is not None else calculus_of(term)
    return calculus, steps(term, calculus)


def find_m(found: List[Step]) -> Optional[Tuple[int, int, int]]:
    """Indices (a, b, c) of the first M among ``found``."""
    table = _ConflictTable(found)
    size = len(found)
    for a, c in combinations(range(size), 2):
        if table.conflicts[a][c]:
            continue
        for b in range(size):
            if b in (a, c):
                continue
            if table.conflicts[b][a] and table.conflicts[b][c] and table.distinct((a, b, c)):
                return a, b, c
    return None


def find_star(found: List[Step]) -> Optional[Tuple[int, ...]]:
    """
    Indices of the first star among ``found``.

    Cycles are enumerated with a as the least index and b < e, so each
    cycle is met once.
    """
    table = _ConflictTable(found)
    conflicts = table.conflicts
    size = len(found)
    for a in range(size):
        for b in range(a + 1, size):
            if not conflicts[a][b]:
                continue
            for c in range(a + 1, size):
                if c == b or not conflicts[b][c] or conflicts[a][c]:
                    continue
                for d in range(a + 1, size):
                    if d in (b, c) or not conflicts[c][d] or conflicts[a][d] or conflicts[b][d]:
                        continue
                    for e in range(b + 1, size):
                        if e in (c, d) or not conflicts[d][e] or not conflicts[e][a]:
                            continue
                        if conflicts[b][e] or conflicts[c][e]:
                            continue
                        cycle = (a, b, c, d, e)
                        if table.distinct(cycle):
                            return cycle
    return None


def _behaviour(witness: PatternWitness, bounds: Bounds) -> Optional[bool]:
    systems = [explore(step.target, witness.calculus, bounds) for step in witness.steps]
    undecided = False
    for left, right in combinations(systems, 2):
        verdict = bisimilar(left, right)
        if verdict is True:
            return False
        if verdict is None:
            undecided = True
    return None if undecided else True


def detect_m(term, calculus=None, behavioural: bool = False, bounds: Optional[Bounds] = None) -> Optional[PatternWitness]:
    """
    The first M among the steps of ``term``, or None.

    Args:
        behavioural: also compare the three reducts up to weak bisimilarity
    """
    calculus, found = _enabled(term, calculus)
    indices = find_m(found)
    if indices is None:
        logger.debug(f"No M among {len(found)} steps")
        return None
    witness = PatternWitness(PATTERN_M, calculus, term, tuple(found[i] for i in indices))
    if behavioural:
        witness = PatternWitness(
            PATTERN_M, calculus, term, witness.steps, _behaviour(witness, bounds or Bounds())
        )
    logger.debug(f"Found M on steps {indices}")
    return witness


def detect_star(term, calculus=None, behavioural: bool = False, bounds: Optional[Bounds] = None) -> Optional[PatternWitness]:
    """The first star among the steps of ``term``, or None."""
    calculus, found = _enabled(term, calculus)
    if len(found) < 5:
        return None
    indices = find_star(found)
    if indices is None:
        logger.debug(f"No star among {len(found)} steps")
        return None
    witness = PatternWitness(PATTERN_STAR, calculus, term, tuple(found[i] for i in indices))
    if behavioural:
        witness = PatternWitness(
            PATTERN_STAR, calculus, term, witness.steps, _behaviour(witness, bounds or Bounds())
        )
    logger.debug(f"Found star on steps {indices}")
    return witness
