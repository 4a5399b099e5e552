"""
Electoral systems: every maximal execution announces exactly one leader,
by a barb on a numeral id, and never announces anybody else on the way.

Only finite acyclic state spaces are decided. Maximal executions are the
paths from the initial state to a stuck state, counted over canonical
states, so two steps between the same pair of states count once.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import networkx as nx

from calculi.syntax import Calculus, calculus_of
from parsing.printer import print_term
from semantics.barbs import numeral_barbs
from semantics.lts import Bounds, Lts, explore

logger = logging.getLogger('Workbench.Patterns')

ELECTORAL = 'electoral'
NOT_ELECTORAL = 'not-electoral'
UNSUPPORTED = 'unsupported'
UNKNOWN = 'unknown-bounded'

LISTING_LIMIT = 64


@dataclass(frozen=True)
class ElectionReport:
    verdict: str
    executions: int = 0
    leaders: Tuple[int, ...] = ()
    violations: Tuple[str, ...] = ()
    paths: Tuple[Tuple[int, ...], ...] = ()
    finals: Dict[int, str] = field(default_factory=dict)
    detail: str = ''

    @property
    def electoral(self) -> Optional[bool]:
        if self.verdict in (UNSUPPORTED, UNKNOWN):
            return None
        return self.verdict == ELECTORAL

    def to_dict(self) -> dict:
        return {
            'verdict': self.verdict,
            'electoral': self.electoral,
            'executions': self.executions,
            'leaders': list(self.leaders),
            'violations': list(self.violations),
            'paths': [list(p) for p in self.paths],
            'final_states': {str(k): v for k, v in sorted(self.finals.items())},
            'detail': self.detail,
        }


def _leader(lts: Lts, state: int) -> Tuple[Optional[int], Optional[str]]:
    announced = sorted(numeral_barbs(lts.barbs[state]))
    if len(announced) != 1:
        shown = ', '.join(str(b) for b in announced) or 'nobody'
        return None, f"stuck state {state} announces {shown}"
    return int(str(announced[0].name)), None


def electoral_check(term, calculus=None, bounds: Optional[Bounds] = None, listing_limit: int = LISTING_LIMIT) -> ElectionReport:
    """
    Decide whether ``term`` is an electoral system.

    Returns:
        ElectionReport whose verdict is electoral, not-electoral,
        unsupported (cyclic state space) or unknown-bounded
    """
    calculus = Calculus(calculus) if calculus is not None else calculus_of(term)
    lts = explore(term, calculus, bounds or Bounds())
    if not lts.complete:
        return ElectionReport(UNKNOWN, detail=f"exploration stopped at {len(lts)} states")
    if lts.has_cycle():
        cycle = lts.find_cycle()
        states = ' -> '.join(str(e.source) for e in cycle or ())
        return ElectionReport(UNSUPPORTED, detail=f"the state space has a cycle through {states}")

    dag = nx.DiGraph(lts.graph)
    stuck = lts.stuck_states()
    violations: List[str] = []
    leader_of: Dict[int, int] = {}
    for state in stuck:
        leader, problem = _leader(lts, state)
        if problem is not None:
            violations.append(problem)
        else:
            leader_of[state] = leader

    # executions and their leaders, from the stuck states back to the root
    executions: Dict[int, int] = {}
    elected: Dict[int, Counter] = {}
    for state in reversed(list(nx.topological_sort(dag))):
        successors = list(dag.successors(state))
        if not successors:
            executions[state] = 1
            elected[state] = Counter([leader_of[state]]) if state in leader_of else Counter()
            continue
        executions[state] = sum(executions[s] for s in successors)
        elected[state] = sum((elected[s] for s in successors), Counter())

    for state in sorted(dag.nodes):
        for barb in sorted(numeral_barbs(lts.barbs[state])):
            announced = int(str(barb.name))
            others = sorted(set(elected[state]) - {announced})
            if others:
                violations.append(f"state {state} announces {announced} but can still elect {others}")

    count = executions[lts.initial]
    paths: List[Tuple[int, ...]] = []
    if count <= listing_limit:
        for target in stuck:
            if target == lts.initial:
                paths.append((target,))
            else:
                paths.extend(tuple(p) for p in nx.all_simple_paths(dag, lts.initial, target))
        paths.sort()

    leaders = tuple(sorted(elected[lts.initial].elements()))
    finals = {state: print_term(lts.states[state]) for state in stuck}
    verdict = NOT_ELECTORAL if violations else ELECTORAL
    logger.info(f"Election check: {verdict}, {count} maximal executions, leaders {list(leaders)}")
    return ElectionReport(verdict, count, leaders, tuple(violations), tuple(paths), finals)
