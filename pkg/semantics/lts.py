"""
Bounded labelled transition systems over canonical states.

States are canonical terms numbered in breadth-first insertion order with
successors taken in step order, so two explorations of the same term give
the same numbering. Weak transitions are never materialised: weak barbs
and matching moves are answered by reachability on the underlying
networkx graph.
"""
import json
import logging
from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Optional, Set

import networkx as nx

from calculi.canonical import canonicalize
from calculi.errors import PreconditionError
from calculi.syntax import Calculus, calculus_of
from parsing.printer import print_term

from .barbs import Barb, barbs
from .steps import StepLabel, steps

logger = logging.getLogger('Workbench.Reduction')

DEFAULT_MAX_DEPTH = 12
DEFAULT_MAX_STATES = 20000


@dataclass(frozen=True)
class Bounds:
    max_depth: int = DEFAULT_MAX_DEPTH
    max_states: int = DEFAULT_MAX_STATES

    def __post_init__(self):
        if self.max_depth <= 0 or self.max_states <= 0:
            raise PreconditionError(f"bounds must be positive, got depth={self.max_depth} states={self.max_states}")

    def to_dict(self) -> dict:
        return {'max_depth': self.max_depth, 'max_states': self.max_states}


@dataclass(frozen=True)
class Edge:
    source: int
    label: StepLabel
    target: int

    def to_dict(self) -> dict:
        data = {'source': self.source, 'target': self.target}
        data.update(self.label.to_dict())
        return data


class Lts:
    """
    A finite presentation of the reduction relation from one initial state.

    Attributes:
        states: canonical terms by id
        edges: (source, label, target) triples in discovery order
        barbs: strong barbs by state id
        complete: False if some bound cut the exploration short
        expanded: ids whose every step is present
    """

    def __init__(self, calculus: Calculus, bounds: Bounds):
        self.calculus = calculus
        self.bounds = bounds
        self.initial = 0
        self.states: List = []
        self.index: Dict = {}
        self.depth: List[int] = []
        self.barbs: List[FrozenSet[Barb]] = []
        self.edges: List[Edge] = []
        self.expanded: Set[int] = set()
        self.complete = True
        self._graph = None
        self._out: Dict[int, List[Edge]] = {}

    def __len__(self) -> int:
        return len(self.states)

    def __repr__(self) -> str:
        return f"<Lts({self.calculus.value}, states={len(self.states)}, edges={len(self.edges)}, complete={self.complete})>"

    def _add(self, term, depth: int) -> int:
        state_id = len(self.states)
        self.states.append(term)
        self.index[term] = state_id
        self.depth.append(depth)
        self.barbs.append(barbs(term, self.calculus))
        self._out[state_id] = []
        return state_id

    def _connect(self, source: int, label: StepLabel, target: int):
        edge = Edge(source, label, target)
        self.edges.append(edge)
        self._out[source].append(edge)
        self._graph = None

    # ------------------------------------------------------------ structure

    @property
    def graph(self) -> nx.MultiDiGraph:
        """The LTS as a networkx multigraph; edge keys are indices into ``edges``."""
        if self._graph is None:
            graph = nx.MultiDiGraph()
            for state_id in range(len(self.states)):
                graph.add_node(state_id)
            for index, edge in enumerate(self.edges):
                graph.add_edge(edge.source, edge.target, key=index)
            self._graph = graph
        return self._graph

    def state_of(self, term) -> Optional[int]:
        return self.index.get(canonicalize(term, self.calculus))

    def successors(self, state_id: int) -> List[Edge]:
        return list(self._out.get(state_id, ()))

    def reachable(self, state_id: int) -> FrozenSet[int]:
        """States reachable in zero or more steps."""
        return frozenset(nx.descendants(self.graph, state_id)) | {state_id}

    def stuck_states(self) -> List[int]:
        return [s for s in sorted(self.expanded) if not self._out[s]]

    def fully_known(self, state_id: int) -> bool:
        """True when everything reachable from the state has been expanded."""
        return self.reachable(state_id) <= self.expanded

    # ------------------------------------------------------------ weak barbs

    def weak_barbs(self, state_id: int) -> FrozenSet[Barb]:
        found = set()
        for reached in self.reachable(state_id):
            found |= self.barbs[reached]
        return frozenset(found)

    def has_weak_barb(self, state_id: int, barb: Barb) -> Optional[bool]:
        """
        Three-valued weak barb query.

        Returns:
            True or False when decided, None when unexplored states could still
            reach the barb
        """
        if barb in self.weak_barbs(state_id):
            return True
        if self.fully_known(state_id):
            return False
        return None

    # ------------------------------------------------------------ cycles and paths

    def has_cycle(self) -> bool:
        return not nx.is_directed_acyclic_graph(self.graph)

    def find_cycle(self, start: Optional[int] = None) -> Optional[List[Edge]]:
        """A cycle as a list of edges, or None."""
        try:
            cycle = nx.find_cycle(self.graph, source=start)
        except nx.NetworkXNoCycle:
            return None
        return [self.edges[key] for _, _, key in cycle]

    def path(self, source: int, target: int) -> Optional[List[Edge]]:
        """A shortest edge sequence from ``source`` to ``target``."""
        try:
            nodes = nx.shortest_path(self.graph, source, target)
        except nx.NetworkXNoPath:
            return None
        result = []
        for u, v in zip(nodes, nodes[1:]):
            result.append(next(e for e in self._out[u] if e.target == v))
        return result

    def replay(self, source: int, edges: List[Edge]) -> int:
        """
        Follow ``edges`` from ``source``, checking each one is an edge of this LTS.

        Raises:
            PreconditionError: if an edge does not continue the walk
        """
        current = source
        for edge in edges:
            if edge.source != current or edge not in self._out.get(current, ()):
                raise PreconditionError(f"edge {edge.label.describe()} does not leave state {current}")
            current = edge.target
        return current

    # ------------------------------------------------------------ export

    def to_dict(self) -> dict:
        return {
            'calculus': self.calculus.value,
            'complete': self.complete,
            'bounds': self.bounds.to_dict(),
            'initial': self.initial,
            'states': [
                {
                    'id': state_id,
                    'term': print_term(term),
                    'barbs': sorted(str(b) for b in self.barbs[state_id]),
                    'depth': self.depth[state_id],
                    'expanded': state_id in self.expanded,
                }
                for state_id, term in enumerate(self.states)
            ],
            'edges': [edge.to_dict() for edge in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_dot(self) -> str:
        """DOT text; states show their barbs, edges their rule and channel."""
        labelled = nx.MultiDiGraph()
        for state_id in range(len(self.states)):
            shown = ' '.join(sorted(str(b) for b in self.barbs[state_id]))
            shape = 'doublecircle' if state_id == self.initial else 'circle'
            labelled.add_node(state_id, label=f'"{state_id}\\n{shown}"', shape=shape)
        for index, edge in enumerate(self.edges):
            labelled.add_edge(edge.source, edge.target, key=index, label=f'"{edge.label.describe()}"')
        return nx.nx_pydot.to_pydot(labelled).to_string()


def explore(
    term,
    calculus=None,
    bounds: Optional[Bounds] = None,
    normalize: Optional[Callable] = None
) -> Lts:
    """
    Breadth-first exploration of the states reachable from ``term``.

    Args:
        term: initial process
        calculus: Calculus or tag; guessed when omitted
        bounds: depth and state limits; hitting one clears ``complete``
        normalize: applied to every reduct; must return canonical terms

    Returns:
        The explored Lts

    Example:
        >>> explore(parse('0', 'pi')).to_dict()['states']
        [{'id': 0, 'term': '0', ...}]
    """
    calculus = Calculus(calculus) if calculus is not None else calculus_of(term)
    bounds = bounds or Bounds()
    start = canonicalize(term, calculus)
    if normalize is not None:
        start = normalize(start)

    lts = Lts(calculus, bounds)
    lts._add(start, 0)
    queue = deque([0])
    while queue:
        state_id = queue.popleft()
        depth = lts.depth[state_id]
        found = steps(lts.states[state_id], calculus, assume_canonical=True)
        if depth >= bounds.max_depth and found:
            lts.complete = False
            continue

        truncated = False
        for step in found:
            target = normalize(step.target) if normalize is not None else step.target
            target_id = lts.index.get(target)
            if target_id is None:
                if len(lts.states) >= bounds.max_states:
                    truncated = True
                    continue
                target_id = lts._add(target, depth + 1)
                queue.append(target_id)
            lts._connect(state_id, step.label, target_id)

        if truncated:
            lts.complete = False
        else:
            lts.expanded.add(state_id)

    if not lts.complete:
        logger.warning(
            f"Exploration hit its bounds (depth {bounds.max_depth}, {bounds.max_states} states); "
            f"{len(lts.states) - len(lts.expanded)} states left unexpanded"
        )
    logger.debug(f"Explored {lts!r}")
    return lts
