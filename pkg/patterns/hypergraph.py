"""
Networks, their hypergraphs, automorphisms and the symmetry check.

A network (new x~)(P1 | ... | Pk) has the hypergraph with nodes 1..k and
one arc per free name of the components (the outer restrictions are
ignored, numerals 1..k are nodes rather than arcs); an arc is incident to
the components it is free in.

Automorphisms are found as the automorphisms of the bipartite incidence
graph, components on one side and arcs on the other, with networkx's VF2
matcher.
"""
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from calculi.binding import apply_subst, free_names
from calculi.canonical import assemble_level, canonicalize, split_level
from calculi.names import Name, NameKind
from calculi.syntax import Calculus, calculus_of
from equivalence.bisimulation import weak_bisim
from equivalence.result import NOT_RELATED, RELATED, UNKNOWN
from parsing.printer import print_term
from semantics.lts import Bounds, explore

logger = logging.getLogger('Workbench.Patterns')

AUTOMORPHISM_LIMIT = 10000


@dataclass(frozen=True)
class NetworkDecomposition:
    """The outer restrictions of a network and its components, in source order."""
    restricted: Tuple
    components: Tuple
    calculus: Calculus

    @property
    def size(self) -> int:
        return len(self.components)

    def recompose(self):
        return assemble_level(self.restricted, self.components, self.calculus)

    def to_dict(self) -> dict:
        return {
            'calculus': self.calculus.value,
            'components': [print_term(c) for c in self.components],
        }


def decompose(term, calculus=None) -> NetworkDecomposition:
    """
    Split ``term`` into outer restrictions and components.

    The components are the top-level threads as written, so node i is the
    i-th component of the source.
    """
    calculus = Calculus(calculus) if calculus is not None else calculus_of(term)
    binders, threads = split_level(term)
    return NetworkDecomposition(binders, threads, calculus)


def node_name(node: int) -> Name:
    return Name(str(node), kind=NameKind.NUMERAL)


@dataclass(frozen=True)
class Hypergraph:
    nodes: Tuple[int, ...]
    arcs: Tuple[Name, ...]
    incidence: Dict[Name, FrozenSet[int]]

    def incidence_graph(self) -> nx.Graph:
        graph = nx.Graph()
        for node in self.nodes:
            graph.add_node(('node', node), side='node')
        for arc in self.arcs:
            graph.add_node(('arc', str(arc)), side='arc')
            for node in sorted(self.incidence[arc]):
                graph.add_edge(('arc', str(arc)), ('node', node))
        return graph

    def to_dict(self) -> dict:
        return {
            'nodes': list(self.nodes),
            'arcs': {str(arc): sorted(self.incidence[arc]) for arc in self.arcs},
        }

    def to_dot(self) -> str:
        graph = nx.Graph()
        for node in self.nodes:
            graph.add_node(f"n{node}", label=f'"{node}"', shape='box')
        for arc in self.arcs:
            graph.add_node(f"x_{arc}", label=f'"{arc}"', shape='point')
            for node in sorted(self.incidence[arc]):
                graph.add_edge(f"x_{arc}", f"n{node}")
        return nx.nx_pydot.to_pydot(graph).to_string()


def build_hypergraph(net: NetworkDecomposition) -> Hypergraph:
    nodes = tuple(range(1, net.size + 1))
    node_names = {node_name(n) for n in nodes}
    incidence: Dict[Name, set] = {}
    for index, component in enumerate(net.components, start=1):
        for name in free_names(component):
            if name in node_names:
                continue
            incidence.setdefault(name, set()).add(index)
    arcs = tuple(sorted(incidence))
    return Hypergraph(nodes, arcs, {arc: frozenset(incidence[arc]) for arc in arcs})


@dataclass(frozen=True)
class Automorphism:
    """σ = (σ_N, σ_X); σ also renames the numeral ids of the nodes."""
    nodes: Dict[int, int]
    arcs: Dict[Name, Name]

    def __call__(self, node: int) -> int:
        return self.nodes[node]

    def renaming(self) -> Dict[Name, Name]:
        sigma = {node_name(a): node_name(b) for a, b in self.nodes.items() if a != b}
        sigma.update({a: b for a, b in self.arcs.items() if a != b})
        return sigma

    def apply(self, term):
        """Pσ."""
        sigma = self.renaming()
        return apply_subst(term, sigma) if sigma else term

    def is_identity(self) -> bool:
        return all(a == b for a, b in self.nodes.items()) and all(a == b for a, b in self.arcs.items())

    def sort_key(self):
        return (
            tuple(self.nodes[n] for n in sorted(self.nodes)),
            tuple(str(self.arcs[a]) for a in sorted(self.arcs)),
        )

    def to_dict(self) -> dict:
        return {
            'nodes': {str(a): b for a, b in sorted(self.nodes.items())},
            'arcs': {str(a): str(b) for a, b in sorted(self.arcs.items())},
        }


def preserves_incidence(graph: Hypergraph, sigma: Automorphism) -> bool:
    """t(σ_X(x)) = σ_N(t(x)) for every arc, with both maps bijective."""
    if sorted(sigma.nodes) != list(graph.nodes) or sorted(sigma.nodes.values()) != list(graph.nodes):
        return False
    if sorted(sigma.arcs) != list(graph.arcs) or sorted(sigma.arcs.values()) != list(graph.arcs):
        return False
    return all(
        graph.incidence[sigma.arcs[arc]] == frozenset(sigma(n) for n in graph.incidence[arc])
        for arc in graph.arcs
    )


def find_automorphisms(graph: Hypergraph, limit: int = AUTOMORPHISM_LIMIT) -> List[Automorphism]:
    """
    Every incidence-preserving (σ_N, σ_X), identity included, sorted.

    Each result is re-validated against the incidence function.
    """
    incidence = graph.incidence_graph()
    arcs_by_text = {str(arc): arc for arc in graph.arcs}
    matcher = GraphMatcher(incidence, incidence, node_match=lambda a, b: a['side'] == b['side'])
    found = []
    for mapping in matcher.isomorphisms_iter():
        nodes = {key[1]: value[1] for key, value in mapping.items() if key[0] == 'node'}
        arcs = {arcs_by_text[key[1]]: arcs_by_text[value[1]] for key, value in mapping.items() if key[0] == 'arc'}
        sigma = Automorphism(nodes, arcs)
        if not preserves_incidence(graph, sigma):
            raise AssertionError(f"matcher returned a non-automorphism {sigma.to_dict()}")
        found.append(sigma)
        if len(found) >= limit:
            logger.warning(f"Stopped after {limit} automorphisms")
            break
    found.sort(key=Automorphism.sort_key)
    logger.info(f"Hypergraph with {len(graph.nodes)} nodes has {len(found)} automorphisms")
    return found


def orbit(sigma: Automorphism, node: int) -> FrozenSet[int]:
    """{n, σ(n), σ²(n), ...}"""
    seen = [node]
    current = sigma(node)
    while current != node:
        seen.append(current)
        current = sigma(current)
    return frozenset(seen)


def orbits(sigma: Automorphism) -> List[FrozenSet[int]]:
    result = []
    for node in sorted(sigma.nodes):
        if not any(node in o for o in result):
            result.append(orbit(sigma, node))
    return result


@dataclass(frozen=True)
class SymmetryReport:
    """Per node i: how P_σ(i) compares with P_i σ."""
    is_automorphism: bool
    verdicts: Tuple[Tuple[int, str, str], ...]

    @property
    def verdict(self) -> str:
        found = {v for _, v, _ in self.verdicts}
        if NOT_RELATED in found:
            return NOT_RELATED
        if UNKNOWN in found:
            return UNKNOWN
        return RELATED

    @property
    def symmetric(self) -> Optional[bool]:
        verdict = self.verdict
        return None if verdict == UNKNOWN else verdict == RELATED

    def to_dict(self) -> dict:
        return {
            'is_automorphism': self.is_automorphism,
            'symmetric': self.symmetric,
            'nodes': [{'node': n, 'verdict': v, 'how': how} for n, v, how in self.verdicts],
        }


def check_symmetry(net: NetworkDecomposition, sigma: Automorphism, bounds: Optional[Bounds] = None) -> SymmetryReport:
    """
    P_σ(i) ≈ P_i σ for every node i.

    Components that are syntactically congruent are related without
    exploring them; the others are compared by weak bisimilarity.
    """
    bounds = bounds or Bounds()
    graph = build_hypergraph(net)
    verdicts = []
    for node in range(1, net.size + 1):
        image = net.components[sigma(node) - 1]
        renamed = sigma.apply(net.components[node - 1])
        if canonicalize(image, net.calculus) == canonicalize(renamed, net.calculus):
            verdicts.append((node, RELATED, 'syntactic'))
            continue
        result = weak_bisim(explore(image, net.calculus, bounds), explore(renamed, net.calculus, bounds))
        verdicts.append((node, result.verdict, 'weak-bisim'))
    report = SymmetryReport(preserves_incidence(graph, sigma), tuple(verdicts))
    logger.info(f"Symmetry check over {net.size} nodes: {report.verdict}")
    return report


def automorphism_from_cycles(cycles, graph: Hypergraph) -> Automorphism:
    """
    Build σ from cycles such as [[1, 2, 3], ['a', 'b', 'c']]; unlisted
    nodes and arcs are fixed.
    """
    nodes = {n: n for n in graph.nodes}
    arcs = {a: a for a in graph.arcs}
    for cycle in cycles:
        items = list(cycle)
        for current, following in zip(items, items[1:] + items[:1]):
            if str(current).isdigit():
                nodes[int(current)] = int(following)
            else:
                arcs[Name(str(current))] = Name(str(following))
    return Automorphism(nodes, arcs)
