"""
Exhaustive bounded scan of flat CMV+ networks for the patterns M and star.

The grammar scanned:

    (new x y)[(new p q)](C1 | ... | Cn)
    C ::= q e(B1 + ... + Bk)       q in {lin, un}, e an endpoint
    B ::= l!true.0 | l?z.0         l in {l, m}, no key twice in one choice

Size is binders + choices + branches. Networks are enumerated as multisets
of choices (parallel composition is commutative) and only networks whose
choices can actually meet in enough ways reach the reduction engine: a star
needs five steps on five different pairs of choices, an M needs three.
"""
import logging
import os
import time
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, List, Optional, Tuple

from calculi.names import Name, NameKind
from calculi.syntax import TRUE, Branch, Calculus, Choice, Inact, Label, NewPair, Par, Polarity, Qualifier
from parsing.printer import print_term
from semantics.steps import steps

from .synchronization import PATTERN_M, PATTERN_STAR, PatternWitness, find_m, find_star

logger = logging.getLogger('Workbench.Patterns')

DEFAULT_STAR_MAX_NODES = int(os.getenv('WORKBENCH_STAR_MAX_NODES', '13'))
CHANNELS = (('x', 'y'), ('p', 'q'))
LABELS = ('l', 'm')
BRANCH_KEYS = tuple((label, polarity) for label in LABELS for polarity in (Polarity.OUT, Polarity.IN))

Shape = Tuple[Qualifier, int, Tuple[Tuple[str, Polarity], ...]]


def _shapes(endpoints: int) -> List[Shape]:
    keysets = [keys for size in range(1, len(BRANCH_KEYS) + 1) for keys in combinations(BRANCH_KEYS, size)]
    return [
        (qualifier, endpoint, keys)
        for qualifier in (Qualifier.LIN, Qualifier.UN)
        for endpoint in range(endpoints)
        for keys in keysets
    ]


def _meetings(left: Shape, right: Shape) -> int:
    """How many com steps two choices can perform together."""
    if left[1] ^ 1 != right[1]:
        return 0
    return sum(
        1 for label, polarity in left[2]
        if (label, polarity.flip()) in right[2]
    )


def _cost(shape: Shape) -> int:
    return 1 + len(shape[2])


def _multisets(shapes: List[Shape], meets, budget: int, must_use: int) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """
    Multisets of shape indices within ``budget`` together with the number
    of distinct meeting pairs; ``must_use`` is the least endpoint index some
    choice has to sit on.
    """
    chosen: List[int] = []

    def extend(start: int, remaining: int, pairs: int):
        if chosen and any(shapes[i][1] >= must_use for i in chosen):
            yield tuple(chosen), pairs
        for index in range(start, len(shapes)):
            cost = _cost(shapes[index])
            if cost > remaining:
                continue
            added = sum(1 for other in chosen if meets[index][other])
            chosen.append(index)
            yield from extend(index, remaining - cost, pairs + added)
            chosen.pop()

    yield from extend(0, budget, 0)


def _network(shapes: List[Shape], indices: Tuple[int, ...], pairs: int):
    names = [Name(e, kind=NameKind.ENDPOINT) for pair in CHANNELS[:pairs] for e in pair]
    threads = []
    for index in indices:
        qualifier, endpoint, keys = shapes[index]
        branches = tuple(
            Branch(Label(label), polarity, TRUE if polarity is Polarity.OUT else Name('z', kind=NameKind.VARIABLE), Inact())
            for label, polarity in keys
        )
        threads.append(Choice(qualifier, names[endpoint], branches))
    term = Par(tuple(threads)) if len(threads) > 1 else threads[0]
    for left, right in reversed(CHANNELS[:pairs]):
        term = NewPair(Name(left, kind=NameKind.ENDPOINT), Name(right, kind=NameKind.ENDPOINT), term)
    return term


def network_size(term) -> int:
    """binders + choices + branches of a flat network."""
    size = 0
    stack = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, NewPair):
            size += 1
            stack.append(node.body)
        elif isinstance(node, Par):
            stack.extend(node.components)
        elif isinstance(node, Choice):
            size += 1 + len(node.branches)
            stack.extend(b.cont for b in node.branches)
    return size


@dataclass(frozen=True)
class ScanReport:
    max_nodes: int
    networks: int
    engine_runs: int
    star_witnesses: Tuple[PatternWitness, ...]
    m_witness: Optional[PatternWitness]
    seconds: float = 0.0

    @property
    def star_free(self) -> bool:
        return not self.star_witnesses

    def to_dict(self) -> dict:
        return {
            'max_nodes': self.max_nodes,
            'networks': self.networks,
            'engine_runs': self.engine_runs,
            'star_witnesses': [w.to_dict() for w in self.star_witnesses],
            'm_witness': self.m_witness.to_dict() if self.m_witness is not None else None,
        }


def enumerate_cmvplus(max_nodes: int = DEFAULT_STAR_MAX_NODES, channels: int = 2) -> Iterator[object]:
    """Every network of the scanned grammar with at most ``max_nodes`` nodes."""
    for pairs in range(1, channels + 1):
        shapes = _shapes(2 * pairs)
        meets = [[_meetings(a, b) > 0 for b in shapes] for a in shapes]
        must_use = 2 * (pairs - 1)
        for indices, _ in _multisets(shapes, meets, max_nodes - pairs, must_use):
            yield _network(shapes, indices, pairs)


def scan_patterns(max_nodes: int = DEFAULT_STAR_MAX_NODES, channels: int = 2) -> ScanReport:
    """
    Look for stars (expected: none) and for an M (expected: at least one)
    among all networks up to ``max_nodes``.
    """
    started = time.monotonic()
    networks = 0
    engine_runs = 0
    stars: List[PatternWitness] = []
    m_witness = None
    for pairs in range(1, channels + 1):
        shapes = _shapes(2 * pairs)
        meets = [[_meetings(a, b) > 0 for b in shapes] for a in shapes]
        must_use = 2 * (pairs - 1)
        for indices, meeting_pairs in _multisets(shapes, meets, max_nodes - pairs, must_use):
            networks += 1
            wants_m = m_witness is None and meeting_pairs >= 3
            if meeting_pairs < 5 and not wants_m:
                continue
            term = _network(shapes, indices, pairs)
            found = steps(term, Calculus.MIX)
            engine_runs += 1
            if meeting_pairs >= 5:
                star = find_star(found)
                if star is not None:
                    witness = PatternWitness(PATTERN_STAR, Calculus.MIX, term, tuple(found[i] for i in star))
                    logger.warning(f"Star in CMV+: {print_term(term)}")
                    stars.append(witness)
            if wants_m:
                m = find_m(found)
                if m is not None:
                    m_witness = PatternWitness(PATTERN_M, Calculus.MIX, term, tuple(found[i] for i in m))
                    logger.info(f"First M at {network_size(term)} nodes: {print_term(term)}")
        logger.info(f"Scanned {networks} networks over {pairs} channel(s), {engine_runs} engine runs so far")
    elapsed = time.monotonic() - started
    logger.info(f"Pattern scan up to {max_nodes} nodes: {len(stars)} stars, M {'found' if m_witness else 'not found'} ({elapsed:.1f}s)")
    return ScanReport(max_nodes, networks, engine_runs, tuple(stars), m_witness, elapsed)
