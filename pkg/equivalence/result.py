"""
Verdicts and replayable witnesses of the behavioural relations.

A witness is a set of challenges, one per refuted pair of states. Each
challenge either names a weak barb the attacker reaches and the defender
does not, or a weak move of the attacker together with every answer the
defender has; each answer points at another refuted pair, so the
challenges form a finite game tree shared as a DAG.
"""
import json
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional, Tuple

from semantics.barbs import Barb
from semantics.lts import Edge, Lts

logger = logging.getLogger('Workbench.Equivalence')

RELATED = 'related'
NOT_RELATED = 'not-related'
UNKNOWN = 'unknown-bounded'

LEFT = 0
RIGHT = 1

BARB = 'barb'
MOVE = 'move'
COUPLE = 'couple'

# (side, state id)
Point = Tuple[int, int]


def point_text(point: Point) -> str:
    side, state = point
    return f"{'left' if side == LEFT else 'right'}:{state}"


class Arena:
    """
    The states the two start states reach, tagged with the side they live on.

    Both sides may be the same Lts; points stay distinct by their side tag.
    """

    def __init__(self, left_lts: Lts, right_lts: Lts, left: int, right: int):
        self.lts = (left_lts, right_lts)
        self.start = ((LEFT, left), (RIGHT, right))
        self.reach: Dict[Point, FrozenSet[Point]] = {}
        self.weak: Dict[Point, FrozenSet[Barb]] = {}
        for side, start in self.start:
            lts = self.lts[side]
            for state in lts.reachable(start):
                point = (side, state)
                self.reach[point] = frozenset((side, t) for t in lts.reachable(state))
                self.weak[point] = lts.weak_barbs(state)
        self.points = sorted(self.reach)

    @property
    def decided(self) -> bool:
        """True when both start states are fully explored."""
        return all(self.lts[side].fully_known(start) for side, start in self.start)

    def path(self, source: Point, target: Point) -> Tuple[Edge, ...]:
        return tuple(self.lts[source[0]].path(source[1], target[1]) or ())


@dataclass(frozen=True)
class Challenge:
    """
    Why ``defender`` cannot answer ``attacker``.

    For a barb challenge the attacker weakly reaches ``barb`` and the
    defender does not. For a move or couple challenge the attacker moves
    along ``path`` to ``target`` and ``answers`` lists every state the
    defender can weakly reach, with the path there.
    """
    attacker: Point
    defender: Point
    reason: str
    barb: Optional[Barb] = None
    target: Optional[Point] = None
    path: Tuple[Edge, ...] = ()
    answers: Tuple[Tuple[Point, Tuple[Edge, ...]], ...] = ()

    def refuted_by(self) -> Tuple[Tuple[Point, Point], ...]:
        """The pairs (attacker, defender) each answer runs into."""
        if self.reason == MOVE:
            return tuple((self.target, answer) for answer, _ in self.answers)
        if self.reason == COUPLE:
            return tuple((answer, self.target) for answer, _ in self.answers)
        return ()

    def to_dict(self) -> dict:
        data = {
            'attacker': point_text(self.attacker),
            'defender': point_text(self.defender),
            'reason': self.reason,
        }
        if self.barb is not None:
            data['barb'] = str(self.barb)
        if self.target is not None:
            data['target'] = point_text(self.target)
            data['path'] = [edge.to_dict() for edge in self.path]
            data['answers'] = [
                {'state': point_text(answer), 'path': [edge.to_dict() for edge in path]}
                for answer, path in self.answers
            ]
        return data


@dataclass(frozen=True)
class Witness:
    """A refutation of ``root``; ``symmetric`` when refuted pairs are unordered."""
    root: Tuple[Point, Point]
    challenges: Dict[Tuple[Point, Point], Challenge]
    symmetric: bool = False

    def challenge_for(self, pair: Tuple[Point, Point]) -> Optional[Challenge]:
        found = self.challenges.get(pair)
        if found is None and self.symmetric:
            found = self.challenges.get((pair[1], pair[0]))
        return found

    def to_dict(self) -> dict:
        return {
            'root': [point_text(p) for p in self.root],
            'symmetric': self.symmetric,
            'challenges': [self.challenges[key].to_dict() for key in sorted(self.challenges)],
        }


@dataclass(frozen=True)
class RelationResult:
    """
    Outcome of comparing two states.

    Attributes:
        relation_name: 'weak-bisim' or 'coupled-sim'
        verdict: related, not-related or unknown-bounded
        relation: the greatest relation found, when related
        witness: a refutation, when not-related
    """
    relation_name: str
    verdict: str
    relation: Tuple[Tuple[Point, Point], ...] = ()
    witness: Optional[Witness] = None
    detail: str = ''

    @property
    def related(self) -> bool:
        return self.verdict == RELATED

    def to_dict(self) -> dict:
        data = {
            'relation_name': self.relation_name,
            'verdict': self.verdict,
            'detail': self.detail,
            'relation': [[point_text(p), point_text(q)] for p, q in self.relation],
        }
        if self.witness is not None:
            data['witness'] = self.witness.to_dict()
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def replay_witness(witness: Witness, left_lts: Lts, right_lts: Lts) -> bool:
    """
    Check a witness against the two LTSs it was computed on.

    Every barb claim is re-evaluated, every path is replayed, every answer
    list must cover the defender's weak derivatives and every answer must
    lead to another challenge of the witness.
    """
    ltss = (left_lts, right_lts)
    if witness.challenge_for(witness.root) is None:
        logger.debug(f"Witness has no challenge for its root {witness.root}")
        return False

    for challenge in witness.challenges.values():
        attacker_lts = ltss[challenge.attacker[0]]
        defender_lts = ltss[challenge.defender[0]]
        if challenge.reason == BARB:
            if challenge.barb not in attacker_lts.weak_barbs(challenge.attacker[1]):
                return False
            if challenge.barb in defender_lts.weak_barbs(challenge.defender[1]):
                return False
            continue

        if attacker_lts.replay(challenge.attacker[1], list(challenge.path)) != challenge.target[1]:
            return False
        answered = {answer for answer, _ in challenge.answers}
        expected = {(challenge.defender[0], s) for s in defender_lts.reachable(challenge.defender[1])}
        if answered != expected:
            logger.debug(f"Answers of {challenge.defender} do not cover its derivatives")
            return False
        for answer, path in challenge.answers:
            if defender_lts.replay(challenge.defender[1], list(path)) != answer[1]:
                return False
        for pair in challenge.refuted_by():
            if witness.challenge_for(pair) is None:
                logger.debug(f"Answer {pair} leads nowhere")
                return False
    return True


def describe_unknown(arena: Arena) -> str:
    missing = [point_text(start) for start in arena.start if not arena.lts[start[0]].fully_known(start[1])]
    return f"exploration incomplete below {', '.join(missing)}"


