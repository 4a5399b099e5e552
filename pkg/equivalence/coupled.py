"""
Weak reduction barbed coupled similarity on finite LTSs.

A pair (p, q) of the greatest coupled simulation needs, for every weak
derivative p' of p, some weak derivative q' of q with (p', q') in the
relation and some q'' with (q'', p') in the relation, and every weak barb
of p must be a weak barb of q. Two states are coupled similar when each
is related to the other.
"""
import logging
from typing import Dict, Optional, Set

from semantics.lts import Lts

from .result import (
    BARB, COUPLE, MOVE, NOT_RELATED, RELATED, UNKNOWN,
    Arena, Challenge, Point, RelationResult, Witness, describe_unknown
)

logger = logging.getLogger('Workbench.Equivalence')

NAME = 'coupled-sim'


class _Game:
    """The shrinking relation with the reason each pair was dropped."""

    def __init__(self, arena: Arena):
        self.arena = arena
        self.simulators: Dict[Point, Set[Point]] = {p: set() for p in arena.points}
        self.simulated: Dict[Point, Set[Point]] = {p: set() for p in arena.points}
        self.reasons: Dict = {}
        for p in arena.points:
            for q in arena.points:
                if p[0] == q[0]:
                    continue
                extra = arena.weak[p] - arena.weak[q]
                if extra:
                    self.reasons[(p, q)] = (BARB, min(extra))
                else:
                    self.simulators[p].add(q)
                    self.simulated[q].add(p)

    def _refute(self, p: Point, q: Point):
        reach_q = self.arena.reach[q]
        for target in sorted(self.arena.reach[p]):
            if not self.simulators[target] & reach_q:
                return MOVE, target
            if not self.simulated[target] & reach_q:
                return COUPLE, target
        return None

    def solve(self):
        rounds = 0
        while True:
            rounds += 1
            dropped = []
            for p in self.arena.points:
                for q in sorted(self.simulators[p]):
                    reason = self._refute(p, q)
                    if reason is not None:
                        dropped.append(((p, q), reason))
            if not dropped:
                logger.debug(f"Coupled simulation stable after {rounds} rounds")
                return
            for (p, q), reason in dropped:
                self.simulators[p].discard(q)
                self.simulated[q].discard(p)
                self.reasons[(p, q)] = reason

    def holds(self, p: Point, q: Point) -> bool:
        return q in self.simulators[p]

    def explain(self, root) -> Witness:
        arena = self.arena
        challenges = {}
        pending = [root]
        while pending:
            pair = pending.pop()
            if pair in challenges:
                continue
            p, q = pair
            kind, detail = self.reasons[pair]
            if kind == BARB:
                challenges[pair] = Challenge(p, q, BARB, barb=detail)
                continue
            answers = tuple((answer, arena.path(q, answer)) for answer in sorted(arena.reach[q]))
            challenge = Challenge(p, q, kind, target=detail, path=arena.path(p, detail), answers=answers)
            challenges[pair] = challenge
            pending.extend(challenge.refuted_by())
        return Witness(root, challenges)


def coupled_sim(
    left_lts: Lts,
    right_lts: Lts,
    left: Optional[int] = None,
    right: Optional[int] = None
) -> RelationResult:
    """
    Decide whether two states are coupled similar.

    The witness of a negative verdict refutes whichever direction fails,
    left-to-right first.
    """
    left = left_lts.initial if left is None else left
    right = right_lts.initial if right is None else right
    arena = Arena(left_lts, right_lts, left, right)
    if not arena.decided:
        return RelationResult(NAME, UNKNOWN, detail=describe_unknown(arena))

    game = _Game(arena)
    game.solve()
    p, q = arena.start
    if game.holds(p, q) and game.holds(q, p):
        relation = tuple(
            (a, b) for a in arena.points for b in sorted(game.simulators[a])
        )
        return RelationResult(NAME, RELATED, relation=relation)

    root = (p, q) if not game.holds(p, q) else (q, p)
    witness = game.explain(root)
    direction = 'left by right' if root == (p, q) else 'right by left'
    logger.debug(f"No coupled simulation of {direction}, {len(witness.challenges)} challenges")
    return RelationResult(NAME, NOT_RELATED, witness=witness, detail=f"no coupled simulation of {direction}")
