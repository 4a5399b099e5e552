"""
Weak reduction barbed bisimilarity on finite LTSs.

Moves are matched over the reflexive-transitive closure of the step
relation, so bisimilarity is computed as the coarsest partition of the
reachable states that is stable under "reaches a state of block B" and
refines the weak-barb sets. The history of the refinement rounds is kept
to explain any pair that ends up in different blocks.
"""
import logging
from typing import Dict, FrozenSet, List, Optional

from semantics.lts import Lts

from .result import (
    BARB, LEFT, MOVE, NOT_RELATED, RELATED, RIGHT, UNKNOWN,
    Arena, Challenge, Point, RelationResult, Witness, describe_unknown
)

logger = logging.getLogger('Workbench.Equivalence')

NAME = 'weak-bisim'


def _number(signatures: Dict[Point, object], points: List[Point]) -> Dict[Point, int]:
    """Block ids in order of first appearance over the sorted points."""
    ids: Dict[object, int] = {}
    blocks = {}
    for point in points:
        blocks[point] = ids.setdefault(signatures[point], len(ids))
    return blocks


def refine(arena: Arena) -> List[Dict[Point, int]]:
    """
    Partition refinement rounds; the last one is the bisimilarity partition.

    Round 0 groups by weak barbs. Round k+1 splits a block when its members
    reach different sets of round-k blocks.
    """
    history = [_number(arena.weak, arena.points)]
    while True:
        current = history[-1]
        signatures = {
            point: (current[point], frozenset(current[t] for t in arena.reach[point]))
            for point in arena.points
        }
        refined = _number(signatures, arena.points)
        if len(set(refined.values())) == len(set(current.values())):
            logger.debug(f"Partition stable after {len(history)} rounds, {len(set(current.values()))} blocks")
            return history
        history.append(refined)


def _split_round(history, p: Point, q: Point) -> int:
    for index, blocks in enumerate(history):
        if blocks[p] != blocks[q]:
            return index
    raise ValueError(f"{p} and {q} are never separated")


def _unmatched(arena: Arena, blocks, attacker: Point, defender: Point) -> Optional[Point]:
    answers = {blocks[t] for t in arena.reach[defender]}
    for target in sorted(arena.reach[attacker]):
        if blocks[target] not in answers:
            return target
    return None


def _explain(arena: Arena, history, root) -> Witness:
    challenges = {}
    pending = [root]
    while pending:
        p, q = pending.pop()
        if (p, q) in challenges or (q, p) in challenges:
            continue
        split = _split_round(history, p, q)
        if split == 0:
            extra = arena.weak[p] - arena.weak[q]
            attacker, defender = (p, q) if extra else (q, p)
            barb = min(arena.weak[attacker] - arena.weak[defender])
            challenges[(attacker, defender)] = Challenge(attacker, defender, BARB, barb=barb)
            continue

        blocks = history[split - 1]
        attacker, defender = p, q
        target = _unmatched(arena, blocks, p, q)
        if target is None:
            attacker, defender = q, p
            target = _unmatched(arena, blocks, q, p)
        answers = tuple((answer, arena.path(defender, answer)) for answer in sorted(arena.reach[defender]))
        challenges[(attacker, defender)] = Challenge(
            attacker, defender, MOVE, target=target, path=arena.path(attacker, target), answers=answers
        )
        pending.extend((target, answer) for answer, _ in answers)
    return Witness(root, challenges, symmetric=True)


def weak_bisim(
    left_lts: Lts,
    right_lts: Lts,
    left: Optional[int] = None,
    right: Optional[int] = None
) -> RelationResult:
    """
    Decide whether two states are weakly barbed bisimilar.

    Args:
        left_lts, right_lts: the explored systems; may be the same object
        left, right: start states, the initial states by default

    Returns:
        RelationResult; unknown-bounded when either start state reaches
        unexpanded states
    """
    left = left_lts.initial if left is None else left
    right = right_lts.initial if right is None else right
    arena = Arena(left_lts, right_lts, left, right)
    if not arena.decided:
        return RelationResult(NAME, UNKNOWN, detail=describe_unknown(arena))

    history = refine(arena)
    final = history[-1]
    root = arena.start
    if final[root[0]] == final[root[1]]:
        relation = tuple(
            (p, q)
            for p in arena.points if p[0] == LEFT
            for q in arena.points if q[0] == RIGHT and final[p] == final[q]
        )
        logger.debug(f"States {left} and {right} bisimilar, relation of {len(relation)} pairs")
        return RelationResult(NAME, RELATED, relation=relation)

    witness = _explain(arena, history, root)
    logger.debug(f"States {left} and {right} not bisimilar, {len(witness.challenges)} challenges")
    return RelationResult(NAME, NOT_RELATED, witness=witness)


def bisimilar(left_lts: Lts, right_lts: Lts, left=None, right=None) -> Optional[bool]:
    """True, False, or None when undecided within the explored bounds."""
    result = weak_bisim(left_lts, right_lts, left, right)
    if result.verdict == UNKNOWN:
        return None
    return result.related


def bisimilar_states(left_lts: Lts, right_lts: Lts, right: Optional[int] = None) -> Optional[FrozenSet[int]]:
    """
    Every state reachable from the initial state of ``left_lts`` that is
    weakly bisimilar to ``right``; None when either side is not fully explored.
    """
    right = right_lts.initial if right is None else right
    arena = Arena(left_lts, right_lts, left_lts.initial, right)
    if not arena.decided:
        return None
    final = refine(arena)[-1]
    block = final[(RIGHT, right)]
    return frozenset(state for side, state in arena.points if side == LEFT and final[(side, state)] == block)
