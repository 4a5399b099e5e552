"""
Conflict and distributability of steps and executions.

Two steps from one state are in conflict when performing one disables the
other, which for all three calculi means they reduce a common top-level
occurrence: the same sum or choice, the same prefix or branching, or the
same conditional. Replicated threads are never consumed, so steps that
both fire copies of one replication do not conflict.

Executions are compared through their footprints: the top-level threads of
the common origin that some step of the execution consumes, directly or
through a continuation of an earlier step.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence

from calculi.canonical import canonicalize, split_level
from calculi.errors import DifferentOriginError, PreconditionError
from calculi.occurrences import Path
from semantics.lts import Edge, Lts
from semantics.steps import StepLabel, steps

logger = logging.getLogger('Workbench.Patterns')


def conflict(e1: StepLabel, e2: StepLabel) -> bool:
    """
    True iff the two steps consume a common occurrence.

    Raises:
        DifferentOriginError: when the steps leave different states
    """
    if e1.origin != e2.origin:
        raise DifferentOriginError(f"steps leave different states ({e1.origin} and {e2.origin})")
    return bool(e1.consumed & e2.consumed)


def distributable_steps(e1: StepLabel, e2: StepLabel) -> bool:
    return not conflict(e1, e2)


@dataclass(frozen=True)
class Footprint:
    """The origin threads an execution touches, by their paths in the origin."""
    origin: int
    consumed: FrozenSet[Path]
    length: int

    def to_dict(self) -> dict:
        return {
            'origin': self.origin,
            'consumed': [list(p) for p in sorted(self.consumed)],
            'length': self.length,
        }


def _origin_paths(term) -> List[Path]:
    binders, threads = split_level(term)
    prefix = (0,) * len(binders)
    if len(threads) == 1:
        return [prefix]
    return [prefix + (i,) for i in range(len(threads))]


def _thread_index(path: Path, binder_count: int, thread_count: int) -> int:
    return 0 if thread_count == 1 else path[binder_count]


def footprint(lts: Lts, execution: Sequence[Edge], normalize: Optional[Callable] = None) -> Footprint:
    """
    Replay ``execution`` on an order-preserving form of its origin and
    collect the origin threads its steps consume.

    While the replayed state still equals the LTS state the step is matched
    by its label; afterwards by kind and target. Among several matches the
    one adding the fewest origin threads wins.

    Args:
        lts: the LTS the edges belong to
        execution: consecutive edges
        normalize: the normalization the LTS was explored with

    Raises:
        PreconditionError: when an edge cannot be replayed
    """
    if not execution:
        return Footprint(lts.initial, frozenset(), 0)
    start = execution[0].source
    lts.replay(start, list(execution))

    origin = lts.states[start]
    paths = _origin_paths(origin)
    state = origin
    tags: List[FrozenSet[int]] = [frozenset({i}) for i in range(len(paths))]
    touched: FrozenSet[int] = frozenset()

    for edge in execution:
        binders, threads = split_level(state)
        expected = lts.states[edge.target]
        candidates = []
        for step in steps(state, lts.calculus, preserve_order=True):
            if step.label.kind is not edge.label.kind:
                continue
            if state == lts.states[edge.source]:
                if step.label.sort_key() != edge.label.sort_key():
                    continue
            else:
                reached = canonicalize(step.target, lts.calculus)
                if normalize is not None:
                    reached = normalize(reached)
                if reached != expected:
                    continue
            used = frozenset().union(*(
                tags[_thread_index(p, len(binders), len(threads))] for p in step.label.consumed
            ))
            candidates.append((len(used - touched), step.label.sort_key(), step, used))
        if not candidates:
            raise PreconditionError(f"cannot replay {edge.label.describe()} from state {edge.source}")
        _, _, step, used = min(candidates, key=lambda c: (c[0], c[1]))
        touched |= used
        tags = _retag(threads, tags, step, used, len(binders))
        state = step.target

    consumed = frozenset(paths[i] for i in touched)
    logger.debug(f"Execution of {len(execution)} steps from {start} touches {len(consumed)} origin threads")
    return Footprint(start, consumed, len(execution))


def _retag(threads, tags, step, used: FrozenSet[int], binder_count: int) -> List[FrozenSet[int]]:
    """Tags of the target's threads: untouched threads keep theirs, new ones inherit ``used``."""
    consumed = {_thread_index(p, binder_count, len(threads)) for p in step.label.consumed}
    pool: Dict[int, List[FrozenSet[int]]] = {}
    for index, thread in enumerate(threads):
        if index not in consumed:
            pool.setdefault(id(thread), []).append(tags[index])
    result = []
    for thread in split_level(step.target)[1]:
        kept = pool.get(id(thread))
        result.append(kept.pop(0) if kept else used)
    return result


def distributable_execs(
    lts: Lts,
    first: Sequence[Edge],
    second: Sequence[Edge],
    normalize: Optional[Callable] = None
) -> bool:
    """
    True iff the two executions have disjoint footprints.

    Raises:
        DifferentOriginError: when the executions start in different states
    """
    if first and second and first[0].source != second[0].source:
        raise DifferentOriginError(
            f"executions start in states {first[0].source} and {second[0].source}"
        )
    left = footprint(lts, first, normalize)
    right = footprint(lts, second, normalize)
    return not (left.consumed & right.consumed)
