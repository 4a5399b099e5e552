from .result import (
    RELATED,
    NOT_RELATED,
    UNKNOWN,
    Challenge,
    Witness,
    RelationResult,
    replay_witness
)
from .bisimulation import weak_bisim, bisimilar, bisimilar_states
from .coupled import coupled_sim

__all__ = [
    'RELATED',
    'NOT_RELATED',
    'UNKNOWN',
    'Challenge',
    'Witness',
    'RelationResult',
    'replay_witness',
    'weak_bisim',
    'bisimilar',
    'bisimilar_states',
    'coupled_sim'
]
