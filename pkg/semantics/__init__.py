from .expressions import evaluate
from .steps import (
    StepKind,
    StepLabel,
    Step,
    steps,
    steps_pi,
    steps_cmvplus,
    steps_cmv,
    reducts
)
from .barbs import Barb, barbs
from .lts import Bounds, Edge, Lts, explore

__all__ = [
    'evaluate',
    'StepKind',
    'StepLabel',
    'Step',
    'steps',
    'steps_pi',
    'steps_cmvplus',
    'steps_cmv',
    'reducts',
    'Barb',
    'barbs',
    'Bounds',
    'Edge',
    'Lts',
    'explore'
]
