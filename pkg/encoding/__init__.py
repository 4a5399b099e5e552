from .naming import RenamingPolicy, induced_renaming, is_injective
from .gadgets import LabelGroup, reorder_choice, mangle, nd_choice, gc_junk, is_junk
from .protocols import encode_type, encode_context, channel_types
from .encoder import (
    EncodingJudgement,
    Encoding,
    encode,
    encode_with_provenance,
    is_starting_step
)

__all__ = [
    'RenamingPolicy',
    'induced_renaming',
    'is_injective',
    'LabelGroup',
    'reorder_choice',
    'mangle',
    'nd_choice',
    'gc_junk',
    'is_junk',
    'encode_type',
    'encode_context',
    'channel_types',
    'EncodingJudgement',
    'Encoding',
    'encode',
    'encode_with_provenance',
    'is_starting_step'
]
