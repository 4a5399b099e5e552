from .library import (
    LEADER_ELECTION,
    PATTERN_M,
    STAR,
    TRANSLATION,
    CorpusEntry,
    load_worked,
    worked_entries,
    worked_entry
)
from .generator import oc_corpus, random_injective_renaming, random_mix_network

__all__ = [
    'LEADER_ELECTION',
    'PATTERN_M',
    'STAR',
    'TRANSLATION',
    'CorpusEntry',
    'load_worked',
    'worked_entries',
    'worked_entry',
    'oc_corpus',
    'random_injective_renaming',
    'random_mix_network'
]
