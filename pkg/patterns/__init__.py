from .conflict import conflict, distributable_steps, distributable_execs, footprint, Footprint
from .synchronization import (
    PATTERN_M,
    PATTERN_STAR,
    PatternWitness,
    detect_m,
    detect_star,
    find_m,
    find_star
)
from .confluence import ConfluenceResult, ConfluenceSummary, confluence_check, lemma_pairs, random_confluence
from .enumeration import ScanReport, enumerate_cmvplus, network_size, scan_patterns
from .hypergraph import (
    Automorphism,
    Hypergraph,
    NetworkDecomposition,
    SymmetryReport,
    automorphism_from_cycles,
    build_hypergraph,
    check_symmetry,
    decompose,
    find_automorphisms,
    orbit,
    orbits
)
from .election import ElectionReport, electoral_check

__all__ = [
    'conflict',
    'distributable_steps',
    'distributable_execs',
    'footprint',
    'Footprint',
    'PATTERN_M',
    'PATTERN_STAR',
    'PatternWitness',
    'detect_m',
    'detect_star',
    'find_m',
    'find_star',
    'ConfluenceResult',
    'ConfluenceSummary',
    'confluence_check',
    'lemma_pairs',
    'random_confluence',
    'ScanReport',
    'enumerate_cmvplus',
    'network_size',
    'scan_patterns',
    'Automorphism',
    'Hypergraph',
    'NetworkDecomposition',
    'SymmetryReport',
    'automorphism_from_cycles',
    'build_hypergraph',
    'check_symmetry',
    'decompose',
    'find_automorphisms',
    'orbit',
    'orbits',
    'ElectionReport',
    'electoral_check'
]
