from .report import (
    PASS,
    FAIL,
    UNKNOWN,
    UNSUPPORTED,
    CertificationReport,
    CompletionFinding,
    CriterionReport,
    EmulationFinding,
    OcReport,
    combine
)
from .correspondence import (
    EncodedSystem,
    check_completeness,
    check_operational_correspondence,
    check_soundness,
    correspondence_report,
    replays
)
from .criteria import (
    check_barb_sensitiveness,
    check_distributability_structural,
    check_divergence_reflection,
    check_name_invariance,
    check_type_preservation
)
from .runner import certify_corpus, certify_entry

__all__ = [
    'PASS',
    'FAIL',
    'UNKNOWN',
    'UNSUPPORTED',
    'CertificationReport',
    'CompletionFinding',
    'CriterionReport',
    'EmulationFinding',
    'OcReport',
    'combine',
    'EncodedSystem',
    'check_completeness',
    'check_operational_correspondence',
    'check_soundness',
    'correspondence_report',
    'replays',
    'check_barb_sensitiveness',
    'check_distributability_structural',
    'check_divergence_reflection',
    'check_name_invariance',
    'check_type_preservation',
    'certify_corpus',
    'certify_entry'
]
