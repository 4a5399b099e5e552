"""
The encodability criteria besides operational correspondence.
"""
import logging
from typing import Mapping, Optional, Sequence

from calculi.binding import apply_subst, free_names
from calculi.canonical import canonicalize
from calculi.errors import PreconditionError, TypeCheckError
from calculi.names import Name
from calculi.syntax import Calculus, Par
from encoding.encoder import encode
from encoding.naming import RenamingPolicy, induced_renaming, is_injective
from parsing.printer import print_term
from sessiontypes.checker import typecheck_cmv, typecheck_cmvplus
from sessiontypes.context import TypingContext

from .correspondence import EncodedSystem
from .report import FAIL, PASS, UNKNOWN, UNSUPPORTED, CriterionReport, edge_text

logger = logging.getLogger('Workbench.Certify')

BARB_SENSITIVENESS = 'barb-sensitiveness'
DIVERGENCE_REFLECTION = 'divergence-reflection'
NAME_INVARIANCE = 'name-invariance'
DISTRIBUTABILITY = 'distributability'
TYPE_PRESERVATION = 'type-preservation'


def _context(context) -> TypingContext:
    return context if isinstance(context, TypingContext) else TypingContext(context or ())


def check_barb_sensitiveness(system: EncodedSystem) -> CriterionReport:
    """S ⇓y iff ⟦S⟧ ⇓φ(y), on fully explored systems."""
    source, target = system.source_lts, system.target_lts
    if not (source.fully_known(source.initial) and target.fully_known(target.initial)):
        return CriterionReport(BARB_SENSITIVENESS, UNKNOWN, detail="explorations incomplete")
    policy = system.encoding.policy
    expected = sorted(str(policy(b.name)) for b in source.weak_barbs(source.initial))
    observed = sorted(str(b.name) for b in target.weak_barbs(target.initial))
    verdict = PASS if expected == observed else FAIL
    details = {'source': expected, 'target': observed}
    logger.debug(f"Barb sensitiveness: {verdict} ({expected} vs {observed})")
    return CriterionReport(BARB_SENSITIVENESS, verdict, details)


def check_divergence_reflection(system: EncodedSystem) -> CriterionReport:
    """A divergent translation needs a divergent source."""
    source, target = system.source_lts, system.target_lts
    if not system.complete:
        return CriterionReport(DIVERGENCE_REFLECTION, UNKNOWN, detail="explorations incomplete")
    source_cycle = source.find_cycle()
    target_cycle = target.find_cycle()
    details = {
        'source_cycle': [edge_text(e) for e in source_cycle or ()],
        'target_cycle': [edge_text(e) for e in target_cycle or ()],
    }
    verdict = FAIL if target_cycle and not source_cycle else PASS
    return CriterionReport(DIVERGENCE_REFLECTION, verdict, details)


def check_name_invariance(
    term,
    context,
    sigma: Mapping[Name, Name],
    policy: Optional[RenamingPolicy] = None
) -> CriterionReport:
    """
    ⟦Sσ⟧ = ⟦S⟧σ′ up to canonical form, σ′ the renaming induced through φ.

    Raises:
        PreconditionError: for a renaming that is not injective
    """
    context = _context(context)
    policy = policy or RenamingPolicy()
    domain = set(free_names(term)) | set(context.names())
    if not is_injective(sigma, domain):
        raise PreconditionError("name invariance is only checked for injective renamings")

    renamed_context = TypingContext((sigma.get(name, name), t) for name, t in context)
    left = encode(typecheck_cmvplus(renamed_context, apply_subst(term, sigma)), policy)
    right = apply_subst(encode(typecheck_cmvplus(context, term), policy), induced_renaming(policy, sigma))
    left, right = canonicalize(left, Calculus.CMV), canonicalize(right, Calculus.CMV)
    details = {'renaming': {str(a): str(b) for a, b in sorted(sigma.items())}}
    if left == right:
        return CriterionReport(NAME_INVARIANCE, PASS, details)
    details.update({'renamed_then_encoded': print_term(left), 'encoded_then_renamed': print_term(right)})
    return CriterionReport(NAME_INVARIANCE, FAIL, details)


def check_distributability_structural(terms: Sequence, context=None) -> CriterionReport:
    """
    ⟦S1 | ... | Sn⟧ and ⟦S1⟧ | ... | ⟦Sn⟧ have the same canonical form.

    The composition is nested to the left, ((S1 | S2) | S3) and so on.
    """
    context = _context(context)
    if not terms:
        raise PreconditionError("distributability needs at least one term")
    whole = terms[0]
    for term in terms[1:]:
        whole = Par((whole, term))
    joint = encode(typecheck_cmvplus(context.only(free_names(whole)), whole))
    parts = tuple(encode(typecheck_cmvplus(context.only(free_names(t)), t)) for t in terms)
    left = canonicalize(joint, Calculus.CMV)
    right = canonicalize(Par(parts) if len(parts) > 1 else parts[0], Calculus.CMV)
    if left == right:
        return CriterionReport(DISTRIBUTABILITY, PASS, {'components': len(terms)})
    return CriterionReport(DISTRIBUTABILITY, FAIL, {
        'components': len(terms),
        'encoded_whole': print_term(left),
        'composed_parts': print_term(right),
    })


def check_type_preservation(system: EncodedSystem) -> CriterionReport:
    """⟦Γ⟧ ⊢ ⟦S⟧ in CMV."""
    encoding = system.encoding
    if encoding.context is None:
        return CriterionReport(TYPE_PRESERVATION, UNSUPPORTED, detail="the context has no CMV translation")
    try:
        typecheck_cmv(encoding.context, encoding.term)
    except TypeCheckError as e:
        logger.debug(f"Encoded term rejected: {e}")
        return CriterionReport(TYPE_PRESERVATION, FAIL, e.to_dict(), str(e))
    return CriterionReport(TYPE_PRESERVATION, PASS)
