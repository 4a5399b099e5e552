from hypothesis import assume, given, settings
from hypothesis import strategies as st
import pytest

from calculi import canonical
from calculi.binding import alpha_eq, apply_subst, free_names
from calculi.canonical import canonicalize, flip_annotation, is_canonical
from calculi.errors import CanonicalFormError, SubstitutionError
from calculi.names import Name, NameKind, NameSupply, fresh_name, make_name
from calculi.syntax import Calculus, Inact, Par, TRUE
from parsing.parser import parse, parse_type
from parsing.printer import print_term
from semantics.steps import reducts
from sessiontypes.types import BOOL_TYPE, dualize


def pi(text):
    return parse(text, 'pi')


def mix(text):
    return parse(text, 'cmv+')


def cmv(text):
    return parse(text, 'cmv')


# ---------------------------------------------------------------- names

def test_indexed_names_compare_by_text():
    assert Name('c', index=0) == Name('c0')
    assert hash(Name('c', index=0)) == hash(Name('c0'))


def test_numerals_sort_first_and_numerically():
    names = [Name('b'), make_name('10'), make_name('2'), Name('a')]
    assert [str(n) for n in sorted(names)] == ['2', '10', 'a', 'b']
    assert make_name('3').kind is NameKind.NUMERAL


def test_fresh_name_primes_until_free():
    assert str(fresh_name(Name('x'), {Name('x'), Name("x'")})) == "x''"


def test_fresh_name_never_returns_a_numeral():
    assert not fresh_name(make_name('1'), ()).is_numeral


def test_name_supply_draws_in_call_order():
    supply = NameSupply()
    assert [str(n) for n in supply.pair('s', 't')] == ['s0', 't0']
    assert str(supply.next('c')) == 'c0'
    assert [str(n) for n in supply.pair('s', 't')] == ['s1', 't1']


# ---------------------------------------------------------------- substitution

def test_substitution_avoids_capture():
    term = pi("a?(x).x!<z>")
    result = apply_subst(term, {Name('z'): Name('x')})
    assert Name('x') in free_names(result)
    assert alpha_eq(result, pi("a?(y).y!<x>"))


def test_substitution_leaves_bound_names_alone():
    term = pi("(nu a) a!<b>")
    assert apply_subst(term, {Name('a'): Name('c')}) == term


def test_constant_in_channel_position_is_rejected():
    with pytest.raises(SubstitutionError):
        apply_subst(mix("lin y(l!true.0)"), {Name('y'): TRUE})


def test_constant_in_value_position_is_allowed():
    result = apply_subst(mix("lin y(l!z.0)"), {Name('z'): TRUE})
    assert print_term(result) == "lin y(l!true)"


# ---------------------------------------------------------------- canonical forms

def test_nil_and_dead_restrictions_vanish():
    assert print_term(canonicalize(pi("a!<z>.0 | (nu x) 0"))) == "a!<z>"


def test_parallel_is_commutative_and_associative():
    left = canonicalize(pi("a! | (b! | c!)"))
    right = canonicalize(pi("(c! | a!) | b!"))
    assert left == right


def test_sum_is_commutative():
    assert canonicalize(pi("a! + b?")) == canonicalize(pi("b? + a!"))


def test_scope_extrusion():
    assert canonicalize(pi("(nu x)(x! | a!)")) == canonicalize(pi("a! | (nu x) x!"))


def test_alpha_equivalent_terms_share_a_canonical_form():
    assert canonicalize(pi("(nu x) x!<y>")) == canonicalize(pi("(nu w) w!<y>"))


def test_session_restrictions_extrude():
    left = mix("(new x y)(lin x(l!true.0) | lin y(l?z.0)) | 0")
    right = mix("(new p q)(lin q(l?w.0) | lin p(l!true.0))")
    assert canonicalize(left, Calculus.MIX) == canonicalize(right, Calculus.MIX)


def test_different_terms_stay_apart():
    assert canonicalize(pi("a! | a!")) != canonicalize(pi("a!"))
    assert canonicalize(pi("(nu x)(x! | x?)")) != canonicalize(pi("(nu x) x! | (nu x) x?"))


def test_empty_parallel_is_inactive():
    assert canonicalize(Par((Inact(), Inact())), Calculus.MIX) == Inact()

RING = 'abcdefgh'


def ring(names, order):
    """Restricted names passed round a cycle, written in ``order``."""
    binders = ''.join(f"(nu {n}) " for n in names)
    threads = [f"{names[i]}!<{names[(i + 1) % len(names)]}>" for i in order]
    return pi(binders + "(" + " | ".join(threads) + ")")


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(len(RING))), st.permutations(list(RING)))
def test_symmetric_ring_has_one_canonical_form(order, spelling):
    assert canonicalize(ring(RING, range(len(RING)))) == canonicalize(ring(spelling, order))


def test_ring_and_two_short_rings_stay_apart():
    two = pi("(nu a)(nu b)(nu c)(nu d)(nu e)(nu f)(nu g)(nu h)"
             "(a!<b> | b!<c> | c!<d> | d!<a> | e!<f> | f!<g> | g!<h> | h!<e>)")
    assert canonicalize(ring(RING, range(len(RING)))) != canonicalize(two)


def test_too_many_symmetric_orders_is_an_error(monkeypatch):
    monkeypatch.setattr(canonical, 'LEAF_LIMIT', 3)
    with pytest.raises(CanonicalFormError):
        canonicalize(ring(RING, range(len(RING))))


def test_many_tied_threads_keep_one_canonical_form():
    threads = [f"(nu x{i}) x{i}!<o>" for i in range(9)] + ["o?", "o?(w).w!"]
    forward = canonicalize(pi(" | ".join(threads)))
    assert forward == canonicalize(pi(" | ".join(reversed(threads))))
    assert is_canonical(forward)


def test_session_ring_is_invariant_under_endpoint_spelling():
    left = mix("(new x y)(new p q)(lin x(l!true.lin p(l!true)) | lin q(l?z.lin y(l?w)))")
    right = mix("(new q p)(new y x)(lin p(l?w.lin x(l?z)) | lin y(l!true.lin q(l!true)))")
    assert canonicalize(left, Calculus.MIX) == canonicalize(right, Calculus.MIX)


def test_pair_annotations_flip_through_the_type():
    t = parse_type("lin +{l!bool.end}")
    assert flip_annotation(t) == dualize(t)
    assert flip_annotation(BOOL_TYPE) == BOOL_TYPE
    assert flip_annotation(None) is None


def test_swapped_pairs_carry_the_dual_annotation():
    left = mix("(new x y : lin +{l!bool.end})(lin x(l!true.0) | lin y(l?z.0))")
    right = mix("(new y x : lin &{l?bool.end})(lin x(l!true.0) | lin y(l?z.0))")
    assert canonicalize(left, Calculus.MIX) == canonicalize(right, Calculus.MIX)


# ---------------------------------------------------------------- properties

CHANNELS = st.sampled_from(['a', 'b', 'x'])


@st.composite
def pi_terms(draw, depth=2):
    """Small π terms over the channels a, b and x."""
    if depth == 0:
        return draw(st.sampled_from(['0', 'a!', 'b?', 'a!<b>', 'tau']))
    kind = draw(st.sampled_from(['prefix', 'sum', 'par', 'nu']))
    channel = draw(CHANNELS)
    if kind == 'prefix':
        prefix = draw(st.sampled_from([f"{channel}!", f"{channel}?", f"{channel}?(w)", f"{channel}!<a>"]))
        return f"{prefix}.({draw(pi_terms(depth - 1))})"
    if kind == 'sum':
        return f"{channel}!.({draw(pi_terms(depth - 1))}) + {channel}?.({draw(pi_terms(depth - 1))})"
    if kind == 'par':
        return f"({draw(pi_terms(depth - 1))}) | ({draw(pi_terms(depth - 1))})"
    return f"(nu {channel}) ({draw(pi_terms(depth - 1))})"


@settings(max_examples=60, deadline=None)
@given(pi_terms())
def test_canonicalize_is_idempotent(text):
    once = canonicalize(pi(text))
    assert canonicalize(once) == once
    assert is_canonical(once)


@settings(max_examples=60, deadline=None)
@given(pi_terms(), pi_terms())
def test_parallel_commutes_on_generated_terms(left, right):
    assert canonicalize(pi(f"({left}) | ({right})")) == canonicalize(pi(f"({right}) | ({left})"))


@settings(max_examples=60, deadline=None)
@given(pi_terms())
def test_printed_canonical_forms_parse_back(text):
    once = canonicalize(pi(text))
    assert canonicalize(pi(print_term(once))) == once


@settings(max_examples=60, deadline=None)
@given(pi_terms())
def test_identity_substitution_is_a_no_op(text):
    term = pi(text)
    assert apply_subst(term, {n: n for n in free_names(term)}) == term


@settings(max_examples=60, deadline=None)
@given(pi_terms())
def test_renaming_to_fresh_and_back_is_alpha_equivalent(text):
    term = pi(text)
    there = {n: Name(f"r_{n}") for n in free_names(term)}
    back = {v: k for k, v in there.items()}
    assert alpha_eq(apply_subst(apply_subst(term, there), back), term)


@settings(max_examples=200, deadline=None)
@given(pi_terms(), st.sampled_from(['a', 'b', 'x']), st.sampled_from(['a', 'b', 'o']))
def test_substitution_commutes_with_canonical_forms(text, old, new):
    term = pi(text)
    sigma = {Name(old): Name(new)}
    assert canonicalize(apply_subst(term, sigma)) == canonicalize(apply_subst(canonicalize(term), sigma))


@settings(max_examples=200, deadline=None)
@given(pi_terms())
def test_injective_renaming_maps_free_names(text):
    term = pi(text)
    sigma = {n: Name(f"r_{n}") for n in free_names(term)}
    assert free_names(apply_subst(term, sigma)) == {sigma[n] for n in free_names(term)}


@settings(max_examples=200, deadline=None)
@given(pi_terms(), pi_terms())
def test_congruent_pi_terms_have_the_same_reducts(left, right):
    assert reducts(pi(f"({left}) | ({right})"), Calculus.PI) == reducts(pi(f"({right}) | ({left})"), Calculus.PI)


# ---------------------------------------------------------------- session properties

ENDPOINTS = st.sampled_from(['x', 'y', 'a', 'b'])
SESSION_PAIRS = st.sampled_from([('x', 'y'), ('y', 'x'), ('a', 'b')])
QUALIFIERS = st.sampled_from(['lin', 'un'])


@st.composite
def mix_terms(draw, depth=2):
    """Small CMV+ terms over the endpoints x, y, a and b."""
    if depth == 0:
        return draw(st.sampled_from(['0', 'lin x(l!true)', 'un a(l?z)', 'lin y(m!false + l?z)']))
    kind = draw(st.sampled_from(['choice', 'sum', 'par', 'new', 'if']))
    endpoint, qualifier = draw(ENDPOINTS), draw(QUALIFIERS)
    if kind == 'choice':
        return f"{qualifier} {endpoint}(l!true.({draw(mix_terms(depth - 1))}))"
    if kind == 'sum':
        return (f"{qualifier} {endpoint}(l!true.({draw(mix_terms(depth - 1))})"
                f" + m?w.({draw(mix_terms(depth - 1))}))")
    if kind == 'par':
        return f"({draw(mix_terms(depth - 1))}) | ({draw(mix_terms(depth - 1))})"
    if kind == 'new':
        left, right = draw(SESSION_PAIRS)
        return f"(new {left} {right}) ({draw(mix_terms(depth - 1))})"
    condition = draw(st.sampled_from(['true', 'false']))
    return f"if {condition} then ({draw(mix_terms(depth - 1))}) else ({draw(mix_terms(depth - 1))})"


@st.composite
def cmv_terms(draw, depth=2):
    """Small CMV terms over the endpoints x, y, a and b."""
    if depth == 0:
        return draw(st.sampled_from(['0', 'x!true', 'lin y?z', 'x<+l', 'y>>{l: 0, m: 0}']))
    kind = draw(st.sampled_from(['send', 'receive', 'select', 'offer', 'par', 'new']))
    endpoint = draw(ENDPOINTS)
    if kind == 'send':
        return f"{endpoint}!true.({draw(cmv_terms(depth - 1))})"
    if kind == 'receive':
        return f"{draw(QUALIFIERS)} {endpoint}?w.({draw(cmv_terms(depth - 1))})"
    if kind == 'select':
        return f"{endpoint}<+l.({draw(cmv_terms(depth - 1))})"
    if kind == 'offer':
        return f"{endpoint}>>{{l: ({draw(cmv_terms(depth - 1))}), m: ({draw(cmv_terms(depth - 1))})}}"
    if kind == 'par':
        return f"({draw(cmv_terms(depth - 1))}) | ({draw(cmv_terms(depth - 1))})"
    left, right = draw(SESSION_PAIRS)
    return f"(new {left} {right}) ({draw(cmv_terms(depth - 1))})"


SESSION_TERMS = {Calculus.MIX: mix_terms, Calculus.CMV: cmv_terms}

session_calculi = pytest.mark.parametrize('calculus', [Calculus.MIX, Calculus.CMV])


def canonical_form(text, calculus):
    return canonicalize(parse(text, calculus.value), calculus)


@pytest.mark.slow
@session_calculi
@settings(max_examples=1000, deadline=None)
@given(data=st.data())
def test_session_parallel_is_a_commutative_monoid(calculus, data):
    p, q, r = (data.draw(SESSION_TERMS[calculus]()) for _ in range(3))
    assert canonical_form(f"({p}) | ({q})", calculus) == canonical_form(f"({q}) | ({p})", calculus)
    assert (canonical_form(f"(({p}) | ({q})) | ({r})", calculus)
            == canonical_form(f"({p}) | (({q}) | ({r}))", calculus))
    assert canonical_form(f"({p}) | 0", calculus) == canonical_form(p, calculus)


@pytest.mark.slow
@session_calculi
@settings(max_examples=1000, deadline=None)
@given(data=st.data())
def test_session_restrictions_extrude_on_generated_terms(calculus, data):
    p, q = data.draw(SESSION_TERMS[calculus]()), data.draw(SESSION_TERMS[calculus]())
    left, right = data.draw(SESSION_PAIRS)
    assume(not {Name(left), Name(right)} & free_names(parse(q, calculus.value)))
    assert (canonical_form(f"((new {left} {right}) ({p})) | ({q})", calculus)
            == canonical_form(f"(new {left} {right}) (({p}) | ({q}))", calculus))


@pytest.mark.slow
@session_calculi
@settings(max_examples=1000, deadline=None)
@given(data=st.data())
def test_session_choices_commute(calculus, data):
    p, q = data.draw(SESSION_TERMS[calculus]()), data.draw(SESSION_TERMS[calculus]())
    if calculus is Calculus.MIX:
        left, right = f"lin x(l!true.({p}) + m?w.({q}))", f"lin x(m?w.({q}) + l!true.({p}))"
    else:
        left, right = f"x>>{{l: ({p}), m: ({q})}}", f"x>>{{m: ({q}), l: ({p})}}"
    assert canonical_form(left, calculus) == canonical_form(right, calculus)


@pytest.mark.slow
@session_calculi
@settings(max_examples=1000, deadline=None)
@given(data=st.data())
def test_session_canonical_forms_are_idempotent(calculus, data):
    once = canonical_form(data.draw(SESSION_TERMS[calculus]()), calculus)
    assert canonicalize(once, calculus) == once
    assert canonical_form(print_term(once), calculus) == once


@pytest.mark.slow
@session_calculi
@settings(max_examples=1000, deadline=None)
@given(data=st.data())
def test_session_substitution_commutes_with_canonical_forms(calculus, data):
    term = parse(data.draw(SESSION_TERMS[calculus]()), calculus.value)
    sigma = {Name(data.draw(ENDPOINTS)): Name(data.draw(st.sampled_from(['a', 'o'])))}
    assert (canonicalize(apply_subst(term, sigma), calculus)
            == canonicalize(apply_subst(canonicalize(term, calculus), sigma), calculus))
    renaming = {n: Name(f"r_{n}") for n in free_names(term)}
    assert free_names(apply_subst(term, renaming)) == {renaming[n] for n in free_names(term)}


@pytest.mark.slow
@session_calculi
@settings(max_examples=1000, deadline=None)
@given(data=st.data())
def test_congruent_session_terms_have_the_same_reducts(calculus, data):
    p, q = data.draw(SESSION_TERMS[calculus]()), data.draw(SESSION_TERMS[calculus]())
    forward = parse(f"({p}) | ({q})", calculus.value)
    backward = parse(f"({q}) | ({p})", calculus.value)
    assert reducts(forward, calculus) == reducts(backward, calculus)
    assert reducts(forward, calculus) == reducts(canonicalize(forward, calculus), calculus)
