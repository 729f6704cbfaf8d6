import json

import pytest
from hypothesis import given, settings

from rewritelab.kernel import BASE, CA, TA, Arrow, alpha_eq, embed_type, is_type
from rewritelab.reduction import (
    RELATIONS, InvalidOccurrence, RedexOccurrence, RuleTag, is_valid, mu, normalize_a,
    one_steps, redexes, run, step, subterm, successors, typable,
)
from rewritelab.syntax import parse_term as P
from rewritelab.syntax import show

from conftest import mixed_terms, types

TWICE = P(r"\x:(A->A). \y:A. x (x y)")
APPLY_TWICE = P(r"(\x:(A->A). x (x a)) f")
ID_ID = P(r"(\x:A. x) (\x:A. x)")
AA = Arrow(BASE, BASE)


def occ(tag, *pos):
    return RedexOccurrence(tuple(pos), RuleTag(tag))


def test_rule_tags_know_their_relation():
    assert RuleTag.c_beta.relation == "c"
    assert {t.relation for t in RuleTag} == {"a", "b", "c"}


def test_c_redex_at_root():
    assert redexes(APPLY_TWICE, "c") == [occ("c_beta")]


def test_types_have_no_a_redex():
    for ty in (BASE, AA, Arrow(AA, AA)):
        assert redexes(embed_type(ty), "a") == []


def test_redexes_f_a_under_ca_in_order():
    assert redexes(P("f a"), "ca") == [occ("c_fbeta"), occ("a_f", 0), occ("a_a", 1)]


def test_c_does_not_reduce_under_lambda():
    m = P(r"\x:A. f a")
    assert redexes(m, "c") == []
    assert redexes(m, "b") == [occ("b_fbeta", 0)]


def test_c_needs_value_argument():
    m = P(r"(\x:A. x) (f a)")
    assert redexes(m, "c") == [occ("c_fbeta", 1)]
    assert [o.tag for o in redexes(m, "b")] == [RuleTag.b_beta, RuleTag.b_fbeta]


def test_a_lambda_step():
    out = step(TWICE, occ("a_lambda"))
    assert show(out) == r"(A->A) => \y:A. (A->A) ((A->A) y)"


def test_a_beta_step():
    m = P(r"((A->A) => A => A) (A->A)")
    assert step(m, occ("a_beta")) == P("A => A")


def test_f_a_step():
    assert step(P("f a"), occ("c_fbeta")) == CA


def test_invalid_occurrence():
    with pytest.raises(InvalidOccurrence):
        step(P("f a"), occ("a_beta"))
    with pytest.raises(InvalidOccurrence):
        step(P("f a"), occ("a_a", 0, 0))
    assert not is_valid(P("a"), occ("a_f"))


def test_successors():
    assert successors(TA, "a") == []
    assert successors(CA, "a") == [TA]
    assert len(successors(ID_ID, "ba")) == 3
    assert len(successors(ID_ID, "b")) == 1


def test_mu():
    assert mu(TA) == 0
    assert mu(P("f a")) == 3
    body = P(r"f (\x:A. x)")
    assert mu(P(r"A => f (\x:A. x)")) == mu(body)


def test_normalize_a():
    assert normalize_a(TWICE) == embed_type(Arrow(AA, AA))
    assert normalize_a(TA) == TA
    assert normalize_a(ID_ID) == P("(A->A) (A->A)")


def test_typable():
    assert typable(TWICE) == Arrow(AA, AA)
    assert typable(P("f f")) is None
    assert typable(P("f")) == AA
    assert typable(APPLY_TWICE) == BASE


def test_a_trace_of_twice():
    tr = run(TWICE, "a")
    assert tr.normal and len(tr) == 4
    assert show(tr.final) == "(A->A)->A->A"


def test_c_run():
    tr = run(APPLY_TWICE, "c", fuel=10)
    assert [show(t) for _, t in tr.steps] == ["f (f a)", "f a", "a"]
    assert tr.normal and not tr.exhausted


def test_run_trivial_and_b():
    assert len(run(TA, "a", fuel=10)) == 0
    assert alpha_eq(run(ID_ID, "b", fuel=10).final, P(r"\x:A. x"))


def test_run_fuel_exhausted():
    omega = P(r"(\x:(A->A). x x) (\x:(A->A). x x)")
    tr = run(omega, "b", fuel=5)
    assert tr.exhausted and not tr.normal and len(tr) == 5


def test_given_trace_replays():
    tr = run(APPLY_TWICE, "c")
    again = run(APPLY_TWICE, "c", "given-trace", occurrences=[o for o, _ in tr.steps])
    assert again.final == tr.final and again.normal
    with pytest.raises(InvalidOccurrence):
        run(APPLY_TWICE, "a", "given-trace", occurrences=[occ("c_beta")])


def test_trace_json():
    tr = run(P("f a"), "c")
    assert json.loads(tr.to_json()) == [{"rule": "c_fbeta", "position": [], "term": "a"}]


def test_unknown_relation():
    with pytest.raises(ValueError):
        redexes(CA, "x")


@settings(max_examples=300)
@given(mixed_terms)
def test_mu_strictly_decreases_on_a_steps(m):
    for _, n in one_steps(m, "a"):
        assert mu(n) < mu(m)


@settings(max_examples=300)
@given(mixed_terms)
def test_a_peaks_close_in_one_step(m):
    succ = [n for _, n in one_steps(m, "a")]
    for n1 in succ:
        for n2 in succ:
            r1 = {n1} | {n for _, n in one_steps(n1, "a")}
            r2 = {n2} | {n for _, n in one_steps(n2, "a")}
            assert r1 & r2


@given(mixed_terms)
def test_redex_lists_are_ordered_and_valid(m):
    for rel in RELATIONS:
        occs = redexes(m, rel)
        for o in occs:
            assert o.tag.relation in rel
            assert is_valid(m, o)
            subterm(m, o.position)
    assert set(redexes(m, "ba")) == set(redexes(m, "b")) | set(redexes(m, "a"))
    assert set(redexes(m, "c")) <= {RedexOccurrence(o.position, RuleTag("c" + o.tag.value[1:]))
                                     for o in redexes(m, "b")}


@given(types)
def test_types_are_a_normal(ty):
    assert is_type(normalize_a(embed_type(ty)))
    assert redexes(embed_type(ty), "ba") == []
