import pytest
from hypothesis import given, settings

from rewritelab.kernel import is_closed, is_standard, is_mixed_value
from rewritelab.reduction import one_steps, redexes, typable
from rewritelab.safety import (
    PreconditionViolation, is_quasi_stuck, is_stuck, progress_check, type_safety_run,
)
from rewritelab.syntax import parse_term as P

from conftest import mixed_terms, standard_terms

APPLY_TWICE = P(r"(\x:(A->A). x (x a)) f")


def test_quasi_stuck_examples():
    assert is_quasi_stuck(P("f f"))
    assert is_quasi_stuck(P(r"\x:A. x"))
    assert not is_quasi_stuck(P("f a"))
    assert not is_quasi_stuck(P("(A->A) A"))
    assert is_quasi_stuck(P("(A->A) (A->A)"))
    assert is_quasi_stuck(P("a a"))
    assert not is_quasi_stuck(P(r"(\x:A. x) a"))
    # clause 4 needs a non-value argument
    assert is_quasi_stuck(P(r"(\x:A. x) (f f)"))


def test_stuck_examples():
    assert is_stuck(P("f f"))
    assert not is_stuck(P("a"))



def test_value_argument_to_arrow_abstraction_is_not_quasi_stuck():
    # the fourth clause requires a non-value argument; this term is c-normal
    # and not a value, yet it lies outside the inductive set
    m = P("(A -> A -> A) (A => A A)")
    assert redexes(m, "ca") == []
    assert not is_mixed_value(m)
    assert not is_quasi_stuck(m) and not is_stuck(m)
    # widening the clause would break closure under a-steps: this non-value
    # a-reduces to the value A
    assert one_steps(P("(A => A) A"), "a")[0][1] == P("A")


def test_progress():
    assert progress_check(P(r"\x:A. x")).reason == "value"
    assert progress_check(APPLY_TWICE).reason == "c-redex"
    with pytest.raises(PreconditionViolation):
        progress_check(P("f f"))
    with pytest.raises(PreconditionViolation):
        progress_check(P("x"))
    with pytest.raises(PreconditionViolation):
        progress_check(P("A"))


def test_type_safety_run():
    out = type_safety_run(APPLY_TWICE, 100)
    assert out.kind == "value" and out.term == P("a") and out.steps == 3
    stuck = type_safety_run(P("f f"), 100)
    assert stuck.kind == "stuck" and stuck.term == P("f f")
    assert type_safety_run(P(r"\x:A. x"), 100).kind == "value"
    omega = P(r"(\x:(A->A). x x) (\x:(A->A). x x)")
    assert type_safety_run(omega, 20).kind == "fuel-exhausted"


@settings(max_examples=300)
@given(mixed_terms)
def test_quasi_stuck_terms_have_no_c_redex(m):
    if is_quasi_stuck(m):
        assert redexes(m, "c") == []


def test_c_normal_term_outside_the_inductive_set():
    # call-by-value never enters the argument while the function is a
    # non-value, so this closed standard term is c-normal; but the last
    # clause wants the argument quasi-stuck and f a is not
    t = P("a a (f a)")
    assert is_closed(t) and is_standard(t)
    assert redexes(t, "c") == []
    assert not is_quasi_stuck(P("f a"))
    assert not is_quasi_stuck(t)
    assert typable(t) is None


@settings(max_examples=300)
@given(standard_terms)
def test_typable_closed_c_normal_standard_terms_are_quasi_stuck(t):
    if is_closed(t) and not redexes(t, "c") and typable(t) is not None:
        assert is_quasi_stuck(t)


@settings(max_examples=300)
@given(mixed_terms)
def test_quasi_stuck_closed_under_a(m):
    if is_quasi_stuck(m):
        for _, n in one_steps(m, "a"):
            assert is_quasi_stuck(n)
            assert is_mixed_value(n) == is_mixed_value(m)


@settings(max_examples=300)
@given(standard_terms)
def test_typable_closed_terms_never_get_stuck(t):
    if is_closed(t) and is_standard(t) and typable(t) is not None:
        assert type_safety_run(t, 1000).kind == "value"
