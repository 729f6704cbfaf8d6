from hypothesis import given
from hypothesis import strategies as st

from rewritelab.kernel import (
    BASE, CA, CF, TA, App, Arrow, ArrowAbs, Lam, Var, alpha_eq, alpha_key, arrow,
    as_type, classify, ctx_subst, embed_type, free_vars, fresh_name, is_closed,
    is_mixed_value, is_standard, is_standard_value, is_type, size, subst, type_depth,
)
from rewritelab.syntax import parse_term

from conftest import NAMES, mixed_terms, types

AA = Arrow(BASE, BASE)
x, y = Var("x"), Var("y")


def test_arrow_is_right_nested():
    assert arrow(BASE, BASE, BASE) == Arrow(BASE, AA)
    assert type_depth(BASE) == 0
    assert type_depth(Arrow(AA, BASE)) == 2


def test_subst_variable_hit():
    assert subst(x, "x", CA) == CA


def test_subst_renames_to_avoid_capture():
    out = subst(Lam(BASE, "y", x), "x", y)
    assert isinstance(out, Lam)
    assert out.var != "y"
    assert out.body == y
    assert alpha_eq(out, parse_term(r"\z:A. y"))


def test_subst_type_into_body():
    body = App(x, App(x, y))
    AtoA = embed_type(AA)
    assert subst(body, "x", AtoA) == App(AtoA, App(AtoA, y))


def test_subst_stops_at_shadowing_binder():
    m = Lam(BASE, "x", x)
    assert subst(m, "x", CA) == m


def test_ctx_subst():
    assert ctx_subst([("x", BASE)], x) == TA
    AtoA = embed_type(AA)
    assert ctx_subst([("x", AA)], App(x, App(x, CA))) == App(AtoA, App(AtoA, CA))
    m = parse_term(r"\y:A. f y")
    assert ctx_subst([], m) == m


def test_ctx_subst_later_binding_shadows():
    assert ctx_subst([("x", BASE), ("x", AA)], x) == embed_type(AA)


def test_free_vars_and_closed():
    assert free_vars(Lam(BASE, "x", App(x, y))) == {"y"}
    assert is_closed(parse_term(r"\x:A. x"))
    assert not is_closed(x)
    assert free_vars(ArrowAbs(BASE, x)) == {"x"}


def test_alpha_eq():
    assert alpha_eq(Lam(BASE, "x", x), Lam(BASE, "y", y))
    assert not alpha_eq(Lam(BASE, "x", x), Lam(AA, "y", y))
    assert not alpha_eq(x, y)


def test_classify():
    assert classify(ArrowAbs(BASE, TA)) == {"type", "mixed-value"}
    assert classify(CA) == {"standard", "mixed-value", "standard-value"}
    assert classify(App(CF, CA)) == {"standard"}
    assert classify(TA) == {"type", "mixed-value"}
    # a non-type arrow abstraction is a mixed value but neither standard nor a type
    assert classify(ArrowAbs(BASE, CA)) == {"mixed-value"}


def test_embedding_round_trip():
    for ty in (BASE, AA, Arrow(AA, AA)):
        assert as_type(embed_type(ty)) == ty
        assert is_type(embed_type(ty))
    assert as_type(App(TA, TA)) is None


def test_size_ignores_annotations():
    assert size(CA) == 1
    assert size(Lam(Arrow(AA, AA), "x", x)) == 2
    assert size(App(CF, CA)) == 3


def test_fresh_name():
    assert fresh_name("y", {"y"}) == "y'"
    # always a primed variant, so a renamed binder is visibly renamed
    assert fresh_name("y", {"x"}) == "y'"
    assert fresh_name("y", {"y", "y'"}) == "y''"


def test_standard_predicates():
    assert is_standard(parse_term(r"(\x:A. x) a"))
    assert not is_standard(TA)
    assert is_standard_value(parse_term(r"\x:A. x"))
    assert not is_standard_value(ArrowAbs(BASE, TA))
    assert is_mixed_value(ArrowAbs(BASE, App(CF, CA)))


@given(mixed_terms, st.sampled_from(NAMES), mixed_terms)
def test_subst_removes_var_and_keeps_other_free_vars(m, v, n):
    out = subst(m, v, n)
    expected = (free_vars(m) - {v}) | (free_vars(n) if v in free_vars(m) else set())
    assert free_vars(out) == expected


@given(mixed_terms, st.sampled_from(NAMES))
def test_subst_of_itself_is_identity_up_to_alpha(m, v):
    assert alpha_eq(subst(m, v, Var(v)), m)


@given(mixed_terms, st.sampled_from(NAMES), types)
def test_renaming_a_binder_preserves_alpha_class(body, v, ty):
    lam = Lam(ty, v, body)
    renamed = Lam(ty, "q", subst(body, v, Var("q")))
    assert alpha_eq(lam, renamed)
    assert alpha_key(lam) == alpha_key(renamed)


@given(mixed_terms)
def test_size_is_positive_and_types_are_values(m):
    assert size(m) >= 1
    if is_type(m):
        assert is_mixed_value(m)
