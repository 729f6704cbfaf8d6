from hypothesis import strategies as st

from rewritelab.kernel import BASE, CA, CF, TA, App, Arrow, ArrowAbs, Lam, Var

NAMES = ["x", "y", "z"]

types = st.recursive(st.just(BASE), lambda t: st.builds(Arrow, t, t), max_leaves=4)


def _mixed(children):
    return st.one_of(
        st.builds(App, children, children),
        st.builds(Lam, types, st.sampled_from(NAMES), children),
        st.builds(ArrowAbs, types, children),
    )


# open mixed terms over x, y, z
mixed_terms = st.recursive(
    st.one_of(st.sampled_from([CA, CF, TA]), st.sampled_from(NAMES).map(Var)),
    _mixed, max_leaves=8,
)


def _standard(children):
    return st.one_of(
        st.builds(App, children, children),
        st.builds(Lam, types, st.sampled_from(NAMES), children),
    )


standard_terms = st.recursive(
    st.one_of(st.sampled_from([CA, CF]), st.sampled_from(NAMES).map(Var)),
    _standard, max_leaves=8,
)
