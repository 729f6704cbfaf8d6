import json

import pytest

from rewritelab import ars
from rewritelab.enumeration import (
    Report, TruncatedGraph, a_closure, build_graph, combined_confluence_oracle,
    confluence_oracle, corpus, correspondence_oracle, count_closed_terms, enum_closed_terms,
    enum_sk_terms, enum_types, export_ars, generalized_preservation_oracle,
    graph_diamond_check, graph_measure_check, measure_oracle, peak_completion_oracle,
    preservation_oracle, progress_oracle, quasi_stuck_oracle, safety_oracle, sk_atoms,
    generic_preservation_oracle, typable_corpus, uniform_preservation_oracle, weak_normalization_oracle,
)
from rewritelab.kernel import BASE, CA, CF, Arrow, alpha_key, is_closed, is_standard, size
from rewritelab.reduction import typable
from rewritelab.syntax import parse_term as P

ID_ID = P(r"(\x:A. x) (\x:A. x)")
SMALL = list(corpus(4, 1))


def test_enum_types():
    assert enum_types(0) == [BASE]
    assert enum_types(1) == [BASE, Arrow(BASE, BASE)]
    assert len(enum_types(2)) == 5


def test_enum_closed_terms_small():
    assert list(enum_closed_terms(1, 0)) == [CA, CF]
    assert list(enum_closed_terms(0, 2)) == []


# counts produced by the enumerator and by the recurrence, cross-checked
COUNTS_DEPTH_1 = [2, 6, 20, 82, 372, 1788, 9064]
COUNTS_DEPTH_2 = [2, 15, 104, 730, 5391, 42060]


@pytest.mark.parametrize("depth, counts", [(1, COUNTS_DEPTH_1), (2, COUNTS_DEPTH_2)])
def test_counts_match_recurrence(depth, counts):
    for n, expected in enumerate(counts, 1):
        terms = list(enum_closed_terms(n, depth))
        assert len(terms) == expected == count_closed_terms(n, depth)
        assert len({alpha_key(t) for t in terms}) == expected


def test_recurrence_totals():
    assert sum(count_closed_terms(n, 2) for n in range(1, 8)) == 391_707
    assert count_closed_terms(8, 2) == 2_906_460


def test_corpus_terms_are_closed_standard_and_sized():
    for t in corpus(5, 1):
        assert is_closed(t) and is_standard(t)
    assert [size(t) for t in enum_closed_terms(4, 1)] == [4] * 82


def test_build_graph():
    g = build_graph(P("A"), "a", 100)
    assert len(g.nodes) == 1 and g.edges == [] and not g.truncated
    g = build_graph(ID_ID, "ba", 100)
    nfs = {alpha_key(g.nodes[i]) for i in g.normal_forms()}
    assert nfs == {alpha_key(P("(A->A) (A->A)")), alpha_key(P("A->A"))}
    assert g.find(ID_ID) == 0


def test_truncation_flag_and_monotonicity():
    omega3 = P(r"(\x:(A->A). x x x) (\x:(A->A). x x x)")
    sizes = []
    for cap in (1, 5, 20, 50):
        g = build_graph(omega3, "b", cap)
        assert g.truncated
        assert len(g.nodes) == cap
        sizes.append(len(g.nodes))
    assert sizes == sorted(sizes)
    full = build_graph(ID_ID, "ba", 1000)
    assert not full.truncated
    assert len(build_graph(ID_ID, "ba", len(full.nodes)).nodes) == len(full.nodes)
    with pytest.raises(TruncatedGraph):
        confluence_oracle(build_graph(omega3, "b", 5))


def test_confluence_oracle_examples():
    assert not confluence_oracle(build_graph(ID_ID, "ba", 100)).ok
    assert confluence_oracle(build_graph(P("A"), "a", 10)).ok
    assert confluence_oracle(build_graph(P(r"(\x:(A->A). x (x a)) f"), "ba")).ok


def test_dot_export():
    dot = build_graph(P("f a"), "ba").to_dot()
    assert dot.startswith("digraph")
    assert "style=dashed" in dot and 'label="b_fbeta@[]"' in dot


def test_export_ars():
    sys_, types = export_ars(build_graph(P("A"), "ba"))
    assert sys_.nodes == {0} and types == {0}
    sys_, types = export_ars(build_graph(ID_ID, "ba"))
    assert not ars.is_confluent(sys_, "ab")
    sys_, types = export_ars(build_graph(P(r"(\x:(A->A). x (x a)) f"), "ba"))
    rep = ars.check_preservation_conditions(sys_, types)
    assert rep.hypotheses_hold and rep.conclusion


def test_a_closure():
    close = a_closure(P("f a"))
    assert alpha_key(P("A")) in close
    assert len(close) == 5  # f a, (A->A) a, f A, (A->A) A, A
    with pytest.raises(TruncatedGraph):
        a_closure(P(r"\x:A. f (f (f a))"), cap=3)


def test_report_json_schema():
    rep = Report("demo", checked=3)
    rep.violate({"term": "x"})
    d = json.loads(rep.to_json())
    assert {"checked", "violations", "truncated"} <= set(d)
    assert not rep.ok and rep.summary().startswith("FAIL")
    for i in range(60):
        rep.violate(i)
    assert len(rep.violations) == 50 and rep.notes["more_violations"] == 11


def test_preservation_example():
    m = P(r"(\x:(A->A). x (x a)) f")
    rep = preservation_oracle([m], "b")
    assert rep.ok and rep.checked == 1
    with pytest.raises(ValueError):
        preservation_oracle([m], "a")


def test_oracles_on_small_corpus():
    reports = [
        correspondence_oracle(SMALL), measure_oracle(SMALL),
        preservation_oracle(SMALL, "b"), preservation_oracle(SMALL, "c"),
        peak_completion_oracle(SMALL), progress_oracle(SMALL), safety_oracle(SMALL),
        quasi_stuck_oracle(SMALL), weak_normalization_oracle(SMALL),
        combined_confluence_oracle(SMALL), generic_preservation_oracle(SMALL),
        generalized_preservation_oracle(SMALL),
    ]
    for rep in reports:
        assert rep.ok, rep.summary()
        assert rep.checked > 0, rep.name


def test_graph_checks():
    diamond, measure = Report("diamond"), Report("measure")
    for t, _ in typable_corpus(SMALL):
        g = build_graph(t, "ba")
        graph_diamond_check(g, diamond)
        graph_measure_check(g, measure)
    assert diamond.ok and measure.ok and diamond.checked and measure.checked


def test_typable_corpus_size():
    # frozen from a run of the enumerator: typable closed terms, size <= 4, depth 1
    assert sum(1 for _ in typable_corpus(SMALL)) == 75


def test_sk_enumeration():
    assert len(sk_atoms(1)) == 8 + 4 + 2
    terms = list(enum_sk_terms(6))
    assert len(terms) == 14 + 14 ** 2 + 2 * 14 ** 3
    rep = uniform_preservation_oracle(terms)
    assert rep.ok and rep.checked == 37 and rep.notes["with_c_step"] == 4


def test_sk_preservation_along_call_by_value_paths():
    from rewritelab.trs import A, K, S, app, arrow, uniform_cbv_step, uniform_typable

    AA = arrow(A, A)
    for t in (app(S(A, A, A), K(A, A), AA, A), app(K(A, A), A, A), app(K(AA, A), AA, A)):
        ty = uniform_typable(t)
        assert ty is not None
        steps = 0
        while (t := uniform_cbv_step(t)) is not None:
            steps += 1
            assert uniform_typable(t) == ty
        assert steps >= 1
