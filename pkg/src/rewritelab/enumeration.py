"""Exhaustive term enumeration, bounded reduction graphs and corpus oracles.

Each ``*_oracle`` function walks a corpus of terms, checks one property
by brute force and returns a :class:`Report`.  Nothing here is clever on
purpose: the point is to be an independent check of the meta-theory.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import product

from . import ars, safety
from .kernel import (
    BASE, CA, CF, App, Arrow, Lam, Term, Var, alpha_key, as_type, is_closed,
    is_mixed_value, is_standard, is_standard_value, is_type,
)
from .reduction import (
    DEFAULT_FUEL, RuleTag, contract, mu, normalize_a, one_steps, redexes,
    replace_at, run, subterm, typable,
)
from .syntax import show
from .typecheck import infer

BINDER_NAMES = "xyzwvu"


class TruncatedGraph(ValueError):
    pass


# -- enumerators ------------------------------------------------------------

def enum_types(depth: int) -> list:
    """All types of depth at most ``depth``."""
    if depth <= 0:
        return [BASE]
    smaller = enum_types(depth - 1)
    out = [BASE]
    out += [Arrow(d, c) for d in smaller for c in smaller]
    return out


def _binder(k):
    if k < len(BINDER_NAMES):
        return BINDER_NAMES[k]
    return f"x{k}"


def enum_closed_terms(size: int, type_depth: int):
    """Closed standard terms with exactly ``size`` nodes, one per alpha class.

    Binders are named by their depth (x, y, z, ...), so no two generated
    terms are alpha-equivalent and no binder shadows another.
    """
    types = enum_types(type_depth)
    memo = {}

    def gen(n, k):
        key = (n, k)
        if key in memo:
            return memo[key]
        out = []
        if n == 1:
            out += [CA, CF] + [Var(_binder(i)) for i in range(k)]
        elif n > 1:
            for i in range(1, n - 1):
                for fun, arg in product(gen(i, k), gen(n - 1 - i, k)):
                    out.append(App(fun, arg))
            x = _binder(k)
            for ty in types:
                out += [Lam(ty, x, body) for body in gen(n - 1, k + 1)]
        memo[key] = out
        return out

    return iter(gen(size, 0))


def corpus(max_size: int, type_depth: int):
    for n in range(1, max_size + 1):
        yield from enum_closed_terms(n, type_depth)


def count_closed_terms(size: int, type_depth: int, _scope: int = 0) -> int:
    """Independent count of closed standard terms by the size recurrence."""
    ntypes = len(enum_types(type_depth))
    table = {}

    def c(n, k):
        if n <= 0:
            return 0
        if (n, k) not in table:
            total = (2 + k) if n == 1 else 0
            total += sum(c(i, k) * c(n - 1 - i, k) for i in range(1, n - 1))
            total += ntypes * c(n - 1, k + 1)
            table[n, k] = total
        return table[n, k]

    return c(size, _scope)


# -- reduction graphs -------------------------------------------------------

@dataclass
class ReductionGraph:
    rel: str
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)  # (src, dst, RuleTag, position)
    truncated: bool = False
    index: dict = field(default_factory=dict, repr=False)

    def succ(self, rels: str = None) -> list:
        out = [set() for _ in self.nodes]
        for s, d, tag, _ in self.edges:
            if rels is None or tag.relation in rels:
                out[s].add(d)
        return out

    def normal_forms(self) -> list:
        has_out = {s for s, *_ in self.edges}
        return [i for i in range(len(self.nodes)) if i not in has_out]

    def find(self, m: Term):
        return self.index.get(alpha_key(m))

    def to_dot(self, name: str = "reductions") -> str:
        """DOT text; a-edges are dashed, concrete edges solid."""
        lines = [f"digraph {name} {{", "  node [shape=box, fontname=monospace];"]
        for i, m in enumerate(self.nodes):
            label = show(m).replace("\\", "\\\\").replace('"', '\\"')
            lines.append(f'  n{i} [label="{label}"];')
        for s, d, tag, pos in self.edges:
            style = ", style=dashed" if tag.relation == "a" else ""
            lines.append(f'  n{s} -> n{d} [label="{tag}@{list(pos)}"{style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_graph(m: Term, rel: str, node_cap: int = 10_000) -> ReductionGraph:
    g = ReductionGraph(rel)
    g.nodes.append(m)
    g.index[alpha_key(m)] = 0
    todo = deque([0])
    seen_edges = set()
    while todo:
        i = todo.popleft()
        for occ, n in one_steps(g.nodes[i], rel):
            k = alpha_key(n)
            j = g.index.get(k)
            if j is None:
                if len(g.nodes) >= node_cap:
                    g.truncated = True
                    continue
                j = len(g.nodes)
                g.nodes.append(n)
                g.index[k] = j
                todo.append(j)
            if (i, j, occ.tag) not in seen_edges:
                seen_edges.add((i, j, occ.tag))
                g.edges.append((i, j, occ.tag, occ.position))
    return g


def _sccs(n, succ):
    """Tarjan's algorithm, iterative; SCCs come out in reverse topological order."""
    index, low, on_stack = [None] * n, [0] * n, [False] * n
    stack, out, counter = [], [], 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            w = next(it, None)
            if w is not None:
                if index[w] is None:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ[w])))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


@dataclass(frozen=True)
class GraphVerdict:
    ok: bool
    witness: tuple = ()  # node indices: (peak, end1, end2)


def confluence_oracle(g: ReductionGraph, rels: str = None) -> GraphVerdict:
    """Every peak of ``g`` joins inside ``g``.

    On a finite graph this holds iff every node reaches exactly one bottom
    strongly connected component, which is what is computed here.
    """
    if g.truncated:
        raise TruncatedGraph("graph was truncated; confluence verdict withheld")
    n = len(g.nodes)
    succ = g.succ(rels)
    comps = _sccs(n, succ)
    comp_of = [0] * n
    for c, members in enumerate(comps):
        for v in members:
            comp_of[v] = c
    bottoms = [0] * len(comps)  # bitset of bottom SCCs reachable
    for c, members in enumerate(comps):  # reverse topological: successors first
        outs = {comp_of[w] for v in members for w in succ[v]} - {c}
        if not outs:
            bottoms[c] = 1 << c
        else:
            acc = 0
            for d in outs:
                acc |= bottoms[d]
            bottoms[c] = acc
    for c, members in enumerate(comps):
        if bottoms[c] & (bottoms[c] - 1):
            ends = [i for i in range(len(comps)) if bottoms[c] >> i & 1][:2]
            return GraphVerdict(False, (members[0], comps[ends[0]][0], comps[ends[1]][0]))
    return GraphVerdict(True)


def export_ars(g: ReductionGraph):
    """The graph as a two-relation ARS plus the set of its type nodes."""
    if g.truncated:
        raise TruncatedGraph("cannot export a truncated graph")
    a = {(s, d) for s, d, tag, _ in g.edges if tag.relation == "a"}
    b = {(s, d) for s, d, tag, _ in g.edges if tag.relation != "a"}
    types = {i for i, m in enumerate(g.nodes) if is_type(m)}
    return ars.FiniteARS.build(range(len(g.nodes)), a, b), types


# -- reports ----------------------------------------------------------------

@dataclass
class Report:
    name: str
    checked: int = 0
    violations: list = field(default_factory=list)
    truncated: int = 0
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.truncated

    def violate(self, what, limit=50):
        if len(self.violations) < limit:
            self.violations.append(what)
        else:
            self.notes["more_violations"] = self.notes.get("more_violations", 0) + 1

    def as_dict(self) -> dict:
        d = {"name": self.name, "checked": self.checked,
             "violations": self.violations, "truncated": self.truncated}
        d.update(self.notes)
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), **kw)

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = "".join(f", {k}={v}" for k, v in self.notes.items())
        return (f"{status} {self.name}: checked={self.checked} "
                f"violations={len(self.violations)} truncated={self.truncated}{extra}")


def typable_corpus(terms):
    """``(term, type)`` for the typable members of ``terms``."""
    for t in terms:
        ty = typable(t)
        if ty is not None:
            yield t, ty


# -- oracles ----------------------------------------------------------------

def correspondence_oracle(terms) -> Report:
    rep = Report("correspondence")
    typed = 0
    for t in terms:
        rep.checked += 1
        std, abst = infer((), t), typable(t)
        if std != abst:
            rep.violate({"term": show(t), "infer": str(std), "typable": str(abst)})
        typed += std is not None
    rep.notes["typable"] = typed
    return rep


def measure_oracle(terms) -> Report:
    """The measure drops on every one-step a-reduct and along the a-normalization."""
    rep = Report("measure")
    for t in terms:
        while True:
            here = mu(t)
            steps = one_steps(t, "a")
            for occ, n in steps:
                rep.checked += 1
                if mu(n) >= here:
                    rep.violate({"term": show(t), "step": str(occ)})
            if not steps:
                break
            t = steps[0][1]
    return rep


def graph_measure_check(g: ReductionGraph, rep: Report) -> None:
    for s, d, tag, pos in g.edges:
        if tag.relation == "a":
            rep.checked += 1
            if mu(g.nodes[d]) >= mu(g.nodes[s]):
                rep.violate({"term": show(g.nodes[s]), "step": f"{tag}@{list(pos)}"})


def graph_diamond_check(g: ReductionGraph, rep: Report) -> None:
    """Every two distinct a-successors join in at most one a-step each."""
    asucc = g.succ("a")
    for i, outs in enumerate(asucc):
        outs = sorted(outs)
        for x in range(len(outs)):
            for y in range(x + 1, len(outs)):
                u, v = outs[x], outs[y]
                rep.checked += 1
                if not (({u} | asucc[u]) & ({v} | asucc[v])):
                    rep.violate({"peak": show(g.nodes[i]), "left": show(g.nodes[u]),
                                 "right": show(g.nodes[v])})


def a_closure(m: Term, cap: int = 100_000) -> dict:
    """All a-reducts of ``m`` keyed by alpha key (a terminates, so this is finite)."""
    out = {alpha_key(m): m}
    todo = [m]
    while todo:
        t = todo.pop()
        for _, n in one_steps(t, "a"):
            k = alpha_key(n)
            if k not in out:
                if len(out) >= cap:
                    raise TruncatedGraph("a-closure exceeded its cap")
                out[k] = n
                todo.append(n)
    return out


def preservation_oracle(terms, rel: str = "b") -> Report:
    """Concrete steps from typable terms keep the type."""
    if rel not in ("b", "c"):
        raise ValueError("preservation is checked for b or c steps")
    rep = Report(f"preservation-{rel}")
    for t, ty in typable_corpus(terms):
        for occ, n in one_steps(t, rel):
            rep.checked += 1
            got = typable(n)
            if got != ty:
                rep.violate({"term": show(t), "step": str(occ), "reduct": show(n),
                             "expected": str(ty), "got": str(got)})
    return rep


def _is_cbv(m, occ):
    cbv_tag = {RuleTag.b_beta: RuleTag.c_beta, RuleTag.b_fbeta: RuleTag.c_fbeta}[occ.tag]
    return any(o.position == occ.position and o.tag is cbv_tag for o in redexes(m, "c"))


def peak_completion_oracle(terms) -> Report:
    """Every (a, b)-peak at a typable term closes as the peak lemma says.

    Closing means some ``m3`` with ``m2 ->a* m3`` and ``m1 ->a* m3`` or
    ``m1 ->b m3``; when the b-step was call-by-value and the join needs
    the single b-step, that step must be call-by-value too.
    """
    rep = Report("peak-completion")
    for m0, _ in typable_corpus(terms):
        a_steps = one_steps(m0, "a")
        b_steps = one_steps(m0, "b")
        if not a_steps or not b_steps:
            continue
        for occ_b, m2 in b_steps:
            target = a_closure(m2)
            cbv = _is_cbv(m0, occ_b)
            for occ_a, m1 in a_steps:
                rep.checked += 1
                if any(k in target for k in a_closure(m1)):
                    continue
                joining = one_steps(m1, "c" if cbv else "b")
                if any(alpha_key(n) in target for _, n in joining):
                    continue
                rep.violate({"peak": show(m0), "a": str(occ_a), "b": str(occ_b),
                             "cbv": cbv})
    return rep


def combined_confluence_oracle(terms, node_cap: int = 5_000, graph_checks=None) -> Report:
    """Typable terms are confluent under ba; optional per-graph extra checks."""
    rep = Report("confluence-ba")
    for t, _ in typable_corpus(terms):
        g = build_graph(t, "ba", node_cap)
        if g.truncated:
            rep.truncated += 1
            continue
        rep.checked += 1
        verdict = confluence_oracle(g)
        if not verdict.ok:
            p, u, v = verdict.witness
            rep.violate({"term": show(t), "peak": show(g.nodes[p]),
                         "ends": [show(g.nodes[u]), show(g.nodes[v])]})
        for check in graph_checks or ():
            check(g)
    return rep


def progress_oracle(terms) -> Report:
    rep = Report("progress")
    for t, _ in typable_corpus(terms):
        rep.checked += 1
        if not safety.progress_check(t).ok:
            rep.violate({"term": show(t)})
    return rep


def safety_oracle(terms, fuel: int = DEFAULT_FUEL) -> Report:
    rep = Report("type-safety")
    exhausted = 0
    for t, _ in typable_corpus(terms):
        rep.checked += 1
        out = safety.type_safety_run(t, fuel)
        if out.kind == "stuck":
            rep.violate({"term": show(t), "stuck": show(out.term)})
        exhausted += out.kind == "fuel-exhausted"
    rep.notes["fuel_exhausted"] = exhausted
    return rep


def quasi_stuck_oracle(terms, lemmas=("i", "ii", "iii")) -> Report:
    """The quasi-stuck lemmas over ``terms`` and everything they a-reduce to.

    ``"i"``: quasi-stuck terms have no c-redex; ``"ii"``: closed c-normal
    standard terms are quasi-stuck; ``"iii"``: quasi-stuck terms stay
    quasi-stuck under a-steps, and a-steps neither create nor destroy values.
    (i) and (iii) range over the a-closure of every corpus term.
    """
    rep = Report("quasi-stuck")
    counts = {"no_c_redex": 0, "c_normal_closed": 0, "a_closure": 0}
    closure = "i" in lemmas or "iii" in lemmas
    for t in terms:
        if "ii" in lemmas and is_standard(t) and is_closed(t) and not redexes(t, "c"):
            counts["c_normal_closed"] += 1
            if not safety.is_quasi_stuck(t):
                rep.violate({"lemma": "closed c-normal standard is quasi-stuck",
                             "term": show(t)})
        if not closure:
            continue
        for m in a_closure(t).values():
            if not safety.is_quasi_stuck(m):
                continue
            if "i" in lemmas:
                counts["no_c_redex"] += 1
                if redexes(m, "c"):
                    rep.violate({"lemma": "quasi-stuck has no c-redex", "term": show(m)})
            if "iii" in lemmas:
                for _, n in one_steps(m, "a"):
                    counts["a_closure"] += 1
                    if not safety.is_quasi_stuck(n):
                        rep.violate({"lemma": "closed under a", "term": show(m),
                                     "reduct": show(n)})
                    elif is_mixed_value(m) != is_mixed_value(n):
                        rep.violate({"lemma": "value-ness preserved", "term": show(m),
                                     "reduct": show(n)})
    wanted = {"no_c_redex": "i", "c_normal_closed": "ii", "a_closure": "iii"}
    rep.checked = sum(counts.values())
    rep.notes.update({k: v for k, v in counts.items() if wanted[k] in lemmas})
    return rep


def weak_normalization_oracle(terms, fuel: int = DEFAULT_FUEL) -> Report:
    """Typable terms reach a b-normal form by leftmost reduction within ``fuel``."""
    rep = Report("weak-normalization")
    for t, _ in typable_corpus(terms):
        rep.checked += 1
        tr = run(t, "b", fuel=fuel)
        if tr.exhausted:
            rep.violate({"term": show(t), "fuel": fuel})
    return rep


def generic_preservation_oracle(terms, node_cap: int = 5_000) -> Report:
    """Exported ba-graphs of typable terms meet the generic preservation hypotheses."""
    rep = Report("generic-preservation")
    for t, _ in typable_corpus(terms):
        g = build_graph(t, "ba", node_cap)
        if g.truncated:
            rep.truncated += 1
            continue
        rep.checked += 1
        sys_, types = export_ars(g)
        report = ars.check_preservation_conditions(sys_, types)
        if not (report.hypotheses_hold and report.conclusion):
            rep.violate({"term": show(t), "report": report.as_dict()})
    return rep


# -- generalized typing -----------------------------------------------------

def generalized_preservation_oracle(terms, fuel: int = 50, node_cap: int = 2_000) -> Report:
    """c-steps keep generalized typable terms at the type first found.

    Terms for which the bounded search finds no type are skipped and counted
    under ``not_found``; bound exhaustion after a c-step counts as truncation.
    """
    from .generalized import generalized_preservation_check

    rep = Report("generalized-preservation")
    skipped = 0
    for t in terms:
        res = generalized_preservation_check(t, fuel, node_cap)
        if res.status == "precondition":
            skipped += 1
        elif res.status == "bound-exhausted":
            rep.truncated += 1
        else:
            rep.checked += 1
            if not res.ok:
                rep.violate({"term": show(t), "detail": res.detail})
    rep.notes["not_found"] = skipped
    return rep


# -- the first-order S/K language -------------------------------------------

def _fo_type(ty):
    from . import trs

    if isinstance(ty, Arrow):
        return trs.arrow(_fo_type(ty.dom), _fo_type(ty.cod))
    return trs.A


def sk_atoms(type_depth: int = 1) -> list:
    """S and K instances with type indices up to ``type_depth``, plus those types."""
    from . import trs

    tys = [_fo_type(t) for t in enum_types(type_depth)]
    out = [trs.S(*ix) for ix in product(tys, repeat=3)]
    out += [trs.K(*ix) for ix in product(tys, repeat=2)]
    return out + tys


def enum_sk_terms(max_size: int, type_depth: int = 1):
    """Applicative terms over :func:`sk_atoms`; size counts atoms and applications."""
    from . import trs

    atoms = sk_atoms(type_depth)
    by_size = {1: atoms}
    for n in range(3, max_size + 1, 2):
        by_size[n] = [trs.app(f, x)
                      for i in range(1, n - 1, 2)
                      for f, x in product(by_size[i], by_size[n - 1 - i])]
    for n in sorted(by_size):
        yield from by_size[n]


def uniform_preservation_oracle(terms, fuel: int = DEFAULT_FUEL) -> Report:
    """c-steps of typable S/K terms keep their abstract normal form."""
    from . import trs

    rep = Report("uniform-preservation")
    untypable = stepping = 0
    for t in terms:
        verdict = trs.uniform_preservation_check(t, fuel)
        if verdict == "precondition":
            untypable += 1
            continue
        rep.checked += 1
        if trs.uniform_cbv_step(t) is not None:
            stepping += 1
        if verdict != "ok":
            rep.violate({"term": str(t)})
    rep.notes["untypable"] = untypable
    rep.notes["with_c_step"] = stepping
    return rep
