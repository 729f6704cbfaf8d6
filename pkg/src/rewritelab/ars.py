"""Finite abstract reduction systems with two labelled relations.

A :class:`FiniteARS` holds a node set and two edge sets, ``a`` and ``b``.
Everything here decides properties by brute force over the explicit
graph, which is fine for the handful of nodes these systems have.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product


class UnknownNode(KeyError):
    pass


class ARSFormatError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteARS:
    nodes: frozenset
    a: frozenset = frozenset()
    b: frozenset = frozenset()

    def __post_init__(self):
        for src, dst in self.a | self.b:
            if src not in self.nodes or dst not in self.nodes:
                raise UnknownNode(f"edge {src}->{dst} leaves the node set")

    @classmethod
    def build(cls, nodes, a=(), b=()):
        return cls(frozenset(nodes), frozenset(a), frozenset(b))

    def edges(self, rel: str) -> frozenset:
        if rel == "a":
            return self.a
        if rel == "b":
            return self.b
        if rel in ("ab", "ba"):
            return self.a | self.b
        raise ValueError(f"unknown relation {rel!r}")

    def succ(self, rel: str) -> dict:
        out = {n: set() for n in self.nodes}
        for src, dst in self.edges(rel):
            out[src].add(dst)
        return out


def _reach_all(succ, start):
    seen = {start}
    todo = deque([start])
    while todo:
        n = todo.popleft()
        for m in succ[n]:
            if m not in seen:
                seen.add(m)
                todo.append(m)
    return seen


def reach(g: FiniteARS, rel: str, start) -> set:
    """Image of ``start`` under the reflexive-transitive closure of ``rel``."""
    if start not in g.nodes:
        raise UnknownNode(start)
    return _reach_all(g.succ(rel), start)


def closure(g: FiniteARS, rel: str) -> dict:
    succ = g.succ(rel)
    return {n: _reach_all(succ, n) for n in g.nodes}


def normal_forms(g: FiniteARS, rel: str) -> set:
    succ = g.succ(rel)
    return {n for n in g.nodes if not succ[n]}


def is_terminating(g: FiniteARS, rel: str) -> bool:
    # on a finite set: terminating iff the relation has no cycle
    succ = g.succ(rel)
    state = {}

    def acyclic_from(n):
        stack = [(n, iter(succ[n]))]
        state[n] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state.get(nxt) == 1:
                return False
            elif nxt not in state:
                state[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
        return True

    return all(acyclic_from(n) for n in g.nodes if n not in state)


def is_deterministic(g: FiniteARS, rel: str) -> bool:
    return all(len(s) <= 1 for s in g.succ(rel).values())


def _peaks(succ):
    for n, outs in succ.items():
        for u, v in product(outs, repeat=2):
            yield u, v


def has_diamond(g: FiniteARS, rel: str) -> bool:
    succ = g.succ(rel)
    for u, v in _peaks(succ):
        if not (({u} | succ[u]) & ({v} | succ[v])):
            return False
    return True


def is_locally_confluent(g: FiniteARS, rel: str) -> bool:
    succ = g.succ(rel)
    star = closure(g, rel)
    return all(star[u] & star[v] for u, v in _peaks(succ))


def is_confluent(g: FiniteARS, rel: str) -> bool:
    star = closure(g, rel)
    for t in g.nodes:
        for u, v in product(star[t], repeat=2):
            if not star[u] & star[v]:
                return False
    return True


def confluence_witness(g: FiniteARS, rel: str):
    """A peak ``(t, u, v)`` with no common reduct, or None."""
    star = closure(g, rel)
    for t in sorted(g.nodes, key=str):
        for u, v in product(sorted(star[t], key=str), repeat=2):
            if not star[u] & star[v]:
                return t, u, v
    return None


# -- conditions of the generic preservation / confluence theorems ----------

def _cond3(g, sources, strong=False):
    """Peaks ``m1 <-a m ->b m2`` with ``m`` in ``sources`` close as required.

    Weak form: some ``w`` with ``m2 ->a* w`` and ``m1 (->b | ->a*) w``.
    Strong form: some ``w`` with ``m2 ->a= w`` and ``m1 ->ba w``.
    """
    sa, sb = g.succ("a"), g.succ("b")
    astar = closure(g, "a")
    for m in sources:
        for m1, m2 in product(sa[m], sb[m]):
            if strong:
                left = sa[m1] | sb[m1]
                right = {m2} | sa[m2]
            else:
                left = sb[m1] | astar[m1]
                right = astar[m2]
            if not left & right:
                return False
    return True


def _cond4(g):
    sb = g.succ("b")
    return all(not sb[n] for n in normal_forms(g, "a"))


@dataclass
class ConditionReport:
    conditions: dict
    conclusion: bool
    extras: dict = field(default_factory=dict)

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.conditions.values())

    def as_dict(self) -> dict:
        return {"conditions": dict(self.conditions), "conclusion": self.conclusion,
                **self.extras}

    def lines(self) -> list:
        out = [f"  ({k}) {v}" for k, v in self.conditions.items()]
        out.append(f"  conclusion: {self.conclusion}")
        out += [f"  {k}: {v}" for k, v in self.extras.items()]
        return out


def check_preservation_conditions(g: FiniteARS, targets) -> ConditionReport:
    """Hypotheses of the generic preservation theorem for target set ``targets``.

    The conclusion (``T <-a* m ->b m'`` implies ``m' ->a* T``) is checked
    independently by brute force.
    """
    targets = set(targets)
    if not targets <= g.nodes:
        raise UnknownNode("targets must be nodes")
    sa, sb = g.succ("a"), g.succ("b")
    astar = closure(g, "a")
    into_targets = {m for m in g.nodes if astar[m] & targets}
    conds = {
        "1": all(not sa[t] for t in targets),
        "2": is_confluent(g, "a"),
        "3": _cond3(g, into_targets),
        "4": _cond4(g),
    }
    conclusion = all(
        t in astar[m2]
        for m in g.nodes for t in astar[m] & targets for m2 in sb[m]
    )
    return ConditionReport(conds, conclusion)


def check_confluence_conditions(g: FiniteARS) -> ConditionReport:
    """Hypotheses of the generic combined-confluence theorem, plus CR of the union."""
    conds = {
        "1": is_terminating(g, "a"),
        "2": is_confluent(g, "a"),
        "3": _cond3(g, g.nodes),
        "4": _cond4(g),
    }
    union_cr = is_confluent(g, "ab")
    extras = {"3-strong": _cond3(g, g.nodes, strong=True)}
    if all(conds.values()):
        extras["implication"] = "witnessed" if union_cr else "VIOLATED"
    else:
        extras["implication"] = "hypotheses fail; union " + (
            "confluent anyway" if union_cr else "not confluent")
    return ConditionReport(conds, union_cr, extras)


# -- built-in examples ------------------------------------------------------

def example_3() -> FiniteARS:
    """Termination of ``a`` cannot be dropped from the combined-confluence theorem."""
    return FiniteARS.build({1, 2, 3}, a={(1, 1)}, b={(1, 2), (1, 3)})


_EX10_A = {(5, 8), (6, 7), (7, 4), (8, 1), (9, 4), (10, 1)}
_EX10_B = {(1, 2), (1, 7), (10, 2), (5, 10), (7, 5), (4, 3), (4, 8), (8, 6), (9, 3), (6, 9)}


def example_10() -> FiniteARS:
    """The normal-form condition cannot be dropped either, even with ``b`` convergent."""
    g = FiniteARS.build(range(1, 11), a=_EX10_A, b=_EX10_B)
    problems = validate_example_10(g)
    if problems:
        raise AssertionError("10-node example does not have its stated properties: "
                             + ", ".join(problems))
    return g


def validate_example_10(g: FiniteARS) -> list:
    expect = {
        "a deterministic": is_deterministic(g, "a"),
        "a terminating": is_terminating(g, "a"),
        "b terminating": is_terminating(g, "b"),
        "a confluent": is_confluent(g, "a"),
        "b confluent": is_confluent(g, "b"),
        "strong condition 3": _cond3(g, g.nodes, strong=True),
        "condition 4 fails": not _cond4(g),
        "union not confluent": not is_confluent(g, "ab"),
        "two convertible normal forms": len(common_normal_forms(g)) == 2,
    }
    return [k for k, ok in expect.items() if not ok]


def common_normal_forms(g: FiniteARS) -> set:
    """The largest set of ab-normal forms reachable from one common node."""
    nfs = normal_forms(g, "ab")
    star = closure(g, "ab")
    best = set()
    for n in g.nodes:
        here = star[n] & nfs
        if len(here) > len(best):
            best = here
    return best


# -- text format and DOT ----------------------------------------------------

def parse_ars(text: str) -> FiniteARS:
    """Lines ``node <id>``, ``a <src> <dst>``, ``b <src> <dst>``; ``#`` comments."""
    nodes, a, b = set(), set(), set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "node" and len(parts) == 2:
            nodes.add(_node_id(parts[1]))
        elif parts[0] in ("a", "b") and len(parts) == 3:
            edge = (_node_id(parts[1]), _node_id(parts[2]))
            (a if parts[0] == "a" else b).add(edge)
        else:
            raise ARSFormatError(f"line {lineno}: cannot parse {raw!r}")
    try:
        return FiniteARS.build(nodes, a, b)
    except UnknownNode as exc:
        raise ARSFormatError(str(exc)) from None


def _node_id(tok):
    return int(tok) if tok.lstrip("-").isdigit() else tok


def format_ars(g: FiniteARS) -> str:
    lines = [f"node {n}" for n in sorted(g.nodes, key=str)]
    lines += [f"a {s} {d}" for s, d in sorted(g.a, key=str)]
    lines += [f"b {s} {d}" for s, d in sorted(g.b, key=str)]
    return "\n".join(lines) + "\n"


def to_dot(g: FiniteARS, name: str = "ars") -> str:
    """a-edges dashed, b-edges solid."""
    lines = [f"digraph {name} {{"]
    lines += [f'  "{n}";' for n in sorted(g.nodes, key=str)]
    lines += [f'  "{s}" -> "{d}" [style=dashed];' for s, d in sorted(g.a, key=str)]
    lines += [f'  "{s}" -> "{d}";' for s, d in sorted(g.b, key=str)]
    lines.append("}")
    return "\n".join(lines) + "\n"


# names used by the interface description
check_thm51_conditions = check_preservation_conditions
check_thm53_conditions = check_confluence_conditions
