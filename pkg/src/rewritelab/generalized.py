"""Generalized typability: reaching a type by mixing c- and a-steps.

The union relation is not terminating, so every search here is bounded by
a depth (``fuel``) and a cap on distinct terms visited.  A negative answer
is only definitive when ``complete`` is set, i.e. the whole reachable
graph fit inside the bounds.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .kernel import Term, Type, alpha_key, as_type, embed_type, arrow, BASE
from .reduction import Trace, one_steps, redexes, step
from .syntax import parse_term

DEFAULT_DEPTH = 200
DEFAULT_NODE_CAP = 50_000


@dataclass
class SearchResult:
    type: Type | None
    trace: Trace | None
    explored: int
    complete: bool

    @property
    def found(self) -> bool:
        return self.type is not None


def _bfs(m, depth, node_cap, stop):
    """Breadth-first over ca-successors; ``stop(term)`` ends the search.

    Returns ``(hit_key, parents, complete)`` where ``parents`` maps each
    alpha key to ``(parent_key, occurrence, term)``.
    """
    k0 = alpha_key(m)
    parents = {k0: (None, None, m)}
    if stop(m):
        return k0, parents, True
    frontier = deque([(k0, m, 0)])
    complete = True
    while frontier:
        key, t, d = frontier.popleft()
        if d >= depth:
            if redexes(t, "ca"):
                complete = False
            continue
        for occ, n in one_steps(t, "ca"):
            nk = alpha_key(n)
            if nk in parents:
                continue
            if len(parents) >= node_cap:
                complete = False
                continue
            parents[nk] = (key, occ, n)
            if stop(n):
                return nk, parents, complete
            frontier.append((nk, n, d + 1))
    return None, parents, complete


def _trace_to(key, parents):
    steps = []
    while True:
        parent, occ, term = parents[key]
        if parent is None:
            steps.reverse()
            return Trace(term, steps, normal=not redexes(steps[-1][1] if steps else term, "ca"))
        steps.append((occ, term))
        key = parent


def generalized_typable(m: Term, fuel: int = DEFAULT_DEPTH,
                        node_cap: int = DEFAULT_NODE_CAP) -> SearchResult:
    """Search for a ca-reduction from ``m`` to a type (shortest first)."""
    hit, parents, complete = _bfs(m, fuel, node_cap, lambda t: as_type(t) is not None)
    if hit is None:
        return SearchResult(None, None, len(parents), complete)
    trace = _trace_to(hit, parents)
    return SearchResult(as_type(trace.final), trace, len(parents), complete)


def reaches_type(m: Term, ty: Type, fuel: int = DEFAULT_DEPTH,
                 node_cap: int = DEFAULT_NODE_CAP):
    """True/False if decided within bounds, None if the bounds ran out."""
    goal = alpha_key(embed_type(ty))
    hit, parents, complete = _bfs(m, fuel, node_cap, lambda t: alpha_key(t) == goal)
    if hit is not None:
        return True
    return False if complete else None


def reachable_types(m: Term, fuel: int = DEFAULT_DEPTH,
                    node_cap: int = DEFAULT_NODE_CAP):
    """All types in the bounded ca-graph of ``m`` and whether it is complete."""
    _, parents, complete = _bfs(m, fuel, node_cap, lambda t: False)
    tys = {as_type(t) for _, _, t in parents.values()}
    tys.discard(None)
    return tys, complete


@dataclass(frozen=True)
class Check:
    status: str  # "ok", "violation", "bound-exhausted" or "precondition"
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def generalized_preservation_check(m: Term, fuel: int = DEFAULT_DEPTH,
                                   node_cap: int = DEFAULT_NODE_CAP) -> Check:
    """Every c-successor of a generalized typable term reaches the same type."""
    res = generalized_typable(m, fuel, node_cap)
    if not res.found:
        return Check("precondition", "no type found within bounds")
    for occ in redexes(m, "c"):
        reduct = step(m, occ)
        got = reaches_type(reduct, res.type, fuel, node_cap)
        if got is None:
            return Check("bound-exhausted", f"after {occ}")
        if not got:
            return Check("violation", f"after {occ} the type is unreachable")
    return Check("ok")


def replay(trace: Trace) -> Term:
    """Re-apply a trace's occurrences from its start term."""
    t = trace.start
    for occ, _ in trace.steps:
        t = step(t, occ)
    return t


def ca_confluence_witness():
    """A generalized typable term with a type and a stuck term as ca-outcomes."""
    term = parse_term(r"(\x:A. \y:A. y) (\x:A. x x)")
    typed = embed_type(arrow(BASE, BASE))
    stuck = parse_term("(A -> A -> A) (A => A A)")
    return term, typed, stuck
