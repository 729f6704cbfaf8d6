"""One-step reduction over mixed terms.

Three relations share one redex finder:

* ``c``: call-by-value beta and ``f a -> a``, only in evaluation contexts
  ``E ::= * | E m | u E`` (``u`` a mixed value);
* ``b``: full beta and ``f a -> a`` anywhere;
* ``a``: abstract reduction, rewriting terms toward their types, anywhere.

Positions are tuples of child indices: for an application 0 is the
function and 1 the argument, for ``\\x:T. m`` the body is 0, and for
``T => m`` the body is 1 (0 would be the domain, which is a type and
never holds a redex).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

from .kernel import (
    BASE, CA, TA, App, Arrow, ArrowAbs, ConstA, ConstF, Lam, Term, TyBase,
    Type, Var, alpha_key, as_type, embed_type, is_mixed_value, subst,
)
from .syntax import show

DEFAULT_FUEL = 10_000

Position = tuple


class RuleTag(str, enum.Enum):
    c_fbeta = "c_fbeta"
    c_beta = "c_beta"
    b_fbeta = "b_fbeta"
    b_beta = "b_beta"
    a_beta = "a_beta"
    a_lambda = "a_lambda"
    a_f = "a_f"
    a_a = "a_a"

    @property
    def relation(self) -> str:
        return self.value[0]

    def __str__(self):
        return self.value


RELATIONS = ("a", "b", "c", "ca", "ba")
_F_TYPE = embed_type(Arrow(BASE, BASE))


class InvalidOccurrence(ValueError):
    pass


@dataclass(frozen=True)
class RedexOccurrence:
    position: Position
    tag: RuleTag

    def __str__(self):
        return f"{self.tag}@{list(self.position)}"


def _check_rel(rel):
    if rel not in RELATIONS:
        raise ValueError(f"unknown relation {rel!r}; expected one of {RELATIONS}")


def _tags_here(m, rel, in_ec):
    """Rule tags whose left-hand side matches ``m`` itself."""
    tags = []
    if isinstance(m, App):
        fun, arg = m.fun, m.arg
        if isinstance(fun, ConstF) and isinstance(arg, ConstA):
            if in_ec and "c" in rel:
                tags.append(RuleTag.c_fbeta)
            if "b" in rel:
                tags.append(RuleTag.b_fbeta)
        elif isinstance(fun, Lam):
            if in_ec and "c" in rel and is_mixed_value(arg):
                tags.append(RuleTag.c_beta)
            if "b" in rel:
                tags.append(RuleTag.b_beta)
        elif isinstance(fun, ArrowAbs) and "a" in rel:
            if as_type(arg) == fun.dom:
                tags.append(RuleTag.a_beta)
    elif "a" in rel:
        if isinstance(m, Lam):
            tags.append(RuleTag.a_lambda)
        elif isinstance(m, ConstF):
            tags.append(RuleTag.a_f)
        elif isinstance(m, ConstA):
            tags.append(RuleTag.a_a)
    return tags


def redexes(m: Term, rel: str) -> list:
    """All redex occurrences of ``m`` under ``rel``, leftmost-outermost."""
    _check_rel(rel)
    out = []
    anywhere = "a" in rel or "b" in rel

    def visit(t, pos, in_ec):
        for tag in _tags_here(t, rel, in_ec):
            out.append(RedexOccurrence(pos, tag))
        if isinstance(t, App):
            visit(t.fun, pos + (0,), in_ec)
            arg_ec = in_ec and is_mixed_value(t.fun)
            if anywhere or arg_ec:
                visit(t.arg, pos + (1,), arg_ec)
        elif anywhere:
            if isinstance(t, Lam):
                visit(t.body, pos + (0,), False)
            elif isinstance(t, ArrowAbs):
                visit(t.body, pos + (1,), False)

    visit(m, (), True)
    return out


def subterm(m: Term, pos: Position) -> Term:
    for i in pos:
        if isinstance(m, App):
            m = m.fun if i == 0 else m.arg
        elif isinstance(m, Lam) and i == 0:
            m = m.body
        elif isinstance(m, ArrowAbs) and i == 1:
            m = m.body
        else:
            raise InvalidOccurrence(f"no position {list(pos)}")
    return m


def replace_at(m: Term, pos: Position, new: Term) -> Term:
    if not pos:
        return new
    i, rest = pos[0], pos[1:]
    if isinstance(m, App):
        if i == 0:
            return App(replace_at(m.fun, rest, new), m.arg)
        return App(m.fun, replace_at(m.arg, rest, new))
    if isinstance(m, Lam):
        return Lam(m.ann, m.var, replace_at(m.body, rest, new))
    return ArrowAbs(m.dom, replace_at(m.body, rest, new))


def contract(r: Term, tag: RuleTag) -> Term:
    """Contractum of redex ``r`` (assumed to match ``tag``)."""
    if tag in (RuleTag.c_fbeta, RuleTag.b_fbeta):
        return CA
    if tag in (RuleTag.c_beta, RuleTag.b_beta):
        lam = r.fun
        return subst(lam.body, lam.var, r.arg)
    if tag is RuleTag.a_beta:
        return r.fun.body
    if tag is RuleTag.a_lambda:
        return ArrowAbs(r.ann, subst(r.body, r.var, embed_type(r.ann)))
    if tag is RuleTag.a_f:
        return _F_TYPE
    return TA


def is_valid(m: Term, occ: RedexOccurrence) -> bool:
    rel = occ.tag.relation
    in_ec = True
    t = m
    try:
        for i in occ.position:
            if isinstance(t, App) and i == 1:
                in_ec = in_ec and is_mixed_value(t.fun)
            elif not isinstance(t, App):
                in_ec = False
            t = subterm(t, (i,))
    except InvalidOccurrence:
        return False
    if rel == "c" and not in_ec:
        return False
    return occ.tag in _tags_here(t, rel, in_ec)


def step(m: Term, occ: RedexOccurrence) -> Term:
    if not is_valid(m, occ):
        raise InvalidOccurrence(f"{occ} is not a redex of {show(m)}")
    return replace_at(m, occ.position, contract(subterm(m, occ.position), occ.tag))


def one_steps(m: Term, rel: str) -> list:
    """Every (occurrence, reduct) pair, without deduplication."""
    out = []
    for occ in redexes(m, rel):
        r = subterm(m, occ.position)
        out.append((occ, replace_at(m, occ.position, contract(r, occ.tag))))
    return out


def successors(m: Term, rel: str) -> list:
    """One-step reducts of ``m``, deduplicated up to alpha-equivalence."""
    seen, out = set(), []
    for _, n in one_steps(m, rel):
        k = alpha_key(n)
        if k not in seen:
            seen.add(k)
            out.append(n)
    return out


def mu(m: Term) -> int:
    """Termination measure for abstract reduction."""
    if isinstance(m, (Var, ConstA, ConstF)):
        return 1
    if isinstance(m, TyBase):
        return 0
    if isinstance(m, Lam):
        return 1 + mu(m.body)
    if isinstance(m, App):
        return 1 + mu(m.fun) + mu(m.arg)
    return mu(m.body)


def first_a_redex(m: Term, pos: Position = ()):
    """Leftmost-outermost a-redex as ``(position, tag)``, or None."""
    if isinstance(m, App):
        if isinstance(m.fun, ArrowAbs) and as_type(m.arg) == m.fun.dom:
            return pos, RuleTag.a_beta
        return first_a_redex(m.fun, pos + (0,)) or first_a_redex(m.arg, pos + (1,))
    if isinstance(m, Lam):
        return pos, RuleTag.a_lambda
    if isinstance(m, ArrowAbs):
        return first_a_redex(m.body, pos + (1,))
    if isinstance(m, ConstF):
        return pos, RuleTag.a_f
    if isinstance(m, ConstA):
        return pos, RuleTag.a_a
    return None


def normalize_a(m: Term) -> Term:
    """The a-normal form of ``m`` (leftmost-outermost; always terminates)."""
    measure = mu(m)
    while True:
        found = first_a_redex(m)
        if found is None:
            return m
        pos, tag = found
        m = replace_at(m, pos, contract(subterm(m, pos), tag))
        nxt = mu(m)
        if nxt >= measure:
            raise AssertionError(f"measure did not decrease at {show(m)}")
        measure = nxt


def typable(m: Term) -> Type | None:
    return as_type(normalize_a(m))


@dataclass
class Trace:
    start: Term
    steps: list = field(default_factory=list)  # [(RedexOccurrence, Term)]
    normal: bool = False
    exhausted: bool = False

    @property
    def final(self) -> Term:
        return self.steps[-1][1] if self.steps else self.start

    def __len__(self):
        return len(self.steps)

    def to_list(self) -> list:
        return [
            {"rule": str(occ.tag), "position": list(occ.position), "term": show(t)}
            for occ, t in self.steps
        ]

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_list(), **kw)

    def lines(self) -> list:
        out = [show(self.start)]
        for occ, t in self.steps:
            out.append(f"  -> [{occ}] {show(t)}")
        if self.exhausted:
            out.append("  (fuel exhausted)")
        return out


def run(m: Term, rel: str, strategy: str = "leftmost", fuel: int = DEFAULT_FUEL,
        occurrences=None) -> Trace:
    """Reduce ``m`` by ``rel``.

    ``strategy="leftmost"`` repeatedly contracts the first redex;
    ``strategy="given-trace"`` replays ``occurrences`` in order.
    """
    _check_rel(rel)
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    trace = Trace(m)
    if strategy == "given-trace":
        for occ in occurrences or ():
            if len(trace.steps) >= fuel:
                trace.exhausted = True
                return trace
            if occ.tag.relation not in rel:
                raise InvalidOccurrence(f"{occ.tag} is not a {rel}-rule")
            m = step(m, occ)
            trace.steps.append((occ, m))
        trace.normal = not redexes(m, rel)
        return trace
    if strategy != "leftmost":
        raise ValueError(f"unknown strategy {strategy!r}")
    while True:
        occs = redexes(m, rel)
        if not occs:
            trace.normal = True
            return trace
        if len(trace.steps) >= fuel:
            trace.exhausted = True
            return trace
        occ = occs[0]
        m = replace_at(m, occ.position, contract(subterm(m, occ.position), occ.tag))
        trace.steps.append((occ, m))
