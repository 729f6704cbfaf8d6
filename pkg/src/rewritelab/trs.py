"""First-order term rewriting: matching, unification, critical pairs, LPO.

Also hosts the combinatory (S/K) language whose abstract reduction is a
plain first-order TRS, together with its call-by-value concrete step.

TRS files use the block syntax::

    (VAR x y)
    (RULES
      f(x, g(y)) -> h(y)
      c -> d
    )

Identifiers listed under ``VAR`` are variables; every other identifier is
a function symbol (``c`` and ``c()`` are the same constant).
"""

from __future__ import annotations

import itertools
import json
import re
from collections import deque
from dataclasses import dataclass, field


class TRSFormatError(ValueError):
    pass


# -- terms ------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class Fun:
    symbol: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.symbol
        return f"{self.symbol}({','.join(map(str, self.args))})"


def fn(symbol, *args):
    return Fun(symbol, tuple(args))


def variables(t) -> set:
    if isinstance(t, Var):
        return {t.name}
    out = set()
    for a in t.args:
        out |= variables(a)
    return out


def positions(t, pos=()):
    """All positions of ``t`` in preorder."""
    yield pos
    if isinstance(t, Fun):
        for i, a in enumerate(t.args):
            yield from positions(a, pos + (i,))


def subterm(t, pos):
    for i in pos:
        t = t.args[i]
    return t


def replace(t, pos, new):
    if not pos:
        return new
    i = pos[0]
    args = list(t.args)
    args[i] = replace(args[i], pos[1:], new)
    return Fun(t.symbol, tuple(args))


def apply(sigma: dict, t):
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if not t.args:
        return t
    return Fun(t.symbol, tuple(apply(sigma, a) for a in t.args))


def rename(t, suffix):
    if isinstance(t, Var):
        return Var(t.name + suffix)
    return Fun(t.symbol, tuple(rename(a, suffix) for a in t.args))


def match(pattern, subject, sigma=None):
    """One-sided matching: ``apply(result, pattern) == subject``, or None."""
    sigma = {} if sigma is None else dict(sigma)
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            bound = sigma.get(p.name)
            if bound is None:
                sigma[p.name] = s
            elif bound != s:
                return None
        elif isinstance(s, Var) or p.symbol != s.symbol or len(p.args) != len(s.args):
            return None
        else:
            stack.extend(zip(p.args, s.args))
    return sigma


def _walk(t, sigma):
    while isinstance(t, Var) and t.name in sigma:
        t = sigma[t.name]
    return t


def _occurs(name, t, sigma):
    t = _walk(t, sigma)
    if isinstance(t, Var):
        return t.name == name
    return any(_occurs(name, a, sigma) for a in t.args)


def unify(s, t):
    """Most general unifier of ``s`` and ``t`` (idempotent), or None."""
    sigma = {}
    stack = [(s, t)]
    while stack:
        x, y = stack.pop()
        x, y = _walk(x, sigma), _walk(y, sigma)
        if x == y:
            continue
        if isinstance(x, Var) or isinstance(y, Var):
            if not isinstance(x, Var):
                x, y = y, x
            if _occurs(x.name, y, sigma):
                return None
            sigma[x.name] = y
        elif x.symbol != y.symbol or len(x.args) != len(y.args):
            return None
        else:
            stack.extend(zip(x.args, y.args))
    return {k: _resolve(v, sigma) for k, v in sigma.items()}


def _resolve(t, sigma):
    t = _walk(t, sigma)
    if isinstance(t, Var) or not t.args:
        return t
    return Fun(t.symbol, tuple(_resolve(a, sigma) for a in t.args))


# -- rules and systems ------------------------------------------------------

@dataclass(frozen=True)
class Rule:
    lhs: Fun
    rhs: object

    def __post_init__(self):
        if isinstance(self.lhs, Var):
            raise TRSFormatError(f"left-hand side {self.lhs} is a variable")
        extra = variables(self.rhs) - variables(self.lhs)
        if extra:
            raise TRSFormatError(f"rule {self}: variables {sorted(extra)} not in lhs")

    def __str__(self):
        return f"{self.lhs} -> {self.rhs}"


@dataclass
class TRS:
    rules: list
    variables: tuple = ()
    signature: dict = field(default_factory=dict)

    def __post_init__(self):
        sig = dict(self.signature)
        for r in self.rules:
            for side in (r.lhs, r.rhs):
                _collect_signature(side, sig)
        self.signature = sig

    def __str__(self):
        return format_trs(self)


def _collect_signature(t, sig):
    if isinstance(t, Var):
        return
    if sig.setdefault(t.symbol, len(t.args)) != len(t.args):
        raise TRSFormatError(f"symbol {t.symbol} used with arities "
                             f"{sig[t.symbol]} and {len(t.args)}")
    for a in t.args:
        _collect_signature(a, sig)


_TOK = re.compile(r"\s*(->|[(),]|[^\s(),]+)")


def _tokens(text):
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        mo = _TOK.match(text, pos)
        out.append(mo.group(1))
        pos = mo.end()
    return out


class _TermReader:
    def __init__(self, toks, varnames):
        self.toks, self.i, self.varnames = toks, 0, set(varnames)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self):
        if self.i >= len(self.toks):
            raise TRSFormatError("unexpected end of input")
        self.i += 1
        return self.toks[self.i - 1]

    def expect(self, tok):
        got = self.next()
        if got != tok:
            raise TRSFormatError(f"expected {tok!r}, got {got!r}")

    def term(self):
        name = self.next()
        if name in ("(", ")", ",", "->"):
            raise TRSFormatError(f"expected a term, got {name!r}")
        if self.peek() != "(":
            return Var(name) if name in self.varnames else Fun(name)
        if name in self.varnames:
            raise TRSFormatError(f"variable {name} applied to arguments")
        self.next()
        args = []
        if self.peek() == ")":
            self.next()
            return Fun(name)
        while True:
            args.append(self.term())
            tok = self.next()
            if tok == ")":
                return Fun(name, tuple(args))
            if tok != ",":
                raise TRSFormatError(f"expected ',' or ')', got {tok!r}")


def parse_trs(text: str) -> TRS:
    toks = _tokens(text)
    varnames, rules = [], []
    i = 0
    while i < len(toks):
        if toks[i] != "(" or i + 1 >= len(toks):
            raise TRSFormatError(f"expected a '(BLOCK ...)', got {toks[i]!r}")
        block = toks[i + 1]
        i += 2
        if block == "VAR":
            while i < len(toks) and toks[i] != ")":
                varnames.append(toks[i])
                i += 1
            i += 1
        elif block == "RULES":
            reader = _TermReader(toks, varnames)
            reader.i = i
            while reader.peek() != ")":
                lhs = reader.term()
                reader.expect("->")
                rules.append(Rule(lhs, reader.term()))
            i = reader.i + 1
        else:
            depth = 1  # skip any other block, e.g. COMMENT or STRATEGY
            while i < len(toks) and depth:
                depth += {"(": 1, ")": -1}.get(toks[i], 0)
                i += 1
    return TRS(rules, tuple(varnames))


def parse_fo_term(text: str, varnames=()):
    reader = _TermReader(_tokens(text), varnames)
    t = reader.term()
    if reader.peek() is not None:
        raise TRSFormatError(f"trailing input at {reader.peek()!r}")
    return t


def format_trs(trs: TRS) -> str:
    lines = [f"(VAR {' '.join(trs.variables)})", "(RULES"]
    lines += [f"  {r}" for r in trs.rules]
    lines.append(")")
    return "\n".join(lines) + "\n"


# -- rewriting --------------------------------------------------------------

def rewrite_step(trs: TRS, t) -> list:
    """All one-step rewrites ``(rule_index, position, result)``."""
    out = []
    for pos in positions(t):
        sub = subterm(t, pos)
        if isinstance(sub, Var):
            continue
        for i, rule in enumerate(trs.rules):
            sigma = match(rule.lhs, sub)
            if sigma is not None:
                out.append((i, pos, replace(t, pos, apply(sigma, rule.rhs))))
    return out


def _innermost_step(rules, t):
    if isinstance(t, Var):
        return None
    for k, a in enumerate(t.args):
        r = _innermost_step(rules, a)
        if r is not None:
            args = list(t.args)
            args[k] = r
            return Fun(t.symbol, tuple(args))
    for rule in rules:
        sigma = match(rule.lhs, t)
        if sigma is not None:
            return apply(sigma, rule.rhs)
    return None


@dataclass
class Normalization:
    term: object
    steps: int
    normal: bool
    loop: list | None = None  # the recurring cycle, when one was seen

    @property
    def exhausted(self) -> bool:
        return not self.normal and self.loop is None


def fo_normalize(trs: TRS, t, fuel: int = 10_000, window: int = 1_000) -> Normalization:
    """Leftmost-innermost rewriting until normal, looping or out of fuel."""
    recent = deque([t])
    seen = {t}
    for n in range(fuel):
        nxt = _innermost_step(trs.rules, t)
        if nxt is None:
            return Normalization(t, n, True)
        if nxt in seen:
            cycle = list(recent)
            start = cycle.index(nxt)
            return Normalization(nxt, n + 1, False, cycle[start:] + [nxt])
        recent.append(nxt)
        seen.add(nxt)
        if len(recent) > window:
            seen.discard(recent.popleft())
        t = nxt
    return Normalization(t, fuel, _innermost_step(trs.rules, t) is None)


def normal_form(trs: TRS, t, fuel: int = 10_000):
    res = fo_normalize(trs, t, fuel)
    return res.term if res.normal else None


@dataclass(frozen=True)
class LoopWitness:
    rule_index: int
    terms: tuple  # t0 -> t1 -> ... -> t0

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def __str__(self):
        return " -> ".join(map(str, self.terms))


def find_loops(trs: TRS, depth: int = 4, node_cap: int = 2_000) -> list:
    """Shortest rewrite cycle back to each rule's left-hand side, if any."""
    out = []
    for i, rule in enumerate(trs.rules):
        start = rule.lhs
        parent = {start: None}
        frontier = deque([(start, 0)])
        found = None
        while frontier and found is None:
            t, d = frontier.popleft()
            if d >= depth:
                continue
            for _, _, n in rewrite_step(trs, t):
                if n == start:
                    found = t
                    break
                if n not in parent and len(parent) < node_cap:
                    parent[n] = t
                    frontier.append((n, d + 1))
        if found is not None:
            path = []
            node = found
            while node is not None:
                path.append(node)
                node = parent[node]
            path.reverse()
            out.append(LoopWitness(i, tuple(path) + (start,)))
    return out


# -- critical pairs ---------------------------------------------------------

@dataclass(frozen=True)
class CriticalPair:
    peak: object
    left: object   # reduct by the outer rule at the root
    right: object  # reduct by the inner rule at `position`
    outer: int
    inner: int
    position: tuple

    def describe(self) -> str:
        return f"rule {self.inner} at {list(self.position)} of rule {self.outer}"

    def __str__(self):
        return f"{self.left} <- {self.peak} -> {self.right}  [{self.describe()}]"


def critical_pairs(trs: TRS) -> list:
    out = []
    for i, outer in enumerate(trs.rules):
        l1, r1 = rename(outer.lhs, "_1"), rename(outer.rhs, "_1")
        for j, inner in enumerate(trs.rules):
            l2, r2 = rename(inner.lhs, "_2"), rename(inner.rhs, "_2")
            for pos in positions(l1):
                sub = subterm(l1, pos)
                if isinstance(sub, Var):
                    continue
                if not pos and j <= i:
                    continue  # root overlaps: each unordered pair once, no self-overlap
                sigma = unify(sub, l2)
                if sigma is None:
                    continue
                peak = apply(sigma, l1)
                inner_reduct = apply(sigma, replace(l1, pos, r2))
                out.append(CriticalPair(peak, apply(sigma, r1), inner_reduct, i, j, pos))
    return out


# -- lexicographic path order -----------------------------------------------

def lpo_greater(s, t, rank: dict) -> bool:
    """``s >lpo t`` under the precedence given by ``rank`` (higher is greater)."""
    if isinstance(s, Var):
        return False
    if isinstance(t, Var):
        return t.name in variables(s)
    for si in s.args:
        if si == t or lpo_greater(si, t, rank):
            return True
    f, g = rank.get(s.symbol, -1), rank.get(t.symbol, -1)
    if s.symbol != t.symbol:
        return f > g and all(lpo_greater(s, tj, rank) for tj in t.args)
    for si, ti in zip(s.args, t.args):
        if si != ti:
            return lpo_greater(si, ti, rank) and all(lpo_greater(s, tj, rank) for tj in t.args)
    return False


@dataclass
class TerminationResult:
    proved: bool
    precedence: list | None = None  # greatest symbol first

    def __str__(self):
        if not self.proved:
            return "unknown"
        return "yes (LPO, precedence " + " > ".join(self.precedence) + ")"


MAX_PRECEDENCE_SYMBOLS = 8


def lpo_terminates(trs: TRS) -> TerminationResult:
    """Search every total precedence for one orienting all rules by LPO."""
    symbols = sorted(trs.signature)
    if len(symbols) > MAX_PRECEDENCE_SYMBOLS:
        return TerminationResult(False)
    for order in itertools.permutations(symbols):
        rank = {sym: len(order) - k for k, sym in enumerate(order)}
        if all(lpo_greater(r.lhs, r.rhs, rank) for r in trs.rules):
            return TerminationResult(True, list(order))
    return TerminationResult(False)


# -- confluence -------------------------------------------------------------

@dataclass
class ConfluenceResult:
    verdict: str  # "confluent", "not-confluent" or "unknown"
    termination: TerminationResult
    pairs: list
    witness: tuple | None = None  # (peak, nf1, nf2) for not-confluent
    loops: list = field(default_factory=list)

    def as_dict(self) -> dict:
        d = {
            "termination": "yes" if self.termination.proved else "unknown",
            "precedence": self.termination.precedence,
            "critical_pairs": len(self.pairs),
            "confluence": self.verdict,
        }
        if self.witness:
            d["witness"] = [str(t) for t in self.witness]
        if self.loops:
            d["loops"] = [[str(t) for t in w.terms] for w in self.loops]
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.as_dict(), **kw)


def confluence(trs: TRS, fuel: int = 10_000) -> ConfluenceResult:
    """Newman's lemma: LPO termination plus joinable critical pairs.

    Under proven termination a critical pair whose two sides normalize to
    different terms is a term with two normal forms, so not confluent.
    Without a termination proof the answer is ``unknown``.
    """
    term = lpo_terminates(trs)
    cps = critical_pairs(trs)
    if not term.proved:
        return ConfluenceResult("unknown", term, cps, loops=find_loops(trs))
    for cp in cps:
        nl, nr = normal_form(trs, cp.left, fuel), normal_form(trs, cp.right, fuel)
        if nl is None or nr is None:
            return ConfluenceResult("unknown", term, cps)
        if nl != nr:
            return ConfluenceResult("not-confluent", term, cps, (cp.peak, nl, nr))
    return ConfluenceResult("confluent", term, cps)


# -- the S/K language and its abstract reduction ----------------------------

UNIFORM_TEXT = """\
(VAR t t1 t2 t3)
(RULES
  S(t1,t2,t3) -> kind(t1,kind(t2,kind(t3,
                 arrow(arrow(t1,arrow(t2,t3)),arrow(arrow(t1,t2),arrow(t1,t3))))))
  K(t1,t2) -> kind(t1,kind(t2,arrow(t1,arrow(t2,t1))))
  app(arrow(t1,t2),t1) -> kind(t1,t2)
  kind(arrow(t1,t2),t) -> kind(t1,kind(t2,t))
  kind(A,t) -> t
)
"""

# kind-permuting variant; variables are upper case here and the base type is `base`
EXTENDED_TEXT = """\
(VAR a b c A B C D)
(RULES
  S(A,B,C) -> kind(A,kind(B,kind(C,
              arrow(arrow(arrow(A,arrow(B,C)),arrow(A,B)),arrow(A,C)))))
  K(A,B) -> kind(A,kind(B,arrow(A,arrow(B,A))))
  app(arrow(A,b),A) -> kind(A,b)
  kind(base,a) -> a
  kind(arrow(A,B),a) -> kind(A, kind(B, a))
  kind(A,kind(A,a)) -> kind(A,a)
  kind(A,kind(B,a)) -> kind(B,kind(A,a))
  app(kind(A,b),c) -> kind(A,app(b,c))
  app(c,kind(A,b)) -> kind(A,app(c,b))
  arrow(kind(A,b),c) -> kind(A,arrow(b,c))
  arrow(c,kind(A,b)) -> kind(A,arrow(c,b))
  kind(kind(a,b),c) -> kind(a,kind(b,c))
)
"""

BUILTINS = {"uniform": UNIFORM_TEXT, "extended": EXTENDED_TEXT}


def builtin(name: str) -> TRS:
    return parse_trs(BUILTINS[name])


A = Fun("A")


def app(*ts):
    out = ts[0]
    for t in ts[1:]:
        out = Fun("app", (out, t))
    return out


def arrow(*ts):
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = Fun("arrow", (t, out))
    return out


def S(t1, t2, t3):
    return Fun("S", (t1, t2, t3))


def K(t1, t2):
    return Fun("K", (t1, t2))


def kind(t1, t2):
    return Fun("kind", (t1, t2))


def is_uniform_value(t) -> bool:
    return isinstance(t, Fun) and t.symbol in ("S", "K", "A", "arrow")


_UNIFORM = None


def uniform_trs() -> TRS:
    global _UNIFORM
    if _UNIFORM is None:
        _UNIFORM = builtin("uniform")
    return _UNIFORM


def uniform_kindable(u) -> bool:
    return normal_form(uniform_trs(), kind(u, A)) == A


def uniform_typable(t, fuel: int = 10_000):
    """The kindable value ``t`` abstractly reduces to, or None."""
    nf = normal_form(uniform_trs(), t, fuel)
    if nf is not None and is_uniform_value(nf) and uniform_kindable(nf):
        return nf
    return None


def _cbv_root(t):
    if t.symbol != "app":
        return None
    f, z = t.args
    if isinstance(f, Fun) and f.symbol == "app":
        g, y = f.args
        if isinstance(g, Fun) and g.symbol == "K" and is_uniform_value(y) \
                and is_uniform_value(z):
            return y
        if isinstance(g, Fun) and g.symbol == "app":
            h, x = g.args
            if isinstance(h, Fun) and h.symbol == "S" and all(
                    is_uniform_value(v) for v in (x, y, z)):
                return app(app(x, z), app(y, z))
    return None


def uniform_cbv_step(t):
    """One call-by-value combinator step, or None if there is none."""
    if isinstance(t, Var):
        return None
    r = _cbv_root(t)
    if r is not None:
        return r
    if t.symbol == "app":
        f, x = t.args
        r = uniform_cbv_step(f)
        if r is not None:
            return app(r, x)
        if is_uniform_value(f):
            r = uniform_cbv_step(x)
            if r is not None:
                return app(f, r)
    return None


def uniform_preservation_check(t, fuel: int = 10_000) -> str:
    """``"ok"``, ``"violation"`` or ``"precondition"`` (t not typable)."""
    ty = uniform_typable(t, fuel)
    if ty is None:
        return "precondition"
    nxt = uniform_cbv_step(t)
    if nxt is None:
        return "ok"
    return "ok" if normal_form(uniform_trs(), nxt, fuel) == ty else "violation"
