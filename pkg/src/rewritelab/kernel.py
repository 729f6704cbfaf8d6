"""Types, standard terms and mixed terms.

Mixed terms extend the standard lambda terms with embedded types: the
base type ``A`` (:class:`TyBase`) and ``T => m`` (:class:`ArrowAbs`).  An
embedded type is simply a mixed term built from those two forms only, so
a rule such as ``(T => m) T -> m`` can be matched structurally.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union


# -- types ------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Base:
    def __repr__(self):
        return "A"


@dataclass(frozen=True, slots=True)
class Arrow:
    dom: "Type"
    cod: "Type"

    def __repr__(self):
        return f"Arrow({self.dom!r}, {self.cod!r})"


Type = Union[Base, Arrow]
BASE = Base()


def arrow(*tys: Type) -> Type:
    """Right-nested arrow: ``arrow(A, B, C)`` is ``A -> (B -> C)``."""
    out = tys[-1]
    for t in reversed(tys[:-1]):
        out = Arrow(t, out)
    return out


def type_depth(t: Type) -> int:
    if isinstance(t, Base):
        return 0
    return 1 + max(type_depth(t.dom), type_depth(t.cod))


# -- terms ------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class Lam:
    ann: Type
    var: str
    body: "Term"


@dataclass(frozen=True, slots=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True, slots=True)
class ConstA:
    pass


@dataclass(frozen=True, slots=True)
class ConstF:
    pass


@dataclass(frozen=True, slots=True)
class TyBase:
    pass


@dataclass(frozen=True, slots=True)
class ArrowAbs:
    dom: Type
    body: "Term"


Term = Union[Var, Lam, App, ConstA, ConstF, TyBase, ArrowAbs]

CA = ConstA()
CF = ConstF()
TA = TyBase()

# A typing context is an ordered sequence of (name, type) pairs.
Context = Sequence[tuple]


def embed_type(t: Type) -> Term:
    if isinstance(t, Base):
        return TA
    return ArrowAbs(t.dom, embed_type(t.cod))


def as_type(m: Term) -> Type | None:
    """The type a mixed term denotes, or None if it is not a type."""
    if isinstance(m, TyBase):
        return BASE
    if isinstance(m, ArrowAbs):
        cod = as_type(m.body)
        if cod is not None:
            return Arrow(m.dom, cod)
    return None


# -- classification ---------------------------------------------------------

def is_type(m: Term) -> bool:
    while isinstance(m, ArrowAbs):
        m = m.body
    return isinstance(m, TyBase)


def is_standard(m: Term) -> bool:
    if isinstance(m, (TyBase, ArrowAbs)):
        return False
    if isinstance(m, Lam):
        return is_standard(m.body)
    if isinstance(m, App):
        return is_standard(m.fun) and is_standard(m.arg)
    return True


def is_mixed_value(m: Term) -> bool:
    return isinstance(m, (Lam, ArrowAbs, TyBase, ConstA, ConstF))


def is_standard_value(m: Term) -> bool:
    return isinstance(m, (Lam, ConstA, ConstF)) and is_standard(m)


def classify(m: Term) -> frozenset:
    flags = set()
    if is_standard(m):
        flags.add("standard")
    if is_type(m):
        flags.add("type")
    if is_mixed_value(m):
        flags.add("mixed-value")
    if is_standard_value(m):
        flags.add("standard-value")
    return frozenset(flags)


def size(m: Term) -> int:
    """Number of AST nodes; annotation types are not counted."""
    if isinstance(m, Lam):
        return 1 + size(m.body)
    if isinstance(m, App):
        return 1 + size(m.fun) + size(m.arg)
    if isinstance(m, ArrowAbs):
        return 1 + size(m.body)
    return 1


# -- variables and substitution ---------------------------------------------

def free_vars(m: Term) -> frozenset:
    if isinstance(m, Var):
        return frozenset((m.name,))
    if isinstance(m, Lam):
        return free_vars(m.body) - {m.var}
    if isinstance(m, App):
        return free_vars(m.fun) | free_vars(m.arg)
    if isinstance(m, ArrowAbs):
        return free_vars(m.body)
    return frozenset()


def is_closed(m: Term) -> bool:
    return not free_vars(m)


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    name = base.rstrip("'") + "'"
    while name in avoid:
        name += "'"
    return name


def subst(body: Term, var: str, repl: Term) -> Term:
    """Capture-avoiding ``[repl/var]body``."""
    return _subst(body, var, repl, free_vars(repl))


def _subst(m, var, repl, repl_fv):
    if isinstance(m, Var):
        return repl if m.name == var else m
    if isinstance(m, App):
        f = _subst(m.fun, var, repl, repl_fv)
        a = _subst(m.arg, var, repl, repl_fv)
        if f is m.fun and a is m.arg:
            return m
        return App(f, a)
    if isinstance(m, Lam):
        if m.var == var:
            return m
        body_fv = free_vars(m.body)
        if var not in body_fv:
            return m
        x, body = m.var, m.body
        if x in repl_fv:
            x = fresh_name(x, repl_fv | body_fv | {var})
            body = _subst(body, m.var, Var(x), frozenset((x,)))
        return Lam(m.ann, x, _subst(body, var, repl, repl_fv))
    if isinstance(m, ArrowAbs):
        b = _subst(m.body, var, repl, repl_fv)
        return m if b is m.body else ArrowAbs(m.dom, b)
    return m


def ctx_subst(ctx: Context, m: Term) -> Term:
    """Simultaneously replace each context variable by its (embedded) type."""
    table = {}
    for name, ty in ctx:
        table[name] = embed_type(ty)  # later bindings shadow earlier ones
    return _closed_subst(m, table) if table else m


def _closed_subst(m, table):
    # replacements are closed types, so no renaming is ever needed
    if isinstance(m, Var):
        return table.get(m.name, m)
    if isinstance(m, App):
        return App(_closed_subst(m.fun, table), _closed_subst(m.arg, table))
    if isinstance(m, Lam):
        if m.var in table:
            table = {k: v for k, v in table.items() if k != m.var}
            if not table:
                return m
        return Lam(m.ann, m.var, _closed_subst(m.body, table))
    if isinstance(m, ArrowAbs):
        return ArrowAbs(m.dom, _closed_subst(m.body, table))
    return m


# -- alpha equivalence ------------------------------------------------------

def alpha_key(m: Term, _env: tuple = ()) -> tuple:
    """A nameless rendering of ``m``; equal keys iff alpha-equivalent."""
    if isinstance(m, Var):
        try:
            return ("b", _env.index(m.name))
        except ValueError:
            return ("v", m.name)
    if isinstance(m, App):
        return ("@", alpha_key(m.fun, _env), alpha_key(m.arg, _env))
    if isinstance(m, Lam):
        return ("\\", m.ann, alpha_key(m.body, (m.var,) + _env))
    if isinstance(m, ArrowAbs):
        return ("=>", m.dom, alpha_key(m.body, _env))
    if isinstance(m, ConstA):
        return "a"
    if isinstance(m, ConstF):
        return "f"
    return "A"


def alpha_eq(m1: Term, m2: Term) -> bool:
    return alpha_key(m1) == alpha_key(m2)
