"""Syntax-directed type computation for standard terms."""

from __future__ import annotations

from .kernel import (
    BASE, App, Arrow, ConstA, ConstF, Context, Lam, Term, Type, Var,
    ctx_subst, free_vars, is_standard,
)
from .reduction import typable


class NotStandard(ValueError):
    pass


_F = Arrow(BASE, BASE)


def infer(ctx: Context, t: Term) -> Type | None:
    """The unique ``T`` with ``ctx |- t : T``, or None if there is none."""
    if not is_standard(t):
        raise NotStandard("infer expects a standard term")
    return _infer(dict(ctx), t)


def _infer(env, t):
    if isinstance(t, Var):
        return env.get(t.name)
    if isinstance(t, ConstF):
        return _F
    if isinstance(t, ConstA):
        return BASE
    if isinstance(t, Lam):
        body = _infer({**env, t.var: t.ann}, t.body)
        return None if body is None else Arrow(t.ann, body)
    if isinstance(t, App):
        fun = _infer(env, t.fun)
        if not isinstance(fun, Arrow):
            return None
        arg = _infer(env, t.arg)
        return fun.cod if arg == fun.dom else None
    return None


def correspondence_check(ctx: Context, t: Term) -> bool:
    """Standard typing and abstract reduction agree on ``t`` under ``ctx``."""
    if not free_vars(t) <= {name for name, _ in ctx}:
        raise ValueError("free variables of t must be bound by ctx")
    return infer(ctx, t) == typable(ctx_subst(ctx, t))
