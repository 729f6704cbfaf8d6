"""Quasi-stuck terms, progress and type safety for call-by-value reduction."""

from __future__ import annotations

from dataclasses import dataclass

from .kernel import (
    BASE, App, Arrow, ArrowAbs, ConstA, ConstF, Lam, Term, TyBase,
    embed_type, is_closed, is_mixed_value, is_standard, is_standard_value,
)
from .reduction import DEFAULT_FUEL, redexes, run, typable
from .syntax import show

_A_TO_A = embed_type(Arrow(BASE, BASE))


class PreconditionViolation(ValueError):
    pass


def is_quasi_stuck(m: Term) -> bool:
    if is_mixed_value(m):
        return True
    if not isinstance(m, App):
        return False
    head, s = m.fun, m.arg
    if isinstance(head, (ConstA, TyBase)) and is_quasi_stuck(s):
        return True
    if (isinstance(head, ConstF) or head == _A_TO_A) and not isinstance(s, (ConstA, TyBase)) \
            and is_quasi_stuck(s):
        return True
    if isinstance(head, (Lam, ArrowAbs)) and not is_mixed_value(s) and is_quasi_stuck(s):
        return True
    return not is_mixed_value(head) and is_quasi_stuck(head) and is_quasi_stuck(s)


def is_stuck(m: Term) -> bool:
    return is_quasi_stuck(m) and not is_mixed_value(m)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def progress_check(t: Term) -> Verdict:
    """A closed typable standard term either c-steps or is a value."""
    if not (is_standard(t) and is_closed(t)):
        raise PreconditionViolation("progress_check needs a closed standard term")
    if typable(t) is None:
        raise PreconditionViolation(f"{show(t)} is not typable")
    if redexes(t, "c"):
        return Verdict(True, "c-redex")
    if is_standard_value(t):
        return Verdict(True, "value")
    return Verdict(False, f"{show(t)} is c-normal and not a value")


@dataclass(frozen=True)
class Outcome:
    kind: str  # "value", "stuck" or "fuel-exhausted"
    term: Term
    steps: int

    def __str__(self):
        return f"{self.kind}({show(self.term)})"


def type_safety_run(t: Term, fuel: int = DEFAULT_FUEL) -> Outcome:
    if not (is_standard(t) and is_closed(t)):
        raise PreconditionViolation("type_safety_run needs a closed standard term")
    tr = run(t, "c", fuel=fuel)
    if tr.exhausted:
        return Outcome("fuel-exhausted", tr.final, len(tr))
    kind = "value" if is_standard_value(tr.final) else "stuck"
    return Outcome(kind, tr.final, len(tr))
