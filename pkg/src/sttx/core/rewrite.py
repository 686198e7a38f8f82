"""βδ rewriting: positioned steps, leftmost-outermost normalization, conversion.

A position is a tuple of child indices.  Children are numbered
``App: fn=0, arg=1``, ``Imp: lhs=0, rhs=1``, ``Abs``/``Forall``: body=0.  A
``ConstApp`` has no term children; a δ step addresses the ``ConstApp`` node
itself, its type arguments are part of the redex.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Union

from .signature import CstDefn, Signature, UnknownConstant
from .terms import (
    Abs, App, ConstApp, Forall, Imp, PolyTerm, Term, as_poly_term, instantiate,
    map_term_types, ty_instantiate,
)

DEFAULT_FUEL = 100_000


def default_fuel() -> int:
    """Normalization bound, overridable through ``STTX_FUEL``."""
    raw = os.environ.get("STTX_FUEL")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return DEFAULT_FUEL


class RewriteError(Exception):
    pass


class NotARedex(RewriteError):
    def __init__(self, position, kind):
        super().__init__(f"no {kind} redex at position {list(position)}")
        self.position = tuple(position)
        self.kind = kind


class UndefinedConstant(RewriteError):
    def __init__(self, name: str):
        super().__init__(f"constant {name!r} is declared, not defined: δ does not apply")
        self.name = name


class FuelExhausted(RewriteError):
    def __init__(self, fuel: int):
        super().__init__(f"normalization did not terminate within {fuel} steps")
        self.fuel = fuel


@dataclass(frozen=True)
class Beta:
    def __str__(self):
        return "β"


@dataclass(frozen=True)
class Delta:
    cst: str

    def __str__(self):
        return f"δ({self.cst})"


BETA = Beta()


@dataclass(frozen=True)
class RewriteStep:
    position: tuple
    kind: Union[Beta, Delta]

    def __str__(self):
        return f"{self.kind}@{list(self.position)}"


Trace = tuple  # tuple[RewriteStep, ...]


# -- positions ---------------------------------------------------------------


def subterm(t: Term, position) -> Term:
    for i in position:
        match t, i:
            case App(f, _), 0:
                t = f
            case App(_, u), 1:
                t = u
            case Imp(l, _), 0:
                t = l
            case Imp(_, r), 1:
                t = r
            case (Abs(_, _, b) | Forall(_, _, b)), 0:
                t = b
            case _:
                raise NotARedex(position, "any")
    return t


def replace_at(t: Term, position, new: Term) -> Term:
    if not position:
        return new
    i, rest = position[0], position[1:]
    match t, i:
        case App(f, u), 0:
            return App(replace_at(f, rest, new), u)
        case App(f, u), 1:
            return App(f, replace_at(u, rest, new))
        case Imp(l, r), 0:
            return Imp(replace_at(l, rest, new), r)
        case Imp(l, r), 1:
            return Imp(l, replace_at(r, rest, new))
        case Abs(x, a, b), 0:
            return Abs(x, a, replace_at(b, rest, new))
        case Forall(x, a, b), 0:
            return Forall(x, a, replace_at(b, rest, new))
    raise NotARedex(position, "any")


# -- single steps ------------------------------------------------------------


def _delta_body(c: ConstApp, sig: Signature) -> Term:
    entry = sig.const(c.cst)
    if not isinstance(entry, CstDefn):
        raise UndefinedConstant(c.cst)
    n = len(entry.body.tybinders)
    if len(c.tyargs) != n:
        raise NotARedex((), f"δ({c.cst}) with {n} type arguments")
    args = c.tyargs
    return map_term_types(entry.body.body, lambda a: ty_instantiate(a, args))


def contract(redex: Term, kind, sig: Signature) -> Term:
    match kind, redex:
        case Beta(), App(Abs(_, _, body), u):
            return instantiate(body, u)
        case Delta(c), ConstApp(c2, _) if c == c2:
            return _delta_body(redex, sig)
    raise NotARedex((), str(kind))


def apply_step(t: Term, step: RewriteStep, sig: Signature) -> Term:
    """Contract the redex addressed by ``step`` inside ``t``."""
    try:
        redex = subterm(t, step.position)
    except NotARedex:
        raise NotARedex(step.position, str(step.kind)) from None
    try:
        new = contract(redex, step.kind, sig)
    except NotARedex:
        raise NotARedex(step.position, str(step.kind)) from None
    return replace_at(t, step.position, new)


def replay(t: Term, trace, sig: Signature) -> Term:
    for s in trace:
        t = apply_step(t, s, sig)
    return t


def redex_kind(t: Term, sig: Signature):
    """The kind of redex ``t`` is at its root, or ``None``."""
    match t:
        case App(Abs(), _):
            return BETA
        case ConstApp(c, args):
            e = sig.get(c)
            if isinstance(e, CstDefn) and len(args) == len(e.body.tybinders):
                return Delta(c)
    return None


def leftmost_outermost(t: Term, sig: Signature, pos=()) -> RewriteStep | None:
    kind = redex_kind(t, sig)
    if kind is not None:
        return RewriteStep(pos, kind)
    match t:
        case App(a, b) | Imp(a, b):
            return leftmost_outermost(a, sig, pos + (0,)) or leftmost_outermost(b, sig, pos + (1,))
        case Abs(_, _, b) | Forall(_, _, b):
            return leftmost_outermost(b, sig, pos + (0,))
    return None


# -- normalization -------------------------------------------------------------


def normalize(t: Term, sig: Signature, fuel: int | None = None) -> tuple[Term, Trace]:
    """βδ-normal form of ``t`` by leftmost-outermost reduction, with its trace."""
    if isinstance(t, PolyTerm):
        body, trace = normalize(t.body, sig, fuel)
        return PolyTerm(t.tybinders, body), trace
    fuel = default_fuel() if fuel is None else fuel
    steps = []
    while True:
        step = leftmost_outermost(t, sig)
        if step is None:
            return t, tuple(steps)
        if len(steps) >= fuel:
            raise FuelExhausted(fuel)
        t = apply_step(t, step, sig)
        steps.append(step)


def head_normalize(t: Term, sig: Signature, fuel: int | None = None) -> tuple[Term, Trace]:
    """Reduce only redexes at the head of the application spine of ``t``."""
    fuel = default_fuel() if fuel is None else fuel
    steps = []
    while True:
        pos = ()
        h = t
        while isinstance(h, App) and redex_kind(h, sig) is None:
            h = h.fn
            pos += (0,)
        kind = redex_kind(h, sig)
        if kind is None:
            return t, tuple(steps)
        if len(steps) >= fuel:
            raise FuelExhausted(fuel)
        step = RewriteStep(pos, kind)
        t = apply_step(t, step, sig)
        steps.append(step)


def is_normal(t: Term, sig: Signature) -> bool:
    return leftmost_outermost(as_poly_term(t).body, sig) is None


def conv(t, u, sig: Signature, fuel: int | None = None) -> tuple[Trace, Trace] | None:
    """Both normalization traces when ``t`` and ``u`` are βδ-convertible."""
    if isinstance(t, PolyTerm) or isinstance(u, PolyTerm):
        t, u = as_poly_term(t), as_poly_term(u)
        if len(t.tybinders) != len(u.tybinders):
            return None
    nt, tr_t = normalize(t, sig, fuel)
    nu, tr_u = normalize(u, sig, fuel)
    if nt == nu:
        return tr_t, tr_u
    return None


__all__ = [
    "BETA", "Beta", "DEFAULT_FUEL", "Delta", "FuelExhausted", "NotARedex", "RewriteError",
    "RewriteStep", "Trace", "UndefinedConstant", "UnknownConstant", "apply_step", "contract",
    "conv", "default_fuel", "head_normalize", "is_normal", "leftmost_outermost", "normalize",
    "redex_kind", "replace_at", "replay", "subterm",
]
