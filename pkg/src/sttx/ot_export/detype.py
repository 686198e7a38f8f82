"""Erasing type quantifiers.

A derivation of ``∀X1..Xn. τ`` is represented by a derivation of ``τ`` in
which X1..Xn are free type variables, together with their names.  HOL reads
free type variables as implicitly quantified, so introducing a type
quantifier is a no-op and eliminating one is a type substitution.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..ot_syntax import OtVarType
from . import hol
from .encode import t_ty_forall_elim
from .hol import Deriv


class FreshPoolExhausted(hol.InternalDerivationError):
    pass


@dataclass(frozen=True)
class Proved:
    """A derivation plus the names standing for its erased type quantifiers."""

    deriv: Deriv
    names: tuple = ()


def intro(p: Proved, name: str) -> Proved:
    if name in p.names:
        raise hol.InternalDerivationError(f"type variable {name} quantified twice")
    return Proved(p.deriv, (name,) + p.names)


def elim(fresh: hol.Fresh, p: Proved, witness) -> Proved:
    d, rest = t_ty_forall_elim(fresh, p.deriv, p.names, witness)
    return Proved(d, rest)


def rename_away(fresh: hol.Fresh, p: Proved, avoid) -> Proved:
    """Move quantified names that occur in ``avoid`` to fresh ones."""
    theta = {}
    names = []
    for n in p.names:
        if n in avoid:
            m = fresh.tyvar()
            if m in avoid:
                raise FreshPoolExhausted(m)
            theta[n] = OtVarType(m)
            names.append(m)
        else:
            names.append(n)
    if not theta:
        return p
    return Proved(hol.subst(theta, {}, p.deriv), tuple(names))


def rename_to(p: Proved, targets) -> Proved:
    """Rename the quantified names to ``targets`` in one simultaneous substitution."""
    targets = tuple(targets)
    if len(targets) != len(p.names):
        raise hol.InternalDerivationError("wrong number of type quantifier names")
    theta = {a: OtVarType(b) for a, b in zip(p.names, targets) if a != b}
    if not theta:
        return p
    return Proved(hol.subst(theta, {}, p.deriv), targets)
