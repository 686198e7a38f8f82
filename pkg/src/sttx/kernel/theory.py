"""Checking whole signatures entry by entry."""

from __future__ import annotations

from ..core.signature import (
    AxiomDecl, Context, CstDecl, CstDefn, Signature, ThmDefn, TyOpDecl,
)
from .errors import IllFormedSignature, KernelError
from .proofs import Theorem, check_proof
from .typing import check_definition, check_polytype, check_prop


class EntryError(KernelError):
    """A kernel error located at a named signature entry."""

    def __init__(self, entry: str, cause: KernelError):
        self.entry = entry
        self.cause = cause
        self.kind = cause.kind
        super().__init__(f"{entry}: {cause}", cause.position)


def check_entry(prefix: Signature, entry) -> Theorem | None:
    if entry.name in prefix:
        raise IllFormedSignature(f"{entry.name} is already declared")
    match entry:
        case TyOpDecl(op):
            if op.arity < 0 or not op.name:
                raise IllFormedSignature(f"bad type operator declaration {op}")
        case CstDecl(_, ty):
            check_polytype(prefix, Context(), ty)
        case CstDefn(_, ty, body):
            check_definition(prefix, ty, body)
        case AxiomDecl(_, prop):
            check_prop(prefix, Context(), prop)
        case ThmDefn(_, prop, proof):
            return check_proof(prefix, Context(), (), proof, prop)
        case _:
            raise IllFormedSignature(f"unknown signature entry {entry!r}")
    return None


def check_signature(sig: Signature) -> list[Theorem]:
    """Check every entry against its prefix; return the lemmas' theorems."""
    theorems = []
    for i, entry in enumerate(sig.entries):
        try:
            thm = check_entry(sig.prefix(i), entry)
        except KernelError as exc:
            raise EntryError(entry.name, exc) from exc
        if thm is not None:
            theorems.append(thm)
    return theorems


def wf_signature(sig: Signature) -> bool:
    try:
        check_signature(sig)
    except KernelError:
        return False
    return True
