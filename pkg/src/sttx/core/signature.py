"""Constant contexts (signatures) and typing contexts."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterator, Union

from .terms import MonoType, PolyTerm, PolyType, TypeOpRef


class UnknownConstant(LookupError):
    def __init__(self, name: str):
        super().__init__(f"unknown constant {name!r}")
        self.name = name


@dataclass(frozen=True)
class TyOpDecl:
    op: TypeOpRef

    @property
    def name(self) -> str:
        return self.op.name


@dataclass(frozen=True)
class CstDecl:
    name: str
    ty: PolyType


@dataclass(frozen=True)
class CstDefn:
    name: str
    ty: PolyType
    body: PolyTerm


@dataclass(frozen=True)
class AxiomDecl:
    """A declared proof constant: an axiom of the theory."""

    name: str
    prop: PolyTerm


@dataclass(frozen=True)
class ThmDefn:
    """A proof constant with its proof term (a lemma)."""

    name: str
    prop: PolyTerm
    proof: Any = field(compare=False)


Entry = Union[TyOpDecl, CstDecl, CstDefn, AxiomDecl, ThmDefn]


@dataclass(frozen=True)
class Signature:
    entries: tuple = ()

    @cached_property
    def _index(self) -> dict[str, Entry]:
        out: dict[str, Entry] = {}
        for e in self.entries:
            out.setdefault(e.name, e)
        return out

    def __iter__(self) -> Iterator[Entry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def get(self, name: str) -> Entry | None:
        return self._index.get(name)

    def extend(self, *entries: Entry) -> "Signature":
        return Signature(self.entries + tuple(entries))

    def prefix(self, n: int) -> "Signature":
        return Signature(self.entries[:n])

    def const(self, name: str) -> CstDecl | CstDefn:
        e = self._index.get(name)
        if not isinstance(e, (CstDecl, CstDefn)):
            raise UnknownConstant(name)
        return e

    def tyop(self, name: str) -> TypeOpRef | None:
        e = self._index.get(name)
        return e.op if isinstance(e, TyOpDecl) else None

    def proof_const(self, name: str) -> AxiomDecl | ThmDefn:
        e = self._index.get(name)
        if not isinstance(e, (AxiomDecl, ThmDefn)):
            raise UnknownConstant(name)
        return e

    def definition(self, name: str) -> CstDefn | None:
        e = self._index.get(name)
        return e if isinstance(e, CstDefn) else None


@dataclass(frozen=True)
class Context:
    """Typing context Γ: type variable names and typed term variables, in order."""

    entries: tuple = ()

    @cached_property
    def tyvars(self) -> frozenset[str]:
        return frozenset(e for e in self.entries if isinstance(e, str))

    @cached_property
    def vars(self) -> dict[str, MonoType]:
        return {e[0]: e[1] for e in self.entries if not isinstance(e, str)}

    def names(self) -> set[str]:
        return set(self.tyvars) | set(self.vars)

    def push_tyvar(self, name: str) -> "Context":
        return Context(self.entries + (name,))

    def push_var(self, name: str, ty: MonoType) -> "Context":
        return Context(self.entries + ((name, ty),))

    def fresh_var(self, hint: str, avoid=()) -> str:
        used = set(self.vars) | set(avoid)
        name = hint or "x"
        i = 0
        while name in used:
            i += 1
            name = f"{hint}{i}"
        return name

    def fresh_tyvar(self, hint: str, avoid=()) -> str:
        used = set(self.tyvars) | set(avoid)
        name = hint or "X"
        i = 0
        while name in used:
            i += 1
            name = f"{hint}{i}"
        return name
