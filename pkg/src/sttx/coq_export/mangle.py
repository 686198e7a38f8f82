"""Mapping STT∀βδ names to Coq identifiers.

Names that are already legal Coq identifiers and not keywords are kept.
Others are sanitized (illegal characters become ``_``, keywords get a ``_``
suffix) and then numbered until they differ from every name already
assigned, so the mapping is injective over a theory.
"""

from __future__ import annotations

import re

COQ_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")

COQ_KEYWORDS = frozenset(
    """
    _ as at cofix else end exists exists2 fix for forall fun if IF in let match mod
    return then using where with Axiom Parameter Definition Theorem Lemma Module Type
    Prop Set SProp Import Export End Fixpoint Inductive Section Variable Hypothesis
    Proof Qed Defined Let Notation Require Include
    """.split()
)


def legal(name: str) -> bool:
    return bool(COQ_IDENT.match(name)) and name not in COQ_KEYWORDS


def sanitize(name: str) -> str:
    s = re.sub(r"[^A-Za-z0-9_']", "_", name)
    if not s or not (s[0].isalpha() or s[0] == "_"):
        s = "x" + s
    if s in COQ_KEYWORDS:
        s += "_"
    return s


class Mangler:
    """An injective, deterministic name table for one rendered theory."""

    def __init__(self, reserved=()):
        self.table: dict[str, str] = {}
        self.used: set[str] = set(reserved)

    def add(self, name: str) -> str:
        if name in self.table:
            return self.table[name]
        out = name if legal(name) and name not in self.used else sanitize(name)
        base, i = out, 0
        while out in self.used:
            i += 1
            out = f"{base}_{i}"
        self.table[name] = out
        self.used.add(out)
        return out

    def __getitem__(self, name: str) -> str:
        return self.table[name]

    def renamed(self) -> list[tuple[str, str]]:
        return [(a, b) for a, b in self.table.items() if a != b]
