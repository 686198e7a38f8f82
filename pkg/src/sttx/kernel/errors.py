"""Kernel error kinds.  Each carries the term or proof position it refers to."""

from __future__ import annotations


class KernelError(Exception):
    kind = "KernelError"

    def __init__(self, message: str, position=()):
        self.position = tuple(position)
        where = f" at {list(self.position)}" if self.position else ""
        super().__init__(f"{message}{where}")
        self.message = message


class UnboundVariable(KernelError):
    kind = "UnboundVariable"


class UnboundConstant(KernelError):
    kind = "UnboundConstant"


class TypeMismatch(KernelError):
    kind = "TypeMismatch"

    def __init__(self, expected, found, position=()):
        super().__init__(f"expected type {expected}, found {found}", position)
        self.expected = expected
        self.found = found


class NotAFunction(KernelError):
    kind = "NotAFunction"


class NotAProposition(KernelError):
    kind = "NotAProposition"


class ArityError(KernelError):
    """Bad type arguments: too many, or mentioning types not in scope."""

    kind = "ArityError"


class IllFormedSignature(KernelError):
    kind = "IllFormedSignature"


class HypNotFound(KernelError):
    kind = "HypNotFound"


class RuleMismatch(KernelError):
    kind = "RuleMismatch"


class SideConditionViolated(KernelError):
    kind = "SideConditionViolated"


class ConvFailed(KernelError):
    kind = "ConvFailed"
