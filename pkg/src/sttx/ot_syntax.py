"""OpenTheory types, terms and sequents: plain values shared by exporter and checker.

Terms are named (as in the article format).  Nothing here derives theorems:
substitution, alpha-equivalence and the inference rules are implemented
separately on each side so the checker stays independent of the exporter.
"""

from __future__ import annotations

from dataclasses import dataclass


class _Cached:
    """Frozen value whose structural hash is computed once."""

    def __hash__(self):
        try:
            return self.__dict__["_h"]
        except KeyError:
            h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self._fields))
            object.__setattr__(self, "_h", h)
            return h

    def __str__(self):
        return show_ot(self)


@dataclass(frozen=True)
class OtVarType(_Cached):
    name: str
    _fields = ("name",)

    __hash__ = _Cached.__hash__


@dataclass(frozen=True)
class OtOpApp(_Cached):
    op: str
    args: tuple = ()
    _fields = ("op", "args")

    __hash__ = _Cached.__hash__


OtType = OtVarType | OtOpApp

BOOL = OtOpApp("bool")


def fun_ty(*tys: OtType) -> OtType:
    """``a -> b -> ... -> z`` from right to left."""
    out = tys[-1]
    for a in reversed(tys[:-1]):
        out = OtOpApp("->", (a, out))
    return out


@dataclass(frozen=True)
class OtVar(_Cached):
    name: str
    ty: OtType
    _fields = ("name", "ty")

    __hash__ = _Cached.__hash__


@dataclass(frozen=True)
class OtConst(_Cached):
    name: str
    ty: OtType
    _fields = ("name", "ty")

    __hash__ = _Cached.__hash__


@dataclass(frozen=True)
class OtApp(_Cached):
    fn: "OtTerm"
    arg: "OtTerm"
    _fields = ("fn", "arg")

    __hash__ = _Cached.__hash__


@dataclass(frozen=True)
class OtAbs(_Cached):
    var: OtVar
    body: "OtTerm"
    _fields = ("var", "body")

    __hash__ = _Cached.__hash__


OtTerm = OtVar | OtConst | OtApp | OtAbs


@dataclass(frozen=True)
class OtSequent:
    hyps: tuple
    concl: OtTerm

    def __str__(self):
        hs = ", ".join(show_ot(h) for h in self.hyps)
        return f"{hs} ⊢ {show_ot(self.concl)}" if hs else f"⊢ {show_ot(self.concl)}"


def show_ot(x, prec: int = 0) -> str:
    match x:
        case OtVarType(n):
            return n
        case OtOpApp("->", (a, b)):
            s = f"{show_ot(a, 1)} -> {show_ot(b, 0)}"
            return f"({s})" if prec > 0 else s
        case OtOpApp(op, ()):
            return op
        case OtOpApp(op, args):
            s = " ".join([op] + [show_ot(a, 2) for a in args])
            return f"({s})" if prec > 1 else s
        case OtVar(n, _):
            return n
        case OtConst(n, _):
            return n
        case OtApp(OtApp(OtConst("=", _), l), r):
            s = f"{show_ot(l, 1)} = {show_ot(r, 1)}"
            return f"({s})" if prec > 0 else s
        case OtApp(f, a):
            s = f"{show_ot(f, 2)} {show_ot(a, 3)}"
            return f"({s})" if prec > 2 else s
        case OtAbs(v, b):
            s = f"λ{v.name}:{show_ot(v.ty)}. {show_ot(b, 0)}"
            return f"({s})" if prec > 0 else s
        case OtSequent():
            return str(x)
    raise TypeError(f"not an OpenTheory value: {x!r}")
