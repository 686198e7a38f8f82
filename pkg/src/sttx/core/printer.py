"""Human-readable rendering of types and terms (diagnostics, CLI dumps)."""

from __future__ import annotations

from .terms import (
    Abs, App, Bound, ConstApp, Forall, Fun, Imp, OpApp, PolyTerm, PolyType, Prop,
    TBound, TVar, TypeOpRef, Var, free_vars, ty_free_vars,
)


def _fresh(hint: str, used: set[str]) -> str:
    name = hint or "x"
    while name in used:
        name += "'"
    return name


def _tybinder_names(binders, avoid: set[str]) -> tuple[str, ...]:
    out: list[str] = []
    for b in binders:
        x = _fresh(b, avoid | set(out))
        out.append(x)
    return tuple(out)


def show_type(ty, tynames=()) -> str:
    return _ty(ty, tynames, 0)


def _ty(ty, tynames, prec: int) -> str:
    match ty:
        case TVar(x):
            return x
        case TBound(k):
            n = len(tynames)
            return tynames[n - 1 - k] if k < n else f"?{k}"
        case Prop():
            return "Prop"
        case Fun(a, b):
            s = f"{_ty(a, tynames, 1)} → {_ty(b, tynames, 0)}"
            return f"({s})" if prec > 0 else s
        case OpApp(op, args):
            if not args:
                return op.name
            s = " ".join([op.name] + [_ty(a, tynames, 2) for a in args])
            return f"({s})" if prec > 1 else s
    raise TypeError(f"not a type: {ty!r}")


def show_term(t, tynames=(), used: set[str] | None = None) -> str:
    if used is None:
        used = free_vars(t)
    return _tm(t, tynames, [], used, 0)


def _tm(t, tynames, env: list[str], used: set[str], prec: int) -> str:
    match t:
        case Var(x):
            return x
        case Bound(k):
            return env[-1 - k] if k < len(env) else f"#{k}"
        case ConstApp(c, args):
            if not args:
                return c
            return f"{c}[{', '.join(_ty(a, tynames, 0) for a in args)}]"
        case Abs(x, a, b) | Forall(x, a, b):
            name = _fresh(x, used | set(env))
            sym = "λ" if isinstance(t, Abs) else "∀"
            body = _tm(b, tynames, env + [name], used, 0)
            s = f"{sym}{name}:{_ty(a, tynames, 0)}. {body}"
            return f"({s})" if prec > 0 else s
        case Imp(l, r):
            s = f"{_tm(l, tynames, env, used, 1)} ⇒ {_tm(r, tynames, env, used, 0)}"
            return f"({s})" if prec > 0 else s
        case App(f, u):
            s = f"{_tm(f, tynames, env, used, 2)} {_tm(u, tynames, env, used, 3)}"
            return f"({s})" if prec > 2 else s
    raise TypeError(f"not a term: {t!r}")


def show(x) -> str:
    match x:
        case PolyType(binders, body):
            names = _tybinder_names(binders, ty_free_vars(x))
            head = "".join(f"∀{n}. " for n in names)
            return head + _ty(body, names, 0)
        case PolyTerm(binders, body):
            names = _tybinder_names(binders, ty_free_vars(x))
            head = "".join(f"∀{n}. " for n in names)
            return head + show_term(body, names)
        case TypeOpRef(name, arity):
            return f"({name} : {arity})"
        case TVar() | TBound() | Prop() | Fun() | OpApp():
            return show_type(x)
    return show_term(x)
