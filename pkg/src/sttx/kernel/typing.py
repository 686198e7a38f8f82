"""Well-formedness and type inference for STT∀βδ."""

from __future__ import annotations

from ..core.signature import Context, CstDecl, CstDefn, Signature
from ..core.terms import (
    PROP, Abs, App, Bound, ConstApp, Forall, Fun, Imp, MonoType, OpApp, PolyTerm, PolyType,
    Prop, TBound, Term, TVar, Var, free_vars, instantiate, open_poly_term, open_poly_type,
    ty_abstract, ty_free_vars, ty_instantiate,
)
from .errors import (
    ArityError, KernelError, NotAFunction, NotAProposition, TypeMismatch, UnboundConstant,
    UnboundVariable,
)


def check_monotype(sig: Signature, ctx: Context, ty: MonoType, position=()) -> None:
    match ty:
        case TVar(x):
            if x not in ctx.tyvars:
                raise ArityError(f"type variable {x} is not in scope", position)
        case TBound(k):
            raise ArityError(f"dangling bound type variable #{k}", position)
        case Prop():
            pass
        case Fun(a, b):
            check_monotype(sig, ctx, a, position)
            check_monotype(sig, ctx, b, position)
        case OpApp(op, args):
            declared = sig.tyop(op.name)
            if declared is None:
                raise ArityError(f"unknown type operator {op.name}", position)
            if declared.arity != len(args) or op.arity != declared.arity:
                raise ArityError(
                    f"type operator {op.name} expects {declared.arity} arguments, got {len(args)}",
                    position,
                )
            for a in args:
                check_monotype(sig, ctx, a, position)
        case _:
            raise ArityError(f"not a monotype: {ty!r}", position)


def wf_monotype(sig: Signature, ctx: Context, ty: MonoType) -> bool:
    try:
        check_monotype(sig, ctx, ty)
    except KernelError:
        return False
    return True


def check_polytype(sig: Signature, ctx: Context, ty: PolyType, position=()) -> None:
    if len(set(ty.binders)) != len(ty.binders):
        raise ArityError(f"duplicate type binder in {ty}", position)
    names = fresh_tyvars(ctx, ty.binders, ty_free_vars(ty))
    inner = ctx
    for x in names:
        inner = inner.push_tyvar(x)
    check_monotype(sig, inner, open_poly_type(ty, names), position)


def wf_polytype(sig: Signature, ctx: Context, ty: PolyType) -> bool:
    try:
        check_polytype(sig, ctx, ty)
    except KernelError:
        return False
    return True


def check_context(sig: Signature, ctx: Context) -> None:
    seen: set[str] = set()
    prefix = Context()
    for e in ctx.entries:
        name = e if isinstance(e, str) else e[0]
        if name in seen:
            raise ArityError(f"duplicate context entry {name}")
        seen.add(name)
        if not isinstance(e, str):
            check_monotype(sig, prefix, e[1])
            prefix = prefix.push_var(*e)
        else:
            prefix = prefix.push_tyvar(e)


def fresh_tyvars(ctx: Context, hints, avoid=()) -> tuple[str, ...]:
    out: list[str] = []
    for h in hints:
        out.append(ctx.fresh_tyvar(h or "X", set(avoid) | set(out)))
    return tuple(out)


def _infer(sig: Signature, ctx: Context, t: Term, pos: tuple):
    """Monotype of ``t``, or a polytype for a partially applied constant."""
    match t:
        case Var(x):
            ty = ctx.vars.get(x)
            if ty is None:
                raise UnboundVariable(f"unbound variable {x}", pos)
            return ty
        case Bound(k):
            raise UnboundVariable(f"dangling bound variable #{k}", pos)
        case ConstApp(c, args):
            entry = sig.get(c)
            if not isinstance(entry, (CstDecl, CstDefn)):
                raise UnboundConstant(f"unbound constant {c}", pos)
            n = len(entry.ty.binders)
            if len(args) > n:
                raise ArityError(f"{c} takes {n} type arguments, got {len(args)}", pos)
            for a in args:
                check_monotype(sig, ctx, a, pos)
            if len(args) == n:
                return ty_instantiate(entry.ty.body, args)
            return PolyType(entry.ty.binders[len(args):], ty_instantiate(entry.ty.body, args, n))
        case Abs(x, a, b):
            check_monotype(sig, ctx, a, pos)
            y = ctx.fresh_var(x, free_vars(b))
            body_ty = infer_mono(sig, ctx.push_var(y, a), instantiate(b, Var(y)), pos + (0,))
            return Fun(a, body_ty)
        case App(f, u):
            fty = infer_mono(sig, ctx, f, pos + (0,))
            if not isinstance(fty, Fun):
                raise NotAFunction(f"{f} has type {fty}, not a function type", pos + (0,))
            uty = infer_mono(sig, ctx, u, pos + (1,))
            # types carry no redexes, so convertibility of types is alpha-equality
            if uty != fty.dom:
                raise TypeMismatch(fty.dom, uty, pos + (1,))
            return fty.cod
        case Imp(l, r):
            for side, sub in ((0, l), (1, r)):
                ty = infer_mono(sig, ctx, sub, pos + (side,))
                if ty != PROP:
                    raise NotAProposition(f"{sub} has type {ty}, not Prop", pos + (side,))
            return PROP
        case Forall(x, a, b):
            check_monotype(sig, ctx, a, pos)
            y = ctx.fresh_var(x, free_vars(b))
            body = instantiate(b, Var(y))
            ty = infer_mono(sig, ctx.push_var(y, a), body, pos + (0,))
            if ty != PROP:
                raise NotAProposition(f"body of ∀ has type {ty}, not Prop", pos + (0,))
            return PROP
    raise KernelError(f"not a term: {t!r}", pos)


def infer_mono(sig: Signature, ctx: Context, t: Term, pos=()) -> MonoType:
    ty = _infer(sig, ctx, t, tuple(pos))
    if isinstance(ty, PolyType):
        raise ArityError(f"{t} is not applied to all of its type arguments", pos)
    return ty


def infer_type(sig: Signature, ctx: Context, tau) -> PolyType:
    """The type of a term or polyterm.

    A polyterm whose body is a proposition is a type-quantified proposition
    (type ``Prop``); otherwise its binders are type abstractions.
    """
    if not isinstance(tau, PolyTerm):
        ty = _infer(sig, ctx, tau, ())
        return ty if isinstance(ty, PolyType) else PolyType((), ty)
    if len(set(tau.tybinders)) != len(tau.tybinders):
        raise ArityError(f"duplicate type binder in {tau}")
    names = fresh_tyvars(ctx, tau.tybinders, ty_free_vars(tau))
    inner = ctx
    for x in names:
        inner = inner.push_tyvar(x)
    body_ty = _infer(sig, inner, open_poly_term(tau, names), ())
    if body_ty == PROP:
        return PolyType((), PROP)
    if isinstance(body_ty, PolyType):
        inner_names = fresh_tyvars(inner, body_ty.binders, ty_free_vars(body_ty))
        opened = open_poly_type(body_ty, inner_names)
        return PolyType(
            tuple(tau.tybinders) + tuple(body_ty.binders),
            ty_abstract(opened, names + inner_names),
        )
    return PolyType(tuple(tau.tybinders), ty_abstract(body_ty, names))


def check_prop(sig: Signature, ctx: Context, tau, position=()) -> None:
    """Raise unless ``tau`` (term or polyterm) is a proposition under ``ctx``."""
    if isinstance(tau, PolyTerm):
        if len(set(tau.tybinders)) != len(tau.tybinders):
            raise ArityError(f"duplicate type binder in {tau}", position)
        names = fresh_tyvars(ctx, tau.tybinders, ty_free_vars(tau))
        for x in names:
            ctx = ctx.push_tyvar(x)
        tau = open_poly_term(tau, names)
    ty = _infer(sig, ctx, tau, tuple(position))
    if ty != PROP:
        raise NotAProposition(f"{tau} has type {ty}, not Prop", position)


def check_definition(sig: Signature, ty: PolyType, body: PolyTerm) -> None:
    """``Σ; ∅; ∅ ⊢ body : ty`` with the body's binders read as type abstractions."""
    check_polytype(sig, Context(), ty)
    if len(body.tybinders) != len(ty.binders):
        raise ArityError(
            f"definition has {len(body.tybinders)} type binders but its type has {len(ty.binders)}"
        )
    if len(set(body.tybinders)) != len(body.tybinders):
        raise ArityError("duplicate type binder in definition body")
    names = fresh_tyvars(Context(), body.tybinders)
    ctx = Context()
    for x in names:
        ctx = ctx.push_tyvar(x)
    found = infer_mono(sig, ctx, open_poly_term(body, names))
    expected = open_poly_type(ty, names)
    if found != expected:
        raise TypeMismatch(expected, found)
