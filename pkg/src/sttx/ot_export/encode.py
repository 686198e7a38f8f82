"""Translating types and terms, and the per-rule derivation templates.

Propositions are read through the prelude connectives: ``p ⇒ q`` becomes
``imp p q`` and ``∀x:A. t`` becomes ``forall (λx:A. t)``.  Each template
takes derivations of the premises (already translated) and returns a
derivation of the translated conclusion.
"""

from __future__ import annotations

import re

from ..core.signature import CstDecl, CstDefn, Signature
from ..core.terms import (
    Abs, App, Bound, ConstApp, Forall, Fun, Imp, OpApp, Prop, TBound, TVar, Var,
    ty_instantiate,
)
from ..ot_syntax import BOOL, OtAbs, OtApp, OtConst, OtOpApp, OtVar, OtVarType
from . import hol
from .hol import Deriv, InternalDerivationError, dest_eq
from .prelude import AND, FORALL_NAME, IMP, IMP_NAME, NAMESPACE, Prelude, forall_const

_RESERVED_TYVAR = re.compile(r"Z%+\d+")


class ExportError(Exception):
    """The theory cannot be expressed in the article format."""

    def __init__(self, message: str, phase: str = "encode"):
        super().__init__(f"[{phase}] {message}")
        self.phase = phase


class FreshnessViolation(InternalDerivationError):
    pass


def ot_tyvar_name(x: str) -> str:
    """Source type variables are kept away from the fresh pool ``Z%n``."""
    return x.replace("%", "%%", 1) if _RESERVED_TYVAR.fullmatch(x) else x


class Naming:
    """Maps source names to article names for one theory."""

    def __init__(self, theory: str):
        if theory == NAMESPACE:
            raise ExportError(f"the theory name {theory!r} is reserved for the prelude")
        self.theory = theory

    def const(self, name: str) -> str:
        return f"{self.theory}.{name}"

    def tyop(self, name: str) -> str:
        return f"{self.theory}.{name}"

    def tyvar(self, x: str) -> str:
        return ot_tyvar_name(x)


class Translator:
    """Types and terms of a signature into HOL types and terms."""

    def __init__(self, sig: Signature, naming: Naming):
        self.sig = sig
        self.naming = naming

    def type(self, ty, tyenv=()):
        match ty:
            case TVar(x):
                return OtVarType(self.naming.tyvar(x))
            case TBound(k):
                n = len(tyenv)
                if k >= n:
                    raise ExportError(f"dangling type index {k}")
                return OtVarType(tyenv[n - 1 - k])
            case Prop():
                return BOOL
            case Fun(a, b):
                return OtOpApp("->", (self.type(a, tyenv), self.type(b, tyenv)))
            case OpApp(op, args):
                return OtOpApp(self.naming.tyop(op.name), tuple(self.type(a, tyenv) for a in args))
        raise ExportError(f"not a type: {ty!r}")

    def const_type(self, c: ConstApp):
        entry = self.sig.const(c.cst)
        if not isinstance(entry, (CstDecl, CstDefn)):
            raise ExportError(f"{c.cst} is not a term constant")
        if len(c.tyargs) != len(entry.ty.binders):
            raise ExportError(f"{c.cst} is not fully applied to its type arguments")
        return ty_instantiate(entry.ty.body, c.tyargs)

    def term(self, t, vars: dict, tyenv=(), env=(), used=None):
        """``vars`` gives the HOL type of each free term variable."""
        if used is None:
            used = set(vars)
        return self._tm(t, vars, tyenv, list(env), used)

    def _binder(self, hint: str, ty, env, used) -> OtVar:
        taken = used | {v.name for v in env}
        name = hint or "x"
        while name in taken:
            name += "'"
        return OtVar(name, ty)

    def _tm(self, t, vars, tyenv, env, used):
        match t:
            case Var(x):
                if x not in vars:
                    raise ExportError(f"unbound variable {x}")
                return OtVar(x, vars[x])
            case Bound(k):
                return env[-1 - k]
            case ConstApp(c):
                return OtConst(self.naming.const(c), self.type(self.const_type(t), tyenv))
            case App(f, u):
                return OtApp(self._tm(f, vars, tyenv, env, used), self._tm(u, vars, tyenv, env, used))
            case Imp(l, r):
                p = self._tm(l, vars, tyenv, env, used)
                q = self._tm(r, vars, tyenv, env, used)
                return hol.mk_comb(IMP, p, q)
            case Abs(x, a, b):
                v = self._binder(x, self.type(a, tyenv), env, used)
                return OtAbs(v, self._tm(b, vars, tyenv, env + [v], used))
            case Forall(x, a, b):
                v = self._binder(x, self.type(a, tyenv), env, used)
                body = self._tm(b, vars, tyenv, env + [v], used)
                return OtApp(forall_const(v.ty), OtAbs(v, body))
        raise ExportError(f"not a term: {t!r}")


# -- rule templates ----------------------------------------------------------------


def t_assume(prop) -> Deriv:
    return hol.assume(prop)


def t_imp_intro(pre: Prelude, hyp, body: Deriv) -> Deriv:
    """Γ ⊢ q  to  Γ − {p} ⊢ p ⇒ q, through (p ∧ q) = p."""
    q = body.concl
    fwd = pre.conj_intro(hol.assume(hyp), body)
    back = pre.conj_elim1(hol.assume(hol.mk_comb(AND, hyp, q)))
    return hol.eq_mp(hol.sym(pre.imp_eq(hyp, q)), hol.deduct_antisym(fwd, back))


def dest_imp(t):
    match t:
        case OtApp(OtApp(OtConst(name, _), p), q) if name == IMP_NAME:
            return p, q
    return None


def dest_forall(t):
    match t:
        case OtApp(OtConst(name, _), OtAbs() as lam) if name == FORALL_NAME:
            return lam
    return None


def t_imp_elim(pre: Prelude, fn: Deriv, arg: Deriv) -> Deriv:
    parts = dest_imp(fn.concl)
    if parts is None:
        raise InternalDerivationError(f"⇒E: {fn.concl} is not an implication")
    p, q = parts
    eq = hol.eq_mp(pre.imp_eq(p, q), fn)  # (p ∧ q) = p
    return pre.conj_elim2(hol.eq_mp(hol.sym(eq), arg))


def t_forall_intro(pre: Prelude, v: OtVar, body: Deriv) -> Deriv:
    """Γ ⊢ t  to  Γ ⊢ ∀(λv. t): deduce t = ⊤, abstract, rewrite by the ∀ equation."""
    if any(v in hol.frees(h) for h in body.hyps):
        raise FreshnessViolation(f"∀I: {v.name} is free in a hypothesis")
    lam = hol.abs_thm(v, pre.eqt_intro(body))  # (λv. t) = (λv. ⊤)
    pred = OtAbs(v, body.concl)
    return hol.eq_mp(hol.sym(pre.forall_eq(pred)), lam)


def t_forall_elim(pre: Prelude, body: Deriv, witness) -> Deriv:
    lam = dest_forall(body.concl)
    if lam is None:
        raise InternalDerivationError(f"∀E: {body.concl} is not universally quantified")
    eq = hol.eq_mp(pre.forall_eq(lam), body)  # (λx. t) = (λx. ⊤)
    applied = hol.app_thm(eq, hol.refl(witness))
    lhs = hol.beta_conv(OtApp(lam, witness))
    rhs = hol.beta_conv(OtApp(dest_eq(eq.concl)[1], witness))
    return pre.eqt_elim(hol.trans(hol.trans(hol.sym(lhs), applied), rhs))


def t_conv(body: Deriv, src_eq: Deriv, tgt_eq: Deriv) -> Deriv:
    """From Γ ⊢ φ, ⊢ φ = n and ⊢ ψ = n derive Γ ⊢ ψ."""
    return hol.eq_mp(hol.trans(src_eq, hol.sym(tgt_eq)), body)


def t_ty_forall_elim(fresh: hol.Fresh, body: Deriv, names: tuple, witness) -> tuple[Deriv, tuple]:
    """Eliminate the outermost type quantifier (name ``names[0]``) at ``witness``.

    First ``X ↦ Z`` with Z fresh (also moving any remaining quantified
    variable that the witness mentions), then ``Z ↦ witness``.
    """
    if not names:
        raise InternalDerivationError("type ∀E on a statement without type quantifiers")
    wvars = hol.ty_vars(witness)
    z = fresh.tyvar()
    theta1 = {names[0]: OtVarType(z)}
    rest = []
    for n in names[1:]:
        if n in wvars:
            m = fresh.tyvar()
            theta1[n] = OtVarType(m)
            rest.append(m)
        else:
            rest.append(n)
    step1 = hol.subst(theta1, {}, body)
    step2 = hol.subst({z: witness}, {}, step1)
    return step2, tuple(rest)


TEMPLATES = {
    "Assume": t_assume,
    "ImpIntro": t_imp_intro,
    "ImpElim": t_imp_elim,
    "ForallIntro": t_forall_intro,
    "ForallElim": t_forall_elim,
    "Conv": t_conv,
    "TyForallElim": t_ty_forall_elim,
}


def derive_rule(rule: str, *premises_and_data):
    """Apply the template for ``rule``; arguments follow the template's signature."""
    try:
        template = TEMPLATES[rule]
    except KeyError:
        raise InternalDerivationError(f"no template for {rule}") from None
    return template(*premises_and_data)
