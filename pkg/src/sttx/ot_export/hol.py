"""The exporter's own view of HOL: term operations and a derivation DAG.

Every :class:`Deriv` records the article rule that builds it and the sequent
it proves, computed here with named terms (renaming binders on clash).  The
article checker recomputes all of this independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count

from ..ot_syntax import BOOL, OtAbs, OtApp, OtConst, OtOpApp, OtSequent, OtVar, OtVarType


class InternalDerivationError(Exception):
    """A derivation step was built from premises of the wrong shape."""


# -- types -----------------------------------------------------------------------


def fn_parts(ty):
    if isinstance(ty, OtOpApp) and ty.op == "->":
        return ty.args
    return None


def ty_of(t):
    if isinstance(t, (OtVar, OtConst)):
        return t.ty
    if isinstance(t, OtAbs):
        return OtOpApp("->", (t.var.ty, ty_of(t.body)))
    parts = fn_parts(ty_of(t.fn))
    if parts is None:
        raise InternalDerivationError(f"ill-typed application {t}")
    return parts[1]


def ty_subst(theta: dict, ty):
    if isinstance(ty, OtVarType):
        return theta.get(ty.name, ty)
    if not ty.args:
        return ty
    return OtOpApp(ty.op, tuple(ty_subst(theta, a) for a in ty.args))


def ty_vars(ty, acc=None) -> set:
    acc = set() if acc is None else acc
    if isinstance(ty, OtVarType):
        acc.add(ty.name)
    else:
        for a in ty.args:
            ty_vars(a, acc)
    return acc


def term_ty_vars(t, acc=None) -> set:
    acc = set() if acc is None else acc
    if isinstance(t, (OtVar, OtConst)):
        ty_vars(t.ty, acc)
    elif isinstance(t, OtApp):
        term_ty_vars(t.fn, acc)
        term_ty_vars(t.arg, acc)
    else:
        ty_vars(t.var.ty, acc)
        term_ty_vars(t.body, acc)
    return acc


# -- named term operations -------------------------------------------------------


def frees(t) -> frozenset:
    if isinstance(t, OtVar):
        return frozenset((t,))
    if isinstance(t, OtConst):
        return frozenset()
    if isinstance(t, OtApp):
        return frees(t.fn) | frees(t.arg)
    return frees(t.body) - {t.var}


def variant(v: OtVar, avoid) -> OtVar:
    names = {a.name for a in avoid}
    name = v.name
    while name in names:
        name += "'"
    return OtVar(name, v.ty)


def vsubst(sigma: dict, t):
    """Simultaneous capture-avoiding substitution of variables by terms."""
    if not sigma:
        return t
    if isinstance(t, OtVar):
        return sigma.get(t, t)
    if isinstance(t, OtConst):
        return t
    if isinstance(t, OtApp):
        return OtApp(vsubst(sigma, t.fn), vsubst(sigma, t.arg))
    v, body = t.var, t.body
    fb = frees(body)
    inner = {x: u for x, u in sigma.items() if x != v and x in fb}
    if not inner:
        return t
    image_frees = frozenset().union(*(frees(u) for u in inner.values()))
    if v in image_frees:
        v2 = variant(v, image_frees | fb)
        body = vsubst({v: v2}, body)
        v = v2
    return OtAbs(v, vsubst(inner, body))


def inst(theta: dict, t):
    """Type instantiation, renaming binders that would capture after instantiation."""
    if not theta:
        return t
    if isinstance(t, OtVar):
        return OtVar(t.name, ty_subst(theta, t.ty))
    if isinstance(t, OtConst):
        return OtConst(t.name, ty_subst(theta, t.ty))
    if isinstance(t, OtApp):
        return OtApp(inst(theta, t.fn), inst(theta, t.arg))
    v, body = t.var, t.body
    v_new = OtVar(v.name, ty_subst(theta, v.ty))
    others = frees(body) - {v}
    if any(OtVar(w.name, ty_subst(theta, w.ty)) == v_new for w in others):
        taken = {OtVar(w.name, w.ty) for w in others} | {
            OtVar(w.name, ty_subst(theta, w.ty)) for w in others
        }
        v_ren = variant(v, taken)
        body = vsubst({v: v_ren}, body)
        v_new = OtVar(v_ren.name, ty_subst(theta, v.ty))
    return OtAbs(v_new, inst(theta, body))


def aconv(t, u, env=()) -> bool:
    if t is u and not env:
        return True
    if isinstance(t, OtVar):
        if not isinstance(u, OtVar):
            return False
        for a, b in reversed(env):
            if a == t or b == u:
                return a == t and b == u
        return t == u
    if isinstance(t, OtConst):
        return t == u
    if isinstance(t, OtApp):
        return isinstance(u, OtApp) and aconv(t.fn, u.fn, env) and aconv(t.arg, u.arg, env)
    return (
        isinstance(u, OtAbs)
        and t.var.ty == u.var.ty
        and aconv(t.body, u.body, env + ((t.var, u.var),))
    )


def eq_const(ty) -> OtConst:
    return OtConst("=", OtOpApp("->", (ty, OtOpApp("->", (ty, BOOL)))))


def mk_eq(a, b):
    return OtApp(OtApp(eq_const(ty_of(a)), a), b)


def dest_eq(t):
    if isinstance(t, OtApp) and isinstance(t.fn, OtApp):
        c = t.fn.fn
        if isinstance(c, OtConst) and c.name == "=":
            return t.fn.arg, t.arg
    return None


def mk_comb(f, *args):
    for a in args:
        f = OtApp(f, a)
    return f


# -- derivations -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Deriv:
    """A node of the proof DAG; ``args`` mixes terms, types and sub-derivations."""

    rule: str
    args: tuple
    hyps: tuple
    concl: object
    label: str | None = None

    def sequent(self) -> OtSequent:
        return OtSequent(self.hyps, self.concl)

    def premises(self):
        return [a for a in self.args if isinstance(a, Deriv)]


def _union(*hss) -> tuple:
    out: list = []
    for hs in hss:
        for h in hs:
            if not any(aconv(h, o) for o in out):
                out.append(h)
    return tuple(out)


def _minus(hs, t) -> tuple:
    return tuple(h for h in hs if not aconv(h, t))


def _need_eq(rule, th: Deriv):
    parts = dest_eq(th.concl)
    if parts is None:
        raise InternalDerivationError(f"{rule}: {th.concl} is not an equation")
    return parts


def refl(t) -> Deriv:
    return Deriv("refl", (t,), (), mk_eq(t, t))


def assume(t) -> Deriv:
    if ty_of(t) != BOOL:
        raise InternalDerivationError(f"assume: {t} is not boolean")
    return Deriv("assume", (t,), (t,), t)


def beta_conv(t) -> Deriv:
    if not (isinstance(t, OtApp) and isinstance(t.fn, OtAbs)):
        raise InternalDerivationError(f"betaConv: {t} is not a redex")
    return Deriv("betaConv", (t,), (), mk_eq(t, vsubst({t.fn.var: t.arg}, t.fn.body)))


def abs_thm(v: OtVar, th: Deriv) -> Deriv:
    lhs, rhs = _need_eq("absThm", th)
    if any(v in frees(h) for h in th.hyps):
        raise InternalDerivationError(f"absThm: {v.name} is free in a hypothesis")
    return Deriv("absThm", (v, th), th.hyps, mk_eq(OtAbs(v, lhs), OtAbs(v, rhs)))


def app_thm(fth: Deriv, xth: Deriv) -> Deriv:
    f, g = _need_eq("appThm", fth)
    x, y = _need_eq("appThm", xth)
    parts = fn_parts(ty_of(f))
    if parts is None or parts[0] != ty_of(x):
        raise InternalDerivationError(f"appThm: cannot apply {f} to {x}")
    return Deriv("appThm", (fth, xth), _union(fth.hyps, xth.hyps), mk_eq(OtApp(f, x), OtApp(g, y)))


def eq_mp(eq: Deriv, th: Deriv) -> Deriv:
    p, q = _need_eq("eqMp", eq)
    if not aconv(p, th.concl):
        raise InternalDerivationError(f"eqMp: {p} does not match {th.concl}")
    return Deriv("eqMp", (eq, th), _union(eq.hyps, th.hyps), q)


def deduct_antisym(th1: Deriv, th2: Deriv) -> Deriv:
    hyps = _union(_minus(th1.hyps, th2.concl), _minus(th2.hyps, th1.concl))
    return Deriv("deductAntisym", (th1, th2), hyps, mk_eq(th1.concl, th2.concl))


def prove_hyp(th_phi: Deriv, th_psi: Deriv) -> Deriv:
    hyps = _union(th_phi.hyps, _minus(th_psi.hyps, th_phi.concl))
    return Deriv("proveHyp", (th_phi, th_psi), hyps, th_psi.concl)


def subst(theta: dict, sigma: dict, th: Deriv) -> Deriv:
    """Type instantiation by ``theta`` then term substitution by ``sigma``.

    ``sigma`` keys are variables as they appear after type instantiation.
    """
    if not theta and not sigma:
        return th
    for v, u in sigma.items():
        if ty_of(u) != v.ty:
            raise InternalDerivationError(f"subst: {u} does not have the type of {v.name}")

    def go(t):
        return vsubst(sigma, inst(theta, t))

    theta_t = tuple(sorted(theta.items()))
    sigma_t = tuple(sigma.items())
    return Deriv("subst", (theta_t, sigma_t, th), _union(tuple(go(h) for h in th.hyps)), go(th.concl))


def axiom(hyps, concl, label: str | None = None) -> Deriv:
    return Deriv("axiom", (tuple(hyps), concl), tuple(hyps), concl, label)


def define_const(name: str, rhs) -> Deriv:
    if frees(rhs):
        raise InternalDerivationError(f"defineConst: {name} has free variables")
    c = OtConst(name, ty_of(rhs))
    return Deriv("defineConst", (name, rhs), (), mk_eq(c, rhs))


# -- basic derived rules -----------------------------------------------------------


def sym(th: Deriv) -> Deriv:
    """Γ ⊢ a = b  to  Γ ⊢ b = a."""
    a, _ = _need_eq("sym", th)
    eq = eq_const(ty_of(a))
    step = app_thm(app_thm(refl(eq), th), refl(a))  # (a = a) = (b = a)
    return eq_mp(step, refl(a))


def trans(th1: Deriv, th2: Deriv) -> Deriv:
    """Γ ⊢ a = b and Δ ⊢ b = c  to  Γ ∪ Δ ⊢ a = c."""
    a, b = _need_eq("trans", th1)
    b2, _ = _need_eq("trans", th2)
    if not aconv(b, b2):
        raise InternalDerivationError(f"trans: middle terms {b} and {b2} differ")
    step = app_thm(refl(OtApp(eq_const(ty_of(a)), a)), th2)  # (a = b) = (a = c)
    return eq_mp(step, th1)


def trans_chain(first: Deriv, rest) -> Deriv:
    out = first
    for th in rest:
        out = trans(out, th)
    return out


def cong_app_left(th: Deriv, arg) -> Deriv:
    return app_thm(th, refl(arg))


def cong_app_right(fn, th: Deriv) -> Deriv:
    return app_thm(refl(fn), th)


class Fresh:
    """Source of fresh names, shared by one article."""

    def __init__(self, prefix: str = "Z%"):
        self.prefix = prefix
        self._n = count()

    def tyvar(self) -> str:
        return f"{self.prefix}{next(self._n)}"

    def var(self, hint: str, ty, avoid) -> OtVar:
        return variant(OtVar(hint, ty), avoid)
