"""An LCF-style HOL kernel over named OpenTheory terms.

Alpha-equivalence and substitution go through a nameless image of the term:
bound occurrences become indices, so comparing or instantiating never has to
reason about names.  Converting back picks binder names that avoid capture.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..ot_syntax import BOOL, OtAbs, OtApp, OtConst, OtOpApp, OtSequent, OtVar, OtVarType


class RuleError(Exception):
    """A kernel rule was applied to arguments of the wrong shape."""

    def __init__(self, rule: str, message: str):
        super().__init__(f"{rule}: {message}")
        self.rule = rule


# -- types ---------------------------------------------------------------------


def dest_fun(ty):
    if isinstance(ty, OtOpApp) and ty.op == "->" and len(ty.args) == 2:
        return ty.args
    return None


def type_of(t):
    match t:
        case OtVar(_, ty) | OtConst(_, ty):
            return ty
        case OtAbs(v, b):
            return OtOpApp("->", (v.ty, type_of(b)))
        case OtApp(f, _):
            parts = dest_fun(type_of(f))
            if parts is None:
                raise RuleError("type", f"applying a non-function {f}")
            return parts[1]
    raise RuleError("type", f"not a term: {t!r}")


def mk_app(f, x):
    parts = dest_fun(type_of(f))
    if parts is None or parts[0] != type_of(x):
        raise RuleError("appTerm", f"cannot apply {f} to {x}")
    return OtApp(f, x)


def type_inst(theta: dict, ty):
    match ty:
        case OtVarType(n):
            return theta.get(n, ty)
        case OtOpApp(op, args):
            return OtOpApp(op, tuple(type_inst(theta, a) for a in args))
    raise RuleError("subst", f"not a type: {ty!r}")


def type_vars_of_type(ty, acc: set):
    match ty:
        case OtVarType(n):
            acc.add(n)
        case OtOpApp(_, args):
            for a in args:
                type_vars_of_type(a, acc)
    return acc


# -- nameless images -----------------------------------------------------------
# ("f", name, ty) free variable, ("k", name, ty) constant, ("b", i) bound,
# ("a", fn, arg) application, ("l", hint, ty, body) abstraction.


def nameless(t, env=()):
    match t:
        case OtVar(n, ty):
            for i, v in enumerate(reversed(env)):
                if v == t:
                    return ("b", i)
            return ("f", n, ty)
        case OtConst(n, ty):
            return ("k", n, ty)
        case OtApp(f, x):
            return ("a", nameless(f, env), nameless(x, env))
        case OtAbs(v, b):
            return ("l", v.name, v.ty, nameless(b, env + (v,)))
    raise RuleError("term", f"not a term: {t!r}")


def _strip(d):
    match d[0]:
        case "a":
            return ("a", _strip(d[1]), _strip(d[2]))
        case "l":
            return ("l", d[2], _strip(d[3]))
    return d


def alpha_key(t):
    """Hashable key identifying ``t`` up to alpha-equivalence."""
    return _strip(nameless(t))


def aconv(t, u) -> bool:
    return t is u or alpha_key(t) == alpha_key(u)


def _free_in_nameless(d, acc: set):
    match d[0]:
        case "f":
            acc.add((d[1], d[2]))
        case "a":
            _free_in_nameless(d[1], acc)
            _free_in_nameless(d[2], acc)
        case "l":
            _free_in_nameless(d[3], acc)
    return acc


def _open(d, depth, name, ty):
    """Replace bound index ``depth`` by the free variable (name, ty)."""
    match d[0]:
        case "b":
            return ("f", name, ty) if d[1] == depth else d
        case "a":
            return ("a", _open(d[1], depth, name, ty), _open(d[2], depth, name, ty))
        case "l":
            return ("l", d[1], d[2], _open(d[3], depth + 1, name, ty))
    return d


def named(d):
    """Back from the nameless image, renaming binders that would capture."""
    match d[0]:
        case "f":
            return OtVar(d[1], d[2])
        case "k":
            return OtConst(d[1], d[2])
        case "a":
            return OtApp(named(d[1]), named(d[2]))
        case "l":
            _, hint, ty, body = d
            taken = {n for n, t in _free_in_nameless(body, set()) if t == ty}
            name = hint
            i = 0
            while name in taken:
                i += 1
                name = f"{hint}{i}"
            return OtAbs(OtVar(name, ty), named(_open(body, 0, name, ty)))
    raise RuleError("term", f"bad nameless image {d!r}")


def _map_nameless(d, tyf, varf):
    match d[0]:
        case "f":
            return varf(d[1], tyf(d[2]))
        case "k":
            return ("k", d[1], tyf(d[2]))
        case "a":
            return ("a", _map_nameless(d[1], tyf, varf), _map_nameless(d[2], tyf, varf))
        case "l":
            return ("l", d[1], tyf(d[2]), _map_nameless(d[3], tyf, varf))
    return d


def inst_type(theta: dict, t):
    if not theta:
        return t
    d = _map_nameless(nameless(t), lambda ty: type_inst(theta, ty), lambda n, ty: ("f", n, ty))
    return named(d)


def subst_vars(sigma: dict, t):
    """Simultaneous substitution; ``sigma`` maps OtVar to terms of the same type."""
    if not sigma:
        return t
    images = {(v.name, v.ty): nameless(u) for v, u in sigma.items()}

    def var(n, ty):
        return images.get((n, ty), ("f", n, ty))

    return named(_map_nameless(nameless(t), lambda ty: ty, var))


def free_vars(t) -> set:
    return {OtVar(n, ty) for n, ty in _free_in_nameless(nameless(t), set())}


# -- equality ------------------------------------------------------------------


def mk_eq(lhs, rhs):
    ty = type_of(lhs)
    if type_of(rhs) != ty:
        raise RuleError("=", f"sides have different types: {lhs}, {rhs}")
    return OtApp(OtApp(OtConst("=", OtOpApp("->", (ty, OtOpApp("->", (ty, BOOL))))), lhs), rhs)


def dest_eq(t):
    match t:
        case OtApp(OtApp(OtConst("=", _), lhs), rhs):
            return lhs, rhs
    return None


# -- theorems ------------------------------------------------------------------


@dataclass(frozen=True)
class Thm:
    """A theorem.  ``hyps`` maps alpha keys to representative terms."""

    hyps: dict = field(hash=False)
    concl: object
    rule: str

    def sequent(self) -> OtSequent:
        return OtSequent(tuple(self.hyps[k] for k in sorted(self.hyps, key=repr)), self.concl)


def _bool(rule, t):
    if type_of(t) != BOOL:
        raise RuleError(rule, f"{t} is not a proposition")


def _union(*hss) -> dict:
    out: dict = {}
    for hs in hss:
        for k, v in hs.items():
            out.setdefault(k, v)
    return out


def _minus(hs: dict, t) -> dict:
    k = alpha_key(t)
    return {a: b for a, b in hs.items() if a != k}


def refl(t) -> Thm:
    return Thm({}, mk_eq(t, t), "refl")


def assume(t) -> Thm:
    _bool("assume", t)
    return Thm({alpha_key(t): t}, t, "assume")


def axiom(hyps, concl) -> Thm:
    for h in list(hyps) + [concl]:
        _bool("axiom", h)
    return Thm({alpha_key(h): h for h in hyps}, concl, "axiom")


def eq_mp(eq: Thm, th: Thm) -> Thm:
    parts = dest_eq(eq.concl)
    if parts is None or not aconv(parts[0], th.concl):
        raise RuleError("eqMp", f"{eq.concl} does not rewrite {th.concl}")
    return Thm(_union(eq.hyps, th.hyps), parts[1], "eqMp")


def abs_thm(v, th: Thm) -> Thm:
    if not isinstance(v, OtVar):
        raise RuleError("absThm", f"{v} is not a variable")
    parts = dest_eq(th.concl)
    if parts is None:
        raise RuleError("absThm", f"{th.concl} is not an equation")
    if any(v in free_vars(h) for h in th.hyps.values()):
        raise RuleError("absThm", f"{v.name} is free in a hypothesis")
    return Thm(dict(th.hyps), mk_eq(OtAbs(v, parts[0]), OtAbs(v, parts[1])), "absThm")


def app_thm(fth: Thm, xth: Thm) -> Thm:
    f = dest_eq(fth.concl)
    x = dest_eq(xth.concl)
    if f is None or x is None:
        raise RuleError("appThm", "premises must be equations")
    try:
        concl = mk_eq(mk_app(f[0], x[0]), mk_app(f[1], x[1]))
    except RuleError as exc:
        raise RuleError("appThm", str(exc)) from None
    return Thm(_union(fth.hyps, xth.hyps), concl, "appThm")


def beta_conv(t) -> Thm:
    match t:
        case OtApp(OtAbs(v, body), arg):
            return Thm({}, mk_eq(t, subst_vars({v: arg}, body)), "betaConv")
    raise RuleError("betaConv", f"{t} is not a β-redex")


def deduct_antisym(th1: Thm, th2: Thm) -> Thm:
    _bool("deductAntisym", th1.concl)
    hyps = _union(_minus(th1.hyps, th2.concl), _minus(th2.hyps, th1.concl))
    return Thm(hyps, mk_eq(th1.concl, th2.concl), "deductAntisym")


def prove_hyp(th_phi: Thm, th_psi: Thm) -> Thm:
    """From Γ ⊢ φ and Δ ⊢ ψ infer Γ ∪ (Δ − {φ}) ⊢ ψ."""
    return Thm(_union(th_phi.hyps, _minus(th_psi.hyps, th_phi.concl)), th_psi.concl, "proveHyp")


def subst(theta: dict, sigma: dict, th: Thm) -> Thm:
    """Type instantiation ``theta`` first, then term substitution ``sigma``."""
    for v, u in sigma.items():
        if type_of(u) != v.ty:
            raise RuleError("subst", f"{u} does not have the type of {v.name}")

    def go(t):
        return subst_vars(sigma, inst_type(theta, t))

    hyps = {}
    for h in th.hyps.values():
        h2 = go(h)
        hyps.setdefault(alpha_key(h2), h2)
    return Thm(hyps, go(th.concl), "subst")


def define_const(name: str, rhs):
    """``⊢ c = rhs`` for a fresh constant c; rhs must be closed."""
    if free_vars(rhs):
        raise RuleError("defineConst", f"definition of {name} has free variables")
    tyvars = type_vars_of_type(type_of(rhs), set())
    found: set = set()
    _term_tyvars(rhs, found)
    if not found <= tyvars:
        raise RuleError("defineConst", f"definition of {name} has hidden type variables")
    c = OtConst(name, type_of(rhs))
    return c, Thm({}, mk_eq(c, rhs), "defineConst")


def _term_tyvars(t, acc: set):
    match t:
        case OtVar(_, ty) | OtConst(_, ty):
            type_vars_of_type(ty, acc)
        case OtApp(f, x):
            _term_tyvars(f, acc)
            _term_tyvars(x, acc)
        case OtAbs(v, b):
            type_vars_of_type(v.ty, acc)
            _term_tyvars(b, acc)
    return acc


def define_type_op(name: str, abs_name: str, rep_name: str, tyvars, th: Thm):
    """Carve a new type out of ``⊢ P t``; returns (op, abs, rep, absRep, repAbs)."""
    if th.hyps:
        raise RuleError("defineTypeOp", "witness theorem has hypotheses")
    match th.concl:
        case OtApp(pred, _):
            pass
        case _:
            raise RuleError("defineTypeOp", f"{th.concl} is not an application")
    if free_vars(pred):
        raise RuleError("defineTypeOp", "predicate has free variables")
    used = _term_tyvars(pred, set())
    if used != set(tyvars) or len(set(tyvars)) != len(tyvars):
        raise RuleError("defineTypeOp", "type variable list does not match the predicate")
    rep_ty = dest_fun(type_of(pred))[0]
    new_ty = OtOpApp(name, tuple(OtVarType(v) for v in tyvars))
    abs_c = OtConst(abs_name, OtOpApp("->", (rep_ty, new_ty)))
    rep_c = OtConst(rep_name, OtOpApp("->", (new_ty, rep_ty)))
    a = OtVar("a", new_ty)
    r = OtVar("r", rep_ty)
    abs_rep = Thm({}, mk_eq(OtApp(abs_c, OtApp(rep_c, a)), a), "defineTypeOp")
    rep_abs = Thm(
        {},
        mk_eq(OtApp(pred, r), mk_eq(OtApp(rep_c, OtApp(abs_c, r)), r)),
        "defineTypeOp",
    )
    return new_ty, abs_c, rep_c, abs_rep, rep_abs


RULES = {
    "refl": refl,
    "assume": assume,
    "axiom": axiom,
    "eqMp": eq_mp,
    "absThm": abs_thm,
    "appThm": app_thm,
    "betaConv": beta_conv,
    "deductAntisym": deduct_antisym,
    "proveHyp": prove_hyp,
    "subst": subst,
}


def kernel_rule(tag: str, *args) -> Thm:
    """Apply the named inference rule; arguments follow the rule's function."""
    rule = RULES.get(tag)
    if rule is None:
        raise RuleError(tag, "no such rule")
    return rule(*args)
