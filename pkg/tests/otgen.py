"""Random instances of the rule templates and congruence frames.

Each builder returns ``(deriv, hyps, concl)``: the exporter's derivation and
the sequent it should prove, written out by hand.  Binder names are drawn from
a counter, so the naive substitutions below never capture.
"""

from __future__ import annotations

import random

from sttx.ot_export import (
    All, AppL, AppR, ImpL, ImpR, Lam, TyAll, congruence, derive_rule, hol,
)
from sttx.ot_export.conversion import lift
from sttx.ot_export.prelude import FORALL_NAME, IMP
from sttx.ot_syntax import BOOL, OtAbs, OtApp, OtConst, OtOpApp, OtVar, OtVarType

A = OtVarType("A")
B = OtVarType("B")


def fn(a, b):
    return OtOpApp("->", (a, b))


def imp(p, q):
    return OtApp(OtApp(IMP, p), q)


def all_(v, body):
    return OtApp(OtConst(FORALL_NAME, fn(fn(v.ty, BOOL), BOOL)), OtAbs(v, body))


def eq(a, b, ty):
    return OtApp(OtApp(OtConst("=", fn(ty, fn(ty, BOOL))), a), b)


def subst_var(t, v: OtVar, w):
    match t:
        case OtVar():
            return w if t == v else t
        case OtApp(f, x):
            return OtApp(subst_var(f, v, w), subst_var(x, v, w))
        case OtAbs(b, body):
            return t if b == v else OtAbs(b, subst_var(body, v, w))
    return t


def subst_type(ty, theta: dict):
    match ty:
        case OtVarType(n):
            return theta.get(n, ty)
        case OtOpApp(op, args):
            return OtOpApp(op, tuple(subst_type(a, theta) for a in args))


def subst_tyvars(t, theta: dict):
    match t:
        case OtVar(n, ty):
            return OtVar(n, subst_type(ty, theta))
        case OtConst(n, ty):
            return OtConst(n, subst_type(ty, theta))
        case OtApp(f, x):
            return OtApp(subst_tyvars(f, theta), subst_tyvars(x, theta))
        case OtAbs(v, body):
            return OtAbs(subst_tyvars(v, theta), subst_tyvars(body, theta))


class BoolGen:
    """Boolean HOL terms over a few free variables, using ⇒ and ∀ from the prelude."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.n = 0
        self.free_bool = [OtVar(n, BOOL) for n in ("p", "q", "r")]
        self.free_a = [OtVar("a", A), OtVar("b", A)]
        self.preds = [OtVar("P", fn(A, BOOL)), OtVar("Q", fn(A, BOOL))]
        self.g = OtVar("g", fn(BOOL, BOOL))

    def fresh(self, ty, base="v") -> OtVar:
        self.n += 1
        return OtVar(f"{base}{self.n}", ty)

    def elem(self, env):
        return self.rng.choice(self.free_a + [v for v in env if v.ty == A])

    def prop(self, depth=3, env=()):
        rng = self.rng
        bools = self.free_bool + [v for v in env if v.ty == BOOL]
        if depth <= 0:
            return rng.choice(bools + [OtApp(rng.choice(self.preds), self.elem(env))])
        match rng.choice(["var", "pred", "g", "imp", "imp", "all", "redex"]):
            case "var":
                return rng.choice(bools)
            case "pred":
                return OtApp(rng.choice(self.preds), self.elem(env))
            case "g":
                return OtApp(self.g, self.prop(depth - 1, env))
            case "imp":
                return imp(self.prop(depth - 1, env), self.prop(depth - 1, env))
            case "all":
                v = self.fresh(rng.choice([BOOL, A]))
                return all_(v, self.prop(depth - 1, env + (v,)))
            case "redex":
                return self.redex(depth - 1, env)

    def redex(self, depth=2, env=()):
        x = self.fresh(BOOL, "x")
        return OtApp(OtAbs(x, self.prop(depth, env + (x,))), self.prop(depth, env))

    def mentioning(self, v: OtVar, depth=2):
        """A proposition in which ``v`` occurs free."""
        while True:
            t = self.prop(depth, (v,))
            if v in hol.frees(t):
                return t


def contract(redex):
    """The β-contractum of a root redex, by naive substitution."""
    return subst_var(redex.fn.body, redex.fn.var, redex.arg)


# -- the seven templates ---------------------------------------------------------------------


def inst_assume(pre, g: BoolGen):
    p = g.prop()
    return derive_rule("Assume", p), {p}, p


def inst_imp_intro(pre, g: BoolGen):
    p, q = g.prop(2), g.prop(2)
    hyp = g.rng.choice([p, q])
    d = derive_rule("ImpIntro", pre, hyp, derive_rule("Assume", q))
    return d, ({q} - {hyp}), imp(hyp, q)


def inst_imp_elim(pre, g: BoolGen):
    p, q = g.prop(2), g.prop(2)
    d = derive_rule("ImpElim", pre, derive_rule("Assume", imp(p, q)), derive_rule("Assume", p))
    return d, {imp(p, q), p}, q


def inst_forall_intro(pre, g: BoolGen):
    v = g.fresh(g.rng.choice([BOOL, A]))
    t = g.mentioning(v)
    body = derive_rule("ImpIntro", pre, t, derive_rule("Assume", t))
    if g.rng.random() < 0.5:
        extra = g.prop(1)  # carried through as a hypothesis that does not mention v
        body = derive_rule("ImpElim", pre, derive_rule("ImpIntro", pre, extra, body),
                           derive_rule("Assume", extra))
        return derive_rule("ForallIntro", pre, v, body), {extra}, all_(v, imp(t, t))
    return derive_rule("ForallIntro", pre, v, body), set(), all_(v, imp(t, t))


def inst_forall_elim(pre, g: BoolGen):
    v = g.fresh(g.rng.choice([BOOL, A]))
    t = g.mentioning(v)
    w = g.prop(1) if v.ty == BOOL else g.elem(())
    premise = all_(v, t)
    d = derive_rule("ForallElim", pre, derive_rule("Assume", premise), w)
    return d, {premise}, subst_var(t, v, w)


def inst_conv(pre, g: BoolGen):
    phi = g.redex()
    n = contract(phi)
    src_eq = hol.beta_conv(phi)
    if g.rng.random() < 0.5:
        psi, tgt_eq = n, hol.refl(n)
    else:
        y = g.fresh(BOOL, "y")
        psi = OtApp(OtAbs(y, n), g.prop(1))
        tgt_eq = hol.beta_conv(psi)
    d = derive_rule("Conv", derive_rule("Assume", phi), src_eq, tgt_eq)
    return d, {phi}, psi


_WITNESSES = [BOOL, fn(BOOL, BOOL), fn(A, BOOL), B, fn(B, A), OtOpApp("T", ())]


def inst_ty_forall_elim(pre, g: BoolGen):
    names = ("A",) if g.rng.random() < 0.5 else ("A", "B")
    t = g.prop(2)
    if names == ("A", "B"):
        t = imp(t, OtApp(OtVar("R", fn(B, BOOL)), OtVar("c", B)))
    if g.rng.random() < 0.5:
        body, hyps = derive_rule("ImpIntro", pre, t, derive_rule("Assume", t)), set()
        concl = imp(t, t)
    else:
        body, hyps, concl = derive_rule("Assume", t), {t}, t
    witness = g.rng.choice(_WITNESSES)
    d, rest = derive_rule("TyForallElim", hol.Fresh(), body, names, witness)
    theta = {"A": witness}
    if len(names) == 2:
        theta["B"] = OtVarType(rest[0])
    return d, {subst_tyvars(h, theta) for h in hyps}, subst_tyvars(concl, theta)


TEMPLATE_INSTANCES = {
    "Assume": inst_assume,
    "ImpIntro": inst_imp_intro,
    "ImpElim": inst_imp_elim,
    "ForallIntro": inst_forall_intro,
    "ForallElim": inst_forall_elim,
    "Conv": inst_conv,
    "TyForallElim": inst_ty_forall_elim,
}


# -- the eight context frames ----------------------------------------------------------------


def base_eq(g: BoolGen, ty=BOOL):
    """A random equation of type ``ty``: a β step, or an assumed equation."""
    if ty == BOOL and g.rng.random() < 0.5:
        r = g.redex(1)
        return hol.beta_conv(r), set(), r, contract(r)
    if ty == BOOL:
        lhs, rhs = g.prop(1), g.prop(1)
    else:  # bool -> bool
        x, y = g.fresh(BOOL, "x"), g.fresh(BOOL, "x")
        lhs, rhs = OtAbs(x, g.prop(1, (x,))), OtAbs(y, g.prop(1, (y,)))
    e = eq(lhs, rhs, ty)
    return hol.assume(e), {e}, lhs, rhs


def cong_empty(pre, g):
    d, hyps, l, r = base_eq(g)
    return lift(pre, d, []), hyps, eq(l, r, BOOL)


def cong_app_l(pre, g):
    d, hyps, l, r = base_eq(g, fn(BOOL, BOOL))
    u = g.prop(1)
    return congruence(pre, d, AppL(u)), hyps, eq(OtApp(l, u), OtApp(r, u), BOOL)


def cong_app_r(pre, g):
    d, hyps, l, r = base_eq(g)
    f = g.rng.choice([g.g, OtAbs(g.fresh(BOOL, "z"), g.prop(1))])
    return congruence(pre, d, AppR(f)), hyps, eq(OtApp(f, l), OtApp(f, r), BOOL)


def cong_lam(pre, g):
    d, hyps, l, r = base_eq(g)
    v = g.fresh(g.rng.choice([BOOL, A]), "w")
    return congruence(pre, d, Lam(v)), hyps, eq(OtAbs(v, l), OtAbs(v, r), fn(v.ty, BOOL))


def cong_ty_all(pre, g):
    d, hyps, l, r = base_eq(g)
    return congruence(pre, d, TyAll()), hyps, eq(l, r, BOOL)


def cong_imp_l(pre, g):
    d, hyps, l, r = base_eq(g)
    u = g.prop(1)
    return congruence(pre, d, ImpL(u)), hyps, eq(imp(l, u), imp(r, u), BOOL)


def cong_imp_r(pre, g):
    d, hyps, l, r = base_eq(g)
    t = g.prop(1)
    return congruence(pre, d, ImpR(t)), hyps, eq(imp(t, l), imp(t, r), BOOL)


def cong_all(pre, g):
    d, hyps, l, r = base_eq(g)
    v = g.fresh(g.rng.choice([BOOL, A]), "w")
    return congruence(pre, d, All(v)), hyps, eq(all_(v, l), all_(v, r), BOOL)


CONGRUENCE_INSTANCES = {
    "empty": cong_empty,
    "AppL": cong_app_l,
    "AppR": cong_app_r,
    "Lam": cong_lam,
    "TyAll": cong_ty_all,
    "ImpL": cong_imp_l,
    "ImpR": cong_imp_r,
    "All": cong_all,
}


# -- running instances through the article checker ---------------------------------------------


def check_in_article(pre, items):
    """Write ``items`` (name, deriv, hyps, concl) to one article and check it.

    Returns a list of failure messages; empty when every export matches its
    hand-written sequent and the article assumes nothing beyond the prelude.
    """
    from sttx.ot_check import alpha_key, run_article
    from sttx.ot_export import ArticlePlan, Exported, write_article
    from sttx.ot_export.prelude import axiom_statements

    plan = ArticlePlan(pre, [], [Exported(n, d, d.sequent) for n, d, _, _ in items])
    result = run_article(write_article(plan))
    failures = []
    allowed = {alpha_key(s) for s in axiom_statements().values()} if pre.mode == "axiomatize" \
        else set()
    for name, seq in result.assumptions:
        if seq.hyps or alpha_key(seq.concl) not in allowed:
            failures.append(f"unexpected assumption {name}: {seq}")
    for name, _, hyps, concl in items:
        got = result.export_named(name)
        if alpha_key(got.concl) != alpha_key(concl):
            failures.append(f"{name}: concluded {got.concl}, expected {concl}")
        if {alpha_key(h) for h in got.hyps} != {alpha_key(h) for h in hyps}:
            failures.append(f"{name}: hypotheses {got.hyps}, expected {hyps}")
    return failures


def instances(builder, pre, count, seed):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        d, hyps, concl = builder(pre, BoolGen(rng))
        out.append((f"i{i}", d, hyps, concl))
    return out
