"""The connectives ⊤, ∧, ⇒, ∀ encoded over equality, and rules derived from them.

By default the four constants are declared and their characterizing equations
assumed as axioms, so a consumer can instantiate them with its own
definitions.  In ``define`` mode the constants are introduced by
``defineConst`` and the same four equations are derived from the definitions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..ot_syntax import BOOL, OtAbs, OtApp, OtConst, OtOpApp, OtVar, OtVarType
from . import hol
from .hol import Deriv, InternalDerivationError, aconv, dest_eq, mk_comb, mk_eq

NAMESPACE = "sttx"
T_NAME = f"{NAMESPACE}.T"
AND_NAME = f"{NAMESPACE}.and"
IMP_NAME = f"{NAMESPACE}.imp"
FORALL_NAME = f"{NAMESPACE}.forall"

A = OtVarType("A")
BB = OtOpApp("->", (BOOL, OtOpApp("->", (BOOL, BOOL))))
SELECTOR = OtOpApp("->", (BB.args[0], BB.args[1]))  # bool -> bool -> bool

T = OtConst(T_NAME, BOOL)
AND = OtConst(AND_NAME, BB)
IMP = OtConst(IMP_NAME, BB)


def forall_const(ty) -> OtConst:
    pred = OtOpApp("->", (ty, BOOL))
    return OtConst(FORALL_NAME, OtOpApp("->", (pred, BOOL)))


_x = OtVar("x", BOOL)
_y = OtVar("y", BOOL)
_f = OtVar("f", BB)
_P = OtVar("P", OtOpApp("->", (A, BOOL)))
_xa = OtVar("x", A)
_ID = OtAbs(_x, _x)


def t_rhs():
    return mk_eq(_ID, _ID)


def and_rhs(x, y):
    return mk_eq(OtAbs(_f, mk_comb(_f, x, y)), OtAbs(_f, mk_comb(_f, T, T)))


def imp_rhs(x, y):
    return mk_eq(mk_comb(AND, x, y), x)


def forall_rhs(p, ty):
    return mk_eq(p, OtAbs(OtVar("x", ty), T))


def axiom_statements() -> dict:
    """The four characterizing equations, with their free variables."""
    return {
        T_NAME: mk_eq(T, t_rhs()),
        AND_NAME: mk_eq(mk_comb(AND, _x, _y), and_rhs(_x, _y)),
        IMP_NAME: mk_eq(mk_comb(IMP, _x, _y), imp_rhs(_x, _y)),
        FORALL_NAME: mk_eq(OtApp(forall_const(A), _P), forall_rhs(_P, A)),
    }


def _unfold(defn: Deriv, args) -> Deriv:
    """From ⊢ c = λv1..vn. b derive ⊢ c v1 .. vn = b by congruence and β."""
    th = defn
    for a in args:
        th = hol.app_thm(th, hol.refl(a))
        _, rhs = dest_eq(th.concl)
        th = hol.trans(th, hol.beta_conv(rhs))
    return th


@dataclass
class Prelude:
    """The prelude's theorems for one article."""

    mode: str = "axiomatize"
    axioms: dict = field(default_factory=dict)  # name -> Deriv of the equation
    definitions: list = field(default_factory=list)  # defineConst derivations
    _cache: dict = field(default_factory=dict)

    @classmethod
    def emit(cls, mode: str = "axiomatize") -> "Prelude":
        p = cls(mode)
        stmts = axiom_statements()
        if mode == "axiomatize":
            for name, stmt in stmts.items():
                p.axioms[name] = hol.axiom((), stmt, label=name)
            return p
        if mode != "define":
            raise ValueError(f"unknown prelude mode {mode}")
        d_t = hol.define_const(T_NAME, t_rhs())
        d_and = hol.define_const(AND_NAME, OtAbs(_x, OtAbs(_y, and_rhs(_x, _y))))
        d_imp = hol.define_const(IMP_NAME, OtAbs(_x, OtAbs(_y, imp_rhs(_x, _y))))
        d_all = hol.define_const(FORALL_NAME, OtAbs(_P, forall_rhs(_P, A)))
        p.definitions = [d_t, d_and, d_imp, d_all]
        derived = {
            T_NAME: d_t,
            AND_NAME: _unfold(d_and, (_x, _y)),
            IMP_NAME: _unfold(d_imp, (_x, _y)),
            FORALL_NAME: _unfold(d_all, (_P,)),
        }
        for name, th in derived.items():
            if not aconv(th.concl, stmts[name]) or th.hyps:
                raise InternalDerivationError(f"prelude equation for {name} came out as {th.concl}")
            p.axioms[name] = th
        return p

    # instances of the four equations

    def and_eq(self, x, y) -> Deriv:
        return hol.subst({}, {_x: x, _y: y}, self.axioms[AND_NAME])

    def imp_eq(self, x, y) -> Deriv:
        return hol.subst({}, {_x: x, _y: y}, self.axioms[IMP_NAME])

    def forall_eq(self, pred) -> Deriv:
        ty = hol.fn_parts(hol.ty_of(pred))[0]
        th = self.axioms[FORALL_NAME]
        if ty != A:
            th = hol.subst({"A": ty}, {}, th)
        return hol.subst({}, {OtVar("P", OtOpApp("->", (ty, BOOL))): pred}, th)

    # derived rules

    def truth(self) -> Deriv:
        """⊢ ⊤"""
        if "truth" not in self._cache:
            self._cache["truth"] = hol.eq_mp(hol.sym(self.axioms[T_NAME]), hol.refl(_ID))
        return self._cache["truth"]

    def eqt_intro(self, th: Deriv) -> Deriv:
        """Γ ⊢ p  to  Γ ⊢ p = ⊤"""
        return hol.deduct_antisym(th, self.truth())

    def eqt_elim(self, th: Deriv) -> Deriv:
        """Γ ⊢ p = ⊤  to  Γ ⊢ p"""
        return hol.eq_mp(hol.sym(th), self.truth())

    def conj_intro(self, th1: Deriv, th2: Deriv) -> Deriv:
        p, q = th1.concl, th2.concl
        avoid = set().union(*(hol.frees(h) for h in th1.hyps + th2.hyps), hol.frees(p), hol.frees(q))
        f = hol.variant(_f, avoid)
        body = hol.app_thm(hol.app_thm(hol.refl(f), self.eqt_intro(th1)), self.eqt_intro(th2))
        lam = hol.abs_thm(f, body)  # (λf. f p q) = (λf. f ⊤ ⊤)
        return hol.eq_mp(hol.sym(self.and_eq(p, q)), lam)

    def _conj_select(self, th: Deriv, first: bool) -> Deriv:
        match th.concl:
            case OtApp(OtApp(OtConst(name, _), p), q) if name == AND_NAME:
                pass
            case _:
                raise InternalDerivationError(f"conjunction expected, got {th.concl}")
        avoid = hol.frees(p) | hol.frees(q)
        a = hol.variant(OtVar("a", BOOL), avoid)
        b = hol.variant(OtVar("b", BOOL), avoid | {a})
        sel = OtAbs(a, OtAbs(b, a if first else b))
        lam = hol.eq_mp(self.and_eq(p, q), th)  # (λf. f p q) = (λf. f ⊤ ⊤)
        applied = hol.app_thm(lam, hol.refl(sel))
        lhs = self._select(OtApp(lam.concl.fn.arg, sel))  # ... = p (or q)
        rhs = self._select(OtApp(lam.concl.arg, sel))  # ... = ⊤
        return self.eqt_elim(hol.trans(hol.trans(hol.sym(lhs), applied), rhs))

    @staticmethod
    def _select(t) -> Deriv:
        """⊢ (λf. f u v) (λa b. s) = s[a, b := u, v] by three β steps."""
        th1 = hol.beta_conv(t)  # = sel u v
        _, mid = dest_eq(th1.concl)
        th2 = hol.app_thm(hol.beta_conv(mid.fn), hol.refl(mid.arg))  # = (λb. s') v
        _, last = dest_eq(th2.concl)
        th3 = hol.beta_conv(last)
        return hol.trans(hol.trans(th1, th2), th3)

    def conj_elim1(self, th: Deriv) -> Deriv:
        return self._conj_select(th, True)

    def conj_elim2(self, th: Deriv) -> Deriv:
        return self._conj_select(th, False)

    def mk_imp(self, p, q):
        return mk_comb(IMP, p, q)

    def mk_forall(self, v: OtVar, body):
        return OtApp(forall_const(v.ty), OtAbs(v, body))
