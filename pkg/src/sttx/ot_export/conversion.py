"""Equational proofs of βδ-conversions.

A rewrite trace is replayed one step at a time.  Each step's redex is
rewritten by ``betaConv`` (β) or by an instance of the constant's defining
equation (δ), the resulting equation is carried up to the whole term by
congruence, and consecutive steps are chained by transitivity.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core.rewrite import Beta, Delta, apply_step
from ..core.terms import Abs, App, Forall, Imp
from ..ot_syntax import OtAbs, OtApp, OtConst, OtVar
from . import hol
from .encode import dest_forall, dest_imp, t_forall_elim, t_forall_intro, t_imp_elim, t_imp_intro
from .hol import Deriv, InternalDerivationError, dest_eq
from .prelude import IMP, Prelude


class PathMismatch(InternalDerivationError):
    pass


class TraceMismatch(InternalDerivationError):
    pass


# A frame records one level of context around the rewritten position.


@dataclass(frozen=True)
class AppL:  # C u
    arg: object


@dataclass(frozen=True)
class AppR:  # t C
    fn: object


@dataclass(frozen=True)
class Lam:  # λx. C
    var: OtVar


@dataclass(frozen=True)
class ImpL:  # C ⇒ u
    rhs: object


@dataclass(frozen=True)
class ImpR:  # t ⇒ C
    lhs: object


@dataclass(frozen=True)
class All:  # ∀x:A. C
    var: OtVar


@dataclass(frozen=True)
class TyAll:  # ∀X. C, which leaves no trace once type quantifiers are erased
    pass


def frames(stt, ot, position) -> tuple[list, object]:
    """Walk ``position`` through an STT term and its HOL image together.

    Returns the frames from the outside in and the HOL subterm reached.
    """
    out = []
    for i in position:
        if isinstance(stt, App) and not isinstance(ot, OtApp):
            raise PathMismatch(f"expected an application, got {ot}")
        match stt, i:
            case App(f, u), 0:
                out.append(AppL(ot.arg))
                stt, ot = f, ot.fn
            case App(f, u), 1:
                out.append(AppR(ot.fn))
                stt, ot = u, ot.arg
            case Imp(l, r), 0:
                p, q = _imp(ot)
                out.append(ImpL(q))
                stt, ot = l, p
            case Imp(l, r), 1:
                p, q = _imp(ot)
                out.append(ImpR(p))
                stt, ot = r, q
            case Abs(_, _, b), 0:
                if not isinstance(ot, OtAbs):
                    raise PathMismatch(f"expected an abstraction, got {ot}")
                out.append(Lam(ot.var))
                stt, ot = b, ot.body
            case Forall(_, _, b), 0:
                lam = dest_forall(ot)
                if lam is None:
                    raise PathMismatch(f"expected a universal, got {ot}")
                out.append(All(lam.var))
                stt, ot = b, lam.body
            case _:
                raise PathMismatch(f"position {list(position)} leaves the term")
    return out, ot


def _imp(ot):
    parts = dest_imp(ot)
    if parts is None:
        raise PathMismatch(f"expected an implication, got {ot}")
    return parts


def congruence(pre: Prelude, eq: Deriv, frame) -> Deriv:
    """Lift ``Γ ⊢ t = u`` through one context frame."""
    match frame:
        case AppL(arg):
            return hol.app_thm(eq, hol.refl(arg))
        case AppR(fn):
            return hol.app_thm(hol.refl(fn), eq)
        case Lam(v):
            return hol.abs_thm(v, eq)
        case TyAll():
            return eq
        case ImpL(q):
            p, p2 = dest_eq(eq.concl)
            return _imp_cong(pre, eq, hol.mk_comb(IMP, p, q), hol.mk_comb(IMP, p2, q), left=True)
        case ImpR(p):
            q, q2 = dest_eq(eq.concl)
            return _imp_cong(pre, eq, hol.mk_comb(IMP, p, q), hol.mk_comb(IMP, p, q2), left=False)
        case All(v):
            return _all_cong(pre, eq, v)
    raise PathMismatch(f"unknown frame {frame!r}")


def _imp_one_way(pre: Prelude, eq: Deriv, have, want, left: bool) -> Deriv:
    """{have} ⊢ want, where the two implications differ by ``eq`` on one side."""
    hp, hq = dest_imp(have)
    wp, wq = dest_imp(want)
    if left:
        # assume wp, move it to hp along eq, apply have, discharge wp
        arg = hol.eq_mp(eq, hol.assume(wp))
        return t_imp_intro(pre, wp, t_imp_elim(pre, hol.assume(have), arg))
    concl = hol.eq_mp(eq, t_imp_elim(pre, hol.assume(have), hol.assume(hp)))
    return t_imp_intro(pre, hp, concl)


def _imp_cong(pre: Prelude, eq: Deriv, before, after, left: bool) -> Deriv:
    fwd = _imp_one_way(pre, hol.sym(eq) if left else eq, before, after, left)
    back = _imp_one_way(pre, eq if left else hol.sym(eq), after, before, left)
    return hol.deduct_antisym(back, fwd)


def _all_cong(pre: Prelude, eq: Deriv, v: OtVar) -> Deriv:
    b, b2 = dest_eq(eq.concl)
    before = pre.mk_forall(v, b)
    after = pre.mk_forall(v, b2)
    fwd = t_forall_intro(pre, v, hol.eq_mp(eq, t_forall_elim(pre, hol.assume(before), v)))
    back = t_forall_intro(pre, v, hol.eq_mp(hol.sym(eq), t_forall_elim(pre, hol.assume(after), v)))
    return hol.deduct_antisym(back, fwd)


def lift(pre: Prelude, eq: Deriv, fs) -> Deriv:
    for f in reversed(fs):
        eq = congruence(pre, eq, f)
    return eq


def conv_to_eq(pre: Prelude, src_stt, src_ot, trace, sig, delta_instance) -> Deriv:
    """``⊢ src = tgt`` following ``trace`` from ``src_stt`` (a monoterm).

    ``delta_instance(const)`` must return ``⊢ c = body`` for the HOL constant
    ``const`` at its instance type.
    """
    if not trace:
        return hol.refl(src_ot)
    steps = []
    stt, ot = src_stt, src_ot
    for step in trace:
        fs, redex = frames(stt, ot, step.position)
        match step.kind:
            case Beta():
                if not (isinstance(redex, OtApp) and isinstance(redex.fn, OtAbs)):
                    raise TraceMismatch(f"β step at {list(step.position)} hits {redex}")
                local = hol.beta_conv(redex)
            case Delta(c):
                if not isinstance(redex, OtConst):
                    raise TraceMismatch(f"δ({c}) at {list(step.position)} hits {redex}")
                local = delta_instance(redex)
            case _:
                raise TraceMismatch(f"unknown step kind {step.kind!r}")
        whole = lift(pre, local, fs)
        lhs, rhs = dest_eq(whole.concl)
        if not hol.aconv(lhs, ot):
            raise TraceMismatch(f"step {step} rewrote {lhs}, expected {ot}")
        steps.append(whole)
        stt = apply_step(stt, step, sig)
        ot = rhs
    return hol.trans_chain(steps[0], steps[1:])
