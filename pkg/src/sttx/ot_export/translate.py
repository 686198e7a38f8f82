"""Kernel theorems to HOL derivations.

The proof tree is walked once.  Each node yields the STT proposition it
proves (needed for conversion traces and shapes) and a :class:`Proved`.
Connectives go through the prelude templates, ``Conv`` nodes become
equational proofs of their traces, and type quantifiers are erased.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core.rewrite import conv
from ..core.signature import AxiomDecl, Context, CstDefn, Signature, ThmDefn, TyOpDecl
from ..core.terms import (
    Forall, Imp, PolyTerm, abstract, as_poly_term, close_tybinder, instantiate,
    instantiate_outer_tybinder,
)
from ..kernel.proofs import (
    Assume, Conv, ForallElim, ForallIntro, ImpElim, ImpIntro, Ref, Theorem, TyForallElim,
    TyForallIntro, find_hyp,
)
from ..ot_syntax import OtSequent, OtVar, OtVarType
from . import detype, hol
from .conversion import conv_to_eq
from .detype import Proved
from .encode import (
    ExportError, Naming, Translator, t_assume, t_conv, t_forall_elim, t_forall_intro,
    t_imp_elim, t_imp_intro,
)
from .hol import Deriv, InternalDerivationError
from .prelude import Prelude


@dataclass(frozen=True)
class Exported:
    name: str
    deriv: Deriv
    sequent: OtSequent


@dataclass
class ArticlePlan:
    """Everything an article contains, in emission order."""

    prelude: Prelude
    axioms: list = field(default_factory=list)  # Deriv (library axioms and δ equations)
    exports: list = field(default_factory=list)  # Exported


def _distinct_names(hints, avoid) -> tuple:
    out: list[str] = []
    for h in hints:
        name = h or "X"
        while name in avoid or name in out:
            name += "'"
        out.append(name)
    return tuple(out)


def _match_type(pattern, ty, theta: dict) -> bool:
    if isinstance(pattern, OtVarType):
        if pattern.name in theta:
            return theta[pattern.name] == ty
        theta[pattern.name] = ty
        return True
    return (
        not isinstance(ty, OtVarType) and ty.op == pattern.op and len(ty.args) == len(pattern.args)
        and all(_match_type(a, b, theta) for a, b in zip(pattern.args, ty.args))
    )


class Exporter:
    def __init__(self, sig: Signature, theory: str, mode: str = "axiomatize",
                 prelude: Prelude | None = None, fresh: hol.Fresh | None = None):
        self.sig = sig
        self.theory = theory
        self.mode = mode
        self.naming = Naming(theory)
        self.tr = Translator(sig, self.naming)
        self.prelude = prelude or Prelude.emit(mode)
        self.fresh = fresh or hol.Fresh()
        self._delta: dict = {}  # const name -> (Deriv, names)
        self._axioms: dict = {}  # axiom name -> Proved
        self._lemmas: dict = {}  # lemma name -> Proved
        self.emitted_axioms: list = []

    # -- statements --------------------------------------------------------------

    def canonical_names(self, hints, avoid=()) -> tuple:
        return _distinct_names([self.naming.tyvar(h) for h in hints], set(avoid))

    def statement(self, prop: PolyTerm, names, vars=None):
        return self.tr.term(prop.body, vars or {}, tuple(names))

    def delta_theorem(self, c: str):
        """``⊢ c = body`` at the definition's generic type, and its type names."""
        if c not in self._delta:
            entry = self.sig.const(c)
            if not isinstance(entry, CstDefn):
                raise ExportError(f"{c} has no definition", "conversion")
            names = self.canonical_names(entry.ty.binders)
            self._check_no_phantom(c, entry.ty, names)
            lhs = hol.OtConst(self.naming.const(c), self.tr.type(entry.ty.body, names))
            rhs = self.tr.term(entry.body.body, {}, names)
            if hol.ty_of(rhs) != lhs.ty:
                raise ExportError(f"definition of {c} does not have its declared type")
            if self.mode == "define":
                d = hol.define_const(lhs.name, rhs)
            else:
                d = hol.axiom((), hol.mk_eq(lhs, rhs), label=f"{lhs.name}.def")
            self._delta[c] = (d, names)
            self.emitted_axioms.append(d)
        return self._delta[c]

    def _check_no_phantom(self, c, ty, names):
        body_ty = self.tr.type(ty.body, names)
        if set(names) - hol.ty_vars(body_ty):
            raise ExportError(
                f"{c} has a type parameter that does not occur in its type; "
                "HOL constants cannot carry such parameters"
            )

    def delta_instance(self, const) -> Deriv:
        stt_name = const.name[len(self.theory) + 1:]
        d, names = self.delta_theorem(stt_name)
        generic = hol.dest_eq(d.concl)[0]
        theta: dict = {}
        if not _match_type(generic.ty, const.ty, theta):
            raise InternalDerivationError(f"{const} is not an instance of {generic}")
        theta = {k: v for k, v in theta.items() if v != OtVarType(k)}
        return hol.subst(theta, {}, d)

    def axiom_theorem(self, name: str) -> Proved:
        if name not in self._axioms:
            entry = self.sig.proof_const(name)
            prop = as_poly_term(entry.prop)
            names = self.canonical_names(prop.tybinders)
            d = hol.axiom((), self.statement(prop, names), label=self.naming.const(name))
            self.emitted_axioms.append(d)
            self._axioms[name] = Proved(d, names)
        return self._axioms[name]

    # -- proofs --------------------------------------------------------------------

    def proof(self, p, ctx: Context, hyps: tuple) -> tuple[PolyTerm, Proved]:
        vars = {x: self.tr.type(a) for x, a in ctx.vars.items()}
        match p:
            case Assume(prop):
                h = find_hyp(self.sig, hyps, prop)
                if h is None:
                    raise InternalDerivationError(f"{prop} is not a hypothesis")
                d = t_assume(self.tr.term(h, vars))
                if h != prop:
                    d = self._conv(d, PolyTerm((), h), PolyTerm((), prop), (), vars)
                return PolyTerm((), prop), Proved(d)
            case ImpIntro(hyp, body):
                q, pb = self.proof(body, ctx, hyps + (hyp,))
                d = t_imp_intro(self.prelude, self.tr.term(hyp, vars), pb.deriv)
                return PolyTerm((), Imp(hyp, q.body)), Proved(d)
            case ImpElim(fn, arg):
                f, pf = self.proof(fn, ctx, hyps)
                _, pa = self.proof(arg, ctx, hyps)
                d = t_imp_elim(self.prelude, pf.deriv, pa.deriv)
                return PolyTerm((), f.body.rhs), Proved(d)
            case ForallIntro(x, annot, body):
                q, pb = self.proof(body, ctx.push_var(x, annot), hyps)
                v = OtVar(x, self.tr.type(annot))
                d = t_forall_intro(self.prelude, v, pb.deriv)
                return PolyTerm((), Forall(x, annot, abstract(q.body, x))), Proved(d)
            case ForallElim(body, witness):
                f, pb = self.proof(body, ctx, hyps)
                d = t_forall_elim(self.prelude, pb.deriv, self.tr.term(witness, vars))
                return PolyTerm((), instantiate(f.body.body, witness)), Proved(d)
            case TyForallIntro(x, body):
                inner, pb = self.proof(body, ctx.push_tyvar(x), hyps)
                return close_tybinder(inner, x), detype.intro(pb, self.naming.tyvar(x))
            case TyForallElim(body, witness):
                inner, pb = self.proof(body, ctx, hyps)
                return (
                    instantiate_outer_tybinder(inner, witness),
                    detype.elim(self.fresh, pb, self.tr.type(witness)),
                )
            case Conv(body, target):
                src, pb = self.proof(body, ctx, hyps)
                target = as_poly_term(target)
                d = self._conv(pb.deriv, src, target, pb.names, vars)
                return target, Proved(d, pb.names)
            case Ref(name):
                entry = self.sig.proof_const(name)
                if isinstance(entry, AxiomDecl):
                    proved = self.axiom_theorem(name)
                elif isinstance(entry, ThmDefn):
                    if name not in self._lemmas:
                        raise ExportError(f"lemma {name} is used before it is exported")
                    proved = self._lemmas[name]
                else:
                    raise ExportError(f"{name} is not an axiom or lemma")
                avoid = {self.naming.tyvar(x) for x in ctx.tyvars}
                return as_poly_term(entry.prop), detype.rename_away(self.fresh, proved, avoid)
        raise InternalDerivationError(f"not a proof term: {p!r}")

    def _conv(self, d: Deriv, src: PolyTerm, tgt: PolyTerm, names, vars) -> Deriv:
        traces = conv(src, tgt, self.sig)
        if traces is None:
            raise InternalDerivationError(f"{src} and {tgt} are not convertible")
        src_ot = self.tr.term(src.body, vars, names)
        tgt_ot = self.tr.term(tgt.body, vars, names)
        if not hol.aconv(src_ot, d.concl):
            raise InternalDerivationError(f"conversion source {src_ot} does not match {d.concl}")
        e1 = self.conv_eq(src.body, src_ot, traces[0])
        e2 = self.conv_eq(tgt.body, tgt_ot, traces[1])
        return t_conv(d, e1, e2)

    def conv_eq(self, stt, ot, trace) -> Deriv:
        return conv_to_eq(self.prelude, stt, ot, trace, self.sig, self.delta_instance)

    # -- theorems --------------------------------------------------------------------

    def translate_theorem(self, thm: Theorem, name: str | None = None) -> Exported:
        """Derivation and exported sequent for a kernel theorem."""
        try:
            prop, proved = self.proof(thm.proof, thm.ctx, tuple(thm.hyps))
        except InternalDerivationError as exc:
            raise ExportError(str(exc), "translate") from exc
        ctx_tyvars = {self.naming.tyvar(x) for x in thm.ctx.tyvars}
        canon = self.canonical_names(thm.concl.tybinders, ctx_tyvars)
        proved = detype.rename_to(proved, canon)
        vars = {x: self.tr.type(a) for x, a in thm.ctx.vars.items()}
        expected = self.statement(thm.concl, canon, vars)
        if not hol.aconv(proved.deriv.concl, expected):
            raise ExportError(
                f"derived {proved.deriv.concl}, expected {expected}", "detype"
            )
        if name is not None:
            self._lemmas[name] = proved
        label = self.naming.const(name) if name else "theorem"
        return Exported(label, proved.deriv, OtSequent(proved.deriv.hyps, proved.deriv.concl))

    def translate_theory(self, theorems=None) -> ArticlePlan:
        """Every axiom, definition and lemma of the signature, in order.

        ``theorems`` maps lemma names to kernel theorems; when omitted they
        are rebuilt from the signature's proofs.
        """
        plan = ArticlePlan(self.prelude)
        theorems = theorems or {}
        for entry in self.sig.entries:
            match entry:
                case TyOpDecl():
                    pass
                case CstDefn(name):
                    self.delta_theorem(name)
                case AxiomDecl(name):
                    self.axiom_theorem(name)
                case ThmDefn(name, prop, proof):
                    thm = theorems.get(name) or Theorem(
                        self.sig, Context(), (), as_poly_term(prop), proof
                    )
                    plan.exports.append(self.translate_theorem(thm, name))
        plan.axioms = list(self.emitted_axioms)
        return plan


def translate_theorem(thm: Theorem, theory: str = "thy", mode: str = "axiomatize") -> ArticlePlan:
    ex = Exporter(thm.sig, theory, mode)
    exported = ex.translate_theorem(thm)
    return ArticlePlan(ex.prelude, list(ex.emitted_axioms), [exported])


def translate_theory(sig: Signature, theory: str, mode: str = "axiomatize") -> ArticlePlan:
    return Exporter(sig, theory, mode).translate_theory()
