"""STT∀βδ signatures and proofs to ``.sdk`` entries.

Binder names are kept when they are free in scope and renamed otherwise;
``Conv`` nodes vanish because the Dedukti side converts implicitly.
"""

from __future__ import annotations

import re

from ..core.rewrite import conv
from ..core.signature import AxiomDecl, CstDecl, CstDefn, Signature, ThmDefn, TyOpDecl
from ..core.terms import (
    Abs, App, Bound, ConstApp, Forall, Fun, Imp, OpApp, PolyTerm, PolyType, Prop, TBound,
    TVar, Var, as_poly_term,
)
from ..kernel.proofs import (
    Assume, Conv, ForallElim, ForallIntro, ImpElim, ImpIntro, Ref, TyForallElim,
    TyForallIntro,
)
from .syntax import (
    SIGNATURE_SYMBOLS, Declaration, Definition, DkLam, DkPi, DkSym, DkVar, dk_app,
)

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")

TYPE = DkSym("type")


def _term_of(ptype):
    return dk_app(DkSym("term"), ptype)


class Encoder:
    def __init__(self, sig: Signature):
        self.sig = sig
        self.taken = set(SIGNATURE_SYMBOLS) | {e.name for e in sig}

    def fresh(self, hint: str, scope: dict) -> str:
        base = hint if hint and _IDENT.match(hint) else "x"
        used = self.taken | set(scope.values())
        name, i = base, 0
        while name in used:
            i += 1
            name = f"{base}{i}"
        return name

    # -- types ------------------------------------------------------------------

    def mono(self, ty, tynames=(), tyfree=None):
        tyfree = tyfree or {}
        match ty:
            case Prop():
                return DkSym("prop")
            case Fun(a, b):
                return dk_app(DkSym("arr"), self.mono(a, tynames, tyfree), self.mono(b, tynames, tyfree))
            case OpApp(op, args):
                return dk_app(DkSym(op.name), *[self.mono(a, tynames, tyfree) for a in args])
            case TBound(i):
                return DkVar(tynames[len(tynames) - 1 - i])
            case TVar(x):
                return DkVar(tyfree.get(x, x))
        raise TypeError(f"not a type: {ty!r}")

    def ptype(self, ty, tynames=(), tyfree=None):
        return dk_app(DkSym("p"), self.mono(ty, tynames, tyfree))

    def poly_type(self, pt: PolyType):
        names = self._binder_names(pt.binders, {})
        body = self.ptype(pt.body, names)
        for x in reversed(names):
            body = dk_app(DkSym("forallKtype"), DkLam(x, TYPE, body))
        return _term_of(body)

    def _binder_names(self, hints, scope: dict) -> tuple:
        out: list[str] = []
        for h in hints:
            n = self.fresh(h or "X", {**scope, **{k: k for k in out}})
            out.append(n)
        return tuple(out)

    # -- terms ------------------------------------------------------------------

    def term(self, t, env=(), tynames=(), scope=None):
        """``env`` names the de Bruijn binders (innermost last); ``scope`` maps
        free kernel names (term and type) to Dedukti names."""
        scope = scope or {}
        match t:
            case Var(x):
                return DkVar(scope.get(x, x))
            case Bound(i):
                return DkVar(env[len(env) - 1 - i])
            case ConstApp(c, tyargs):
                return dk_app(DkSym(c), *[self.mono(a, tynames, scope) for a in tyargs])
            case App(f, u):
                return dk_app(self.term(f, env, tynames, scope), self.term(u, env, tynames, scope))
            case Imp(l, r):
                return dk_app(
                    DkSym("impl"),
                    self.term(l, env, tynames, scope),
                    self.term(r, env, tynames, scope),
                )
            case Abs(x, a, b) | Forall(x, a, b):
                inner_scope = {**scope, **{n: n for n in env}, **{n: n for n in tynames}}
                y = self.fresh(x, inner_scope)
                lam = DkLam(
                    y, _term_of(self.ptype(a, tynames, scope)),
                    self.term(b, env + (y,), tynames, scope),
                )
                if isinstance(t, Abs):
                    return lam
                return dk_app(DkSym("forall"), self.mono(a, tynames, scope), lam)
        raise TypeError(f"not a term: {t!r}")

    def prop(self, pt, scope=None):
        pt = as_poly_term(pt)
        scope = scope or {}
        names = self._binder_names(pt.tybinders, scope)
        body = self.term(pt.body, (), names, scope)
        for x in reversed(names):
            body = dk_app(DkSym("forallKprop"), DkLam(x, TYPE, body))
        return body

    def definition_body(self, pt: PolyTerm):
        names = self._binder_names(pt.tybinders, {})
        body = self.term(pt.body, (), names, {})
        for x in reversed(names):
            body = DkLam(x, TYPE, body)
        return body

    # -- proofs -----------------------------------------------------------------

    def proof(self, p, scope=None, hyps=()):
        """``hyps`` pairs each hypothesis with its Dedukti name, innermost last."""
        scope = scope or {}
        match p:
            case Assume(prop):
                for h, name in reversed(hyps):
                    if h == prop:
                        return DkVar(name)
                for h, name in reversed(hyps):
                    if conv(h, prop, self.sig) is not None:
                        return DkVar(name)
                raise ValueError(f"{prop} is not a hypothesis")
            case ImpIntro(hyp, body):
                h = self.fresh("h", scope)
                inner = {**scope, f" h{len(hyps)}": h}
                annot = dk_app(DkSym("proof"), self.term(hyp, (), (), scope))
                return DkLam(h, annot, self.proof(body, inner, hyps + ((hyp, h),)))
            case ForallIntro(x, a, body):
                y = self.fresh(x, scope)
                annot = _term_of(self.ptype(a, (), scope))
                return DkLam(y, annot, self.proof(body, {**scope, x: y}, hyps))
            case TyForallIntro(x, body):
                y = self.fresh(x, scope)
                return DkLam(y, TYPE, self.proof(body, {**scope, x: y}, hyps))
            case ImpElim(f, a):
                return dk_app(self.proof(f, scope, hyps), self.proof(a, scope, hyps))
            case ForallElim(body, w):
                return dk_app(self.proof(body, scope, hyps), self.term(w, (), (), scope))
            case TyForallElim(body, w):
                return dk_app(self.proof(body, scope, hyps), self.mono(w, (), scope))
            case Conv(body, _):
                return self.proof(body, scope, hyps)
            case Ref(name):
                return DkSym(name)
        raise TypeError(f"not a proof term: {p!r}")

    # -- entries ------------------------------------------------------------------

    def entry(self, e, proof=None):
        match e:
            case TyOpDecl(op):
                ty = TYPE
                for _ in range(op.arity):
                    ty = DkPi(None, TYPE, ty)
                return Declaration(op.name, ty)
            case CstDecl(name, ty):
                return Declaration(name, self.poly_type(ty))
            case CstDefn(name, ty, body):
                return Definition(name, self.poly_type(ty), self.definition_body(body))
            case AxiomDecl(name, prop):
                return Declaration(name, dk_app(DkSym("proof"), self.prop(prop)))
            case ThmDefn(name, prop, pf):
                return Definition(
                    name, dk_app(DkSym("proof"), self.prop(prop)),
                    self.proof(proof if proof is not None else pf),
                )
        raise TypeError(f"not a signature entry: {e!r}")


def encode(sig: Signature, theorems=None) -> list:
    """``.sdk`` entries for every entry of ``sig``.

    ``theorems`` optionally maps lemma names to kernel theorems whose proofs
    replace the stored ones.
    """
    theorems = theorems or {}
    out = []
    for i, e in enumerate(sig.entries):
        enc = Encoder(sig.prefix(i))
        thm = theorems.get(e.name) if isinstance(e, ThmDefn) else None
        out.append(enc.entry(e, thm.proof if thm is not None else None))
    return out


def encode_type(pt, sig: Signature | None = None):
    return Encoder(sig or Signature()).poly_type(pt)


def encode_prop(pt, sig: Signature | None = None):
    return Encoder(sig or Signature()).prop(pt)


def encode_proof(p, sig: Signature | None = None):
    return Encoder(sig or Signature()).proof(p)
