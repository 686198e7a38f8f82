"""Decoding ``.sdk`` terms into STT∀βδ types, terms, propositions and proofs.

Bound Dedukti variables are mapped to unique kernel names and abstracted
again at their binder, so shadowing in the source never confuses indices.
The ``p`` coercion may be omitted in the input (``term A`` for
``term (p A)``); the encoder always writes it.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core.rewrite import conv, head_normalize
from ..core.signature import (
    AxiomDecl, Context, CstDecl, CstDefn, Signature, ThmDefn, TyOpDecl,
)
from ..core.terms import (
    PROP, Abs, Forall, Fun, Imp, OpApp, PolyTerm, PolyType, TVar, TypeOpRef, Var, abstract,
    app, as_poly_term, close_tybinder, const, instantiate, instantiate_outer_tybinder,
    ty_abstract,
)
from ..kernel.errors import KernelError, TypeMismatch
from ..kernel.proofs import (
    Assume, Conv, ForallElim, ForallIntro, ImpElim, ImpIntro, Ref, TyForallElim,
    TyForallIntro, check_proof,
)
from ..kernel.theory import check_entry
from ..kernel.typing import infer_mono, infer_type
from .syntax import (
    Definition, DkApp, DkLam, DkPi, DkSym, DkVar, dk_spine, parse_dk, show_dk,
)


class DecodeError(Exception):
    def __init__(self, message: str, term=None):
        where = f" in {show_dk(term)}" if term is not None else ""
        super().__init__(message + where)
        self.term = term


class NotATypeEncoding(DecodeError):
    pass


class NonPrenex(NotATypeEncoding):
    pass


class NotATermEncoding(DecodeError):
    pass


class NotAProofEncoding(DecodeError):
    pass


class DecodeUnsound(DecodeError):
    """A decoded proof failed the kernel: a bug in the decoder, not the input."""


class EntryDecodeError(DecodeError):
    def __init__(self, name: str, line: int, cause: Exception):
        Exception.__init__(self, f"line {line}: {name}: {cause}")
        self.name = name
        self.line = line
        self.cause = cause


@dataclass(frozen=True)
class _Binding:
    kind: str  # "type", "term" or "proof"
    name: str  # kernel name, unique in scope
    data: object = None  # MonoType of a term variable, proposition of a hypothesis


class Scope:
    """Dedukti variable names in scope, innermost last."""

    def __init__(self, frames=()):
        self.frames = tuple(frames)

    def lookup(self, x: str) -> _Binding | None:
        for name, b in reversed(self.frames):
            if name == x:
                return b
        return None

    def used(self) -> set:
        return {b.name for _, b in self.frames}

    def push(self, x: str, kind: str, data=None) -> tuple["Scope", str]:
        used = self.used()
        u, i = x, 0
        while u in used:
            i += 1
            u = f"{x}_{i}"
        return Scope(self.frames + ((x, _Binding(kind, u, data)),)), u

    def context(self) -> Context:
        ctx = Context()
        for _, b in self.frames:
            if b.kind == "type":
                ctx = ctx.push_tyvar(b.name)
            elif b.kind == "term":
                ctx = ctx.push_var(b.name, b.data)
        return ctx

    def hyps(self) -> tuple:
        return tuple(b.data for _, b in self.frames if b.kind == "proof")


def _is(d, sym: str) -> bool:
    return isinstance(d, DkSym) and d.name == sym


def _is_type_annot(d) -> bool:
    return _is(d, "type")


class Decoder:
    def __init__(self, sig: Signature | None = None):
        self.sig = sig if sig is not None else Signature()

    # -- types -------------------------------------------------------------------

    def mono(self, d, scope: Scope):
        head, args = dk_spine(d)
        match head:
            case DkVar(x):
                b = scope.lookup(x)
                if b is None or b.kind != "type" or args:
                    raise NotATypeEncoding(f"{x} is not a type variable", d)
                return TVar(b.name)
            case DkSym("prop") if not args:
                return PROP
            case DkSym("arr"):
                if len(args) != 2:
                    raise NotATypeEncoding(f"arr takes 2 arguments, got {len(args)}", d)
                return Fun(self.mono(args[0], scope), self.mono(args[1], scope))
            case DkSym("forallKtype" | "p"):
                raise NonPrenex(f"{head.name} inside a simple type", d)
            case DkSym(name) if name not in _RESERVED:
                op = self.sig.tyop(name)
                if op is None:
                    if name in self.sig:
                        raise NotATypeEncoding(f"{name} is not a type operator", d)
                    op = TypeOpRef(name, len(args))
                if op.arity != len(args):
                    raise NotATypeEncoding(
                        f"{name} takes {op.arity} arguments, got {len(args)}", d
                    )
                return OpApp(op, tuple(self.mono(a, scope) for a in args))
        raise NotATypeEncoding("not a simple type", d)

    def ptype(self, d, scope: Scope):
        """A ``ptype`` expression: ``p A``, or a bare ``A``."""
        match d:
            case DkApp(DkSym("p"), a):
                return self.mono(a, scope)
        return self.mono(d, scope)

    def annot(self, d, scope: Scope):
        """The simple type in a binder annotation ``term (p A)``."""
        match d:
            case DkApp(DkSym("term"), t):
                return self.ptype(t, scope)
        raise NotATypeEncoding("binder annotation is not 'term A'", d)

    def poly_type(self, d, scope: Scope | None = None) -> PolyType:
        scope = scope or Scope()
        match d:
            case DkApp(DkSym("term"), t):
                pass
            case _:
                raise NotATypeEncoding("expected 'term T'", d)
        names = []
        while True:
            match t:
                case DkApp(DkSym("forallKtype"), DkLam(x, annot, body)) if _is_type_annot(annot):
                    scope, u = scope.push(x, "type")
                    names.append((x, u))
                    t = body
                case DkApp(DkSym("forallKtype"), _):
                    raise NotATypeEncoding("forallKtype needs a λ over type", t)
                case _:
                    break
        body = self.ptype(t, scope)
        return PolyType(tuple(x for x, _ in names), ty_abstract(body, [u for _, u in names]))

    # -- terms -------------------------------------------------------------------

    def term(self, d, scope: Scope):
        head, args = dk_spine(d)
        match head:
            case DkVar(x):
                b = scope.lookup(x)
                if b is None:
                    raise NotATermEncoding(f"unbound variable {x}", d)
                if b.kind != "term":
                    raise NotATermEncoding(f"{x} is a {b.kind} variable, not a term", d)
                return app(Var(b.name), *[self.term(a, scope) for a in args])
            case DkSym("impl"):
                if len(args) != 2:
                    raise NotATermEncoding("impl takes 2 arguments", d)
                return Imp(self.term(args[0], scope), self.term(args[1], scope))
            case DkSym("forall"):
                if len(args) != 2:
                    raise NotATermEncoding("forall takes 2 arguments", d)
                return self._forall(args[0], args[1], scope, d)
            case DkSym("forallKprop"):
                raise NonPrenex("forallKprop below the top of a proposition", d)
            case DkSym(name) if name not in _RESERVED:
                entry = self.sig.get(name)
                if not isinstance(entry, (CstDecl, CstDefn)):
                    raise NotATermEncoding(f"{name} is not a term constant", d)
                n = len(entry.ty.binders)
                if len(args) < n:
                    raise NotATermEncoding(f"{name} needs {n} type arguments", d)
                tyargs = [self.mono(a, scope) for a in args[:n]]
                return app(const(name, *tyargs), *[self.term(a, scope) for a in args[n:]])
            case DkLam(x, annot, body):
                a = self.annot(annot, scope)
                inner, u = scope.push(x, "term", a)
                f = Abs(x, a, abstract(self.term(body, inner), u))
                return app(f, *[self.term(a, scope) for a in args])
        raise NotATermEncoding("not a term", d)

    def _forall(self, ty, pred, scope: Scope, d):
        a = self.ptype(ty, scope)
        match pred:
            case DkLam(x, annot, body):
                if self.annot(annot, scope) != a:
                    raise NotATermEncoding("forall domain and binder annotation differ", d)
                inner, u = scope.push(x, "term", a)
                return Forall(x, a, abstract(self.term(body, inner), u))
        # η-short predicate: ∀x:A. P x
        fn = self.term(pred, scope)
        _, u = scope.push("x", "term", a)
        return Forall("x", a, abstract(app(fn, Var(u)), u))

    def prop(self, d, scope: Scope | None = None) -> PolyTerm:
        """A proposition, with ``forallKprop`` prefixes as prenex type binders."""
        scope = scope or Scope()
        names = []
        while True:
            match d:
                case DkApp(DkSym("forallKprop"), DkLam(x, annot, body)) if _is_type_annot(annot):
                    scope, u = scope.push(x, "type")
                    names.append((x, u))
                    d = body
                case DkApp(DkSym("forallKprop"), _):
                    raise NotATermEncoding("forallKprop needs a λ over type", d)
                case _:
                    break
        return _close(PolyTerm((), self.term(d, scope)), names)

    def poly_term(self, d, expected: PolyType, scope: Scope | None = None) -> PolyTerm:
        scope = scope or Scope()
        if expected.body == PROP and not expected.binders:
            t = self.prop(d, scope)
        else:
            names = []
            for _ in expected.binders:
                match d:
                    case DkLam(x, annot, body) if _is_type_annot(annot):
                        scope, u = scope.push(x, "type")
                        names.append((x, u))
                        d = body
                    case _:
                        raise NotATermEncoding("expected a λ over type", d)
            t = _close(PolyTerm((), self.term(d, scope)), names)
        try:
            found = infer_type(self.sig, scope.context(), t)
        except KernelError as exc:
            raise TypeMismatch(expected, f"an ill-typed term ({exc})") from exc
        if found != expected:
            raise TypeMismatch(expected, found)
        return t

    # -- proofs -------------------------------------------------------------------

    def check(self, d, goal: PolyTerm, scope: Scope):
        """A proof term of exactly ``goal``."""
        if goal.tybinders:
            match d:
                case DkLam(x, annot, body) if _is_type_annot(annot):
                    inner, u = scope.push(x, "type")
                    sub = instantiate_outer_tybinder(goal, TVar(u))
                    return TyForallIntro(u, self.check(body, sub, inner))
            return self._settle(*self.infer(d, scope), goal, d, scope)
        g = goal.body
        match d:
            case DkLam(x, annot, body) if _is(annot, "type"):
                raise NotAProofEncoding("type abstraction against a monomorphic goal", d)
            case DkLam(x, DkApp(DkSym("proof"), phi), body):
                g = self._expose(g, Imp, scope)
                if g is None:
                    raise NotAProofEncoding(f"hypothesis λ against goal {goal.body}", d)
                hyp = self.term(phi, scope)
                inner, _ = scope.push(x, "proof", hyp)
                p = ImpIntro(hyp, self.check(body, PolyTerm((), g.rhs), inner))
                return self._settle(p, PolyTerm((), Imp(hyp, g.rhs)), goal, d, scope)
            case DkLam(x, annot, body):
                g = self._expose(g, Forall, scope)
                if g is None:
                    raise NotAProofEncoding(f"term λ against goal {goal.body}", d)
                a = self.annot(annot, scope)
                if a != g.annot:
                    raise NotAProofEncoding(f"binder type {a} differs from {g.annot}", d)
                inner, u = scope.push(x, "term", a)
                sub = instantiate(g.body, Var(u))
                p = ForallIntro(u, a, self.check(body, PolyTerm((), sub), inner))
                return self._settle(p, PolyTerm((), g), goal, d, scope)
        return self._settle(*self.infer(d, scope), goal, d, scope)

    def _expose(self, g, shape, scope: Scope):
        """``g`` itself when it has ``shape``, else its head normal form if that does."""
        if isinstance(g, shape):
            return g
        nf, _ = head_normalize(g, self.sig)
        return nf if isinstance(nf, shape) else None

    def _settle(self, p, proved: PolyTerm, goal: PolyTerm, d, scope: Scope):
        if proved == goal:
            return p
        if conv(proved, goal, self.sig) is not None:
            return Conv(p, goal if goal.tybinders else goal.body)
        raise NotAProofEncoding(f"proves {proved}, expected {goal}", d)

    def infer(self, d, scope: Scope):
        """A proof term and the proposition it proves."""
        head, args = dk_spine(d)
        match head:
            case DkVar(x):
                b = scope.lookup(x)
                if b is None:
                    raise NotAProofEncoding(f"unbound variable {x}", d)
                if b.kind != "proof":
                    raise NotAProofEncoding(f"{x} is a {b.kind} variable, not a proof", d)
                p, prop = Assume(b.data), PolyTerm((), b.data)
            case DkSym(name):
                entry = self.sig.get(name)
                if not isinstance(entry, (AxiomDecl, ThmDefn)):
                    raise NotAProofEncoding(f"{name} is not an axiom or lemma", d)
                p, prop = Ref(name), as_poly_term(entry.prop)
            case _:
                raise NotAProofEncoding("cannot infer the statement of this proof", d)
        for a in args:
            if prop.tybinders:
                w = self._mono_arg(a, scope, d)
                p, prop = TyForallElim(p, w), instantiate_outer_tybinder(prop, w)
                continue
            g = prop.body
            if not isinstance(g, (Forall, Imp)):
                nf, _ = head_normalize(g, self.sig)
                if not isinstance(nf, (Forall, Imp)):
                    raise NotAProofEncoding(f"{g} is applied but is not ∀ or ⇒", d)
                p, g = Conv(p, nf), nf
            if isinstance(g, Forall):
                w = self._term_arg(a, scope, d)
                try:
                    wty = infer_mono(self.sig, scope.context(), w)
                except KernelError as exc:
                    raise NotAProofEncoding(f"ill-typed witness: {exc}", a) from exc
                if wty != g.annot:
                    raise NotAProofEncoding(f"witness has type {wty}, expected {g.annot}", a)
                p, prop = ForallElim(p, w), PolyTerm((), instantiate(g.body, w))
            else:
                q = self.check(a, PolyTerm((), g.lhs), scope)
                p, prop = ImpElim(p, q), PolyTerm((), g.rhs)
        return p, prop

    def _mono_arg(self, a, scope, d):
        try:
            return self.mono(a, scope)
        except NotATypeEncoding as exc:
            raise NotAProofEncoding(f"expected a type argument: {exc}", d) from exc

    def _term_arg(self, a, scope, d):
        try:
            return self.term(a, scope)
        except DecodeError as exc:
            raise NotAProofEncoding(f"expected a term argument: {exc}", d) from exc

    def proof(self, d, goal, scope: Scope | None = None):
        scope = scope or Scope()
        goal = as_poly_term(goal)
        p = self.check(d, goal, scope)
        try:
            check_proof(self.sig, scope.context(), scope.hyps(), p, goal)
        except KernelError as exc:
            raise DecodeUnsound(f"decoded proof rejected by the kernel: {exc}", d) from exc
        return p

    # -- entries --------------------------------------------------------------------

    def entry(self, e):
        ty = e.type
        match ty:
            case DkApp(DkSym("term"), _):
                pt = self.poly_type(ty)
                if isinstance(e, Definition):
                    return CstDefn(e.name, pt, self.poly_term(e.body, pt))
                return CstDecl(e.name, pt)
            case DkApp(DkSym("proof"), phi):
                prop = self.prop(phi)
                if isinstance(e, Definition):
                    return ThmDefn(e.name, prop, self.proof(e.body, prop))
                return AxiomDecl(e.name, prop)
        arity = _tyop_arity(ty)
        if arity is None:
            raise DecodeError("entry type is neither a type operator, 'term' nor 'proof'", ty)
        if isinstance(e, Definition):
            raise DecodeError("type operators cannot be defined", ty)
        return TyOpDecl(TypeOpRef(e.name, arity))


_RESERVED = frozenset(
    "type arr prop ptype p term impl forallKtype proof forall forallKprop".split()
)


def _tyop_arity(ty) -> int | None:
    n = 0
    while isinstance(ty, DkPi):
        if not _is(ty.annot, "type"):
            return None
        n += 1
        ty = ty.body
    return n if _is(ty, "type") else None


def _close(pt: PolyTerm, names) -> PolyTerm:
    for x, u in reversed(names):
        pt = close_tybinder(pt, u)
        pt = PolyTerm((x,) + pt.tybinders[1:], pt.body)
    return pt


# -- module-level operations ------------------------------------------------------------


def decode_type(d, sig: Signature | None = None) -> PolyType:
    return Decoder(sig).poly_type(d)


def decode_term(d, expected: PolyType, sig: Signature | None = None) -> PolyTerm:
    return Decoder(sig).poly_term(d, expected)


def decode_proof(d, goal, sig: Signature | None = None):
    return Decoder(sig).proof(d, goal)


@dataclass(frozen=True)
class DecodedTheory:
    sig: Signature
    theorems: dict  # lemma name -> kernel Theorem


def decode_entries(entries) -> DecodedTheory:
    """Decode and kernel-check entries in order."""
    sig = Signature()
    theorems = {}
    for e in entries:
        if e.name in _RESERVED:
            raise EntryDecodeError(e.name, e.line, DecodeError("name is a signature symbol"))
        try:
            entry = Decoder(sig).entry(e)
            thm = check_entry(sig, entry)
        except (DecodeError, KernelError) as exc:
            raise EntryDecodeError(e.name, e.line, exc) from exc
        sig = sig.extend(entry)
        if thm is not None:
            theorems[e.name] = thm
    return DecodedTheory(sig, theorems)


def load_sdk(text: str) -> DecodedTheory:
    return decode_entries(parse_dk(text))


__all__ = [
    "DecodeError", "DecodeUnsound", "DecodedTheory", "Decoder", "EntryDecodeError",
    "NonPrenex", "NotAProofEncoding", "NotATermEncoding", "NotATypeEncoding", "Scope",
    "decode_entries", "decode_proof", "decode_term", "decode_type", "load_sdk",
]
