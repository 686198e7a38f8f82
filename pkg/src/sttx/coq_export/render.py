"""Coq source text for checked STT∀βδ theories.

Every STT∀βδ construct becomes a product or an abstraction: type quantifiers
and term quantifiers are ``forall``, implications and arrows are ``->``,
introductions are ``fun`` and eliminations are applications.  Conversion
nodes are dropped since Coq's own conversion covers βδ.
"""

from __future__ import annotations

from dataclasses import dataclass

from .. import __version__
from ..core.rewrite import conv
from ..core.signature import AxiomDecl, CstDecl, CstDefn, Signature, ThmDefn, TyOpDecl
from ..core.terms import (
    Abs, App, Bound, ConstApp, Forall, Fun, Imp, OpApp, PolyTerm, PolyType, Prop, TBound,
    TVar, Var, as_poly_term, as_poly_type, constants, spine,
)
from ..kernel.proofs import (
    Assume, Conv, ForallElim, ForallIntro, ImpElim, ImpIntro, Ref, TyForallElim,
    TyForallIntro,
)
from .mangle import Mangler, sanitize


@dataclass(frozen=True)
class Notation:
    """How a constant is written instead of its name: ``infix`` for binary
    operators (type arguments are left implicit) or ``symbol`` for a literal."""

    kind: str
    text: str


# The notations used by the exported arithmetic library.
ARITH_NOTATIONS = {"eq": Notation("infix", "="), "zero": Notation("symbol", "0")}

# Precedence contexts: where a rendered term is placed.
_TOP, _IMP_LHS, _OPERAND, _ARG, _HEAD = range(5)


def _wrap(text: str, kind: str, where: int) -> str:
    need = {
        _TOP: False,
        _IMP_LHS: kind in ("arrow", "binder"),
        _OPERAND: kind != "atom",
        _ARG: kind != "atom",
        _HEAD: kind not in ("atom", "app"),
    }[where]
    return f"({text})" if need else text


class Scope:
    """Display names for bound and free variables."""

    def __init__(self, taken=(), tyenv=(), env=(), names=None):
        self.taken = frozenset(taken)
        self.tyenv = tuple(tyenv)  # names for TBound, outermost first
        self.env = tuple(env)  # names for Bound, outermost first
        self.names = dict(names or {})  # free kernel name -> display name

    def visible(self) -> set:
        return set(self.taken) | set(self.tyenv) | set(self.env) | set(self.names.values())

    def fresh(self, hint: str) -> str:
        base = sanitize(hint or "x")
        used = self.visible()
        out, i = base, 0
        while out in used:
            i += 1
            out = f"{base}{i}"
        return out

    def bind(self, display: str) -> "Scope":
        return Scope(self.taken, self.tyenv, self.env + (display,), self.names)

    def bind_ty(self, display: str) -> "Scope":
        return Scope(self.taken, self.tyenv + (display,), self.env, self.names)

    def name(self, kernel: str, display: str) -> "Scope":
        return Scope(self.taken, self.tyenv, self.env, {**self.names, kernel: display})


def _binder_groups(binders) -> list[tuple[list, str]]:
    """Consecutive binders with equal types, as (names, type text)."""
    groups: list[tuple[list, str]] = []
    for x, ty in binders:
        if groups and groups[-1][1] == ty:
            groups[-1][0].append(x)
        else:
            groups.append(([x], ty))
    return groups


def _fun(binders, body: str) -> str:
    parts = " ".join(f"({' '.join(xs)}:{ty})" for xs, ty in _binder_groups(binders))
    return f"fun {parts} => {body}"


def _forall(binders, body: str, atomic) -> str:
    groups = _binder_groups(binders)
    if len(groups) == 1 and atomic(groups[0][1]):
        xs, ty = groups[0]
        return f"forall {' '.join(xs)} : {ty}, {body}"
    parts = " ".join(f"({' '.join(xs)}:{ty})" for xs, ty in groups)
    return f"forall {parts}, {body}"


class Renderer:
    def __init__(self, sig: Signature, mangler: Mangler | None = None, notations=None):
        self.sig = sig
        self.notations = dict(notations or {})
        self.m = mangler or Mangler()
        for e in sig:
            self.m.add(e.name)

    def cname(self, c: str) -> str:
        return self.m.add(c)

    def scope(self) -> Scope:
        return Scope(self.m.used)

    # -- types ----------------------------------------------------------------

    def mono(self, ty, sc: Scope) -> tuple[str, str]:
        match ty:
            case Prop():
                return "Prop", "atom"
            case TBound(i):
                return sc.tyenv[len(sc.tyenv) - 1 - i], "atom"
            case TVar(x):
                return sc.names.get(x, x), "atom"
            case Fun(a, b):
                sa, ka = self.mono(a, sc)
                sb, _ = self.mono(b, sc)
                return f"{_wrap(sa, ka, _IMP_LHS)} -> {sb}", "arrow"
            case OpApp(op, args):
                if not args:
                    return self.cname(op.name), "atom"
                parts = [_wrap(*self.mono(a, sc), _ARG) for a in args]
                return " ".join([self.cname(op.name)] + parts), "app"
        raise TypeError(f"not a type: {ty!r}")

    def type_text(self, ty, sc: Scope) -> str:
        return self.mono(ty, sc)[0]

    def poly_type(self, pt, sc: Scope | None = None) -> str:
        pt = as_poly_type(pt)
        sc = sc or self.scope()
        names = []
        for h in pt.binders:
            x = sc.fresh(h or "X")
            names.append((x, "Type"))
            sc = sc.bind_ty(x)
        body = self.type_text(pt.body, sc)
        return _forall(names, body, _atomic) if names else body

    # -- terms ----------------------------------------------------------------

    def term(self, t, sc: Scope) -> tuple[str, str]:
        match t:
            case Var(x):
                return sc.names.get(x, x), "atom"
            case Bound(i):
                return sc.env[len(sc.env) - 1 - i], "atom"
            case Imp(l, r):
                sl, kl = self.term(l, sc)
                sr, _ = self.term(r, sc)
                return f"{_wrap(sl, kl, _IMP_LHS)} -> {sr}", "arrow"
            case Abs():
                binders, body_sc, body = self._abs_chain(t, sc)
                return _fun(binders, self.term(body, body_sc)[0]), "binder"
            case Forall():
                binders = []
                while isinstance(t, Forall):
                    x = sc.fresh(t.var)
                    binders.append((x, self.type_text(t.annot, sc)))
                    sc = sc.bind(x)
                    t = t.body
                return _forall(binders, self.term(t, sc)[0], _atomic), "binder"
            case App() | ConstApp():
                return self._app(t, sc)
        raise TypeError(f"not a term: {t!r}")

    def _abs_chain(self, t, sc: Scope, binders=None):
        binders = list(binders or [])
        while isinstance(t, Abs):
            x = sc.fresh(t.var)
            binders.append((x, self.type_text(t.annot, sc)))
            sc = sc.bind(x)
            t = t.body
        return binders, sc, t

    def _app(self, t, sc: Scope) -> tuple[str, str]:
        head, args = spine(t)
        if isinstance(head, ConstApp) and head.cst in self.notations:
            n = self.notations[head.cst]
            if n.kind == "symbol" and not args:
                return n.text, "atom"
            if n.kind == "infix" and len(args) == 2:
                l, r = (_wrap(*self.term(a, sc), _OPERAND) for a in args)
                return f"{l} {n.text} {r}", "infix"
        if isinstance(head, ConstApp):
            parts = [self.cname(head.cst)] + [
                _wrap(*self.mono(a, sc), _ARG) for a in head.tyargs
            ]
            h, kind = " ".join(parts), ("app" if head.tyargs else "atom")
            if head.cst in self.notations:
                h, kind = self._notation_fallback(head, sc), "atom"
        else:
            h, kind = self.term(head, sc)
        if not args:
            return h, kind
        parts = [_wrap(h, kind, _HEAD)] + [_wrap(*self.term(a, sc), _ARG) for a in args]
        return " ".join(parts), "app"

    def _notation_fallback(self, head: ConstApp, sc: Scope) -> str:
        n = self.notations[head.cst]
        if n.kind == "symbol":
            return n.text
        a, b = sc.fresh("a"), sc.fresh("b") + "'"
        return f"(fun {a} {b} => {a} {n.text} {b})"

    def term_text(self, t, sc: Scope | None = None) -> str:
        return self.term(t, sc or self.scope())[0]

    def prop(self, pt, sc: Scope | None = None) -> tuple[str, tuple]:
        """The statement text and the display names of its type binders."""
        pt = as_poly_term(pt)
        sc = sc or self.scope()
        names = []
        for h in pt.tybinders:
            x = sc.fresh(h or "X")
            names.append(x)
            sc = sc.bind_ty(x)
        body = self.term(pt.body, sc)[0]
        if names:
            body = _forall([(x, "Type") for x in names], body, _atomic)
        return body, tuple(names)

    def definition_body(self, body: PolyTerm, ty: PolyType) -> str:
        sc = self.scope()
        binders = []
        for h in ty.binders:
            x = sc.fresh(h or "X")
            binders.append((x, "Type"))
            sc = sc.bind_ty(x)
        binders, sc, inner = self._abs_chain(body.body, sc, binders)
        text = self.term(inner, sc)[0]
        return _fun(binders, text) if binders else text

    # -- proofs ----------------------------------------------------------------

    def proof(self, p, sc: Scope, hyps=(), tynames=()) -> tuple[str, str]:
        """``hyps`` pairs hypotheses with display names, innermost last;
        ``tynames`` are preferred names for leading type abstractions."""
        binders = []
        while True:
            match p:
                case Conv(body, _):
                    p = body
                case TyForallIntro(x, body):
                    hint = tynames[0] if tynames else x
                    tynames = tynames[1:]
                    d = sc.fresh(hint)
                    binders.append((d, "Type"))
                    sc = sc.name(x, d)
                    p = body
                case ForallIntro(x, a, body):
                    d = sc.fresh(x)
                    binders.append((d, self.type_text(a, sc)))
                    sc = sc.name(x, d)
                    p = body
                case ImpIntro(hyp, body):
                    d = sc.fresh("h")
                    binders.append((d, self.term_text(hyp, sc)))
                    hyps = hyps + ((hyp, d),)
                    sc = Scope(sc.taken | {d}, sc.tyenv, sc.env, sc.names)
                    p = body
                case _:
                    break
        text, kind = self._elim(p, sc, hyps)
        if binders:
            return _fun(binders, text), "binder"
        return text, kind

    def _elim(self, p, sc: Scope, hyps) -> tuple[str, str]:
        args = []
        while True:
            match p:
                case Conv(body, _):
                    p = body
                case ImpElim(f, a):
                    args.append(_wrap(*self.proof(a, sc, hyps), _ARG))
                    p = f
                case ForallElim(body, w):
                    args.append(_wrap(*self.term(w, sc), _ARG))
                    p = body
                case TyForallElim(body, w):
                    args.append(_wrap(*self.mono(w, sc), _ARG))
                    p = body
                case _:
                    break
        match p:
            case Assume(prop):
                head = self._hyp(prop, hyps)
            case Ref(name):
                head = self.cname(name)
            case _:
                head, kind = self.proof(p, sc, hyps)
                head = _wrap(head, kind, _HEAD)
        if not args:
            return head, "atom"
        return " ".join([head] + args[::-1]), "app"

    def _hyp(self, prop, hyps) -> str:
        for h, d in reversed(hyps):
            if h == prop:
                return d
        for h, d in reversed(hyps):
            if conv(h, prop, self.sig) is not None:
                return d
        raise ValueError(f"{prop} is not a hypothesis")

    def proof_text(self, p, statement=None) -> str:
        tynames = as_poly_term(statement).tybinders if statement is not None else ()
        return self.proof(p, self.scope(), (), tuple(tynames))[0]


def _atomic(ty_text: str) -> bool:
    return " " not in ty_text


# -- module-level operations ---------------------------------------------------------


def render_type(ty, sig: Signature | None = None, notations=None) -> str:
    return Renderer(sig or Signature(), notations=notations).poly_type(ty)


def render_term(t, sig: Signature | None = None, notations=None) -> str:
    r = Renderer(sig or Signature(), notations=notations)
    if isinstance(t, PolyTerm):
        return r.prop(t)[0]
    return r.term_text(t)


def render_proof(p, statement=None, sig: Signature | None = None, notations=None) -> str:
    return Renderer(sig or Signature(), notations=notations).proof_text(p, statement)


def _sig_definitions(sig: Signature, notations) -> set:
    """Defined constants that the module type itself needs."""
    needed: set = set()
    for e in reversed(sig.entries):
        match e:
            case AxiomDecl(_, prop):
                needed |= constants(as_poly_term(prop).body)
            case CstDefn(name, _, body) if name in needed:
                needed |= constants(body.body)
    return {n for n in needed if isinstance(sig.get(n), CstDefn)}


def _defining_axiom(name: str, sig: Signature) -> bool:
    """Axioms named ``<c>_body...`` after a declared constant ``c``."""
    for e in sig:
        if isinstance(e, CstDecl) and name.startswith(e.name + "_body"):
            return True
    return False


def render_theory(sig: Signature, theorems=None, name: str = "theory", notations=None) -> str:
    """A module type of parameters and axioms, and a functor over it."""
    theorems = theorems or {}
    notations = dict(notations or {})
    m = Mangler(reserved={"M"})
    module = m.add(name)
    m.used |= {f"{module}_SIG", f"{module}_FUN"}
    for e in sig:
        if isinstance(e, AxiomDecl) and _defining_axiom(e.name, sig):
            m.table[e.name] = m.add("sym_eq_" + e.name)
        else:
            m.add(e.name)
    r = Renderer(sig, m, notations)
    in_sig = _sig_definitions(sig, notations)
    sig_lines, fun_lines = [], []
    for e in sig:
        match e:
            case TyOpDecl(op):
                ty = " -> ".join(["Type"] * (op.arity + 1))
                sig_lines.append(f"Parameter {m[op.name]} : {ty}.")
            case CstDecl(c, ty) if c not in notations:
                sig_lines.append(f"Parameter {m[c]} : {r.poly_type(ty)}.")
            case CstDecl():
                pass
            case CstDefn(c, ty, body):
                line = f"Definition {m[c]} : {r.poly_type(ty)} := {r.definition_body(body, ty)}."
                (sig_lines if c in in_sig else fun_lines).append(line)
            case AxiomDecl(a, prop):
                sig_lines.append(f"Axiom {m[a]} : {r.prop(prop)[0]}.")
            case ThmDefn(t, prop, pf):
                thm = theorems.get(t)
                pf = thm.proof if thm is not None else pf
                fun_lines.append(
                    f"Definition {m[t]} : {r.prop(prop)[0]} := {r.proof_text(pf, prop)}."
                )
    header = [f"(* Generated by sttx {__version__} from theory {name}."]
    renamed = [(a, b) for a, b in m.table.items() if a != b]
    if renamed:
        header.append("   Identifier mangling (source name -> Coq name):")
        header += [f"     {a} -> {b}" for a, b in renamed]
    else:
        header.append("   Identifier mangling: none.")
    header[-1] += " *)"
    out = header + ["", f"Module Type {module}_SIG."]
    out += [f"  {line}" for line in sig_lines]
    out += [f"End {module}_SIG.", "", f"Module {module}_FUN (M : {module}_SIG).", "  Import M."]
    out += [f"  {line}" for line in fun_lines]
    out += [f"End {module}_FUN.", ""]
    return "\n".join(out)
