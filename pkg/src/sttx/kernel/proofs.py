"""Proof terms and the proof checker.

The available figure text only names S ASSUME, S ⇒I, S ∀I, S CONV and S ∀E;
the remaining rules below (⇒E, term-level ∀E, use of a named axiom/lemma)
are reconstructions needed to prove anything non-trivial.  Every node
synthesizes the proposition it proves; the result is compared with the goal
up to alpha.  Conversion is never implicit except when looking up a
hypothesis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..core.rewrite import conv
from ..core.signature import Context, Signature
from ..core.terms import (
    Forall, Imp, MonoType, PolyTerm, Term, abstract, as_poly_term,
    close_tybinder, free_vars, instantiate, instantiate_outer_tybinder, ty_free_vars,
)
from .errors import (
    ConvFailed, HypNotFound, RuleMismatch, SideConditionViolated, TypeMismatch,
    UnboundConstant,
)
from .typing import check_context, check_monotype, check_prop, infer_mono


@dataclass(frozen=True)
class Assume:
    prop: Term


@dataclass(frozen=True)
class ImpIntro:
    hyp: Term
    body: "ProofTerm"


@dataclass(frozen=True)
class ImpElim:
    fn: "ProofTerm"
    arg: "ProofTerm"


@dataclass(frozen=True)
class ForallIntro:
    var: str
    annot: MonoType
    body: "ProofTerm"


@dataclass(frozen=True)
class ForallElim:
    body: "ProofTerm"
    witness: Term


@dataclass(frozen=True)
class TyForallIntro:
    tyvar: str
    body: "ProofTerm"


@dataclass(frozen=True)
class TyForallElim:
    body: "ProofTerm"
    witness: MonoType


@dataclass(frozen=True)
class Conv:
    body: "ProofTerm"
    target: Union[Term, PolyTerm]


@dataclass(frozen=True)
class Ref:
    """Use of a named axiom or previously proved lemma of the signature."""

    name: str


ProofTerm = Union[Assume, ImpIntro, ImpElim, ForallIntro, ForallElim, TyForallIntro,
                  TyForallElim, Conv, Ref]


@dataclass(frozen=True)
class Theorem:
    """``Σ; Γ; Ξ ⊢ concl``.  Build these with :func:`check_proof` only."""

    sig: Signature
    ctx: Context
    hyps: tuple
    concl: PolyTerm
    proof: ProofTerm

    @property
    def tyvars(self) -> frozenset[str]:
        return self.ctx.tyvars


def _mono(prop: PolyTerm, node: str, pos) -> Term:
    if prop.tybinders:
        raise RuleMismatch(f"{node} expects a monomorphic proposition, got {prop}", pos)
    return prop.body


def find_hyp(sig: Signature, hyps, prop: Term) -> Term | None:
    """The hypothesis matching ``prop`` up to βδ-conversion."""
    for h in hyps:
        if h == prop:
            return h
    for h in hyps:
        if conv(h, prop, sig) is not None:
            return h
    return None


def synth(sig: Signature, ctx: Context, hyps: tuple, p: ProofTerm, pos=()) -> PolyTerm:
    """The proposition proved by ``p`` in the given contexts."""
    match p:
        case Assume(prop):
            check_prop(sig, ctx, prop, pos)
            if find_hyp(sig, hyps, prop) is None:
                raise HypNotFound(f"{prop} is not among the hypotheses", pos)
            return PolyTerm((), prop)
        case ImpIntro(hyp, body):
            if isinstance(hyp, PolyTerm):
                raise RuleMismatch("⇒I hypotheses must be monomorphic", pos)
            check_prop(sig, ctx, hyp, pos)
            q = _mono(synth(sig, ctx, hyps + (hyp,), body, pos + (0,)), "⇒I", pos)
            return PolyTerm((), Imp(hyp, q))
        case ImpElim(fn, arg):
            f = _mono(synth(sig, ctx, hyps, fn, pos + (0,)), "⇒E", pos)
            if not isinstance(f, Imp):
                raise RuleMismatch(f"⇒E needs an implication, got {f}", pos + (0,))
            a = _mono(synth(sig, ctx, hyps, arg, pos + (1,)), "⇒E", pos)
            if a != f.lhs:
                raise RuleMismatch(f"⇒E argument proves {a}, expected {f.lhs}", pos + (1,))
            return PolyTerm((), f.rhs)
        case ForallIntro(x, annot, body):
            check_monotype(sig, ctx, annot, pos)
            if x in ctx.vars:
                raise SideConditionViolated(f"∀I variable {x} is already in the context", pos)
            if any(x in free_vars(h) for h in hyps):
                raise SideConditionViolated(f"∀I variable {x} is free in a hypothesis", pos)
            q = _mono(synth(sig, ctx.push_var(x, annot), hyps, body, pos + (0,)), "∀I", pos)
            return PolyTerm((), Forall(x, annot, abstract(q, x)))
        case ForallElim(body, witness):
            f = _mono(synth(sig, ctx, hyps, body, pos + (0,)), "∀E", pos)
            if not isinstance(f, Forall):
                raise RuleMismatch(f"∀E needs a universal statement, got {f}", pos + (0,))
            wty = infer_mono(sig, ctx, witness, pos + (1,))
            if wty != f.annot:
                raise TypeMismatch(f.annot, wty, pos + (1,))
            return PolyTerm((), instantiate(f.body, witness))
        case TyForallIntro(x, body):
            if x in ctx.tyvars:
                raise SideConditionViolated(f"type variable {x} is already in the context", pos)
            if any(x in ty_free_vars(h) for h in hyps):
                raise SideConditionViolated(f"type variable {x} is free in a hypothesis", pos)
            inner = synth(sig, ctx.push_tyvar(x), hyps, body, pos + (0,))
            return close_tybinder(inner, x)
        case TyForallElim(body, witness):
            inner = synth(sig, ctx, hyps, body, pos + (0,))
            if not inner.tybinders:
                raise RuleMismatch(f"type ∀E needs a type-quantified statement, got {inner}", pos)
            check_monotype(sig, ctx, witness, pos + (1,))
            return instantiate_outer_tybinder(inner, witness)
        case Conv(body, target):
            target = as_poly_term(target)
            check_prop(sig, ctx, target, pos)
            src = synth(sig, ctx, hyps, body, pos + (0,))
            if conv(src, target, sig) is None:
                raise ConvFailed(f"{src} and {target} are not βδ-convertible", pos)
            return target
        case Ref(name):
            try:
                return sig.proof_const(name).prop
            except LookupError:
                raise UnboundConstant(f"no axiom or lemma named {name}", pos) from None
    raise RuleMismatch(f"not a proof term: {p!r}", pos)


def check_proof(sig: Signature, ctx: Context, hyps, p: ProofTerm, goal) -> Theorem:
    """Check that ``p`` proves ``goal`` under ``sig; ctx; hyps``."""
    hyps = tuple(hyps)
    goal = as_poly_term(goal)
    check_context(sig, ctx)
    for h in hyps:
        check_prop(sig, ctx, h)
    check_prop(sig, ctx, goal)
    proved = synth(sig, ctx, hyps, p)
    if proved != goal:
        raise RuleMismatch(f"proof establishes {proved}, but the goal is {goal}")
    return Theorem(sig, ctx, hyps, goal, p)
