"""Seeded generators: well-typed terms over a signature, and whole signatures."""

from __future__ import annotations

import random
from importlib import resources

from sttx.core.signature import (
    AxiomDecl, Context, CstDecl, CstDefn, Signature, ThmDefn, TyOpDecl,
)
from sttx.core.terms import (
    PROP, Abs, App, Bound, ConstApp, Forall, Fun, Imp, OpApp, TVar, TypeOpRef, Var,
    instantiate, poly_term, poly_type, ty_instantiate,
)
from sttx.dkimport import load_sdk
from sttx.kernel import (
    Assume, ForallElim, ForallIntro, ImpElim, ImpIntro, Ref, TyForallElim, TyForallIntro,
    check_entry, synth,
)


def corpus_text(name: str) -> str:
    return resources.files("sttx.corpus").joinpath(name).read_text(encoding="utf-8")


def load_corpus(name: str):
    return load_sdk(corpus_text(name))


CORPUS = ("leibniz.sdk", "mininat.sdk", "exp.sdk")


def _peel(ty):
    args = []
    while isinstance(ty, Fun):
        args.append(ty.dom)
        ty = ty.cod
    return args, ty


def _result_after(args, res, k):
    out = res
    for a in reversed(args[k:]):
        out = Fun(a, out)
    return out


class TermGen:
    """Random well-typed monoterms over the term constants of ``sig``.

    ``env`` lists the types of de Bruijn indices, innermost first.
    """

    def __init__(self, sig: Signature, rng: random.Random, tyvars=()):
        self.sig = sig
        self.rng = rng
        self.consts = [(e.name, e.ty) for e in sig if isinstance(e, (CstDecl, CstDefn))]
        ops = [e.op for e in sig if isinstance(e, TyOpDecl)]
        self.nullary = [OpApp(op, ()) for op in ops if op.arity == 0]
        self.ops = [op for op in ops if op.arity > 0]
        self.base = [PROP] + self.nullary + [TVar(x) for x in tyvars]
        self.counter = 0

    def rand_type(self, depth: int = 1):
        r = self.rng.random()
        if depth > 0 and r < 0.25:
            return Fun(self.rand_type(depth - 1), self.rand_type(depth - 1))
        if depth > 0 and self.ops and r < 0.35:
            op = self.rng.choice(self.ops)
            return OpApp(op, tuple(self.rand_type(0) for _ in range(op.arity)))
        return self.rng.choice(self.base)

    def _hint(self, base: str = "x") -> str:
        self.counter += 1
        return f"{base}{self.counter}"

    def _heads(self, ty):
        """(constant application, argument types) whose partial application has type ``ty``."""
        out = []
        for name, pt in self.consts:
            tyargs = tuple(self.rng.choice(self.base) for _ in pt.binders)
            inst = ty_instantiate(pt.body, tyargs)
            args, res = _peel(inst)
            for k in range(len(args) + 1):
                if _result_after(args, res, k) == ty:
                    out.append((ConstApp(name, tyargs), args[:k]))
        return out

    def term(self, ty, env=(), budget: int = 8):
        """A term of type ``ty``, or ``None`` when none is found quickly."""
        for _ in range(6):
            t = self._term(ty, tuple(env), budget)
            if t is not None:
                return t
        return None

    def _term(self, ty, env, budget):
        rng = self.rng
        vars_ = [Bound(i) for i, a in enumerate(env) if a == ty]
        heads = self._heads(ty)
        leaves = vars_ + [h for h, args in heads if not args]
        if budget <= 1:
            if leaves:
                return rng.choice(leaves)
            return self._small(ty, env)
        options = ["leaf"] * (2 if leaves else 0)
        if any(args for _, args in heads):
            options += ["app"] * 3
        if isinstance(ty, Fun):
            options += ["abs"] * 2
        if ty == PROP:
            options += ["imp", "forall"]
        options.append("redex")
        match rng.choice(options):
            case "leaf":
                return rng.choice(leaves)
            case "app":
                head, args = rng.choice([(h, a) for h, a in heads if a])
                t = head
                share = max(1, (budget - 1) // len(args))
                for a in args:
                    u = self._term(a, env, share)
                    if u is None:
                        return None
                    t = App(t, u)
                return t
            case "abs":
                body = self._term(ty.cod, (ty.dom,) + env, budget - 1)
                return None if body is None else Abs(self._hint(), ty.dom, body)
            case "imp":
                lhs = self._term(PROP, env, budget // 2)
                rhs = self._term(PROP, env, budget // 2)
                return None if lhs is None or rhs is None else Imp(lhs, rhs)
            case "forall":
                a = self.rand_type(0)
                body = self._term(PROP, (a,) + env, budget - 1)
                return None if body is None else Forall(self._hint(), a, body)
            case "redex":
                a = self.rand_type(1)
                body = self._term(ty, (a,) + env, budget // 2)
                arg = self._term(a, env, budget // 2)
                if body is None or arg is None:
                    return None
                return App(Abs(self._hint(), a, body), arg)
        return None

    def _small(self, ty, env):
        match ty:
            case Fun(a, b):
                body = self._term(b, (a,) + env, 1)
                return None if body is None else Abs(self._hint(), a, body)
            case _ if ty == PROP:
                return Forall(self._hint(), PROP, Bound(0))
        return None


# -- terms over the mini-nat theory -------------------------------------------------------


def mininat():
    return load_corpus("mininat.sdk")


def nat_types(sig):
    nat = OpApp(sig.tyop("nat"), ())
    return nat, [nat, PROP, Fun(nat, nat), Fun(nat, PROP), Fun(nat, Fun(nat, nat))]


def closed_terms(sig, seed: int, count: int, max_size: int):
    """``count`` closed well-typed terms of size at most ``max_size``."""
    from sttx.core.terms import term_size

    rng = random.Random(seed)
    gen = TermGen(sig, rng)
    _, types = nat_types(sig)
    out = []
    while len(out) < count:
        ty = rng.choice(types)
        t = gen.term(ty, (), rng.randint(2, max_size // 2))
        if t is not None and term_size(t) <= max_size:
            out.append((t, ty))
    return out


# -- whole signatures --------------------------------------------------------------------


def _checked(sig: Signature, entry) -> Signature:
    check_entry(sig, entry)
    return sig.extend(entry)


def random_signature(seed: int) -> Signature:
    """A small well-formed theory with declarations, definitions, axioms and lemmas."""
    rng = random.Random(seed)
    sig = Signature()
    t0 = TypeOpRef("t0", 0)
    sig = _checked(sig, TyOpDecl(t0))
    if rng.random() < 0.5:
        sig = _checked(sig, TyOpDecl(TypeOpRef("t1", rng.randint(1, 2))))
    base = OpApp(t0, ())
    sig = _checked(sig, CstDecl("c0", poly_type((), base)))
    if rng.random() < 0.7:
        sig = _checked(sig, CstDecl("f0", poly_type((), Fun(base, base))))
    if rng.random() < 0.5:
        sig = _checked(sig, CstDecl("r0", poly_type((), Fun(base, Fun(base, PROP)))))
    if rng.random() < 0.5:
        x = TVar("X")
        sig = _checked(sig, CstDecl("g0", poly_type(("X",), Fun(x, Fun(x, PROP)))))

    for i in range(rng.randint(0, 2)):
        poly = rng.random() < 0.4
        binders = ("X",) if poly else ()
        gen = TermGen(sig, rng, binders)
        ty = Fun(TVar("X"), gen.rand_type(1)) if poly else gen.rand_type(1)
        body = gen.term(ty, (), rng.randint(2, 6))
        if body is not None:
            sig = _checked(sig, CstDefn(f"d{i}", poly_type(binders, ty), poly_term(binders, body)))

    axioms = []
    for i in range(rng.randint(1, 3)):
        poly = rng.random() < 0.3
        binders = ("X",) if poly else ()
        gen = TermGen(sig, rng, binders)
        body = gen.term(PROP, (), rng.randint(2, 7))
        if body is not None:
            sig = _checked(sig, AxiomDecl(f"a{i}", poly_term(binders, body)))
            axioms.append(f"a{i}")

    facts = list(axioms)
    for i in range(rng.randint(1, 4)):
        proof = _random_proof(sig, rng, facts, i)
        if proof is None:
            continue
        stmt = synth(sig, Context(), (), proof)
        sig = _checked(sig, ThmDefn(f"l{i}", stmt, proof))
        facts.append(f"l{i}")
    return sig


def _random_proof(sig, rng, facts, i):
    kind = rng.choice(["id", "tyid", "allid", "use", "use"] if facts else ["id", "tyid", "allid"])
    gen = TermGen(sig, rng)
    match kind:
        case "id":
            phi = gen.term(PROP, (), rng.randint(2, 6))
            return None if phi is None else ImpIntro(phi, Assume(phi))
        case "tyid":
            phi = TermGen(sig, rng, ("X",)).term(PROP, (), rng.randint(2, 6))
            return None if phi is None else TyForallIntro("X", ImpIntro(phi, Assume(phi)))
        case "allid":
            a = gen.rand_type(1)
            body = gen.term(PROP, (a,), rng.randint(2, 6))
            if body is None:
                return None
            v = f"v{i}"
            phi = instantiate(body, Var(v))
            return ForallIntro(v, a, ImpIntro(phi, Assume(phi)))
        case "use":
            return _use_fact(sig, rng, gen, rng.choice(facts))
    return None


def _use_fact(sig, rng, gen, name):
    """Instantiate a known fact, then peel one ∀ or discharge one premise."""
    p = Ref(name)
    stmt = sig.proof_const(name).prop
    for _ in stmt.tybinders:
        p = TyForallElim(p, rng.choice(gen.base))
    stmt = synth(sig, Context(), (), p)
    match stmt.body:
        case Forall(_, a, _):
            w = gen.term(a, (), 3)
            return p if w is None else ForallElim(p, w)
        case Imp(lhs, _):
            return ImpIntro(lhs, ImpElim(p, Assume(lhs)))
    return p


def random_signatures(count: int, seed: int = 0):
    return [random_signature(seed * 10_000 + k) for k in range(count)]


__all__ = [
    "CORPUS", "TermGen", "closed_terms", "corpus_text", "load_corpus", "mininat", "nat_types",
    "random_signature", "random_signatures",
]
