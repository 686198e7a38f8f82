"""Serializing derivations as an OpenTheory article (version 6).

Types, variables and terms are built once and kept in the dictionary; a
theorem is kept there only when more than one step uses it.  Output is a
pure function of the plan, so identical input gives identical bytes.
"""

from __future__ import annotations

from collections import Counter

from ..ot_syntax import OtAbs, OtApp, OtConst, OtVar, OtVarType
from .hol import Deriv
from .translate import ArticlePlan


def quote(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _operands(d: Deriv) -> list:
    """What must be on the stack, bottom first, before the rule's command."""
    match d.rule:
        case "refl" | "assume" | "betaConv":
            return [("term", d.args[0])]
        case "absThm":
            return [("var", d.args[0]), ("deriv", d.args[1])]
        case "appThm" | "eqMp" | "deductAntisym":
            return [("deriv", d.args[0]), ("deriv", d.args[1])]
        case "proveHyp":
            th_phi, th_psi = d.args
            return [("deriv", th_psi), ("deriv", th_phi)]
        case "subst":
            theta, sigma, th = d.args
            return [("subst", (theta, sigma)), ("deriv", th)]
        case "axiom":
            hyps, concl = d.args
            return [("terms", hyps), ("term", concl)]
        case "defineConst":
            name, rhs = d.args
            return [("name", name), ("term", rhs)]
    raise ValueError(f"cannot serialize rule {d.rule}")


class ArticleWriter:
    def __init__(self):
        self.lines: list[str] = ["6", "version"]
        self._objs: dict = {}
        self._thms: dict = {}
        self._next = 0
        self.refs: Counter = Counter()

    def _key(self) -> int:
        k = self._next
        self._next += 1
        return k

    def _cached(self, key, build) -> None:
        k = self._objs.get(key)
        if k is not None:
            self.lines += [str(k), "ref"]
            return
        build()
        k = self._key()
        self._objs[key] = k
        self.lines += [str(k), "def"]

    # -- objects ------------------------------------------------------------------

    def name(self, s: str):
        self.lines.append(quote(s))

    def list_of(self, items, emit):
        for it in items:
            emit(it)
        self.lines.append("nil")
        self.lines += ["cons"] * len(items)

    def type(self, ty):
        def build():
            if isinstance(ty, OtVarType):
                self.name(ty.name)
                self.lines.append("varType")
            else:
                self.name(ty.op)
                self.lines.append("typeOp")
                self.list_of(ty.args, self.type)
                self.lines.append("opType")

        self._cached(("ty", ty), build)

    def var(self, v: OtVar):
        def build():
            self.name(v.name)
            self.type(v.ty)
            self.lines.append("var")

        self._cached(("var", v), build)

    def term(self, t):
        if isinstance(t, OtVar):
            def build():
                self.var(t)
                self.lines.append("varTerm")
        elif isinstance(t, OtConst):
            def build():
                self.name(t.name)
                self.lines.append("const")
                self.type(t.ty)
                self.lines.append("constTerm")
        elif isinstance(t, OtApp):
            def build():
                self.term(t.fn)
                self.term(t.arg)
                self.lines.append("appTerm")
        elif isinstance(t, OtAbs):
            def build():
                self.var(t.var)
                self.term(t.body)
                self.lines.append("absTerm")
        else:
            raise TypeError(f"not a term: {t!r}")
        self._cached(("tm", t), build)

    def subst(self, theta, sigma):
        def ty_pair(p):
            self.list_of([("n", p[0]), ("ty", p[1])], self._item)

        def tm_pair(p):
            self.list_of([("v", p[0]), ("tm", p[1])], self._item)

        self.list_of(list(theta), ty_pair)
        self.list_of(list(sigma), tm_pair)
        self.lines += ["nil", "cons", "cons"]

    def _item(self, it):
        kind, x = it
        match kind:
            case "n":
                self.name(x)
            case "ty":
                self.type(x)
            case "v":
                self.var(x)
            case "tm":
                self.term(x)

    # -- theorems -------------------------------------------------------------------

    def count_refs(self, roots):
        seen = set()
        stack = list(roots)
        for r in roots:
            self.refs[r] += 1
        while stack:
            d = stack.pop()
            if id(d) in seen:
                continue
            seen.add(id(d))
            for p in d.premises():
                self.refs[p] += 1
                stack.append(p)

    def deriv(self, root: Deriv):
        work = [("deriv", root)]
        while work:
            kind, x = work.pop()
            match kind:
                case "deriv":
                    k = self._thms.get(x)
                    if k is not None:
                        self.lines += [str(k), "ref"]
                        continue
                    work.append(("finish", x))
                    work.extend(reversed(_operands(x)))
                case "finish":
                    self._finish(x)
                case "term":
                    self.term(x)
                case "terms":
                    self.list_of(list(x), self.term)
                case "var":
                    self.var(x)
                case "name":
                    self.name(x)
                case "subst":
                    self.subst(*x)

    def _finish(self, d: Deriv):
        if d.rule == "axiom" and d.label:
            self.lines.append(f"# axiom {d.label}")
        self.lines.append(d.rule)
        if d.rule == "defineConst":
            # the stack now holds the constant under the theorem; drop the constant
            k = self._key()
            self.lines += [str(k), "def", "pop", "pop"]
            if self.refs[d] > 1:
                self.lines += [str(k), "ref"]
                self._thms[d] = k
            else:
                self.lines += [str(k), "remove"]
            return
        if self.refs[d] > 1:
            k = self._key()
            self.lines += [str(k), "def"]
            self._thms[d] = k

    def export(self, name: str, d: Deriv):
        self.deriv(d)
        self.list_of(list(d.hyps), self.term)
        self.term(d.concl)
        self.lines.append(f"# thm {name}")
        self.lines.append("thm")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def prelude_roots(plan: ArticlePlan) -> list:
    pre = plan.prelude
    if pre.mode == "define":
        return list(pre.definitions)
    return list(pre.axioms.values())


def write_article(plan: ArticlePlan | None, exports=None) -> str:
    """Article text for ``plan``: the prelude, the library axioms, then the exports."""
    w = ArticleWriter()
    if plan is None:
        return w.text()
    standalone = prelude_roots(plan) + [d for d in plan.axioms if d not in prelude_roots(plan)]
    exports = plan.exports if exports is None else exports
    w.count_refs(standalone + [e.deriv for e in exports])
    for d in standalone:
        w.deriv(d)
        w.lines.append("pop")
    for e in exports:
        w.export(e.name, e.deriv)
    return w.text()
