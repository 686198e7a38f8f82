"""The article virtual machine: reads commands line by line and drives the kernel."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..ot_syntax import BOOL, OtAbs, OtApp, OtConst, OtOpApp, OtSequent, OtVar, OtVarType
from . import kernel as K
from .kernel import RuleError, Thm


class ArticleError(Exception):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ParseError(ArticleError):
    pass


class StackUnderflow(ArticleError):
    pass


class TypeErrorInRule(ArticleError):
    def __init__(self, line: int, rule: str, message: str):
        super().__init__(line, f"{rule}: {message}")
        self.rule = rule


class UnknownCommand(ArticleError):
    pass


class DanglingDictionaryRef(ArticleError):
    pass


@dataclass(frozen=True)
class TypeOpObj:
    name: str


@dataclass(frozen=True)
class ConstObj:
    name: str


@dataclass(frozen=True)
class VarObj:
    var: OtVar


@dataclass
class VmState:
    stack: list = field(default_factory=list)
    dictionary: dict = field(default_factory=dict)
    exported: list = field(default_factory=list)
    assumed: list = field(default_factory=list)
    # arities of type operators and types of constants fixed by this article
    arities: dict = field(default_factory=lambda: {"bool": 0, "->": 2})
    const_types: dict = field(default_factory=dict)
    version: int | None = None


@dataclass(frozen=True)
class ArticleResult:
    exports: tuple  # (name, OtSequent)
    assumptions: tuple  # (name, OtSequent)
    leftover: int

    def export_named(self, name: str) -> OtSequent:
        for n, s in self.exports:
            if n == name:
                return s
        raise KeyError(name)


COMMANDS = frozenset(
    "absTerm absThm appTerm appThm assume axiom betaConv cons const constTerm def "
    "deductAntisym defineConst defineTypeOp eqMp nil opType pop proveHyp ref refl remove "
    "subst thm typeOp var varTerm varType version".split()
)

_NUM = re.compile(r"-?[0-9]+")
_LABEL = re.compile(r"#\s*(thm|axiom)\s+(\S+)\s*$")


def _unquote(s: str, line: int) -> str:
    body = s[1:-1]
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\":
            if i + 1 >= len(body):
                raise ParseError(line, f"dangling escape in {s}")
            out.append(body[i + 1])
            i += 2
            continue
        if c == '"':
            raise ParseError(line, f"unescaped quote in {s}")
        out.append(c)
        i += 1
    return "".join(out)


class _Machine:
    def __init__(self, state: VmState):
        self.s = state
        self.line = 0
        self.pending = {"thm": [], "axiom": []}

    # stack helpers

    def pop(self, kind=None, what="object"):
        if not self.s.stack:
            raise StackUnderflow(self.line, f"needed {what}")
        obj = self.s.stack.pop()
        if kind is not None and not isinstance(obj, kind):
            raise TypeErrorInRule(self.line, self.cmd, f"expected {what}, got {type(obj).__name__}")
        return obj

    def pop_type(self):
        return self.pop((OtVarType, OtOpApp), "type")

    def pop_term(self):
        return self.pop((OtVar, OtConst, OtApp, OtAbs), "term")

    def push(self, obj):
        self.s.stack.append(obj)

    def rule(self, f, *args):
        try:
            return f(*args)
        except RuleError as exc:
            raise TypeErrorInRule(self.line, self.cmd, str(exc)) from None

    # main loop

    def run(self, text: str):
        for self.line, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                m = _LABEL.match(line)
                if m:
                    self.pending[m.group(1)].append(m.group(2))
                continue
            self.cmd = line
            if _NUM.fullmatch(line):
                self.push(int(line))
            elif line.startswith('"'):
                if len(line) < 2 or not line.endswith('"'):
                    raise ParseError(self.line, f"unterminated name {line}")
                self.push(_unquote(line, self.line))
            elif line in COMMANDS:
                getattr(self, "c_" + line)()
            elif re.fullmatch(r"[A-Za-z]+", line):
                raise UnknownCommand(self.line, f"unknown command {line}")
            else:
                raise ParseError(self.line, f"cannot parse {line!r}")

    # commands

    def c_version(self):
        v = self.pop(int, "number")
        if v != 6:
            raise TypeErrorInRule(self.line, "version", f"unsupported article version {v}")
        self.s.version = v

    def c_nil(self):
        self.push(())

    def c_cons(self):
        tl = self.pop(tuple, "list")
        hd = self.pop(what="list head")
        self.push((hd,) + tl)

    def c_def(self):
        k = self.pop(int, "number")
        if not self.s.stack:
            raise StackUnderflow(self.line, "def needs an object")
        self.s.dictionary[k] = self.s.stack[-1]

    def c_ref(self):
        k = self.pop(int, "number")
        if k not in self.s.dictionary:
            raise DanglingDictionaryRef(self.line, f"no dictionary entry {k}")
        self.push(self.s.dictionary[k])

    def c_remove(self):
        k = self.pop(int, "number")
        if k not in self.s.dictionary:
            raise DanglingDictionaryRef(self.line, f"no dictionary entry {k}")
        self.push(self.s.dictionary.pop(k))

    def c_pop(self):
        self.pop()

    def c_typeOp(self):
        self.push(TypeOpObj(self.pop(str, "name")))

    def c_opType(self):
        args = self.pop(tuple, "list of types")
        op = self.pop(TypeOpObj, "type operator")
        for a in args:
            if not isinstance(a, (OtVarType, OtOpApp)):
                raise TypeErrorInRule(self.line, "opType", "argument is not a type")
        known = self.s.arities.setdefault(op.name, len(args))
        if known != len(args):
            raise TypeErrorInRule(self.line, "opType", f"{op.name} has arity {known}, given {len(args)}")
        self.push(OtOpApp(op.name, args))

    def c_varType(self):
        self.push(OtVarType(self.pop(str, "name")))

    def c_var(self):
        ty = self.pop_type()
        name = self.pop(str, "name")
        self.push(VarObj(OtVar(name, ty)))

    def c_varTerm(self):
        self.push(self.pop(VarObj, "variable").var)

    def c_const(self):
        self.push(ConstObj(self.pop(str, "name")))

    def c_constTerm(self):
        ty = self.pop_type()
        c = self.pop(ConstObj, "constant")
        if c.name == "=":
            parts = K.dest_fun(ty)
            rest = K.dest_fun(parts[1]) if parts else None
            if rest is None or rest[0] != parts[0] or rest[1] != BOOL:
                raise TypeErrorInRule(self.line, "constTerm", f"= cannot have type {ty}")
        elif c.name in self.s.const_types:
            if not _matches(self.s.const_types[c.name], ty, {}):
                raise TypeErrorInRule(self.line, "constTerm", f"{c.name} cannot have type {ty}")
        self.push(OtConst(c.name, ty))

    def c_appTerm(self):
        x = self.pop_term()
        f = self.pop_term()
        self.push(self.rule(K.mk_app, f, x))

    def c_absTerm(self):
        body = self.pop_term()
        v = self.pop(VarObj, "variable")
        self.push(OtAbs(v.var, body))

    def c_refl(self):
        self.push(self.rule(K.refl, self.pop_term()))

    def c_assume(self):
        self.push(self.rule(K.assume, self.pop_term()))

    def c_betaConv(self):
        self.push(self.rule(K.beta_conv, self.pop_term()))

    def c_absThm(self):
        th = self.pop(Thm, "theorem")
        v = self.pop(VarObj, "variable")
        self.push(self.rule(K.abs_thm, v.var, th))

    def c_appThm(self):
        xth = self.pop(Thm, "theorem")
        fth = self.pop(Thm, "theorem")
        self.push(self.rule(K.app_thm, fth, xth))

    def c_eqMp(self):
        th = self.pop(Thm, "theorem")
        eq = self.pop(Thm, "theorem")
        self.push(self.rule(K.eq_mp, eq, th))

    def c_deductAntisym(self):
        th2 = self.pop(Thm, "theorem")
        th1 = self.pop(Thm, "theorem")
        self.push(self.rule(K.deduct_antisym, th1, th2))

    def c_proveHyp(self):
        th_phi = self.pop(Thm, "theorem")
        th_psi = self.pop(Thm, "theorem")
        self.push(self.rule(K.prove_hyp, th_phi, th_psi))

    def c_subst(self):
        th = self.pop(Thm, "theorem")
        lst = self.pop(tuple, "substitution")
        if len(lst) != 2 or not all(isinstance(x, tuple) for x in lst):
            raise TypeErrorInRule(self.line, "subst", "substitution must be a pair of lists")
        theta = {}
        for pair in lst[0]:
            if not (isinstance(pair, tuple) and len(pair) == 2 and isinstance(pair[0], str)
                    and isinstance(pair[1], (OtVarType, OtOpApp))):
                raise TypeErrorInRule(self.line, "subst", "bad type substitution entry")
            theta[pair[0]] = pair[1]
        sigma = {}
        for pair in lst[1]:
            if not (isinstance(pair, tuple) and len(pair) == 2 and isinstance(pair[0], VarObj)):
                raise TypeErrorInRule(self.line, "subst", "bad term substitution entry")
            sigma[OtVar(pair[0].var.name, K.type_inst(theta, pair[0].var.ty))] = pair[1]
        self.push(self.rule(K.subst, theta, sigma, th))

    def c_axiom(self):
        concl = self.pop_term()
        hyps = self.pop(tuple, "list of hypotheses")
        th = self.rule(K.axiom, hyps, concl)
        name = self.pending["axiom"].pop(0) if self.pending["axiom"] else f"axiom{len(self.s.assumed)}"
        self.s.assumed.append((name, th.sequent()))
        self.push(th)

    def c_thm(self):
        concl = self.pop_term()
        hyps = self.pop(tuple, "list of hypotheses")
        th = self.pop(Thm, "theorem")
        if not K.aconv(concl, th.concl):
            raise TypeErrorInRule(self.line, "thm", f"conclusion {th.concl} is not {concl}")
        if {K.alpha_key(h) for h in hyps} != set(th.hyps):
            raise TypeErrorInRule(self.line, "thm", "hypotheses do not match")
        name = self.pending["thm"].pop(0) if self.pending["thm"] else f"thm{len(self.s.exported)}"
        self.s.exported.append((name, OtSequent(tuple(hyps), concl)))

    def c_defineConst(self):
        rhs = self.pop_term()
        name = self.pop(str, "name")
        if name in self.s.const_types or name == "=":
            raise TypeErrorInRule(self.line, "defineConst", f"{name} is already defined")
        c, th = self.rule(K.define_const, name, rhs)
        self.s.const_types[name] = c.ty
        self.push(ConstObj(name))
        self.push(th)

    def c_defineTypeOp(self):
        tyvars = self.pop(tuple, "list of type variables")
        rep = self.pop(str, "name")
        abs_ = self.pop(str, "name")
        name = self.pop(str, "name")
        th = self.pop(Thm, "theorem")
        if not all(isinstance(v, str) for v in tyvars):
            raise TypeErrorInRule(self.line, "defineTypeOp", "type variables must be names")
        if name in self.s.arities:
            raise TypeErrorInRule(self.line, "defineTypeOp", f"{name} is already a type operator")
        new_ty, abs_c, rep_c, abs_rep, rep_abs = self.rule(
            K.define_type_op, name, abs_, rep, tyvars, th
        )
        self.s.arities[name] = len(tyvars)
        self.s.const_types[abs_] = abs_c.ty
        self.s.const_types[rep] = rep_c.ty
        self.push(TypeOpObj(name))
        self.push(ConstObj(abs_))
        self.push(ConstObj(rep))
        self.push(abs_rep)
        self.push(rep_abs)


def _matches(pattern, ty, theta: dict) -> bool:
    match pattern:
        case OtVarType(n):
            if n in theta:
                return theta[n] == ty
            theta[n] = ty
            return True
        case OtOpApp(op, args):
            return (
                isinstance(ty, OtOpApp) and ty.op == op and len(ty.args) == len(args)
                and all(_matches(a, b, theta) for a, b in zip(args, ty.args))
            )
    return False


def run_article(text: str, state: VmState | None = None) -> ArticleResult:
    """Interpret an article; raises an :class:`ArticleError` on the first failure."""
    state = state or VmState()
    m = _Machine(state)
    m.cmd = "?"
    m.run(text)
    return ArticleResult(tuple(state.exported), tuple(state.assumed), len(state.stack))
