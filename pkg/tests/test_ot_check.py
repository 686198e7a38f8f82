import pytest

from otasm import DATA, Asm, expected_statements, fn, prelude_from_definitions
from sttx.ot_check import (
    DanglingDictionaryRef, ParseError, RuleError, StackUnderflow, TypeErrorInRule,
    UnknownCommand, aconv, alpha_key, kernel_rule, run_article,
)
from sttx.ot_export import Prelude, congruence
from sttx.ot_export import hol as H
from sttx.ot_export.conversion import ImpL, ImpR
from sttx.ot_export.prelude import axiom_statements
from sttx.ot_syntax import BOOL, OtAbs, OtApp, OtConst, OtVar, OtVarType

p, q, p2, q2 = (OtVar(n, BOOL) for n in ("p", "q", "p'", "q'"))
A = OtVarType("A")


def eq(a, b, ty=BOOL):
    return OtApp(OtApp(OtConst("=", fn(ty, fn(ty, BOOL))), a), b)


def article(*body: str) -> str:
    return "\n".join(("6", "version") + body) + "\n"


# -- the virtual machine ---------------------------------------------------------------------


def test_empty_article():
    res = run_article("6\nversion\n")
    assert res.exports == () and res.assumptions == () and res.leftover == 0


def test_assume_and_export():
    asm = Asm()
    asm.export(("assume", p), [p], p, "id")
    res = run_article(asm.text())
    assert res.export_named("id").hyps == (p,)
    assert res.leftover == 0


def test_export_with_wrong_conclusion_fails():
    asm = Asm()
    asm.export(("assume", p), [p], q, "bad")
    with pytest.raises(TypeErrorInRule):
        run_article(asm.text())


def test_abs_thm_side_condition():
    asm = Asm()
    asm.proof(("abs", p, ("assume", eq(p, p))))
    with pytest.raises(TypeErrorInRule) as e:
        run_article(asm.text())
    assert e.value.rule == "absThm"


def test_unknown_command():
    with pytest.raises(UnknownCommand):
        run_article(article("frobnicate"))


def test_stack_underflow():
    with pytest.raises(StackUnderflow):
        run_article(article("appTerm"))


def test_dangling_reference():
    with pytest.raises(DanglingDictionaryRef):
        run_article(article("5", "ref"))


def test_unterminated_name():
    with pytest.raises(ParseError):
        run_article(article('"abc'))


def test_comment_labels_name_exports_and_axioms():
    asm = Asm()
    asm.lines += ["nil"]
    asm.term(p)
    asm.lines += ["# axiom my_axiom", "axiom", "pop"]
    res = run_article(asm.text())
    assert res.assumptions[0][0] == "my_axiom"


def test_define_const_yields_equation():
    asm = Asm()
    k = asm.define("c", OtAbs(p, p))
    asm.export(("ref", k), [], eq(OtConst("c", fn(BOOL, BOOL)), OtAbs(p, p), fn(BOOL, BOOL)), "c")
    assert run_article(asm.text()).export_named("c").hyps == ()


def test_leftover_counts_stack():
    asm = Asm()
    asm.term(p)
    assert run_article(asm.text()).leftover == 1


# -- kernel rules ----------------------------------------------------------------------------


def test_kernel_refl_and_assume():
    assert kernel_rule("refl", p).concl == eq(p, p)
    th = kernel_rule("assume", p)
    assert th.sequent().hyps == (p,) and th.concl == p


def test_kernel_beta_conv():
    x = OtVar("x", BOOL)
    th = kernel_rule("betaConv", OtApp(OtAbs(x, OtApp(OtApp(OtConst("=", fn(BOOL, fn(BOOL, BOOL))),
                                                                x), q)), p))
    assert aconv(th.concl, eq(OtApp(OtAbs(x, eq(x, q)), p), eq(p, q)))


def test_kernel_eq_mp_unions_hypotheses():
    th = kernel_rule("eqMp", kernel_rule("assume", eq(p, q)), kernel_rule("assume", p))
    assert th.concl == q and {alpha_key(h) for h in th.sequent().hyps} == {
        alpha_key(eq(p, q)), alpha_key(p)}


def test_kernel_deduct_antisym():
    th = kernel_rule("deductAntisym", kernel_rule("assume", p), kernel_rule("assume", p))
    assert th.concl == eq(p, p) and th.sequent().hyps == ()


def test_kernel_prove_hyp():
    th = kernel_rule("proveHyp", kernel_rule("assume", q), kernel_rule("assume", p))
    assert set(th.sequent().hyps) == {p, q}
    closed = kernel_rule("proveHyp", kernel_rule("refl", p), kernel_rule("assume", eq(p, p)))
    assert closed.sequent().hyps == ()


def test_kernel_subst():
    a = OtVar("a", A)
    th = kernel_rule("subst", {"A": BOOL}, {OtVar("a", BOOL): p}, kernel_rule("refl", a))
    assert th.concl == eq(p, p)


def test_kernel_errors():
    with pytest.raises(RuleError):
        kernel_rule("eqMp", kernel_rule("assume", p), kernel_rule("assume", p))
    with pytest.raises(RuleError):
        kernel_rule("absThm", p, kernel_rule("assume", eq(p, p)))
    with pytest.raises(RuleError):
        kernel_rule("cut")


def replay(d, memo=None):
    """Check an exporter derivation rule by rule with the independent kernel."""
    memo = {} if memo is None else memo
    if id(d) in memo:
        return memo[id(d)]
    args = [replay(a, memo) if isinstance(a, H.Deriv) else a for a in d.args]
    match d.rule:
        case "subst":
            theta, sigma, th = args
            out = kernel_rule("subst", dict(theta), dict(sigma), th)
        case "axiom":
            out = kernel_rule("axiom", *args)
        case "defineConst":
            raise AssertionError("replay only covers axiomatized preludes")
        case rule:
            out = kernel_rule(rule, *args)
    memo[id(d)] = out
    return out


def test_imp_congruence_tree_replayed_rule_by_rule():
    """From p = p' and q = q', the ⇒ congruence gives (p ⇒ q) = (p' ⇒ q')."""
    pre = Prelude.emit("axiomatize")
    left = congruence(pre, H.assume(eq(p, p2)), ImpL(q))
    right = congruence(pre, H.assume(eq(q, q2)), ImpR(p2))
    whole = H.trans(left, right)
    th = replay(whole)
    imp = OtConst("sttx.imp", fn(BOOL, fn(BOOL, BOOL)))
    want = eq(OtApp(OtApp(imp, p), q), OtApp(OtApp(imp, p2), q2))
    assert aconv(th.concl, want)
    assert {alpha_key(h) for h in th.sequent().hyps} == {alpha_key(eq(p, p2)), alpha_key(eq(q, q2))}


# -- the prelude follows from definitions ---------------------------------------------------


STORED = DATA / "prelude_from_defs.art"


def test_stored_prelude_article_is_current():
    assert STORED.read_text(encoding="utf-8") == prelude_from_definitions()


def test_prelude_article_verifies():
    res = run_article(STORED.read_text(encoding="utf-8"))
    assert res.assumptions == () and res.leftover == 0
    assert [n for n, _ in res.exports] == ["sttx.T", "sttx.and", "sttx.imp", "sttx.forall"]
    by_hand = expected_statements()
    for name, seq in res.exports:
        assert seq.hyps == ()
        assert aconv(seq.concl, by_hand[name])
        assert aconv(seq.concl, axiom_statements()[name])
