import random
import time

import pytest

from conftest import X
from gen import closed_terms, load_corpus
from oracle import definitions_of, innermost_nf
from otgen import (
    A, CONGRUENCE_INSTANCES, TEMPLATE_INSTANCES, BoolGen, all_, check_in_article, eq, fn, imp,
    instances,
)
from sttx.core import (
    PROP, App, CstDefn, Fun, OpApp, Signature, TyOpDecl, TypeOpRef, Var, const, forall,
    lam, normalize, poly_term, poly_type,
)
from sttx.ot_check import alpha_key, run_article
from sttx.ot_export import (
    ArticlePlan, Exported, Exporter, ExportError, FreshnessViolation, ImpL, ImpR, Lam,
    PathMismatch, Prelude, TraceMismatch, congruence, conv_to_eq, derive_rule, emit_prelude, hol, translate_theorem,
    translate_theory, translate_type, write_article,
)
from sttx.ot_export.prelude import axiom_statements
from sttx.ot_syntax import BOOL, OtApp, OtConst, OtOpApp, OtVar, OtVarType

XT = OtVarType("X")


def leibniz_const(ty):
    return OtConst("leibniz.leibniz", fn(ty, fn(ty, BOOL)))


# -- types and the prelude -----------------------------------------------------------------


def test_translate_type():
    nat = OpApp(TypeOpRef("nat", 0), ())
    assert translate_type(PROP) == BOOL
    assert translate_type(Fun(nat, PROP), "arith") == OtOpApp(
        "->", (OtOpApp("arith.nat", ()), BOOL))
    assert translate_type(X) == XT


def test_prelude_statements_in_article():
    res = run_article(write_article(ArticlePlan(emit_prelude("axiomatize"))))
    assert res.exports == ()
    assert {n for n, _ in res.assumptions} == set(axiom_statements())
    for name, seq in res.assumptions:
        assert alpha_key(seq.concl) == alpha_key(axiom_statements()[name]) and not seq.hyps


def test_prelude_define_mode_assumes_nothing():
    pre = Prelude.emit("define")
    assert run_article(write_article(ArticlePlan(pre))).assumptions == ()
    for name, d in pre.axioms.items():
        assert not d.hyps and alpha_key(d.concl) == alpha_key(axiom_statements()[name])


def test_prelude_unknown_mode():
    with pytest.raises(ValueError):
        Prelude.emit("guess")


def test_reserved_theory_name(leibniz_sig):
    with pytest.raises(ExportError):
        Exporter(leibniz_sig, "sttx")


# -- rule templates and congruence frames ------------------------------------------------------


@pytest.mark.parametrize("mode", ["axiomatize", "define"])
@pytest.mark.parametrize("rule", sorted(TEMPLATE_INSTANCES))
def test_template_instances_verify(rule, mode):
    pre = Prelude.emit(mode)
    assert check_in_article(pre, instances(TEMPLATE_INSTANCES[rule], pre, 100, seed=7)) == []


@pytest.mark.parametrize("mode", ["axiomatize", "define"])
@pytest.mark.parametrize("frame", sorted(CONGRUENCE_INSTANCES))
def test_congruence_instances_verify(frame, mode):
    pre = Prelude.emit(mode)
    assert check_in_article(pre, instances(CONGRUENCE_INSTANCES[frame], pre, 100, seed=11)) == []


def test_checker_notices_a_wrong_expectation():
    pre = Prelude.emit("axiomatize")
    items = instances(TEMPLATE_INSTANCES["ImpElim"], pre, 3, seed=1)
    name, d, hyps, concl = items[0]
    tampered = [(name, d, hyps, imp(concl, concl))] + items[1:]
    assert len(check_in_article(pre, tampered)) == 1


def test_imp_congruence_on_both_sides():
    """p = p' and q = q' give (p ⇒ q) = (p' ⇒ q')."""
    pre = Prelude.emit("axiomatize")
    p, p2, q, q2 = (OtVar(n, BOOL) for n in ("p", "p'", "q", "q'"))
    left = congruence(pre, hol.assume(eq(p, p2, BOOL)), ImpL(q))
    right = congruence(pre, hol.assume(eq(q, q2, BOOL)), ImpR(p2))
    whole = hol.trans(left, right)
    assert alpha_key(whole.concl) == alpha_key(eq(imp(p, q), imp(p2, q2), BOOL))
    assert {alpha_key(h) for h in whole.hyps} == {alpha_key(eq(p, p2, BOOL)),
                                                  alpha_key(eq(q, q2, BOOL))}
    items = [("both", whole, set(whole.hyps), whole.concl)]
    assert check_in_article(pre, items) == []


def test_forall_intro_side_condition():
    pre = Prelude.emit("axiomatize")
    v = OtVar("v", BOOL)
    with pytest.raises(FreshnessViolation):
        derive_rule("ForallIntro", pre, v, derive_rule("Assume", v))


def test_lam_congruence_verifies_on_beta_equation():
    pre = Prelude.emit("axiomatize")
    g = BoolGen(random.Random(5))
    r = g.redex(2)
    v = OtVar("w", A)
    d = congruence(pre, hol.beta_conv(r), Lam(v))
    assert check_in_article(pre, [("lam", d, set(), d.concl)]) == []


def test_all_form_matches_prelude_constant():
    v = OtVar("x", BOOL)
    pre = Prelude.emit("axiomatize")
    assert pre.mk_forall(v, v) == all_(v, v)


# -- conversion proofs ---------------------------------------------------------------------


def test_conv_to_eq_refl_statement(leibniz_sig):
    body = forall("x", X, App(App(const("leibniz", X), Var("x")), Var("x")))
    ex = Exporter(leibniz_sig, "leibniz", "define")
    src = ex.tr.term(body, {}, ("X",))
    _, trace = normalize(body, leibniz_sig)
    d = conv_to_eq(ex.prelude, body, src, trace, leibniz_sig, ex.delta_instance)
    x = OtVar("x", XT)
    P = OtVar("P", fn(XT, BOOL))
    unfolded = all_(x, all_(P, imp(OtApp(P, x), OtApp(P, x))))
    assert alpha_key(d.concl) == alpha_key(eq(src, unfolded, BOOL))
    assert alpha_key(src) == alpha_key(all_(x, OtApp(OtApp(leibniz_const(XT), x), x)))
    plan = ArticlePlan(ex.prelude, ex.emitted_axioms, [Exported("c", d, d.sequent)])
    res = run_article(write_article(plan))
    assert res.assumptions == () and alpha_key(res.export_named("c").concl) == alpha_key(d.concl)


def test_conv_to_eq_empty_trace_is_refl(leibniz_sig):
    ex = Exporter(leibniz_sig, "leibniz")
    t = ex.tr.term(Var("y"), {"y": BOOL})
    assert conv_to_eq(ex.prelude, Var("y"), t, (), leibniz_sig, ex.delta_instance).rule == "refl"


def test_conv_to_eq_rejects_mismatched_trace(leibniz_sig):
    ex = Exporter(leibniz_sig, "leibniz")
    body = App(App(const("leibniz", PROP), Var("y")), Var("y"))
    _, trace = normalize(body, leibniz_sig)
    wrong = OtVar("y", BOOL)
    with pytest.raises((TraceMismatch, PathMismatch)):
        conv_to_eq(ex.prelude, body, wrong, trace, leibniz_sig, ex.delta_instance)


def _conversion_items(sig, ex, terms):
    defs = definitions_of(sig)
    items = []
    for i, (t, _) in enumerate(terms):
        src = ex.tr.term(t, {})
        _, trace = normalize(t, sig)
        d = conv_to_eq(ex.prelude, t, src, trace, sig, ex.delta_instance)
        expected_rhs = ex.tr.term(innermost_nf(t, defs), {})
        items.append((f"c{i}", d, src, expected_rhs))
    return items


@pytest.mark.parametrize("mode", ["define", "axiomatize"])
def test_conversion_oracle_mininat(mininat, mode):
    start = time.perf_counter()
    sig = mininat.sig
    ex = Exporter(sig, "mininat", mode)
    items = _conversion_items(sig, ex, closed_terms(sig, seed=3, count=500, max_size=25))
    plan = ArticlePlan(ex.prelude, ex.emitted_axioms,
                       [Exported(n, d, d.sequent) for n, d, _, _ in items])
    res = run_article(write_article(plan))
    if mode == "define":
        assert res.assumptions == ()
    for name, _, src, rhs in items:
        seq = res.export_named(name)
        lhs, got = hol.dest_eq(seq.concl)
        assert not seq.hyps
        assert alpha_key(lhs) == alpha_key(src), name
        assert alpha_key(got) == alpha_key(rhs), name
    assert time.perf_counter() - start < 60


# -- whole theorems and theories ------------------------------------------------------------


def test_refl_theorem_export():
    theory = load_corpus("leibniz.sdk")
    thm = theory.theorems["refl"]
    plan = translate_theorem(thm, "leibniz")
    res = run_article(write_article(plan))
    x = OtVar("x", XT)
    want = all_(x, OtApp(OtApp(leibniz_const(XT), x), x))
    seq = res.export_named("theorem")
    assert seq.hyps == () and alpha_key(seq.concl) == alpha_key(want)


def test_mininat_theory_both_modes(mininat):
    for mode in ("axiomatize", "define"):
        plan = translate_theory(mininat.sig, "mininat", mode)
        res = run_article(write_article(plan))
        assert len(res.exports) == len(plan.exports) == len(mininat.theorems)
        for e in plan.exports:
            got = res.export_named(e.name)
            assert alpha_key(got.concl) == alpha_key(e.sequent.concl)
        if mode == "define":
            assert all(not n.endswith(".def") for n, _ in res.assumptions)


def test_write_article_is_deterministic(mininat):
    one = write_article(translate_theory(mininat.sig, "mininat"))
    two = write_article(translate_theory(mininat.sig, "mininat"))
    assert one == two


def test_empty_plan():
    assert write_article(None) == "6\nversion\n"
    res = run_article(write_article(None))
    assert res.exports == () and res.assumptions == ()


def test_phantom_type_parameter_rejected():
    nat = TypeOpRef("nat", 0)
    sig = Signature().extend(TyOpDecl(nat)).extend(CstDefn(
        "k", poly_type(["X"], Fun(OpApp(nat, ()), OpApp(nat, ()))),
        poly_term(["X"], lam("n", OpApp(nat, ()), Var("n")))))
    ex = Exporter(sig, "thy")
    with pytest.raises(ExportError):
        ex.delta_theorem("k")


def test_lemma_reuse_stays_closed(mininat):
    """Later lemmas cite earlier ones; the article still assumes only axioms."""
    res = run_article(write_article(translate_theory(mininat.sig, "mininat")))
    lemma_names = {f"mininat.{n}" for n in mininat.theorems}
    assert not lemma_names & {n for n, _ in res.assumptions}
