import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import X
from gen import TermGen, nat_types
from oracle import definitions_of, innermost_nf
from sttx.core import (
    BETA, PROP, Abs, App, Bound, ConstApp, Delta, Forall, FuelExhausted, Fun, Imp, NotARedex,
    OpApp, PolyTerm, PolyType, RewriteStep, Signature, TVar, TypeOpRef, UndefinedConstant,
    UnknownConstant, Var, alpha_eq, apply_step, arrow, const, conv, forall, free_vars,
    head_normalize, is_normal, lam, leftmost_outermost, normalize, poly_term, poly_type,
    replay, show, subst_tm, subst_ty, term_size,
)

Y = TVar("Y")
A = OpApp(TypeOpRef("a", 0))
B = OpApp(TypeOpRef("b", 0))


def refl_statement(tv="X", v="x"):
    t = TVar(tv)
    return poly_term([tv], forall(v, t, App(App(const("leibniz", t), Var(v)), Var(v))))


def unfolded_statement():
    return poly_term(["X"], forall("x", X, forall("P", Fun(X, PROP),
                                                  Imp(App(Var("P"), Var("x")), App(Var("P"), Var("x"))))))


# -- alpha equivalence ---------------------------------------------------------------------


def test_alpha_renaming():
    assert alpha_eq(lam("x", A, Var("x")), lam("y", A, Var("y")))


def test_alpha_annotation_mismatch():
    assert not alpha_eq(lam("x", A, Var("x")), lam("x", B, Var("x")))


def test_alpha_refl_statement_binder_names():
    assert alpha_eq(refl_statement("X", "x"), refl_statement("Y", "z"))


def test_alpha_free_names_matter():
    assert not alpha_eq(Var("x"), Var("y"))
    assert not alpha_eq(lam("x", A, Var("z")), lam("x", A, Var("w")))


def test_alpha_polyterm_vs_monoterm():
    t = lam("x", A, Var("x"))
    assert alpha_eq(PolyTerm((), t), t)
    assert not alpha_eq(PolyTerm(("X",), t), t)


# -- substitution ----------------------------------------------------------------------------


def test_subst_ty_avoids_capture():
    pt = poly_type(["Y"], Fun(Y, X))
    out = subst_ty(pt, {"X": Y})
    assert out == poly_type(["Z"], Fun(TVar("Z"), Y))
    assert "Y" in show(out) and show(out).startswith("∀Y'.")


def test_subst_ty_variable_and_empty_map():
    assert subst_ty(X, {"X": PROP}) == PROP
    assert subst_ty(A, {}) is A


def test_subst_tm_simple():
    assert subst_tm(App(Var("P"), Var("x")), "x", Var("y")) == App(Var("P"), Var("y"))


def test_subst_tm_capture_avoiding():
    out = subst_tm(lam("y", A, Var("x")), "x", Var("y"))
    assert isinstance(out, Abs) and out.body == Var("y")
    assert free_vars(out) == {"y"}
    assert show(out) == "λy':a. y"


# -- single steps ----------------------------------------------------------------------------


def test_delta_at_root(leibniz_sig):
    t = App(App(const("leibniz", A), Var("x")), Var("y"))
    out = apply_step(t, RewriteStep((0, 0), Delta("leibniz")), leibniz_sig)
    expected_head = lam("x'", A, lam("y'", A, forall("P", Fun(A, PROP), Imp(
        App(Var("P"), Var("x'")), App(Var("P"), Var("y'"))))))
    assert out == App(App(expected_head, Var("x")), Var("y"))


def test_beta_at_root():
    t = App(lam("x", A, Var("x")), Var("y"))
    assert apply_step(t, RewriteStep((), BETA), Signature()) == Var("y")


def test_delta_on_declared_constant(declared_sig):
    with pytest.raises(UndefinedConstant):
        apply_step(const("c"), RewriteStep((), Delta("c")), declared_sig)


def test_delta_on_unknown_constant():
    with pytest.raises(UnknownConstant):
        apply_step(const("nope"), RewriteStep((), Delta("nope")), Signature())


def test_step_not_a_redex():
    with pytest.raises(NotARedex) as e:
        apply_step(App(Var("f"), Var("y")), RewriteStep((), BETA), Signature())
    assert e.value.position == ()
    with pytest.raises(NotARedex):
        apply_step(Var("f"), RewriteStep((1, 0), BETA), Signature())


def test_delta_needs_full_type_instantiation(leibniz_sig):
    assert leftmost_outermost(ConstApp("leibniz", ()), leibniz_sig) is None
    with pytest.raises(NotARedex):
        apply_step(ConstApp("leibniz", ()), RewriteStep((), Delta("leibniz")), leibniz_sig)


# -- normalization ---------------------------------------------------------------------------


def test_normalize_leibniz_refl(leibniz_sig):
    body = App(App(const("leibniz", X), Var("x")), Var("x"))
    nf, trace = normalize(body, leibniz_sig)
    assert nf == forall("P", Fun(X, PROP), Imp(App(Var("P"), Var("x")), App(Var("P"), Var("x"))))
    assert [s.kind for s in trace] == [Delta("leibniz"), BETA, BETA]
    assert [s.position for s in trace] == [(0, 0), (0,), ()]


def test_normalize_normal_term(leibniz_sig):
    t = forall("P", Fun(X, PROP), App(Var("P"), Var("x")))
    assert normalize(t, leibniz_sig) == (t, ())
    assert is_normal(t, leibniz_sig)


def test_normalize_polyterm(leibniz_sig):
    nf, trace = normalize(refl_statement(), leibniz_sig)
    assert nf == unfolded_statement() and len(trace) == 3


def test_fuel_guard(monkeypatch):
    f = Fun(A, A)
    omega = lam("x", f, App(Var("x"), Var("x")))  # ill-typed on purpose
    with pytest.raises(FuelExhausted):
        normalize(App(omega, omega), Signature(), fuel=50)
    monkeypatch.setenv("STTX_FUEL", "7")
    with pytest.raises(FuelExhausted) as e:
        normalize(App(omega, omega), Signature())
    assert e.value.fuel == 7


def test_head_normalize_stops_at_head(leibniz_sig):
    inner = App(lam("y", A, Var("y")), Var("z"))
    t = App(App(const("leibniz", A), inner), Var("x"))
    hnf, trace = head_normalize(t, leibniz_sig)
    assert isinstance(hnf, Forall) and len(trace) == 3
    assert not is_normal(hnf, leibniz_sig)


# -- conversion ------------------------------------------------------------------------------


def test_conv_refl_statement(leibniz_sig):
    traces = conv(refl_statement(), unfolded_statement(), leibniz_sig)
    assert traces is not None and len(traces[0]) == 3 and traces[1] == ()


def test_conv_identity(leibniz_sig):
    t = refl_statement()
    assert conv(t, t, leibniz_sig) is not None


def test_conv_distinct_normal_forms():
    a = forall("x", PROP, Var("x"))
    b = forall("x", PROP, Imp(Var("x"), Var("x")))
    assert conv(a, b, Signature()) is None


def test_conv_tybinder_count_differs(leibniz_sig):
    assert conv(refl_statement(), PolyTerm((), refl_statement().body), leibniz_sig) is None


# -- properties over random well-typed terms ----------------------------------------------


def _random_term(sig, seed, max_size=30):
    rng = random.Random(seed)
    gen = TermGen(sig, rng)
    _, types = nat_types(sig)
    while True:
        t = gen.term(rng.choice(types), (), rng.randint(2, max_size // 2))
        if t is not None and term_size(t) <= max_size:
            return t


seeds = st.integers(min_value=0, max_value=10**9)


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_replay_soundness(mininat, seed):
    t = _random_term(mininat.sig, seed)
    nf, trace = normalize(t, mininat.sig)
    assert replay(t, trace, mininat.sig) == nf


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_idempotence(mininat, seed):
    nf, _ = normalize(_random_term(mininat.sig, seed), mininat.sig)
    assert normalize(nf, mininat.sig) == (nf, ())


@settings(max_examples=150, deadline=None)
@given(seeds)
def test_agrees_with_innermost(mininat, seed):
    t = _random_term(mininat.sig, seed)
    assert alpha_eq(normalize(t, mininat.sig)[0], innermost_nf(t, definitions_of(mininat.sig)))


@settings(max_examples=100, deadline=None)
@given(seeds, seeds)
def test_alpha_is_congruence(mininat, s1, s2):
    t, u = _random_term(mininat.sig, s1, 12), _random_term(mininat.sig, s2, 12)
    assert alpha_eq(t, t)
    assert alpha_eq(t, u) == alpha_eq(u, t)
    if alpha_eq(t, u):
        assert alpha_eq(App(t, Var("z")), App(u, Var("z")))
        assert alpha_eq(Abs("q", PROP, t), Abs("r", PROP, u))


closed_monotypes = st.recursive(
    st.sampled_from([PROP, A, B]), lambda inner: st.builds(Fun, inner, inner), max_leaves=6
)
monotypes = st.recursive(
    st.sampled_from([PROP, A, X, Y, TVar("Z")]), lambda inner: st.builds(Fun, inner, inner),
    max_leaves=6,
)


@given(closed_monotypes, st.dictionaries(st.sampled_from("XYZ"), closed_monotypes))
def test_subst_ty_closed_identity(ty, mapping):
    assert subst_ty(ty, mapping) == ty


@given(monotypes, closed_monotypes, closed_monotypes)
def test_subst_ty_disjoint_maps_commute(ty, a, b):
    one = subst_ty(subst_ty(ty, {"X": a}), {"Y": b})
    two = subst_ty(subst_ty(ty, {"Y": b}), {"X": a})
    assert one == two == subst_ty(ty, {"X": a, "Y": b})


def test_subst_ty_on_terms_and_polytypes():
    t = lam("x", X, Var("x"))
    assert subst_ty(t, {"X": A}) == lam("x", A, Var("x"))
    assert subst_ty(poly_term(["Y"], lam("y", Y, Var("y"))), {"X": A}) == poly_term(
        ["Y"], lam("y", Y, Var("y")))
    assert subst_ty(PolyType(("Y",), arrow(X, PROP)), {"X": A}).body == Fun(A, PROP)


def test_bound_indices_print_names():
    assert show(Abs("x", A, Bound(0))) == "λx:a. x"
