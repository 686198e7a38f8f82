"""The STT∀βδ term language and its βδ rewriting engine."""

from .printer import show, show_term, show_type
from .rewrite import (
    BETA, DEFAULT_FUEL, Beta, Delta, FuelExhausted, NotARedex, RewriteError, RewriteStep,
    UndefinedConstant, apply_step, conv, default_fuel, head_normalize, is_normal,
    leftmost_outermost, normalize, redex_kind, replace_at, replay, subterm,
)
from .signature import (
    AxiomDecl, Context, CstDecl, CstDefn, Signature, ThmDefn, TyOpDecl, UnknownConstant,
)
from .terms import (
    PROP, Abs, App, Bound, ConstApp, Forall, Fun, Imp, MonoType, OpApp, PolyTerm, PolyType,
    Prop, TBound, Term, TVar, TypeOpRef, Var, abstract, alpha_eq, app, arrow, as_poly_term,
    as_poly_type, close_tybinder, const, constants, forall, free_vars, instantiate,
    instantiate_outer_tybinder, is_locally_closed, lam, map_term_types, map_type,
    open_poly_term, open_poly_type, poly_term, poly_type, shift, spine, subst_tm, subst_ty,
    term_size, ty_abstract, ty_free_vars, ty_instantiate,
)
