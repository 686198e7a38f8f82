"""Types and terms of STT∀βδ.

Bound variables are nameless: term binders (λ, ∀) use de Bruijn indices and
prenex type binders use de Bruijn indices counted from the innermost type
binder.  The ``var`` / ``binders`` fields only keep a name hint for printing
and are ignored by ``==``, so structural equality is alpha-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Union


class _Node:
    __slots__ = ()

    def __str__(self):
        from .printer import show

        return show(self)


# -- types -----------------------------------------------------------------


@dataclass(frozen=True)
class TypeOpRef(_Node):
    name: str
    arity: int


@dataclass(frozen=True)
class TVar(_Node):
    """A free (named) type variable."""

    name: str


@dataclass(frozen=True)
class TBound(_Node):
    """A type variable bound by an enclosing prenex binder."""

    index: int


@dataclass(frozen=True)
class Prop(_Node):
    pass


@dataclass(frozen=True)
class Fun(_Node):
    dom: "MonoType"
    cod: "MonoType"


@dataclass(frozen=True)
class OpApp(_Node):
    op: TypeOpRef
    args: tuple = ()


MonoType = Union[TVar, TBound, Prop, Fun, OpApp]
PROP = Prop()


@dataclass(frozen=True, eq=False)
class PolyType(_Node):
    binders: tuple
    body: MonoType

    def __eq__(self, other):
        return (
            isinstance(other, PolyType)
            and len(self.binders) == len(other.binders)
            and self.body == other.body
        )

    def __hash__(self):
        return hash((len(self.binders), self.body))


# -- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class Var(_Node):
    """A free (named) term variable."""

    name: str


@dataclass(frozen=True)
class Bound(_Node):
    index: int


@dataclass(frozen=True)
class ConstApp(_Node):
    cst: str
    tyargs: tuple = ()


@dataclass(frozen=True)
class Abs(_Node):
    var: str = field(compare=False)
    annot: MonoType = None
    body: "Term" = None


@dataclass(frozen=True)
class App(_Node):
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Imp(_Node):
    lhs: "Term"
    rhs: "Term"


@dataclass(frozen=True)
class Forall(_Node):
    var: str = field(compare=False)
    annot: MonoType = None
    body: "Term" = None


Term = Union[Var, Bound, ConstApp, Abs, App, Imp, Forall]


@dataclass(frozen=True, eq=False)
class PolyTerm(_Node):
    """Prenex type binders over a monoterm.

    The binders read as type abstractions in a definition body and as type
    quantifiers in a proposition; which one is meant depends on where the
    polyterm is used.
    """

    tybinders: tuple
    body: Term

    def __eq__(self, other):
        return (
            isinstance(other, PolyTerm)
            and len(self.tybinders) == len(other.tybinders)
            and self.body == other.body
        )

    def __hash__(self):
        return hash((len(self.tybinders), self.body))


def as_poly_term(t) -> PolyTerm:
    return t if isinstance(t, PolyTerm) else PolyTerm((), t)


def as_poly_type(ty) -> PolyType:
    return ty if isinstance(ty, PolyType) else PolyType((), ty)


# -- type-level operations ---------------------------------------------------


def map_type(ty: MonoType, leaf: Callable[[MonoType], MonoType]) -> MonoType:
    """Rebuild ``ty`` replacing each variable (free or bound) by ``leaf(var)``."""
    match ty:
        case TVar() | TBound():
            return leaf(ty)
        case Prop():
            return ty
        case Fun(dom, cod):
            return Fun(map_type(dom, leaf), map_type(cod, leaf))
        case OpApp(op, args):
            return OpApp(op, tuple(map_type(a, leaf) for a in args))
    raise TypeError(f"not a monotype: {ty!r}")


def map_term_types(t: Term, f: Callable[[MonoType], MonoType]) -> Term:
    """Apply ``f`` to every type annotation and type argument inside ``t``."""
    match t:
        case Var() | Bound():
            return t
        case ConstApp(c, args):
            return ConstApp(c, tuple(f(a) for a in args))
        case Abs(x, a, b):
            return Abs(x, f(a), map_term_types(b, f))
        case Forall(x, a, b):
            return Forall(x, f(a), map_term_types(b, f))
        case App(g, u):
            return App(map_term_types(g, f), map_term_types(u, f))
        case Imp(l, r):
            return Imp(map_term_types(l, f), map_term_types(r, f))
    raise TypeError(f"not a term: {t!r}")


def ty_free_vars(ty) -> set[str]:
    out: set[str] = set()

    def leaf(v):
        if isinstance(v, TVar):
            out.add(v.name)
        return v

    match ty:
        case PolyType(body=body):
            map_type(body, leaf)
        case PolyTerm(body=body):
            map_term_types(body, lambda a: map_type(a, leaf))
        case TVar() | TBound() | Prop() | Fun() | OpApp():
            map_type(ty, leaf)
        case _:
            map_term_types(ty, lambda a: map_type(a, leaf))
    return out


def ty_abstract(ty: MonoType, names) -> MonoType:
    """Bind the free variables ``names`` (outermost first) as prenex indices."""
    n = len(names)
    pos = {x: n - 1 - i for i, x in enumerate(names)}
    return map_type(ty, lambda v: TBound(pos[v.name]) if isinstance(v, TVar) and v.name in pos else v)


def ty_instantiate(ty: MonoType, args, nbinders: int | None = None) -> MonoType:
    """Replace the outermost ``len(args)`` of ``nbinders`` prenex indices by ``args``."""
    n = len(args) if nbinders is None else nbinders
    lo = n - len(args)

    def leaf(v):
        if isinstance(v, TBound) and lo <= v.index < n:
            return args[n - 1 - v.index]
        return v

    return map_type(ty, leaf)


def subst_ty(target, mapping: Mapping[str, MonoType]):
    """Simultaneous substitution of free type variables.

    Bound type variables are indices, so an image can never be captured.
    """
    if not mapping:
        return target

    def leaf(v):
        if isinstance(v, TVar):
            return mapping.get(v.name, v)
        return v

    match target:
        case PolyType(binders, body):
            return PolyType(binders, map_type(body, leaf))
        case PolyTerm(binders, body):
            return PolyTerm(binders, map_term_types(body, lambda a: map_type(a, leaf)))
        case TVar() | TBound() | Prop() | Fun() | OpApp():
            return map_type(target, leaf)
    return map_term_types(target, lambda a: map_type(a, leaf))


def open_poly_type(pt: PolyType, names) -> MonoType:
    return ty_instantiate(pt.body, tuple(TVar(x) for x in names))


def open_poly_term(pt: PolyTerm, names) -> Term:
    args = tuple(TVar(x) for x in names)
    return map_term_types(pt.body, lambda a: ty_instantiate(a, args))


def instantiate_outer_tybinder(pt: PolyTerm, ty: MonoType) -> PolyTerm:
    """∀X.τ applied to ``ty``: drop the outermost binder and substitute."""
    n = len(pt.tybinders)
    body = map_term_types(pt.body, lambda a: ty_instantiate(a, (ty,), n))
    return PolyTerm(pt.tybinders[1:], body)


def close_tybinder(pt: PolyTerm, name: str) -> PolyTerm:
    """Add ``name`` as a new outermost binder of ``pt``."""
    n = len(pt.tybinders)
    body = map_term_types(
        pt.body,
        lambda a: map_type(a, lambda v: TBound(n) if v == TVar(name) else v),
    )
    return PolyTerm((name,) + tuple(pt.tybinders), body)


# -- term-level operations ---------------------------------------------------


def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    if d == 0:
        return t
    match t:
        case Bound(k):
            return Bound(k + d) if k >= cutoff else t
        case Var() | ConstApp():
            return t
        case Abs(x, a, b):
            return Abs(x, a, shift(b, d, cutoff + 1))
        case Forall(x, a, b):
            return Forall(x, a, shift(b, d, cutoff + 1))
        case App(f, u):
            return App(shift(f, d, cutoff), shift(u, d, cutoff))
        case Imp(l, r):
            return Imp(shift(l, d, cutoff), shift(r, d, cutoff))
    raise TypeError(f"not a term: {t!r}")


def _subst_index(t: Term, j: int, s: Term) -> Term:
    match t:
        case Bound(k):
            return s if k == j else t
        case Var() | ConstApp():
            return t
        case Abs(x, a, b):
            return Abs(x, a, _subst_index(b, j + 1, shift(s, 1)))
        case Forall(x, a, b):
            return Forall(x, a, _subst_index(b, j + 1, shift(s, 1)))
        case App(f, u):
            return App(_subst_index(f, j, s), _subst_index(u, j, s))
        case Imp(l, r):
            return Imp(_subst_index(l, j, s), _subst_index(r, j, s))
    raise TypeError(f"not a term: {t!r}")


def instantiate(body: Term, u: Term) -> Term:
    """``body`` is the scope of a binder; substitute ``u`` for index 0."""
    return shift(_subst_index(body, 0, shift(u, 1)), -1)


def abstract(t: Term, name: str, depth: int = 0) -> Term:
    """Turn free occurrences of ``name`` into the index of a new binder."""
    match t:
        case Var(x):
            return Bound(depth) if x == name else t
        case Bound(k):
            return Bound(k + 1) if k >= depth else t
        case ConstApp():
            return t
        case Abs(x, a, b):
            return Abs(x, a, abstract(b, name, depth + 1))
        case Forall(x, a, b):
            return Forall(x, a, abstract(b, name, depth + 1))
        case App(f, u):
            return App(abstract(f, name, depth), abstract(u, name, depth))
        case Imp(l, r):
            return Imp(abstract(l, name, depth), abstract(r, name, depth))
    raise TypeError(f"not a term: {t!r}")


def subst_tm(target: Term, var: str, image: Term) -> Term:
    """Capture-avoiding substitution of ``image`` for the free variable ``var``."""
    return instantiate(abstract(target, var), image)


def free_vars(t) -> set[str]:
    out: set[str] = set()

    def go(t):
        match t:
            case Var(x):
                out.add(x)
            case Abs(_, _, b) | Forall(_, _, b):
                go(b)
            case App(a, b) | Imp(a, b):
                go(a)
                go(b)

    go(t.body if isinstance(t, PolyTerm) else t)
    return out


def constants(t) -> set[str]:
    out: set[str] = set()

    def go(t):
        match t:
            case ConstApp(c, _):
                out.add(c)
            case Abs(_, _, b) | Forall(_, _, b):
                go(b)
            case App(a, b) | Imp(a, b):
                go(a)
                go(b)

    go(t.body if isinstance(t, PolyTerm) else t)
    return out


def is_locally_closed(t: Term, depth: int = 0) -> bool:
    match t:
        case Bound(k):
            return k < depth
        case Var() | ConstApp():
            return True
        case Abs(_, _, b) | Forall(_, _, b):
            return is_locally_closed(b, depth + 1)
        case App(a, b) | Imp(a, b):
            return is_locally_closed(a, depth) and is_locally_closed(b, depth)
    raise TypeError(f"not a term: {t!r}")


def term_size(t: Term) -> int:
    match t:
        case Var() | Bound() | ConstApp():
            return 1
        case Abs(_, _, b) | Forall(_, _, b):
            return 1 + term_size(b)
        case App(a, b) | Imp(a, b):
            return 1 + term_size(a) + term_size(b)
    raise TypeError(f"not a term: {t!r}")


def alpha_eq(t, u) -> bool:
    """Alpha-equivalence; binders are nameless so this is plain equality."""
    if isinstance(t, PolyTerm) != isinstance(u, PolyTerm):
        return as_poly_term(t) == as_poly_term(u)
    return t == u


# -- smart constructors ------------------------------------------------------


def arrow(*tys: MonoType) -> MonoType:
    """``arrow(A, B, C)`` is ``A → B → C``."""
    out = tys[-1]
    for a in reversed(tys[:-1]):
        out = Fun(a, out)
    return out


def lam(x: str, annot: MonoType, body: Term) -> Abs:
    return Abs(x, annot, abstract(body, x))


def forall(x: str, annot: MonoType, body: Term) -> Forall:
    return Forall(x, annot, abstract(body, x))


def app(f: Term, *args: Term) -> Term:
    for a in args:
        f = App(f, a)
    return f


def const(c: str, *tyargs: MonoType) -> ConstApp:
    return ConstApp(c, tuple(tyargs))


def poly_type(binders: Iterable[str], body: MonoType) -> PolyType:
    binders = tuple(binders)
    return PolyType(binders, ty_abstract(body, binders))


def poly_term(binders: Iterable[str], body: Term) -> PolyTerm:
    binders = tuple(binders)
    return PolyTerm(binders, map_term_types(body, lambda a: ty_abstract(a, binders)))


def spine(t: Term) -> tuple[Term, list[Term]]:
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args
