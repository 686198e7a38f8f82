"""A small λΠ-modulo type checker for the encoding signature.

Conversion is β, unfolding of the file's own definitions, and the five
rewrite rules that turn ``term``/``proof`` of a code into a product.  It only
understands the encoding signature and is used to confirm that encoded
proofs have the Dedukti type their statements predict.  Terms are handled
internally with de Bruijn indices.
"""

from __future__ import annotations

from functools import lru_cache

from .syntax import Declaration, Definition, DkApp, DkLam, DkPi, DkSym, DkVar, parse_term


class LfTypeError(Exception):
    pass


# Internal terms: ("v", i) | ("s", name) | ("a", f, x) | ("l", hint, A, b) | ("p", hint, A, b)
TYPE_SORT = ("s", "Type")
KIND_SORT = ("s", "Kind")

_SIGNATURE_TEXT = {
    "type": "Type",
    "arr": "type -> type -> type",
    "prop": "type",
    "ptype": "Type",
    "p": "type -> ptype",
    "term": "ptype -> Type",
    "impl": "term (p (arr prop (arr prop prop)))",
    "forallKtype": "(type -> ptype) -> ptype",
    "proof": "term (p prop) -> Type",
    "forall": "(t : type) -> term (p (arr (arr t prop) prop))",
    "forallKprop": "(type -> term (p prop)) -> term (p prop)",
}


def internal(d, env=()) -> tuple:
    match d:
        case DkVar(x):
            for i, y in enumerate(reversed(env)):
                if y == x:
                    return ("v", i)
            raise LfTypeError(f"unbound variable {x}")
        case DkSym(x):
            return ("s", x)
        case DkApp(f, a):
            return ("a", internal(f, env), internal(a, env))
        case DkLam(x, a, b):
            return ("l", x, internal(a, env), internal(b, env + (x,)))
        case DkPi(x, a, b):
            return ("p", x or "_", internal(a, env), internal(b, env + (x or " ",)))
    raise TypeError(f"not a Dedukti term: {d!r}")


def shift(t, d: int, cutoff: int = 0):
    match t[0]:
        case "v":
            return ("v", t[1] + d) if t[1] >= cutoff else t
        case "s":
            return t
        case "a":
            return ("a", shift(t[1], d, cutoff), shift(t[2], d, cutoff))
        case _:
            return (t[0], t[1], shift(t[2], d, cutoff), shift(t[3], d, cutoff + 1))


def subst(body, arg, j: int = 0):
    """Substitute ``arg`` for index ``j`` in ``body`` and drop the binder."""
    match body[0]:
        case "v":
            i = body[1]
            if i == j:
                return shift(arg, j)
            return ("v", i - 1) if i > j else body
        case "s":
            return body
        case "a":
            return ("a", subst(body[1], arg, j), subst(body[2], arg, j))
        case _:
            return (body[0], body[1], subst(body[2], arg, j), subst(body[3], arg, j + 1))


def _spine(t):
    args = []
    while t[0] == "a":
        args.append(t[2])
        t = t[1]
    return t, args[::-1]


def _app(f, *args):
    for a in args:
        f = ("a", f, a)
    return f


class Checker:
    def __init__(self):
        self.types: dict = {}
        self.defs: dict = {}
        for name, text in _SIGNATURE_TEXT.items():
            self.types[name] = internal(parse_term(text))

    # -- reduction ------------------------------------------------------------------

    def whnf(self, t):
        while True:
            head, args = _spine(t)
            if head[0] == "l" and args:
                t = _app(subst(head[3], args[0]), *args[1:])
                continue
            if head[0] == "s":
                if head[1] in self.defs:
                    t = _app(self.defs[head[1]], *args)
                    continue
                r = self._rewrite(head[1], args)
                if r is not None:
                    t = r
                    continue
            return t

    def _rewrite(self, sym: str, args):
        if len(args) != 1 or sym not in ("term", "proof"):
            return None
        code_head, code_args = _spine(self.whnf(args[0]))
        if code_head[0] != "s":
            return None
        match sym, code_head[1], len(code_args):
            case "term", "p", 1:
                inner_head, inner_args = _spine(self.whnf(code_args[0]))
                if inner_head == ("s", "arr") and len(inner_args) == 2:
                    l, r = inner_args
                    return ("p", "_", _app(("s", "term"), _app(("s", "p"), l)),
                            shift(_app(("s", "term"), _app(("s", "p"), r)), 1))
            case "term", "forallKtype", 1:
                f = shift(code_args[0], 1)
                return ("p", "x", ("s", "type"), _app(("s", "term"), _app(f, ("v", 0))))
            case "proof", "forall", 2:
                t, f = code_args
                return ("p", "x", _app(("s", "term"), _app(("s", "p"), t)),
                        _app(("s", "proof"), _app(shift(f, 1), ("v", 0))))
            case "proof", "impl", 2:
                l, r = code_args
                return ("p", "_", _app(("s", "proof"), l), shift(_app(("s", "proof"), r), 1))
            case "proof", "forallKprop", 1:
                f = shift(code_args[0], 1)
                return ("p", "x", ("s", "type"), _app(("s", "proof"), _app(f, ("v", 0))))
        return None

    def normal(self, t):
        t = self.whnf(t)
        match t[0]:
            case "v" | "s":
                return t
            case "a":
                head, args = _spine(t)
                return _app(head, *[self.normal(a) for a in args])
            case _:
                return (t[0], "", self.normal(t[2]), self.normal(t[3]))

    def conv(self, a, b) -> bool:
        return a == b or _strip(self.normal(a)) == _strip(self.normal(b))

    # -- typing ---------------------------------------------------------------------

    def infer(self, ctx: tuple, t):
        match t[0]:
            case "v":
                return shift(ctx[len(ctx) - 1 - t[1]], t[1] + 1)
            case "s":
                if t == TYPE_SORT:
                    return KIND_SORT
                if t[1] not in self.types:
                    raise LfTypeError(f"unknown symbol {t[1]}")
                return self.types[t[1]]
            case "a":
                fty = self.whnf(self.infer(ctx, t[1]))
                if fty[0] != "p":
                    raise LfTypeError(f"applying a non-function of type {_show(fty)}")
                aty = self.infer(ctx, t[2])
                if not self.conv(aty, fty[2]):
                    raise LfTypeError(
                        f"argument has type {_show(aty)}, expected {_show(fty[2])}"
                    )
                return subst(fty[3], t[2])
            case "l":
                self._sort(ctx, t[2])
                body_ty = self.infer(ctx + (t[2],), t[3])
                return ("p", t[1], t[2], body_ty)
            case "p":
                self._sort(ctx, t[2])
                return self._sort(ctx + (t[2],), t[3])
        raise TypeError(t)

    def _sort(self, ctx, ty):
        s = self.whnf(self.infer(ctx, ty))
        if s not in (TYPE_SORT, KIND_SORT):
            raise LfTypeError(f"{_show(ty)} is not a type")
        return s

    # -- entries ----------------------------------------------------------------------

    def add(self, entry) -> None:
        ty = internal(entry.type)
        self._sort((), ty)
        if isinstance(entry, Definition):
            body = internal(entry.body)
            found = self.infer((), body)
            if not self.conv(found, ty):
                raise LfTypeError(
                    f"body has type {_show(found)}, declared {_show(ty)}"
                )
            if _spine(ty)[0] != ("s", "proof"):
                self.defs[entry.name] = body
        self.types[entry.name] = ty


def _strip(t):
    match t[0]:
        case "v" | "s":
            return t
        case "a":
            return ("a", _strip(t[1]), _strip(t[2]))
        case _:
            return (t[0], _strip(t[2]), _strip(t[3]))


@lru_cache(maxsize=None)
def _show(t) -> str:
    match t[0]:
        case "v":
            return f"#{t[1]}"
        case "s":
            return t[1]
        case "a":
            return f"({_show(t[1])} {_show(t[2])})"
        case "l":
            return f"(\\{t[1]} : {_show(t[2])} => {_show(t[3])})"
        case _:
            return f"(({t[1]} : {_show(t[2])}) -> {_show(t[3])})"


def check_entries(entries) -> Checker:
    """Type-check entries in order; raise :class:`LfTypeError` on the first failure."""
    c = Checker()
    for e in entries:
        if e.name in c.types:
            raise LfTypeError(f"{e.name} is declared twice")
        try:
            c.add(e)
        except LfTypeError as exc:
            raise LfTypeError(f"{e.name}: {exc}") from exc
    return c


def proof_type_matches(checker: Checker, proof_body, statement) -> bool:
    """Does ``proof_body`` have type ``proof statement``?"""
    found = checker.infer((), internal(proof_body))
    return checker.conv(found, ("a", ("s", "proof"), internal(statement)))


__all__ = [
    "Checker", "Declaration", "LfTypeError", "check_entries", "internal", "proof_type_matches",
]
