"""Syntax-directed type checking for the restricted ECC.

The declarative rules are algorithmized in the usual way: :func:`infer`
returns the least type (lowest universe levels), and cumulativity between
``Type_i`` levels is only applied where two types are compared.  Two
departures from standard ECC are enforced:

* a product over a proposition into ``Prop`` is only well-formed when the
  bound proof variable does not occur in the codomain;
* ``Prop`` is not a subtype of any ``Type_i``.
"""

from __future__ import annotations

import enum
from functools import lru_cache

from .term import (
    App,
    Context,
    Lam,
    Pi,
    SortProp,
    SortType,
    Term,
    Var,
    is_sort,
    normalize,
    open_binder,
    substitute,
    alpha_eq,
)


class PTClass(enum.Enum):
    PP = "PP"
    TP = "TP"
    T = "T"


class ErrorKind(enum.Enum):
    UnboundVariable = "UnboundVariable"
    NotAFunction = "NotAFunction"
    DomainMismatch = "DomainMismatch"
    RestrictedPiViolation = "RestrictedPiViolation"
    NoSubtypingPropToType = "NoSubtypingPropToType"
    IllFormedContext = "IllFormedContext"
    NotASort = "NotASort"


class TypingError(Exception):
    def __init__(self, kind: ErrorKind, term: Term, ctx: Context, detail: str = ""):
        self.kind = kind
        self.term = term
        self.ctx = ctx
        self.detail = detail
        msg = f"{kind.value}: {detail}" if detail else kind.value
        super().__init__(msg)


def _sort_of(ctx: Context, ty: Term) -> Term:
    """The normalized sort of ``ty``; raises NotASort if it has none."""
    s = normalize(infer(ctx, ty))
    if not is_sort(s):
        raise TypingError(ErrorKind.NotASort, ty, ctx, f"{ty} has type {s}, which is not a sort")
    return s


def conv(actual: Term, expected: Term) -> bool:
    """``actual`` may stand where ``expected`` is required: beta-equal, or
    ``Type_i <= Type_j``."""
    if actual == expected:
        return True
    a, e = normalize(actual), normalize(expected)
    if isinstance(a, SortType) and isinstance(e, SortType):
        return a.level <= e.level
    return alpha_eq(a, e)


def _require(ctx: Context, t: Term, actual: Term, expected: Term, kind: ErrorKind) -> None:
    if conv(actual, expected):
        return
    if isinstance(normalize(actual), SortProp) and isinstance(normalize(expected), SortType):
        raise TypingError(
            ErrorKind.NoSubtypingPropToType,
            t,
            ctx,
            f"{t} is a proposition and cannot be used at {expected}",
        )
    raise TypingError(kind, t, ctx, f"{t} has type {actual} but {expected} was expected")


@lru_cache(maxsize=1 << 16)
def infer(ctx: Context, t: Term) -> Term:
    """Least type of ``t`` in a well-formed context ``ctx``."""
    if isinstance(t, Var):
        ty = ctx.lookup(t.name)
        if ty is None:
            raise TypingError(ErrorKind.UnboundVariable, t, ctx, f"unbound variable {t.name}")
        return ty
    if isinstance(t, SortProp):
        return SortType(0)
    if isinstance(t, SortType):
        return SortType(t.level + 1)
    if isinstance(t, Pi):
        return _infer_pi(ctx, t)
    if isinstance(t, Lam):
        _sort_of(ctx, t.domain)
        inner, x, body = open_binder(ctx, t)
        body_ty = infer(inner, body)
        result = Pi(x, t.domain, body_ty)
        # the abstraction rules require the product itself to have a sort
        _sort_of(ctx, result)
        return result
    if isinstance(t, App):
        fun_ty = normalize(infer(ctx, t.fun))
        if not isinstance(fun_ty, Pi):
            raise TypingError(ErrorKind.NotAFunction, t.fun, ctx, f"{t.fun} has type {fun_ty}")
        arg_ty = infer(ctx, t.arg)
        _require(ctx, t.arg, arg_ty, fun_ty.domain, ErrorKind.DomainMismatch)
        return substitute(fun_ty.codomain, fun_ty.binder, t.arg)
    raise TypeError(f"not a term: {t!r}")


def _infer_pi(ctx: Context, t: Pi) -> Term:
    s_dom = _sort_of(ctx, t.domain)
    inner, x, cod = open_binder(ctx, t)
    s_cod = _sort_of(inner, cod)
    if isinstance(s_cod, SortType):
        if isinstance(s_dom, SortType):
            return SortType(max(s_dom.level, s_cod.level))
        return SortType(s_cod.level)
    if isinstance(s_dom, SortType):
        return SortProp()
    # Prop domain, Prop codomain
    if x in cod.fv:
        raise TypingError(
            ErrorKind.RestrictedPiViolation,
            t,
            ctx,
            f"proof variable {t.binder} occurs in the propositional codomain {t.codomain}",
        )
    return SortProp()


def check(ctx: Context, t: Term, ty: Term) -> bool:
    """Whether ``ctx |- t : ty`` is derivable.

    Typing errors in ``t`` propagate.  ``ty`` must have a sort.  Using a
    proposition where a universe inhabitant is expected raises
    NoSubtypingPropToType rather than returning False.
    """
    _sort_of(ctx, ty)
    actual = infer(ctx, t)
    if conv(actual, ty):
        return True
    if isinstance(normalize(actual), SortProp) and isinstance(normalize(ty), SortType):
        raise TypingError(
            ErrorKind.NoSubtypingPropToType, t, ctx, f"{t} : Prop is not an inhabitant of {ty}"
        )
    return False


@lru_cache(maxsize=1 << 16)
def is_propositional(ctx: Context, a: Term) -> bool:
    try:
        return isinstance(normalize(infer(ctx, a)), SortProp)
    except TypingError:
        return False


@lru_cache(maxsize=1 << 16)
def is_proof_term(ctx: Context, t: Term) -> bool:
    try:
        ty = infer(ctx, t)
    except TypingError:
        return False
    return is_propositional(ctx, ty)


@lru_cache(maxsize=1 << 16)
def classify_pt(ctx: Context, x: str, a: Term, b: Term) -> PTClass:
    if is_propositional(ctx, a):
        # b is read in ctx itself, so x must not occur in it
        if x not in b.fv and is_propositional(ctx, b):
            return PTClass.PP
        return PTClass.T
    inner, _, body = open_binder(ctx, Pi(x, a, b))
    if is_propositional(inner, body):
        return PTClass.TP
    return PTClass.T


def wf_context(ctx: Context) -> bool:
    prefix = Context()
    for name, ty in ctx:
        try:
            _sort_of(prefix, ty)
        except TypingError:
            return False
        if name in prefix.names:
            return False
        prefix = prefix.push(name, ty)
    return True


def require_wf(ctx: Context) -> None:
    if not wf_context(ctx):
        raise TypingError(ErrorKind.IllFormedContext, None, ctx, "context is not well formed")


def type_of(ctx: Context, t: Term) -> Term:
    """Checked entry point: validates the context, then infers."""
    require_wf(ctx)
    return infer(ctx, t)
