"""Terms of the restricted ECC kernel.

Terms are immutable and hashable.  Structural equality (``==``) compares
binder names; use :func:`alpha_eq` for equality up to renaming.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Union

DEFAULT_FUEL = 10**6


def default_fuel() -> int:
    raw = os.environ.get("HEYTING_ECC_FUEL")
    if raw:
        return int(raw)
    return DEFAULT_FUEL


class FuelExhausted(Exception):
    """Normalization ran out of beta steps."""


class ArityMismatch(Exception):
    pass


class _Node:
    __slots__ = ()

    def __hash__(self) -> int:
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((type(self).__name__,) + self._fields())
            self.__dict__["_h"] = h
        return h

    def _fields(self) -> tuple:
        raise NotImplementedError

    @cached_property
    def fv(self) -> frozenset[str]:
        return free_vars(self)

    def __str__(self) -> str:
        from .parser import pretty

        return pretty(self)


@dataclass(frozen=True, eq=True)
class Var(_Node):
    name: str

    def _fields(self):
        return (self.name,)

    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class App(_Node):
    fun: "Term"
    arg: "Term"

    def _fields(self):
        return (self.fun, self.arg)

    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Lam(_Node):
    binder: str
    domain: "Term"
    body: "Term"

    def _fields(self):
        return (self.binder, self.domain, self.body)

    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Pi(_Node):
    binder: str
    domain: "Term"
    codomain: "Term"

    def _fields(self):
        return (self.binder, self.domain, self.codomain)

    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class SortProp(_Node):
    def _fields(self):
        return ()

    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class SortType(_Node):
    level: int

    def __post_init__(self):
        if not isinstance(self.level, int) or self.level < 0:
            raise ValueError(f"universe level must be a natural number, got {self.level!r}")

    def _fields(self):
        return (self.level,)

    __hash__ = _Node.__hash__


Term = Union[Var, App, Lam, Pi, SortProp, SortType]
Binder = Union[Lam, Pi]

PROP = SortProp()


def is_sort(t: Term) -> bool:
    return isinstance(t, (SortProp, SortType))


# ---------------------------------------------------------------- contexts


class DuplicateName(Exception):
    pass


@dataclass(frozen=True)
class Context:
    """Ordered telescope of ``(name, type)`` assumptions with distinct names."""

    entries: tuple[tuple[str, Term], ...] = ()

    def __hash__(self) -> int:
        # contexts key every memo table, so the hash is computed once
        h = self.__dict__.get("_h")
        if h is None:
            h = hash(self.entries)
            self.__dict__["_h"] = h
        return h

    def __post_init__(self):
        seen = set()
        for name, _ in self.entries:
            if name in seen:
                raise DuplicateName(name)
            seen.add(name)

    @classmethod
    def of(cls, *entries: tuple[str, Term]) -> "Context":
        return cls(tuple(entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[str, Term]]:
        return iter(self.entries)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Context(self.entries[i])
        return self.entries[i]

    @cached_property
    def names(self) -> frozenset[str]:
        return frozenset(n for n, _ in self.entries)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {n: i for i, (n, _) in enumerate(self.entries)}

    def index(self, name: str) -> int:
        return self._index[name]

    def lookup(self, name: str) -> Term | None:
        i = self._index.get(name)
        return None if i is None else self.entries[i][1]

    def push(self, name: str, ty: Term) -> "Context":
        """Append an entry; the name must be fresh."""
        if name in self.names:
            raise DuplicateName(name)
        return Context(self.entries + ((name, ty),))

    def extend(self, name: str, ty: Term) -> tuple["Context", str]:
        """Append an entry, renaming ``name`` if it is already taken.

        Returns the new context and the name actually used.
        """
        fresh_name = fresh(name, self.names)
        return Context(self.entries + ((fresh_name, ty),)), fresh_name


def open_binder(ctx: Context, t: Binder) -> tuple[Context, str, Term]:
    """Push the binder of ``t`` onto ``ctx`` and return the body under the new name."""
    inner = t.body if isinstance(t, Lam) else t.codomain
    ctx2, name = ctx.extend(t.binder, t.domain)
    if name != t.binder:
        inner = substitute(inner, t.binder, Var(name))
    return ctx2, name, inner


# ------------------------------------------------------------ binding basics


def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, App):
        return t.fun.fv | t.arg.fv
    if isinstance(t, Lam):
        return t.domain.fv | (t.body.fv - {t.binder})
    if isinstance(t, Pi):
        return t.domain.fv | (t.codomain.fv - {t.binder})
    return frozenset()


def fresh(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    name = base
    while name in avoid:
        name += "'"
    return name


def substitute(t: Term, x: str, v: Term) -> Term:
    """Capture-avoiding ``t[x := v]``."""
    if x not in t.fv:
        return t
    if isinstance(t, Var):
        return v
    if isinstance(t, App):
        return App(substitute(t.fun, x, v), substitute(t.arg, x, v))
    # Lam or Pi with x free somewhere inside
    inner = t.body if isinstance(t, Lam) else t.codomain
    dom = substitute(t.domain, x, v)
    y = t.binder
    if y != x and x in inner.fv:
        if y in v.fv:
            y2 = fresh(y, v.fv | inner.fv | {x})
            inner = substitute(inner, y, Var(y2))
            y = y2
        inner = substitute(inner, x, v)
    return type(t)(y, dom, inner)


def rename(t: Term, old: str, new: str) -> Term:
    return substitute(t, old, Var(new))


def alpha_eq(t1: Term, t2: Term) -> bool:
    return _alpha(t1, t2, {}, {}, 0)


def _alpha(a: Term, b: Term, ma: dict, mb: dict, depth: int) -> bool:
    if a is b and not ma and not mb:
        return True
    if isinstance(a, Var) and isinstance(b, Var):
        da, db = ma.get(a.name), mb.get(b.name)
        if da is None and db is None:
            return a.name == b.name
        return da == db
    if type(a) is not type(b):
        return False
    if isinstance(a, App):
        return _alpha(a.fun, b.fun, ma, mb, depth) and _alpha(a.arg, b.arg, ma, mb, depth)
    if isinstance(a, (Lam, Pi)):
        if not _alpha(a.domain, b.domain, ma, mb, depth):
            return False
        ia = a.body if isinstance(a, Lam) else a.codomain
        ib = b.body if isinstance(b, Lam) else b.codomain
        ma2 = dict(ma)
        mb2 = dict(mb)
        ma2[a.binder] = depth
        mb2[b.binder] = depth
        return _alpha(ia, ib, ma2, mb2, depth + 1)
    return a == b


# ------------------------------------------------------------- reduction


def normalize(t: Term, fuel: int | None = None) -> Term:
    """Beta-normal form by leftmost-outermost reduction.

    ``fuel`` bounds the number of beta steps; :class:`FuelExhausted` is raised
    when it runs out.
    """
    if fuel is None:
        fuel = default_fuel()
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    budget = [fuel]
    return _nf(t, budget)


def _step(budget: list[int]) -> None:
    budget[0] -= 1
    if budget[0] < 0:
        raise FuelExhausted("normalization did not terminate within the fuel bound")


def whnf(t: Term, fuel: int | None = None) -> Term:
    if fuel is None:
        fuel = default_fuel()
    return _whnf(t, [fuel])


def _whnf(t: Term, budget: list[int]) -> Term:
    while isinstance(t, App):
        head = _whnf(t.fun, budget)
        if isinstance(head, Lam):
            _step(budget)
            t = substitute(head.body, head.binder, t.arg)
            continue
        if head is not t.fun:
            t = App(head, t.arg)
        break
    return t


def _nf(t: Term, budget: list[int]) -> Term:
    t = _whnf(t, budget)
    if isinstance(t, App):
        # head is neutral after whnf
        spine = []
        while isinstance(t, App):
            spine.append(t.arg)
            t = t.fun
        out = _nf(t, budget)
        for arg in reversed(spine):
            out = App(out, _nf(arg, budget))
        return out
    if isinstance(t, Lam):
        return Lam(t.binder, _nf(t.domain, budget), _nf(t.body, budget))
    if isinstance(t, Pi):
        return Pi(t.binder, _nf(t.domain, budget), _nf(t.codomain, budget))
    return t


def beta_eq(t1: Term, t2: Term, fuel: int | None = None) -> bool:
    if t1 == t2:
        return True
    return alpha_eq(normalize(t1, fuel), normalize(t2, fuel))


# ------------------------------------------------------------------ sugar


def arrow(a: Term, b: Term) -> Term:
    return Pi(fresh("_", b.fv), a, b)


def bottom() -> Term:
    return Pi("P", PROP, Var("P"))


def neg(a: Term) -> Term:
    return arrow(a, bottom())


def conj(a: Term, b: Term) -> Term:
    p = fresh("P", a.fv | b.fv)
    P = Var(p)
    return Pi(p, PROP, arrow(arrow(a, arrow(b, P)), P))


def disj(a: Term, b: Term) -> Term:
    p = fresh("P", a.fv | b.fv)
    P = Var(p)
    return Pi(p, PROP, arrow(arrow(a, P), arrow(arrow(b, P), P)))


def exists(x: str, a: Term, q: Term) -> Term:
    p = fresh("P", a.fv | q.fv | {x})
    P = Var(p)
    return Pi(p, PROP, arrow(Pi(x, a, arrow(q, P)), P))


def iff(a: Term, b: Term) -> Term:
    return conj(arrow(a, b), arrow(b, a))


def eq(a: Term, x: Term, y: Term) -> Term:
    q = fresh("Q", a.fv | x.fv | y.fv)
    Q = Var(q)
    return Pi(q, arrow(a, PROP), iff(App(Q, x), App(Q, y)))


_SUGAR = {
    "arrow": (2, arrow),
    "bottom": (0, bottom),
    "neg": (1, neg),
    "and": (2, conj),
    "or": (2, disj),
    "exists": (3, exists),
    "iff": (2, iff),
    "eq": (3, eq),
}


def expand_sugar(symbol: str, args: list) -> Term:
    """Expand one of the derived logical connectives into kernel syntax.

    ``exists`` takes ``(binder_name, domain, body)``; ``eq`` takes
    ``(type, lhs, rhs)``.
    """
    try:
        arity, build = _SUGAR[symbol]
    except KeyError:
        raise ValueError(f"unknown sugar symbol {symbol!r}") from None
    if len(args) != arity:
        raise ArityMismatch(f"{symbol} expects {arity} arguments, got {len(args)}")
    return build(*args)
