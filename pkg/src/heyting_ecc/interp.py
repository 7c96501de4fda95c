"""Denotations of well-typed judgments in a finite topological model.

Propositions denote open sets, proofs all denote the reference point, types
of universe level denote finite sets and finite function graphs, and the
universes themselves stay symbolic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from . import checker
from .checker import PTClass, TypingError
from .term import App, Context, Lam, Pi, SortProp, SortType, Term, Var, open_binder
from .topology import FiniteTopology, OpenSet, exponential, interior

DEFAULT_PRODUCT_CAP = 10**6


class InterpretationError(Exception):
    pass


class NonEnumerableDomain(InterpretationError):
    pass


class NotInDomain(InterpretationError):
    pass


class PreconditionViolated(InterpretationError):
    pass


class ProductTooLarge(InterpretationError):
    pass


# ----------------------------------------------------------------- values


class Value:
    """Base for denotations.  Equality and hashing go through ``key``, a
    canonical nested tuple whose first component is the variant tag."""

    __slots__ = ()

    @property
    def key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other):
        if not isinstance(other, Value):
            return NotImplemented
        return self is other or self.key == other.key

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash(self.key)
            self.__dict__["_h"] = h
        return h

    def __lt__(self, other: "Value") -> bool:
        return self.key < other.key


@dataclass(frozen=True, eq=False)
class Open(Value):
    o: OpenSet

    @cached_property
    def key(self):
        return (0, self.o.bits)

    __hash__ = Value.__hash__


@dataclass(frozen=True, eq=False)
class _PointMarker(Value):
    key = (1,)

    def __repr__(self):
        return "Point"

    __hash__ = Value.__hash__


POINT = _PointMarker()


@dataclass(frozen=True, eq=False)
class FinSet(Value):
    elements: tuple[Value, ...]

    @cached_property
    def key(self):
        return (2, tuple(e.key for e in self.elements))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @cached_property
    def _keys(self) -> frozenset:
        return frozenset(e.key for e in self.elements)

    def __contains__(self, v: Value) -> bool:
        return v.key in self._keys

    __hash__ = Value.__hash__


@dataclass(frozen=True, eq=False)
class FinFunc(Value):
    graph: tuple[tuple[Value, Value], ...]

    @cached_property
    def key(self):
        return (3, tuple((a.key, b.key) for a, b in self.graph))

    @cached_property
    def table(self) -> dict:
        return {a.key: b for a, b in self.graph}

    def __call__(self, arg: Value) -> Value:
        try:
            return self.table[canonical(arg).key]
        except KeyError:
            raise NotInDomain(f"{render(arg)} is not in the domain of the function") from None

    __hash__ = Value.__hash__


@dataclass(frozen=True, eq=False)
class Universe(Value):
    level: int

    @cached_property
    def key(self):
        return (4, self.level)

    __hash__ = Value.__hash__


@dataclass(frozen=True, eq=False)
class Product(Value):
    """A dependent function space kept unexpanded.

    Semantically this is the FinSet of every graph choosing one element of
    ``fibers[i]`` for ``domain[i]``; it is expanded only when its elements
    are needed, and membership is decided without expanding it.
    """

    domain: tuple[Value, ...]
    fibers: tuple[Value, ...]
    cap: int = DEFAULT_PRODUCT_CAP

    @cached_property
    def key(self):
        return (5, tuple(a.key for a in self.domain), tuple(f.key for f in self.fibers))

    @cached_property
    def size(self) -> int:
        return math.prod(len(elements(f, self.cap)) for f in self.fibers)

    def materialize(self) -> FinSet:
        choices = [elements(f, self.cap) for f in self.fibers]
        total = math.prod(len(c) for c in choices)
        if total > self.cap:
            raise ProductTooLarge(f"dependent product has {total} elements (cap {self.cap})")
        graphs = (
            FinFunc(tuple(zip(self.domain, pick))) for pick in itertools.product(*choices)
        )
        return finset(graphs)

    __hash__ = Value.__hash__


def finset(items: Iterable[Value]) -> FinSet:
    uniq = {}
    for v in items:
        v = canonical(v)
        uniq.setdefault(v.key, v)
    return FinSet(tuple(uniq[k] for k in sorted(uniq)))


def finfunc(pairs: Iterable[tuple[Value, Value]]) -> FinFunc:
    graph = {}
    for a, b in pairs:
        a, b = canonical(a), canonical(b)
        if a.key in graph and graph[a.key][1] != b:
            raise ValueError("graph is not functional")
        graph[a.key] = (a, b)
    return FinFunc(tuple(graph[k] for k in sorted(graph)))


def canonical(v: Value) -> Value:
    return v.materialize() if isinstance(v, Product) else v


def elements(v: Value, cap: int = DEFAULT_PRODUCT_CAP) -> tuple[Value, ...]:
    if isinstance(v, FinSet):
        return v.elements
    if isinstance(v, Product):
        return v.materialize().elements
    if isinstance(v, Universe):
        raise NonEnumerableDomain(f"cannot enumerate the universe Type{v.level}")
    raise NonEnumerableDomain(f"{render(v)} is not a set of values")


EMPTY = FinSet(())
POINT_SET = FinSet((POINT,))


def value_eq(v1: Value, v2: Value) -> bool:
    if v1.key == v2.key:
        return True
    if isinstance(v1, Product) or isinstance(v2, Product):
        return canonical(v1).key == canonical(v2).key
    return False


def value_in(v: Value, big: Value, model: FiniteTopology) -> bool:
    """Membership of denotations, with universes accepting every finite value."""
    if isinstance(big, Open):
        return v is POINT and model.reference_point in big.o
    if isinstance(big, FinSet):
        return canonical(v) in big
    if isinstance(big, Product):
        if not isinstance(v, FinFunc):
            return False
        if [a.key for a, _ in v.graph] != sorted(a.key for a in big.domain):
            return False
        fiber = {a.key: f for a, f in zip(big.domain, big.fibers)}
        return all(value_in(b, fiber[a.key], model) for a, b in v.graph)
    if isinstance(big, Universe):
        if isinstance(v, Universe):
            return v.level < big.level
        return True
    return False


# ---------------------------------------------------------------- rendering


def render(v: Value, model: FiniteTopology | None = None) -> str:
    if isinstance(v, Open):
        topo = model or v.o.topology
        return f"Open {topo.render(v.o.bits)}"
    if v is POINT:
        return "Point"
    if isinstance(v, Universe):
        return f"Universe({v.level})"
    if isinstance(v, FinSet):
        return "FinSet{" + ", ".join(render(e, model) for e in v.elements) + "}"
    if isinstance(v, FinFunc):
        return "FinFunc{" + ", ".join(f"{render(a, model)} |-> {render(b, model)}" for a, b in v.graph) + "}"
    if isinstance(v, Product):
        try:
            if v.size <= 64:
                return render(v.materialize(), model)
        except InterpretationError:
            pass
        return f"Product(domain of {len(v.domain)} elements)"
    return repr(v)


def to_json(v: Value, model: FiniteTopology | None = None) -> dict:
    if isinstance(v, Open):
        topo = model or v.o.topology
        return {"kind": "Open", "points": topo.members(v.o.bits)}
    if v is POINT:
        return {"kind": "Point"}
    if isinstance(v, Universe):
        return {"kind": "Universe", "level": v.level}
    if isinstance(v, FinSet):
        return {"kind": "FinSet", "elements": [to_json(e, model) for e in v.elements]}
    if isinstance(v, FinFunc):
        return {"kind": "FinFunc", "graph": [[to_json(a, model), to_json(b, model)] for a, b in v.graph]}
    if isinstance(v, Product):
        return to_json(v.materialize(), model)
    raise TypeError(v)


# -------------------------------------------------------------- evaluation


def _as_open(v: Value, t: Term) -> OpenSet:
    if not isinstance(v, Open):
        raise PreconditionViolated(f"{t} should denote an open set, got {render(v)}")
    return v.o


class Interpreter:
    """Evaluates judgments over one model.

    Results are memoized on ``(context, term, values of the term's free
    variables)``; a fresh instance starts with an empty table.
    """

    def __init__(self, model: FiniteTopology, product_cap: int = DEFAULT_PRODUCT_CAP):
        self.model = model
        self.cap = product_cap
        # (ctx, term) -> (free-variable positions, {their values: result})
        self._memo: dict = {}
        self.prop_set = finset(Open(o) for o in model.all_opens())

    def interpret(self, ctx: Context, t: Term, env: tuple) -> Value:
        entry = self._memo.get((ctx, t))
        if entry is None:
            fv = tuple(sorted(ctx.index(x) for x in t.fv if x in ctx.names))
            entry = self._memo[(ctx, t)] = (fv, {})
        fv, table = entry
        key = tuple(env[i] for i in fv)
        hit = table.get(key)
        if hit is None:
            hit = table[key] = self._eval(ctx, t, env)
        return hit

    def interpret_strict(self, ctx: Context, a: Term, env: tuple) -> Value:
        if checker.is_propositional(ctx, a):
            o = _as_open(self.interpret(ctx, a, env), a)
            return POINT_SET if self.model.reference_point in o else EMPTY
        return self.interpret(ctx, a, env)

    def elements(self, v: Value, t: Term) -> tuple[Value, ...]:
        try:
            return elements(v, self.cap)
        except NonEnumerableDomain:
            raise NonEnumerableDomain(f"cannot enumerate the denotation of {t}") from None

    def _eval(self, ctx: Context, t: Term, env: tuple) -> Value:
        # proofs are irrelevant: this clause takes priority over the rest
        if checker.is_proof_term(ctx, t):
            return POINT
        if isinstance(t, SortType):
            return Universe(t.level)
        if isinstance(t, SortProp):
            return self.prop_set
        if isinstance(t, Var):
            return env[ctx.index(t.name)]
        if isinstance(t, Pi):
            return self._eval_pi(ctx, t, env)
        if isinstance(t, Lam):
            dom = self.elements(self.interpret_strict(ctx, t.domain, env), t.domain)
            inner, _, body = open_binder(ctx, t)
            return finfunc((a, self.interpret(inner, body, env + (a,))) for a in dom)
        if isinstance(t, App):
            f = self.interpret(ctx, t.fun, env)
            arg = self.interpret(ctx, t.arg, env)
            if not isinstance(f, FinFunc):
                raise NotInDomain(f"{t.fun} denotes {render(f)}, not a function")
            return f(arg)
        raise TypeError(f"not a term: {t!r}")

    def _eval_pi(self, ctx: Context, t: Pi, env: tuple) -> Value:
        kind = checker.classify_pt(ctx, t.binder, t.domain, t.codomain)
        if kind is PTClass.PP:
            b = _as_open(self.interpret(ctx, t.codomain, env), t.codomain)
            a = _as_open(self.interpret(ctx, t.domain, env), t.domain)
            return Open(exponential(b, a))
        inner, _, body = open_binder(ctx, t)
        if kind is PTClass.TP:
            dom = self.elements(self.interpret(ctx, t.domain, env), t.domain)
            inter = self.model.full
            for a in dom:
                inter &= _as_open(self.interpret(inner, body, env + (a,)), body).bits
                if not inter:
                    break
            return Open(interior(inter, self.model))
        dom = self.elements(self.interpret_strict(ctx, t.domain, env), t.domain)
        fibers = tuple(self.interpret(inner, body, env + (a,)) for a in dom)
        return Product(dom, fibers, self.cap)

    def enumerate_context(self, ctx: Context) -> Iterator[tuple]:
        def walk(i: int, env: tuple):
            if i == len(ctx):
                yield env
                return
            prefix = ctx[:i]
            name, ty = ctx[i]
            try:
                dom = elements(self.interpret_strict(prefix, ty, env), self.cap)
            except NonEnumerableDomain:
                raise NonEnumerableDomain(f"cannot enumerate values for {name} : {ty}") from None
            for a in dom:
                yield from walk(i + 1, env + (a,))

        yield from walk(0, ())


# ------------------------------------------------------------ public API


def _require_typed(ctx: Context, t: Term) -> Term:
    if not checker.wf_context(ctx):
        raise PreconditionViolated("context is not well formed")
    try:
        return checker.infer(ctx, t)
    except TypingError as exc:
        raise PreconditionViolated(f"{t} is ill-typed: {exc}") from exc


def _check_env(ctx: Context, env: tuple) -> tuple:
    env = tuple(env)
    if len(env) != len(ctx):
        raise PreconditionViolated(f"environment has {len(env)} values for a context of length {len(ctx)}")
    return env


def interpret(ctx: Context, t: Term, env: tuple, model: FiniteTopology, product_cap: int = DEFAULT_PRODUCT_CAP) -> Value:
    _require_typed(ctx, t)
    return Interpreter(model, product_cap).interpret(ctx, t, _check_env(ctx, env))


def interpret_strict(ctx: Context, a: Term, env: tuple, model: FiniteTopology, product_cap: int = DEFAULT_PRODUCT_CAP) -> Value:
    _require_typed(ctx, a)
    return Interpreter(model, product_cap).interpret_strict(ctx, a, _check_env(ctx, env))


def enumerate_context(ctx: Context, model: FiniteTopology, product_cap: int = DEFAULT_PRODUCT_CAP) -> Iterator[tuple]:
    if not checker.wf_context(ctx):
        raise PreconditionViolated("context is not well formed")
    return Interpreter(model, product_cap).enumerate_context(ctx)


@dataclass
class Validity:
    valid: bool
    vacuous: bool
    environments: int
    # first environment where the reference point falls outside, and the open it got
    counterexample: tuple | None = None
    denotation: Value | None = None


def validity(ctx: Context, prop: Term, model: FiniteTopology, product_cap: int = DEFAULT_PRODUCT_CAP) -> Validity:
    if not checker.wf_context(ctx):
        raise PreconditionViolated("context is not well formed")
    if not checker.is_propositional(ctx, prop):
        raise PreconditionViolated(f"{prop} is not a proposition in this context")
    ev = Interpreter(model, product_cap)
    count = 0
    last = None
    for env in ev.enumerate_context(ctx):
        count += 1
        last = ev.interpret(ctx, prop, env)
        if model.reference_point not in _as_open(last, prop):
            return Validity(False, False, count, env, last)
    return Validity(True, count == 0, count, None, last)


def is_valid(ctx: Context, prop: Term, model: FiniteTopology, product_cap: int = DEFAULT_PRODUCT_CAP) -> bool:
    return validity(ctx, prop, model, product_cap).valid


def check_soundness(ctx: Context, t: Term, ty: Term, model: FiniteTopology, product_cap: int = DEFAULT_PRODUCT_CAP) -> bool:
    """Every environment sends the term's denotation into its type's."""
    if not checker.wf_context(ctx):
        raise PreconditionViolated("context is not well formed")
    try:
        ok = checker.check(ctx, t, ty)
    except TypingError as exc:
        raise PreconditionViolated(str(exc)) from exc
    if not ok:
        raise PreconditionViolated(f"{t} does not have type {ty}")
    ev = Interpreter(model, product_cap)
    for env in ev.enumerate_context(ctx):
        if not value_in(ev.interpret(ctx, t, env), ev.interpret(ctx, ty, env), model):
            return False
    return True
