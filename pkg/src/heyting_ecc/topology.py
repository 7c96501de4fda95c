"""Finite topological spaces viewed as complete Heyting algebras.

Subsets of the point set are int bitsets: bit ``i`` stands for ``points[i]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Iterable, Iterator, Sequence

MAX_POINTS = 24
MAX_ENUM_POINTS = 4


class TopologyError(Exception):
    pass


class MissingEmptyOrFull(TopologyError):
    pass


class NotClosedUnderUnion(TopologyError):
    def __init__(self, a: int, b: int):
        self.witness = (a, b)
        super().__init__(f"union of opens {a:#b} and {b:#b} is not open")


class NotClosedUnderIntersection(TopologyError):
    def __init__(self, a: int, b: int):
        self.witness = (a, b)
        super().__init__(f"intersection of opens {a:#b} and {b:#b} is not open")


class UnknownReferencePoint(TopologyError):
    pass


class MixedTopologies(TopologyError):
    pass


class BoundExceeded(TopologyError):
    pass


class UnknownModel(TopologyError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteTopology:
    """A validated finite space with a distinguished reference point.

    Build instances with :func:`validate`; the constructor trusts its input.
    ``opens`` is sorted ascending, so the empty set comes first and the whole
    space last.
    """

    points: tuple[str, ...]
    opens: tuple[int, ...]
    reference_point: int = 0
    aliases: dict = field(default=None, compare=False)

    @cached_property
    def full(self) -> int:
        return (1 << len(self.points)) - 1

    @cached_property
    def open_set(self) -> frozenset[int]:
        return frozenset(self.opens)

    @property
    def p_mask(self) -> int:
        return 1 << self.reference_point

    @property
    def reference_name(self) -> str:
        return self.points[self.reference_point]

    @cached_property
    def _exp_table(self) -> dict[tuple[int, int], int]:
        return {(b, a): _exp(self.opens, b, a) for b in self.opens for a in self.opens}

    def _key(self):
        return (self.points, self.opens, self.reference_point)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteTopology):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash(self._key())
            self.__dict__["_h"] = h
        return h

    def with_reference(self, q: int | str) -> "FiniteTopology":
        return FiniteTopology(self.points, self.opens, _point_index(self.points, q), self.aliases)

    def open(self, members: Iterable[str] | int) -> "OpenSet":
        bits = members if isinstance(members, int) else subset_bits(self.points, members)
        if bits not in self.open_set:
            raise TopologyError(f"{self.render(bits)} is not open")
        return OpenSet(bits, self)

    def all_opens(self) -> list["OpenSet"]:
        return [OpenSet(b, self) for b in self.opens]

    @property
    def empty(self) -> "OpenSet":
        return OpenSet(0, self)

    @property
    def whole(self) -> "OpenSet":
        return OpenSet(self.full, self)

    def members(self, bits: int) -> list[str]:
        return [name for i, name in enumerate(self.points) if bits >> i & 1]

    def render(self, bits: int) -> str:
        return "{" + ",".join(self.members(bits)) + "}"

    def name_of(self, bits: int) -> str:
        """Short alias for builtin models, else the point-list rendering."""
        if self.aliases and bits in self.aliases:
            return self.aliases[bits]
        return self.render(bits)

    def describe(self) -> str:
        opens = ", ".join(self.render(b) for b in self.opens)
        return f"X = {self.render(self.full)}, O(X) = [{opens}], p = {self.reference_name}"

    def to_json(self) -> dict:
        return {
            "points": list(self.points),
            "opens": [self.members(b) for b in self.opens],
            "reference_point": self.reference_name,
        }


@dataclass(frozen=True)
class OpenSet:
    bits: int
    topology: FiniteTopology = field(repr=False)

    def __le__(self, other: "OpenSet") -> bool:
        _same(self, other)
        return self.bits & ~other.bits == 0

    def __and__(self, other: "OpenSet") -> "OpenSet":
        return meet_family([self, other])

    def __or__(self, other: "OpenSet") -> "OpenSet":
        return join_family([self, other])

    def __pow__(self, a: "OpenSet") -> "OpenSet":
        return exponential(self, a)

    def __contains__(self, point: int) -> bool:
        return bool(self.bits >> point & 1)

    def __str__(self):
        return self.topology.render(self.bits)


def subset_bits(points: Sequence[str], members: Iterable[str]) -> int:
    bits = 0
    for m in members:
        try:
            bits |= 1 << points.index(m)
        except ValueError:
            raise TopologyError(f"unknown point {m!r}") from None
    return bits


def _point_index(points: Sequence[str], q: int | str) -> int:
    if isinstance(q, str):
        if q not in points:
            raise UnknownReferencePoint(f"reference point {q!r} is not a point")
        return points.index(q)
    if not 0 <= q < len(points):
        raise UnknownReferencePoint(f"reference point index {q} out of range")
    return q


def _closure_violation(family: frozenset[int]) -> TopologyError | None:
    ordered = sorted(family)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1 :]:
            if a | b not in family:
                return NotClosedUnderUnion(a, b)
            if a & b not in family:
                return NotClosedUnderIntersection(a, b)
    return None


def validate(points: Sequence[str], opens: Iterable, reference_point: int | str, aliases=None) -> FiniteTopology:
    """Check the open-set axioms and build a topology.

    ``opens`` may contain bitsets or collections of point names.
    """
    points = tuple(str(p) for p in points)
    if len(set(points)) != len(points):
        raise TopologyError("duplicate point names")
    if not 1 <= len(points) <= MAX_POINTS:
        raise BoundExceeded(f"between 1 and {MAX_POINTS} points are supported")
    full = (1 << len(points)) - 1
    family = set()
    for o in opens:
        bits = o if isinstance(o, int) else subset_bits(points, o)
        if bits & ~full:
            raise TopologyError(f"open {bits:#b} mentions unknown points")
        family.add(bits)
    family = frozenset(family)
    if 0 not in family or full not in family:
        raise MissingEmptyOrFull("the empty set and the whole space must be open")
    err = _closure_violation(family)
    if err is not None:
        raise err
    ref = _point_index(points, reference_point)
    return FiniteTopology(points, tuple(sorted(family)), ref, aliases)


# ------------------------------------------------------ lattice operations


def _same(*sets: OpenSet) -> FiniteTopology | None:
    topo = None
    for s in sets:
        if topo is None:
            topo = s.topology
        elif s.topology is not topo and s.topology.opens != topo.opens:
            raise MixedTopologies("open sets belong to different topologies")
    return topo


def interior(subset: int, topo: FiniteTopology) -> OpenSet:
    bits = 0
    for o in topo.opens:
        if o & ~subset == 0:
            bits |= o
    return OpenSet(bits, topo)


def join_family(sets: Iterable[OpenSet], topo: FiniteTopology | None = None) -> OpenSet:
    sets = list(sets)
    topo = _same(*sets) or topo
    if topo is None:
        raise TopologyError("join of an empty family needs an explicit topology")
    return OpenSet(reduce(lambda x, y: x | y, (s.bits for s in sets), 0), topo)


def meet_family(sets: Iterable[OpenSet], topo: FiniteTopology | None = None) -> OpenSet:
    """Interior of the intersection; the empty family meets to the whole space."""
    sets = list(sets)
    topo = _same(*sets) or topo
    if topo is None:
        raise TopologyError("meet of an empty family needs an explicit topology")
    inter = reduce(lambda x, y: x & y, (s.bits for s in sets), topo.full)
    return interior(inter, topo)


def _exp(opens: Sequence[int], b: int, a: int) -> int:
    bits = 0
    for t in opens:
        if t & a & ~b == 0:
            bits |= t
    return bits


def exponential(b: OpenSet, a: OpenSet) -> OpenSet:
    """``b ** a``: the largest open t with t & a <= b."""
    topo = _same(b, a)
    return OpenSet(topo._exp_table[(b.bits, a.bits)], topo)


def minimal_neighborhood(topo: FiniteTopology, q: int) -> OpenSet:
    q = _point_index(topo.points, q)
    bits = topo.full
    for o in topo.opens:
        if o >> q & 1:
            bits &= o
    return OpenSet(bits, topo)


def check_point_condition(topo: FiniteTopology, q: int | None = None) -> bool:
    if q is None:
        q = topo.reference_point
    return minimal_neighborhood(topo, q).bits in topo.open_set


# ---------------------------------------------------------- enumeration


def enumerate_topologies(n: int) -> Iterator[FiniteTopology]:
    """Every topology on points ``0..n-1``, each once, in bitmask order.

    The candidate with mask ``m`` includes the ``i``-th proper nonempty
    subset (ascending bitset order) iff bit ``i`` of ``m`` is set.  The
    reference point of each yielded space is point 0.
    """
    if not 1 <= n <= MAX_ENUM_POINTS:
        raise BoundExceeded(f"exhaustive enumeration supports 1 <= n <= {MAX_ENUM_POINTS}")
    yield from (topo for _, topo in enumerate_with_masks(n))


def enumerate_with_masks(n: int) -> Iterator[tuple[int, FiniteTopology]]:
    if not 1 <= n <= MAX_ENUM_POINTS:
        raise BoundExceeded(f"exhaustive enumeration supports 1 <= n <= {MAX_ENUM_POINTS}")
    full = (1 << n) - 1
    proper = list(range(1, full))
    points = tuple(str(i) for i in range(n))
    for mask in range(1 << len(proper)):
        chosen = [s for i, s in enumerate(proper) if mask >> i & 1]
        family = frozenset([0, full, *chosen])
        if _closed(chosen, family):
            yield mask, FiniteTopology(points, tuple(sorted(family)), 0)


def _closed(chosen: list[int], family: frozenset[int]) -> bool:
    for i, a in enumerate(chosen):
        for b in chosen[i + 1 :]:
            if a | b not in family or a & b not in family:
                return False
    return True


# --------------------------------------------------------------- models


def builtin(name: str) -> FiniteTopology:
    if name == "classical":
        return validate(["·"], [0, 1], "·", aliases={0: "0", 1: "1"})
    if name == "sierpinski":
        return validate(["0", "1"], [0, 0b01, 0b11], "1", aliases={0: "0", 0b01: "1", 0b11: "2"})
    if name == "three_point":
        return validate(
            ["a", "b", "x"],
            [0, 0b001, 0b010, 0b011, 0b111],
            "x",
            aliases={0: "φ", 0b001: "α", 0b010: "β", 0b011: "γ", 0b111: "X"},
        )
    raise UnknownModel(f"unknown builtin model {name!r} (choose from {', '.join(BUILTINS)})")


BUILTINS = ("classical", "sierpinski", "three_point")


def from_json(data: dict) -> FiniteTopology:
    try:
        return validate(data["points"], data["opens"], data["reference_point"])
    except KeyError as exc:
        raise TopologyError(f"model file is missing field {exc.args[0]!r}") from None


def load_model(source: str) -> FiniteTopology:
    """A builtin name or a path to a JSON model file."""
    if source in BUILTINS:
        return builtin(source)
    try:
        with open(source, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise UnknownModel(f"{source!r} is neither a builtin model nor a readable file") from None
    except json.JSONDecodeError as exc:
        raise TopologyError(f"{source}: invalid JSON ({exc})") from None
    return from_json(data)
