import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heyting_ecc.topology import (
    BoundExceeded,
    FiniteTopology,
    MissingEmptyOrFull,
    MixedTopologies,
    NotClosedUnderIntersection,
    NotClosedUnderUnion,
    OpenSet,
    TopologyError,
    UnknownModel,
    UnknownReferencePoint,
    builtin,
    check_point_condition,
    enumerate_topologies,
    enumerate_with_masks,
    exponential,
    from_json,
    interior,
    join_family,
    load_model,
    meet_family,
    minimal_neighborhood,
    validate,
)

from corpus import small_topologies
from laws import as_sets, heyting_identity_violations, naive_topologies, powerset

SIER = builtin("sierpinski")
THREE = builtin("three_point")
CLASSICAL = builtin("classical")


def named(topo, name):
    inverse = {v: k for k, v in topo.aliases.items()}
    return OpenSet(inverse[name], topo)


# ----------------------------------------------------------------- oracles


def naive_exp(topo, b, a):
    """Union of the opens t with t & a <= b, computed on frozensets."""
    sb, sa = set(topo.members(b)), set(topo.members(a))
    out = set()
    for o in topo.opens:
        t = set(topo.members(o))
        if t & sa <= sb:
            out |= t
    return out


# ------------------------------------------------------------ validation


def test_validate_examples():
    t = validate(["0", "1"], [[], ["0"], ["0", "1"]], "1")
    assert t.opens == (0, 1, 3)
    assert t.reference_point == 1
    c = validate(["a"], [[], ["a"]], "a")
    assert c.opens == (0, 1)


def test_validate_errors():
    with pytest.raises(MissingEmptyOrFull):
        validate(["a", "b"], [[], ["a"], ["b"]], "a")
    with pytest.raises(NotClosedUnderUnion) as info:
        validate(["a", "b", "c"], [[], ["a"], ["b"], ["a", "b", "c"]], "a")
    assert set(info.value.witness) == {0b001, 0b010}
    with pytest.raises(NotClosedUnderIntersection):
        validate(["a", "b", "c"], [[], ["a", "b"], ["b", "c"], ["a", "b", "c"]], "a")
    with pytest.raises(UnknownReferencePoint):
        validate(["a"], [[], ["a"]], "z")
    with pytest.raises(UnknownReferencePoint):
        validate(["a"], [[], ["a"]], 3)
    with pytest.raises(TopologyError):
        validate(["a"], [[], ["a"], ["q"]], "a")
    with pytest.raises(BoundExceeded):
        validate([str(i) for i in range(25)], [], "0")


def test_structural_equality():
    t = validate(["0", "1"], [0, 1, 3], "1")
    assert t == validate(["0", "1"], [[], ["0"], ["0", "1"]], 1)
    assert hash(t) == hash(validate(["0", "1"], [0, 1, 3], "1"))
    assert t != t.with_reference(0)


# ---------------------------------------------------------- lattice algebra


def test_join_examples():
    assert join_family([], SIER).bits == 0
    a, b = THREE.open(["a"]), THREE.open(["b"])
    assert join_family([a, b]).bits == 0b011
    assert join_family(SIER.all_opens()).bits == 0b11


def test_meet_examples():
    assert meet_family([], SIER).bits == SIER.full
    assert meet_family(SIER.all_opens()).bits == 0
    assert meet_family([THREE.open(["a"]), THREE.open(["b"])]).bits == 0
    with pytest.raises(TopologyError):
        meet_family([])


def test_interior_examples():
    assert interior(0b10, SIER).bits == 0
    assert interior(0b01, SIER).bits == 0b01
    assert interior(0b101, THREE).bits == 0b001


def test_exponential_examples():
    assert exponential(named(SIER, "1"), named(SIER, "2")) == named(SIER, "1")
    assert exponential(named(SIER, "0"), named(SIER, "1")) == named(SIER, "0")
    assert exponential(named(THREE, "γ"), named(THREE, "β")) == named(THREE, "X")
    for topo in (SIER, THREE, CLASSICAL):
        for b in topo.all_opens():
            assert exponential(b, topo.empty) == topo.whole


def test_operators():
    a, b = THREE.open(["a"]), THREE.open(["b"])
    assert (a | b).bits == 0b011
    assert (a & b).bits == 0
    assert (b ** a) == b
    assert a <= (a | b)
    assert 0 in a and 2 not in a
    assert str(a | b) == "{a,b}"


def test_mixed_topologies_rejected():
    with pytest.raises(MixedTopologies):
        exponential(SIER.whole, THREE.whole)
    with pytest.raises(MixedTopologies):
        join_family([SIER.whole, THREE.empty])


def test_open_rejects_non_open_subsets():
    with pytest.raises(TopologyError):
        SIER.open(["1"])


def test_sierpinski_exponential_table():
    # rows x, columns y, entry x^y
    expected = [["2", "0", "0"], ["2", "2", "1"], ["2", "2", "2"]]
    opens = SIER.all_opens()
    got = [[SIER.name_of(exponential(x, y).bits) for y in opens] for x in opens]
    assert got == expected


def test_three_point_exponentials_match_definition():
    opens = THREE.all_opens()
    for x in opens:
        for y in opens:
            assert set(THREE.members(exponential(x, y).bits)) == naive_exp(THREE, x.bits, y.bits)
    # the empty row: φ^α = β and φ^β = α since α and β are disjoint
    assert exponential(named(THREE, "φ"), named(THREE, "α")) == named(THREE, "β")
    assert exponential(named(THREE, "φ"), named(THREE, "β")) == named(THREE, "α")


# --------------------------------------------------------- neighborhoods


def test_minimal_neighborhood_examples():
    assert minimal_neighborhood(SIER, 0).bits == 0b01
    assert minimal_neighborhood(SIER, 1).bits == 0b11
    assert minimal_neighborhood(CLASSICAL, 0).bits == 1
    assert minimal_neighborhood(THREE, "x").bits == 0b111
    assert minimal_neighborhood(THREE, "a").bits == 0b001


def test_point_condition_everywhere():
    for topo in list(small_topologies(4)) + [SIER, THREE, CLASSICAL]:
        for q in range(len(topo.points)):
            assert check_point_condition(topo, q)
            assert q in minimal_neighborhood(topo, q)


# ----------------------------------------------------------- enumeration


@pytest.mark.parametrize("n, count", [(1, 1), (2, 4), (3, 29)])
def test_enumeration_counts_against_naive_filter(n, count):
    ours = [as_sets(t) for t in enumerate_topologies(n)]
    assert len(ours) == count
    assert len(set(ours)) == count
    assert set(ours) == naive_topologies(n)


def test_enumeration_n4():
    assert sum(1 for _ in enumerate_topologies(4)) == 355


def test_enumeration_bound():
    with pytest.raises(BoundExceeded):
        list(enumerate_topologies(5))
    with pytest.raises(BoundExceeded):
        list(enumerate_topologies(0))


def test_enumeration_is_deterministic_and_valid():
    first = list(enumerate_with_masks(3))
    assert first == list(enumerate_with_masks(3))
    masks = [m for m, _ in first]
    assert masks == sorted(masks)
    for _, topo in first:
        again = validate(topo.points, topo.opens, topo.reference_point)
        assert again == topo


# ------------------------------------------- complete Heyting identities


def test_heyting_identities_on_all_small_topologies():
    topos = small_topologies(3)
    assert len(topos) == 34
    for topo in topos:
        assert heyting_identity_violations(topo) == [], topo.describe()


def test_adjunction():
    for topo in small_topologies(3):
        O = topo.all_opens()
        for x, y, z in itertools.product(O, repeat=3):
            assert (x <= z ** y) == ((x & y) <= z)


def test_meet_is_intersection_on_finite_spaces():
    for topo in small_topologies(3):
        for S in powerset(topo.all_opens()):
            if S:
                inter = topo.full
                for s in S:
                    inter &= s.bits
                assert meet_family(S).bits == inter


def test_exponential_matches_oracle_on_all_small_topologies():
    for topo in small_topologies(3):
        for b, a in itertools.product(topo.opens, repeat=2):
            assert set(topo.members(exponential(OpenSet(b, topo), OpenSet(a, topo)).bits)) == naive_exp(topo, b, a)


@given(st.integers(0, 354), st.data())
def test_heyting_identities_spot_checks_on_four_points(i, data):
    topo = small_topologies(4)[34 + i]
    O = topo.all_opens()
    x, a, b = (data.draw(st.sampled_from(O)) for _ in range(3))
    assert (x ** b) ** a == x ** (a & b)
    assert (x ** a) & (x ** b) == x ** (a | b)
    assert x <= x ** a
    assert meet_family([t ** (t ** a) for t in O]) == a


# ---------------------------------------------------------------- models


def test_builtins():
    assert CLASSICAL.opens == (0, 1)
    assert SIER.points == ("0", "1") and SIER.opens == (0, 1, 3) and SIER.reference_name == "1"
    assert THREE.opens == (0, 1, 2, 3, 7) and THREE.reference_name == "x"
    assert [THREE.name_of(o) for o in THREE.opens] == ["φ", "α", "β", "γ", "X"]
    with pytest.raises(UnknownModel):
        builtin("nope")


def test_json_models(tmp_path):
    data = {"points": ["a", "b", "x"], "opens": [[], ["a"], ["b"], ["a", "b"], ["a", "b", "x"]], "reference_point": "x"}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(data))
    m = load_model(str(path))
    assert m.opens == THREE.opens and m.reference_name == "x"
    assert from_json(m.to_json()) == m
    assert load_model("sierpinski") == SIER
    with pytest.raises(UnknownModel):
        load_model(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(TopologyError):
        load_model(str(bad))
    with pytest.raises(TopologyError):
        from_json({"points": ["a"]})


def test_describe_and_render():
    assert SIER.render(0b11) == "{0,1}"
    assert SIER.describe() == "X = {0,1}, O(X) = [{}, {0}, {0,1}], p = 1"
    assert isinstance(SIER, FiniteTopology)
