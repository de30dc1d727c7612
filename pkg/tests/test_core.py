# /usr/bin/env python3
# Tests for the core space model
# Ground sets, maps, membership, components and structure comparison

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core import (
    CarrierMismatchError,
    ConnectivitySpace,
    GroundSet,
    InvariantError,
    SetMap,
    SizeGuardError,
    StructureRelation,
    brunnian_space,
    coarse_space,
    compare,
    components,
    connected_sets,
    discrete_space,
    induced,
    is_diffeologizable,
    is_integral,
    is_morphism,
    join,
    meet,
    membership,
    overlap_blocks,
    present_part,
    relabel,
    sort_family,
    submasks,
    topological_obstruction_witness,
)
from tests.strategies import ground_of, maps_between, permutations_of, spaces


@pytest.mark.unit
class TestGroundSet:
    """Test carrier construction and label handling."""

    def test_duplicate_labels_rejected(self):
        """Test that a repeated label is an invariant violation."""
        with pytest.raises(InvariantError, match="Duplicate"):
            GroundSet(("a", "a"))

    def test_whitespace_label_rejected(self):
        """Test that labels cannot contain whitespace."""
        with pytest.raises(InvariantError):
            GroundSet(("a b",))

    def test_too_many_points(self):
        """Test the hard point limit."""
        with pytest.raises(SizeGuardError):
            GroundSet(tuple(f"p{i}" for i in range(65)))

    def test_unknown_label(self, ground3):
        """Test resolving a label that is not a point."""
        with pytest.raises(CarrierMismatchError, match="Unknown point: 9"):
            ground3.index("9")

    def test_subset_and_format(self, ground3):
        """Test label subsets and their brace rendering."""
        mask = ground3.subset(["3", "1"])
        assert mask == 0b101
        assert ground3.format(mask) == "{1 3}"
        assert ground3.format(0) == "{}"

    def test_out_of_range_mask(self, ground3):
        """Test that a bitmask outside the carrier is rejected."""
        with pytest.raises(CarrierMismatchError):
            ground3.check(0b1000)

    def test_restrict(self, ground3):
        """Test restriction keeps the label order."""
        assert ground3.restrict(0b110).labels == ("2", "3")


@pytest.mark.unit
class TestFamilies:
    """Test canonical ordering helpers."""

    def test_sort_family(self):
        """Test ordering by cardinality then index tuple, with deduplication."""
        assert sort_family([0b110, 0b001, 0b011, 0b001]) == (0b001, 0b011, 0b110)

    def test_submasks(self):
        """Test that every subset is produced once."""
        assert list(submasks(0b101)) == [0b101, 0b100, 0b001, 0]

    def test_overlap_blocks(self):
        """Test merging of overlapping pieces."""
        assert sorted(overlap_blocks([0b0011, 0b0110, 0b1000])) == [0b0111, 0b1000]
        assert overlap_blocks([]) == []


@pytest.mark.unit
class TestSetMap:
    """Test total maps between carriers."""

    def test_from_labels_requires_total_mapping(self, ground3):
        """Test that a partial mapping is rejected."""
        with pytest.raises(CarrierMismatchError, match="not total"):
            SetMap.from_labels(ground3, ground3, {"1": "2"})

    def test_image_and_preimage(self, ground3):
        """Test direct image and preimage of subsets."""
        f = SetMap.from_labels(ground3, ground3, {"1": "2", "2": "2", "3": "1"})
        assert f.image(0b011) == 0b010
        assert f.preimage(0b010) == 0b011
        assert f.preimage(0b100) == 0

    def test_compose(self, ground3):
        """Test composition order: outer after inner."""
        shift = SetMap(ground3, ground3, (1, 2, 0))
        collapse = SetMap(ground3, ground3, (0, 0, 2))
        assert collapse.compose(shift).images == (0, 2, 0)

    def test_inverse(self, ground3):
        """Test inversion of bijections only."""
        shift = SetMap(ground3, ground3, (1, 2, 0))
        assert shift.compose(shift.inverse()) == SetMap.identity(ground3)
        with pytest.raises(InvariantError):
            SetMap(ground3, ground3, (0, 0, 1)).inverse()

    def test_image_outside_target(self, ground3):
        """Test that images must be points of the target."""
        with pytest.raises(CarrierMismatchError):
            SetMap(ground3, ground3, (0, 1, 3))


@pytest.mark.unit
class TestMembership:
    """Test the connectedness decision."""

    def test_borromean_pairs_not_connected(self, b3):
        """Test that no pair of the Borromean space is connected."""
        for pair in (0b011, 0b101, 0b110):
            assert membership(b3, pair) is False
        assert membership(b3, 0b111) is True

    def test_empty_and_singletons(self, b3):
        """Test the empty set and the singletons of an integral space."""
        assert membership(b3, 0)
        assert all(membership(b3, 1 << i) for i in range(3))

    def test_path(self, p3):
        """Test a path: the ends alone are not connected."""
        assert membership(p3, 0b101) is False
        assert membership(p3, 0b111) is True

    def test_non_integral_singleton(self, ground3):
        """Test that singletons need a generator in a non-integral space."""
        space = ConnectivitySpace(ground3, (0b001,), integral=False)
        assert membership(space, 0b001)
        assert not membership(space, 0b010)

    def test_delegated_with_generators_rejected(self, ground3):
        """Test that a predicate and generators cannot be combined."""
        with pytest.raises(InvariantError):
            ConnectivitySpace(ground3, (0b011,), membership=lambda k: True)

    def test_foreign_subset(self, b3):
        """Test that a subset outside the carrier is rejected."""
        with pytest.raises(CarrierMismatchError):
            membership(b3, 0b1000)

    def test_connected_sets(self, b3):
        """Test the explicit structure of the Borromean space."""
        assert connected_sets(b3) == (0, 0b001, 0b010, 0b100, 0b111)

    def test_connected_sets_guard(self):
        """Test the materialization guard."""
        ground = GroundSet(tuple(f"p{i}" for i in range(17)))
        with pytest.raises(SizeGuardError):
            connected_sets(discrete_space(ground))


@pytest.mark.unit
class TestComponents:
    """Test components and induced spaces."""

    def test_borromean_pair(self, b3):
        """Test that a pair splits into its two points."""
        assert components(b3, 0b011) == (0b001, 0b010)

    def test_path_ends(self, p3):
        """Test the components of the two ends of a path."""
        assert components(p3, 0b101) == (0b001, 0b100)

    def test_empty_structure_has_no_components(self, ground3):
        """Test that points without connected sets lie in no component."""
        assert components(discrete_space(ground3, integral=False), 0b111) == ()

    def test_induced(self, b3):
        """Test that the induced structure is decided by the ambient space."""
        sub = induced(b3, 0b011)
        assert sub.ground.labels == ("1", "2")
        assert not membership(sub, 0b11)
        assert membership(sub, 0b01)


@pytest.mark.unit
class TestCompare:
    """Test comparison, join and meet."""

    def test_borromean_finer_than_coarse(self, b3, ground3):
        """Test both directions against the coarse structure."""
        coarse = coarse_space(ground3)
        assert compare(b3, coarse) == StructureRelation.FINER
        assert compare(coarse, b3) == StructureRelation.COARSER
        assert compare(b3, b3) == StructureRelation.EQUAL

    def test_incomparable_paths(self, ground3):
        """Test two paths with different middle points."""
        first = ConnectivitySpace(ground3, (0b011, 0b110))
        second = ConnectivitySpace(ground3, (0b101, 0b110))
        assert compare(first, second) == StructureRelation.INCOMPARABLE

    def test_join_and_meet(self, b3, ground3):
        """Test join and meet bounds."""
        edge = ConnectivitySpace(ground3, (0b011,))
        joined = join(b3, edge)
        assert membership(joined, 0b011) and membership(joined, 0b111)
        assert compare(meet(b3, coarse_space(ground3)), b3) == StructureRelation.EQUAL

    def test_different_grounds(self, b3, p3):
        """Test that structures on different carriers cannot be compared."""
        with pytest.raises(CarrierMismatchError):
            compare(b3, p3)


@pytest.mark.unit
class TestMorphisms:
    """Test connective maps."""

    def test_constant_map(self, b3, p3):
        """Test that a constant map into an integral space is connective."""
        f = SetMap(b3.ground, p3.ground, (1, 1, 1))
        assert is_morphism(f, b3, p3)

    def test_identity_into_discrete(self, b3, ground3):
        """Test that the whole carrier cannot land in the discrete space."""
        assert not is_morphism(SetMap.identity(ground3), b3, discrete_space(ground3))


@pytest.mark.unit
class TestObstructionAndFlags:
    """Test the topological obstruction and the integrality flags."""

    def test_borromean_witness(self, b3):
        """Test the witness found in the Borromean space."""
        assert topological_obstruction_witness(b3) == (0b001, 0b010, 2)

    def test_no_witness(self, ground3):
        """Test spaces without the obstruction shape."""
        assert topological_obstruction_witness(coarse_space(ground3)) is None
        assert topological_obstruction_witness(discrete_space(ground3)) is None

    def test_witness_guard(self):
        """Test that the witness search is refused above the materialization guard."""
        with pytest.raises(SizeGuardError):
            topological_obstruction_witness(brunnian_space(ground_of(17)))

    def test_non_integral_coarse(self, ground3):
        """Test that the non-integral coarse structure leaves the singletons out."""
        space = coarse_space(ground3, integral=False)
        assert not membership(space, 0b001)
        assert membership(space, 0b101)
        assert connected_sets(space) == (0, 0b011, 0b101, 0b110, 0b111)
        assert compare(space, coarse_space(ground3)) == StructureRelation.FINER

    def test_integral_flags(self, ground3):
        """Test integrality and diffeologizability agree."""
        space = ConnectivitySpace(ground3, (0b011,), integral=False)
        assert not is_integral(space)
        assert not is_diffeologizable(space)
        assert present_part(space) == 0b011
        assert is_integral(brunnian_space(ground3))


@pytest.mark.property
class TestRelabelProperties:
    """Property tests for structure transport."""

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_relabel_preserves_membership(self, data):
        """Test that membership is carried along a bijection."""
        space = data.draw(spaces(max_points=5))
        f = data.draw(permutations_of(space.ground))
        moved = relabel(space, f)
        for k in range(space.ground.full + 1):
            assert membership(moved, f.image(k)) == membership(space, k)

    @settings(max_examples=60, deadline=None)
    @given(spaces(max_points=5))
    def test_components_are_connected_and_disjoint(self, space):
        """Test that components are connected, disjoint and inside the set."""
        full = space.ground.full
        parts = components(space, full)
        seen = 0
        for part in parts:
            assert membership(space, part)
            assert part & seen == 0
            seen |= part
        assert seen & ~full == 0


def _at_most(a, b):
    return compare(a, b) in (StructureRelation.EQUAL, StructureRelation.FINER)


@st.composite
def space_pairs(draw, count=2, max_points=4):
    """Several spaces sharing one random carrier."""
    n = draw(st.integers(min_value=0, max_value=max_points))
    return [draw(spaces(min_points=n, max_points=n)) for _ in range(count)]


@pytest.mark.property
class TestStructureLaws:
    """Closure, morphism and lattice laws on random spaces."""

    @settings(max_examples=100, deadline=None)
    @given(spaces(max_points=5))
    def test_overlapping_union_is_connected(self, space):
        """Test that two connected sets sharing a point have a connected union."""
        kappa = connected_sets(space)
        for a in kappa:
            for b in kappa:
                if a & b:
                    assert membership(space, a | b)

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_morphism_on_generators_matches_every_connected_set(self, data):
        """Test that inspecting the generators decides the morphism law for every connected set."""
        x = data.draw(spaces(max_points=4))
        y = data.draw(spaces(min_points=1, max_points=4))
        f = data.draw(maps_between(x.ground, y.ground))
        everywhere = all(membership(y, f.image(k)) for k in connected_sets(x))
        assert is_morphism(f, x, y) == everywhere

    @settings(max_examples=100, deadline=None)
    @given(space_pairs(count=2))
    def test_compare_matches_inclusion(self, pair):
        """Test that comparison is inclusion of the explicit structures."""
        a, b = pair
        kappa_a, kappa_b = set(connected_sets(a)), set(connected_sets(b))
        assert _at_most(a, b) == (kappa_a <= kappa_b)
        assert (compare(a, b) == StructureRelation.EQUAL) == (kappa_a == kappa_b)

    @settings(max_examples=100, deadline=None)
    @given(space_pairs(count=2))
    def test_compare_is_antisymmetric(self, pair):
        """Test that EQUAL holds exactly when both directions hold, and the reverse flips."""
        a, b = pair
        relation = compare(a, b)
        assert (relation == StructureRelation.EQUAL) == (_at_most(a, b) and _at_most(b, a))
        flipped = {
            StructureRelation.EQUAL: StructureRelation.EQUAL,
            StructureRelation.FINER: StructureRelation.COARSER,
            StructureRelation.COARSER: StructureRelation.FINER,
            StructureRelation.INCOMPARABLE: StructureRelation.INCOMPARABLE,
        }
        assert compare(b, a) == flipped[relation]

    @settings(max_examples=100, deadline=None)
    @given(space_pairs(count=3))
    def test_compare_is_transitive(self, triple):
        """Test transitivity on random triples and on chains built with join."""
        a, b, c = triple
        if _at_most(a, b) and _at_most(b, c):
            assert _at_most(a, c)
        middle = join(a, b)
        top = join(middle, c)
        assert _at_most(a, middle) and _at_most(middle, top)
        assert _at_most(a, top)

    @settings(max_examples=100, deadline=None)
    @given(space_pairs(count=3))
    def test_join_is_least_upper_bound(self, triple):
        """Test that the join lies above both and below every common upper bound."""
        a, b, c = triple
        joined = join(a, b)
        assert _at_most(a, joined) and _at_most(b, joined)
        if _at_most(a, c) and _at_most(b, c):
            assert _at_most(joined, c)
        upper = join(joined, c)
        assert _at_most(joined, upper)

    @settings(max_examples=100, deadline=None)
    @given(space_pairs(count=3))
    def test_meet_is_greatest_lower_bound(self, triple):
        """Test that the meet lies below both and above every common lower bound."""
        a, b, c = triple
        met = meet(a, b)
        assert _at_most(met, a) and _at_most(met, b)
        if _at_most(c, a) and _at_most(c, b):
            assert _at_most(c, met)
        assert _at_most(meet(met, c), met)

    @settings(max_examples=100, deadline=None)
    @given(space_pairs(count=2))
    def test_absorption(self, pair):
        """Test that join and meet absorb each other."""
        a, b = pair
        assert compare(join(a, meet(a, b)), a) == StructureRelation.EQUAL
        assert compare(meet(a, join(a, b)), a) == StructureRelation.EQUAL
