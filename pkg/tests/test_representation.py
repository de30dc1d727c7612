# /usr/bin/env python3
# Tests for connective representations
# Power functor, Kleisli composition, clarity, morphisms and the canonical representation

from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core import (
    ConnectivitySpace,
    GroundSet,
    SizeGuardError,
    SetMap,
    StructureRelation,
    coarse_space,
    compare,
    discrete_space,
    is_integral,
    membership,
)
from src.representation import (
    MiddleSpaceMismatchError,
    RepMorphismError,
    RepresentationError,
    canonical_representation,
    compose_rep_morphisms,
    epsilon,
    identity_rep_morphism,
    is_clear,
    is_distinct,
    is_integral_representation,
    kleisli_compose,
    kstar_membership,
    power_space,
    pstar_map,
    pstar_membership,
    rep_points,
    singleton_map,
    terminal_representation,
    union_image,
    union_map,
    validate_rep_morphism,
    validate_representation,
)
from src.oracle import enumerate_structures
from tests.strategies import (
    ground_of,
    maps_between,
    rep_morphisms,
    rep_morphisms_between,
    representations,
    representations_of,
    spaces,
)


@pytest.fixture
def path_rep(b3, p3):
    """Borromean space represented in the path by its two edges."""
    return validate_representation(b3, p3, (0b011, 0b110, 0b011))


@pytest.mark.unit
class TestPowerFunctor:
    """Test P*, K* and the monad structure maps."""

    def test_pstar_membership(self, b3):
        """Test that a family is connected iff its union is."""
        assert pstar_membership(b3, [0b001, 0b010, 0b100])
        assert not pstar_membership(b3, [0b001, 0b010])

    def test_pstar_rejects_empty_member(self, b3):
        """Test that P* has no empty point."""
        with pytest.raises(RepresentationError):
            pstar_membership(b3, [0, 0b001])

    def test_kstar_requires_connected_members(self, b3):
        """Test that K* points must be connected parts."""
        with pytest.raises(RepresentationError, match="not"):
            kstar_membership(b3, [0b011])
        assert kstar_membership(b3, [0b111, 0b001])

    def test_power_space(self, b3):
        """Test labels and connectedness of the materialized power space."""
        space = power_space(b3)
        assert space.ground.n == 7
        assert space.ground.labels[2] == "{1,2}"
        # points 0, 1 and 3 are the singletons {1}, {2} and {3}
        assert membership(space, 0b0001011)
        assert not membership(space, 0b0000011)

    def test_power_space_guard(self):
        """Test the power space size guard."""
        ground = GroundSet(tuple("abcde"))
        with pytest.raises(SizeGuardError):
            power_space(discrete_space(ground))

    def test_union_map_guard(self, b3):
        """Test the union map size guard."""
        with pytest.raises(SizeGuardError):
            union_map(b3)

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_singleton_naturality(self, data):
        """Test f^P after epsilon_X equals epsilon_Y after f."""
        x = data.draw(spaces(min_points=1, max_points=3))
        y = data.draw(spaces(min_points=1, max_points=3))
        f = data.draw(maps_between(x.ground, y.ground))
        assert pstar_map(f, x, y).compose(singleton_map(x)) == singleton_map(y).compose(f)

    @settings(max_examples=30, deadline=None)
    @given(st.data())
    def test_union_naturality(self, data):
        """Test mu_Y after (f^P)^P equals f^P after mu_X."""
        x = data.draw(spaces(min_points=1, max_points=2))
        y = data.draw(spaces(min_points=1, max_points=2))
        f = data.draw(maps_between(x.ground, y.ground))
        lifted = pstar_map(f, x, y)
        twice = pstar_map(lifted, power_space(x), power_space(y))
        assert union_map(y).compose(twice) == lifted.compose(union_map(x))

    def test_union_after_singleton_is_identity(self):
        """Test mu_X after epsilon_P*X is the identity of P*X."""
        x = discrete_space(GroundSet(("a", "b")))
        inner = power_space(x)
        assert union_map(x).compose(singleton_map(inner)) == SetMap.identity(inner.ground)


@pytest.mark.unit
class TestValidateRepresentation:
    """Test the representation law."""

    def test_epsilon_is_valid(self, b3):
        """Test that the unit passes validation."""
        rep = epsilon(b3)
        assert validate_representation(b3, b3, rep.images) == rep

    def test_path_rep(self, path_rep):
        """Test the two-edge representation of the Borromean space."""
        assert union_image(path_rep, 0b111) == 0b111
        assert not is_distinct(path_rep)

    def test_failing_generator(self, b3, ground3):
        """Test that the whole carrier cannot be sent to a discrete space."""
        with pytest.raises(RepresentationError, match="not connected"):
            validate_representation(b3, discrete_space(ground3), (0b001, 0b010, 0b100))

    def test_empty_image(self, b3):
        """Test that every point needs a nonempty image."""
        with pytest.raises(RepresentationError, match="empty image"):
            validate_representation(b3, b3, (0b001, 0, 0b100))

    def test_image_count(self, b3):
        """Test that one image per point is required."""
        with pytest.raises(RepresentationError, match="needs 3 images"):
            validate_representation(b3, b3, (0b001,))

    def test_constant_rep_not_clear(self, b3):
        """Test that the constant representation is neither clear nor distinct."""
        rep = validate_representation(b3, b3, (0b111, 0b111, 0b111))
        assert not is_clear(rep)
        assert not is_distinct(rep)

    def test_epsilon_clear_and_distinct(self, b3, p3):
        """Test that epsilon is clear and distinct."""
        for space in (b3, p3):
            assert is_clear(epsilon(space))
            assert is_distinct(epsilon(space))
            assert is_integral_representation(epsilon(space))


@pytest.mark.unit
class TestKleisli:
    """Test Kleisli composition."""

    def test_units(self, path_rep, b3, p3):
        """Test both unit laws on a fixed representation."""
        assert kleisli_compose(epsilon(p3), path_rep).images == path_rep.images
        assert kleisli_compose(path_rep, epsilon(b3)).images == path_rep.images

    def test_middle_mismatch(self, path_rep, b3):
        """Test that the middle spaces must agree."""
        with pytest.raises(MiddleSpaceMismatchError):
            kleisli_compose(epsilon(b3), path_rep)

    def test_middle_mismatch_same_points(self, b3, ground3):
        """Test that equal carriers with different structures are rejected."""
        with pytest.raises(MiddleSpaceMismatchError):
            kleisli_compose(epsilon(coarse_space(ground3)), epsilon(b3))

    @settings(max_examples=200, deadline=None)
    @given(representations(max_points=4))
    def test_unit_laws(self, rho):
        """Test epsilon is a two-sided unit."""
        assert kleisli_compose(epsilon(rho.space), rho).images == rho.images
        assert kleisli_compose(rho, epsilon(rho.object)).images == rho.images

    @pytest.mark.slow
    @settings(max_examples=500, deadline=None)
    @given(st.data())
    def test_associativity(self, data):
        """Test (upsilon . tau) . rho equals upsilon . (tau . rho) on carriers up to four points."""
        rho = data.draw(representations(max_points=4))
        tau = data.draw(representations_of(rho.space, max_points=4))
        upsilon = data.draw(representations_of(tau.space, max_points=4))
        left = kleisli_compose(kleisli_compose(upsilon, tau), rho)
        right = kleisli_compose(upsilon, kleisli_compose(tau, rho))
        assert left.images == right.images


@pytest.mark.unit
class TestRepMorphisms:
    """Test morphisms of representations."""

    def test_identity(self, path_rep):
        """Test that the identity pair is a morphism."""
        ident = identity_rep_morphism(path_rep)
        assert validate_rep_morphism(ident.alpha, ident.beta, path_rep, path_rep) is not None

    def test_pointwise_failure_names_point(self):
        """Test that an escaping image is reported with its point."""
        ground = GroundSet(("x", "y"))
        rho = epsilon(discrete_space(ground))
        collapse = SetMap(ground, ground, (0, 0))
        with pytest.raises(RepMorphismError, match="At point y"):
            validate_rep_morphism(SetMap.identity(ground), collapse, rho, rho)

    def test_non_connective_alpha(self, b3, ground3):
        """Test that alpha must be connective."""
        rho = epsilon(b3)
        target = epsilon(discrete_space(ground3))
        with pytest.raises(RepMorphismError, match="alpha"):
            validate_rep_morphism(SetMap.identity(ground3), SetMap.identity(ground3), rho, target)

    def test_composition(self, path_rep):
        """Test that composing with identities changes nothing."""
        ident = identity_rep_morphism(path_rep)
        composed = compose_rep_morphisms(ident, ident)
        assert composed.alpha == ident.alpha
        assert composed.beta == ident.beta


@pytest.mark.unit
class TestPointsAndCanonical:
    """Test representation points, the terminal object and canonical representations."""

    def test_terminal(self):
        """Test the terminal representation has one point."""
        assert rep_points(terminal_representation()) == [(0, 0)]

    def test_rep_points_of_epsilon(self, b3):
        """Test that epsilon has one point per carrier point."""
        assert rep_points(epsilon(b3)) == [(0, 0), (1, 1), (2, 2)]

    def test_rep_points_empty(self):
        """Test that a non-connected object point contributes nothing."""
        obj = ConnectivitySpace(GroundSet(("p",)), integral=False)
        space = discrete_space(GroundSet(("q",)))
        assert rep_points(validate_representation(obj, space, (0b1,))) == []

    def test_canonical_of_integral_space(self, b3):
        """Test that an integral space is represented by itself."""
        rep = canonical_representation(b3)
        assert rep.images == (1, 2, 4)
        assert compare(rep.space, b3) == StructureRelation.EQUAL

    def test_canonical_doubles_non_connected_points(self):
        """Test that a non-connected point gets a primed copy."""
        x = ConnectivitySpace(GroundSet(("p",)), integral=False)
        rep = canonical_representation(x)
        assert rep.space.ground.labels == ("p", "p'")
        assert rep.images == (0b11,)
        assert not membership(rep.space, 0b11)

    def test_canonical_of_non_integral_borromean(self, ground3):
        """Test a space where only two singletons are connected."""
        x = ConnectivitySpace(ground3, (0b001, 0b010, 0b111), integral=False)
        rep = canonical_representation(x)
        assert is_clear(rep) and is_distinct(rep)
        assert is_integral(rep.space)
        assert rep.space.ground.n == 4

    @settings(max_examples=60, deadline=None)
    @given(spaces(max_points=4))
    def test_canonical_is_clear_and_distinct(self, x):
        """Test the canonical representation on random spaces."""
        rep = canonical_representation(x)
        assert is_clear(rep)
        assert is_distinct(rep)
        assert is_integral(rep.space)


def _every_representation(spaces_list):
    """Every valid representation between the given spaces."""
    found = []
    for obj in spaces_list:
        for space in spaces_list:
            choices = range(1, space.ground.full + 1)
            for images in product(choices, repeat=obj.ground.n):
                try:
                    found.append(validate_representation(obj, space, images))
                except RepresentationError:
                    continue
    return found


@pytest.fixture(scope="module")
def two_point_spaces():
    """Every structure on at most two points, integral or not."""
    return [
        structure.to_space()
        for n in range(3)
        for structure in enumerate_structures(ground_of(n), integral=False)
    ]


@pytest.mark.property
class TestMonadLawsExhaustive:
    """Monad laws on every representation between spaces of at most two points."""

    def test_unit_laws(self, two_point_spaces):
        """Test that epsilon is a two-sided unit for every representation."""
        for rho in _every_representation(two_point_spaces):
            assert kleisli_compose(epsilon(rho.space), rho).images == rho.images
            assert kleisli_compose(rho, epsilon(rho.object)).images == rho.images

    def test_associativity(self, two_point_spaces):
        """Test associativity on every chain of three representations between integral spaces."""
        integral = [space for space in two_point_spaces if space.integral]
        reps = _every_representation(integral)
        starting = {}
        for rep in reps:
            starting.setdefault(id(rep.object), []).append(rep)
        for rho in reps:
            for tau in starting.get(id(rho.space), ()):
                middle = kleisli_compose(tau, rho)
                for upsilon in starting.get(id(tau.space), ()):
                    left = kleisli_compose(kleisli_compose(upsilon, tau), rho)
                    right = kleisli_compose(upsilon, middle)
                    assert left.images == right.images


@pytest.mark.property
class TestRepMorphismCategory:
    """Identity and associativity of representation morphism composition."""

    @settings(max_examples=100, deadline=None)
    @given(rep_morphisms())
    def test_identity_laws(self, f):
        """Test that composing with identities on either side changes nothing."""
        left = compose_rep_morphisms(identity_rep_morphism(f.target), f)
        right = compose_rep_morphisms(f, identity_rep_morphism(f.source))
        for composed in (left, right):
            assert composed.alpha == f.alpha
            assert composed.beta == f.beta

    @settings(max_examples=100, deadline=None)
    @given(st.data())
    def test_associativity(self, data):
        """Test associativity on chains of three composable morphisms."""
        rho = data.draw(representations(max_points=3))
        first = data.draw(st.sampled_from(rep_morphisms_between(rho, rho)))
        second = data.draw(st.sampled_from(rep_morphisms_between(rho, rho)))
        target = data.draw(st.sampled_from([rho, terminal_representation()]))
        third = data.draw(st.sampled_from(rep_morphisms_between(rho, target)))
        left = compose_rep_morphisms(third, compose_rep_morphisms(second, first))
        right = compose_rep_morphisms(compose_rep_morphisms(third, second), first)
        assert left.alpha == right.alpha
        assert left.beta == right.beta
        assert validate_rep_morphism(left.alpha, left.beta, rho, target) is not None

