# /usr/bin/env python3
# Connective Representations
# The power functor P*, representations as Kleisli arrows, clarity, distinctness and morphisms

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, List, Sequence, Tuple

from src.constants import (
    CANONICAL_REP_LIMIT,
    CLARITY_LIMIT,
    POWER_SPACE_LIMIT,
    UNION_MAP_LIMIT,
)
from src.core import (
    ConnectivityError,
    ConnectivitySpace,
    GroundSet,
    InvariantError,
    SetMap,
    StructureRelation,
    Subset,
    compare,
    guard_size,
    is_integral,
    is_morphism,
    iter_points,
    mask_of,
    membership,
)


# Custom Exceptions
class RepresentationError(ConnectivityError):
    """Raised when a point has an empty image or the morphism law fails."""


class RepMorphismError(ConnectivityError):
    """Raised when a pair of maps is not a morphism of representations."""


class MiddleSpaceMismatchError(ConnectivityError):
    """Raised when two representations cannot be composed."""


@dataclass(frozen=True)
class Representation:
    """
    Representation rho: X ~> Y.

    ``images[x]`` is the nonempty part of Y representing the point x of X.
    Build instances through ``validate_representation``.
    """

    object: ConnectivitySpace
    space: ConnectivitySpace
    images: Tuple[Subset, ...]

    def __call__(self, point: int) -> Subset:
        return self.images[point]


@dataclass(frozen=True)
class RepMorphism:
    """Pair (alpha, beta) with beta(rho(a)) inside rho'(alpha(a)) for every a."""

    alpha: SetMap
    beta: SetMap
    source: Representation
    target: Representation


def union_image(rep: Representation, a: Subset) -> Subset:
    """The union of the images of the points of ``a``."""
    rep.object.ground.check(a)
    image = 0
    for point in iter_points(a):
        image |= rep.images[point]
    return image


def pstar_membership(space: ConnectivitySpace, family: Iterable[Subset]) -> bool:
    """
    Connectedness in P*(space): a family is connected iff its union is.

    Raises:
        RepresentationError: If a member of the family is empty
    """
    union = 0
    for member in family:
        space.ground.check(member)
        if not member:
            raise RepresentationError("P* only contains nonempty parts")
        union |= member
    return membership(space, union)


def kstar_membership(space: ConnectivitySpace, family: Iterable[Subset]) -> bool:
    """Connectedness in K*(space), whose points are the nonempty connected parts."""
    members = list(family)
    for member in members:
        if member and not membership(space, member):
            raise RepresentationError(
                f"K* only contains connected parts, {space.ground.format(member)} is not"
            )
    return pstar_membership(space, members)


def validate_representation(
    obj: ConnectivitySpace, space: ConnectivitySpace, images: Sequence[Subset]
) -> Representation:
    """
    Check a candidate representation and return it.

    Args:
        obj: Represented space X
        space: Space Y in which X is represented
        images: One nonempty part of Y per point of X

    Returns:
        The validated representation

    Raises:
        RepresentationError: On an empty image, a wrong count, or the first
            generator of X whose image union is not connected in Y
    """
    images = tuple(images)
    if len(images) != obj.ground.n:
        raise RepresentationError(
            f"Representation needs {obj.ground.n} images, got {len(images)}"
        )

    for point, image in enumerate(images):
        space.ground.check(image)
        if not image:
            raise RepresentationError(f"Point {obj.ground.labels[point]} has an empty image")

    rep = Representation(obj, space, images)
    for generator in obj.generating_family():
        if not membership(space, union_image(rep, generator)):
            raise RepresentationError(
                f"Connected part {obj.ground.format(generator)} is sent to "
                f"{space.ground.format(union_image(rep, generator))}, which is not connected"
            )
    return rep


def epsilon(space: ConnectivitySpace) -> Representation:
    """Unit of the monad: every point is represented by itself."""
    return Representation(space, space, tuple(1 << i for i in range(space.ground.n)))


def is_clear(rep: Representation) -> bool:
    """
    Non-connected parts of the object are sent to non-connected parts.

    Quantifies over every part of the object, so the object is limited to
    20 points.
    """
    guard_size(rep.object.ground.n, CLARITY_LIMIT, "Clarity check")
    for a in range(rep.object.ground.full + 1):
        if not membership(rep.object, a) and membership(rep.space, union_image(rep, a)):
            return False
    return True


def is_distinct(rep: Representation) -> bool:
    return all(not (s & t) for s, t in combinations(rep.images, 2))


def is_integral_representation(rep: Representation) -> bool:
    return is_integral(rep.object) and is_integral(rep.space)


def kleisli_compose(tau: Representation, rho: Representation) -> Representation:
    """
    Kleisli composite tau . rho: X ~> Z.

    Raises:
        MiddleSpaceMismatchError: If sp(rho) and ob(tau) differ
    """
    middle_ok = (
        rho.space.ground == tau.object.ground
        and compare(rho.space, tau.object) == StructureRelation.EQUAL
    )
    if not middle_ok:
        raise MiddleSpaceMismatchError("The space of rho is not the object of tau")

    images = [union_image(tau, image) for image in rho.images]
    return validate_representation(rho.object, tau.space, images)


def _require_connective(f: SetMap, x: ConnectivitySpace, y: ConnectivitySpace, name: str):
    if f.source != x.ground or f.target != y.ground:
        raise RepMorphismError(f"{name} does not line up with the representations")
    if not is_morphism(f, x, y):
        raise RepMorphismError(f"{name} is not a connective morphism")


def validate_rep_morphism(
    alpha: SetMap, beta: SetMap, rho: Representation, rho_prime: Representation
) -> RepMorphism:
    """
    Check that (alpha, beta) is a morphism rho -> rho'.

    Raises:
        RepMorphismError: With the first point where beta(rho(a)) escapes rho'(alpha(a))
    """
    _require_connective(alpha, rho.object, rho_prime.object, "alpha")
    _require_connective(beta, rho.space, rho_prime.space, "beta")

    for point, image in enumerate(rho.images):
        moved = beta.image(image)
        allowed = rho_prime.images[alpha(point)]
        if moved & ~allowed:
            raise RepMorphismError(
                f"At point {rho.object.ground.labels[point]}: "
                f"{rho_prime.space.ground.format(moved)} is not inside "
                f"{rho_prime.space.ground.format(allowed)}"
            )
    return RepMorphism(alpha, beta, rho, rho_prime)


def identity_rep_morphism(rep: Representation) -> RepMorphism:
    return RepMorphism(
        SetMap.identity(rep.object.ground), SetMap.identity(rep.space.ground), rep, rep
    )


def compose_rep_morphisms(second: RepMorphism, first: RepMorphism) -> RepMorphism:
    """Return ``second`` after ``first``."""
    if first.target is not second.source and first.target != second.source:
        raise RepMorphismError("Representation morphisms are not composable")
    return RepMorphism(
        second.alpha.compose(first.alpha),
        second.beta.compose(first.beta),
        first.source,
        second.target,
    )


def terminal_representation() -> Representation:
    """Final object of RC: one connected point represented by itself."""
    point = ConnectivitySpace(GroundSet(("*",)), integral=True)
    return epsilon(point)


def rep_points(rep: Representation) -> List[Tuple[int, int]]:
    """Pairs (p, q): p a connected point of the object, q a connected point of rho(p)."""
    points = []
    for p in range(rep.object.ground.n):
        if not membership(rep.object, 1 << p):
            continue
        for q in iter_points(rep.images[p]):
            if membership(rep.space, 1 << q):
                points.append((p, q))
    return points


def _copy_labels(ground: GroundSet, doubled: Iterable[int]) -> Tuple[str, ...]:
    taken = set(ground.labels)
    labels = list(ground.labels)
    for point in sorted(doubled):
        copy = ground.labels[point] + "'"
        while copy in taken:
            copy += "'"
        taken.add(copy)
        labels.append(copy)
    return tuple(labels)


def canonical_representation(x: ConnectivitySpace) -> Representation:
    """
    Clear and distinct representation of ``x`` in an integral space.

    Connected points keep one copy, non-connected points get two. The space
    is generated (integrally) by the unions of copies over the generating
    family of ``x``.

    Raises:
        SizeGuardError: If ``x`` has more than 20 points
        InvariantError: If the construction fails its own verification
    """
    ground = x.ground
    guard_size(ground.n, CANONICAL_REP_LIMIT, "Canonical representation")

    doubled = [p for p in range(ground.n) if not membership(x, 1 << p)]
    carrier = GroundSet(_copy_labels(ground, doubled))

    images = [1 << p for p in range(ground.n)]
    for offset, point in enumerate(doubled):
        images[point] |= 1 << (ground.n + offset)

    def spread(a: Subset) -> Subset:
        return mask_of(q for p in iter_points(a) for q in iter_points(images[p]))

    generators = [spread(k) for k in x.generating_family()]
    space = ConnectivitySpace(carrier, generators, integral=True)
    rep = validate_representation(x, space, images)

    if not (is_distinct(rep) and is_clear(rep)):
        raise InvariantError("Canonical representation failed its clarity check")
    return rep


def power_space(space: ConnectivitySpace) -> ConnectivitySpace:
    """
    Materialized P*(space); point i + 1 ... is the nonempty part with bitmask i + 1.

    Raises:
        SizeGuardError: Above 4 points (P* has 2^n - 1 points)
    """
    guard_size(space.ground.n, POWER_SPACE_LIMIT, "Power space")
    parts = range(1, space.ground.full + 1)
    ground = GroundSet(tuple(space.ground.format(part).replace(" ", ",") for part in parts))

    def connected(family: Subset) -> bool:
        return pstar_membership(space, (point + 1 for point in iter_points(family)))

    return ConnectivitySpace(ground, integral=False, membership=connected)


def pstar_map(f: SetMap, source: ConnectivitySpace, target: ConnectivitySpace) -> SetMap:
    """f^P as a map P*(source) -> P*(target)."""
    return SetMap(
        power_space(source).ground,
        power_space(target).ground,
        tuple(f.image(part) - 1 for part in range(1, source.ground.full + 1)),
    )


def singleton_map(space: ConnectivitySpace) -> SetMap:
    """epsilon_X as a set map X -> P*(X)."""
    return SetMap(
        space.ground,
        power_space(space).ground,
        tuple((1 << i) - 1 for i in range(space.ground.n)),
    )


def union_map(space: ConnectivitySpace) -> SetMap:
    """
    mu_X as a map P*(P*(X)) -> P*(X).

    Raises:
        SizeGuardError: Above 2 points (P*(P*(X)) must fit one word)
    """
    guard_size(space.ground.n, UNION_MAP_LIMIT, "Union map")
    inner = power_space(space)
    outer = power_space(inner)

    images = []
    for family in range(1, inner.ground.full + 1):
        union = 0
        for point in iter_points(family):
            union |= point + 1
        images.append(union - 1)
    return SetMap(outer.ground, inner.ground, tuple(images))
