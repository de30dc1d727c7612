# /usr/bin/env python3
# Connectivity Space Core
# Ground sets, bitmask subsets, generated structures, components, morphisms and the structure lattice

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

from networkx.utils import UnionFind

from src.constants import MATERIALIZE_LIMIT, MAX_POINTS


# A subset is an int bitmask over point indices; a family is a sorted tuple of them
Subset = int
Family = Tuple[int, ...]
Witness = Tuple[int, int, int]


# Custom Exceptions
class ConnectivityError(Exception):
    """Base exception for every error raised by the connectivity engine."""


class CarrierMismatchError(ConnectivityError):
    """Raised when a subset, map or structure does not live on the expected ground set."""


class SizeGuardError(ConnectivityError):
    """Raised when an exponential computation is requested above its size guard."""


class IntegralityError(ConnectivityError):
    """Raised when an operation requires an integral space and gets another one."""


class InvariantError(ConnectivityError):
    """Raised when a value violates a structural invariant at construction."""


def iter_points(mask: Subset) -> Iterator[int]:
    """Yield the point indices of a bitmask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def subset_key(mask: Subset) -> Tuple[int, Tuple[int, ...]]:
    """Sort key: cardinality first, then lexicographic index order."""
    return mask.bit_count(), tuple(iter_points(mask))


def sort_family(masks: Iterable[Subset]) -> Family:
    """Deduplicate a family of subsets and return it in canonical order."""
    return tuple(sorted(set(masks), key=subset_key))


def submasks(mask: Subset) -> Iterator[Subset]:
    """Yield every subset of ``mask``, the empty set included."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def mask_of(points: Iterable[int]) -> Subset:
    mask = 0
    for point in points:
        mask |= 1 << point
    return mask


def guard_size(n: int, limit: int, what: str) -> None:
    """
    Enforce a hard size guard.

    Raises:
        SizeGuardError: If ``n`` exceeds ``limit``
    """
    if n > limit:
        raise SizeGuardError(f"{what} is limited to {limit} points (got {n})")


@dataclass(frozen=True)
class GroundSet:
    """
    Ordered carrier of labelled points.

    The index of a label is its position and never changes; every algorithm
    works on indices and bitmasks, labels only matter at the edges.
    """

    labels: Tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)

        if len(labels) > MAX_POINTS:
            raise SizeGuardError(
                f"Ground sets are limited to {MAX_POINTS} points (got {len(labels)})"
            )

        seen = set()
        for label in labels:
            if not label or any(ch.isspace() for ch in label):
                raise InvariantError(f"Invalid point label: {label!r}")
            if label in seen:
                raise InvariantError(f"Duplicate point label: {label}")
            seen.add(label)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> Subset:
        return (1 << len(self.labels)) - 1

    @cached_property
    def _positions(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index(self, label: str) -> int:
        """
        Resolve a label to its index.

        Raises:
            CarrierMismatchError: If the label is not a point of this ground set
        """
        try:
            return self._positions[label]
        except KeyError:
            raise CarrierMismatchError(f"Unknown point: {label}") from None

    def subset(self, labels: Iterable[str]) -> Subset:
        return mask_of(self.index(label) for label in labels)

    def labels_of(self, mask: Subset) -> Tuple[str, ...]:
        self.check(mask)
        return tuple(self.labels[i] for i in iter_points(mask))

    def check(self, mask: Subset) -> None:
        """
        Ensure a bitmask only uses indices of this ground set.

        Raises:
            CarrierMismatchError: If an index is out of range
        """
        if mask < 0 or mask & ~self.full:
            raise CarrierMismatchError(
                f"Subset {mask:#x} is not a part of a {self.n}-point ground set"
            )

    def restrict(self, mask: Subset) -> "GroundSet":
        return GroundSet(self.labels_of(mask))

    def format(self, mask: Subset) -> str:
        return "{" + " ".join(self.labels_of(mask)) + "}"

    def format_family(self, family: Iterable[Subset]) -> List[str]:
        return [self.format(mask) for mask in family]


@dataclass(frozen=True)
class SetMap:
    """Total map between ground sets, stored as one target index per source point."""

    source: GroundSet
    target: GroundSet
    images: Tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)

        if len(images) != self.source.n:
            raise CarrierMismatchError(
                f"Map needs {self.source.n} images, got {len(images)}"
            )
        for point, image in enumerate(images):
            if not 0 <= image < self.target.n:
                raise CarrierMismatchError(
                    f"Image of {self.source.labels[point]} is outside the target ground set"
                )

    @classmethod
    def identity(cls, ground: GroundSet) -> "SetMap":
        return cls(ground, ground, tuple(range(ground.n)))

    @classmethod
    def from_labels(
        cls, source: GroundSet, target: GroundSet, mapping: Mapping[str, str]
    ) -> "SetMap":
        """
        Build a map from a label dictionary.

        Raises:
            CarrierMismatchError: If the mapping is not total or names unknown points
        """
        missing = [label for label in source.labels if label not in mapping]
        if missing:
            raise CarrierMismatchError(f"Map is not total: no image for {', '.join(missing)}")
        return cls(source, target, tuple(target.index(mapping[label]) for label in source.labels))

    def __call__(self, point: int) -> int:
        return self.images[point]

    def image(self, mask: Subset) -> Subset:
        """Direct image f^P of a subset."""
        self.source.check(mask)
        return mask_of(self.images[i] for i in iter_points(mask))

    def preimage(self, mask: Subset) -> Subset:
        self.target.check(mask)
        return mask_of(i for i, image in enumerate(self.images) if mask >> image & 1)

    def compose(self, first: "SetMap") -> "SetMap":
        """Return ``self`` after ``first``."""
        if first.target != self.source:
            raise CarrierMismatchError("Maps are not composable: carriers do not line up")
        return SetMap(first.source, self.target, tuple(self.images[i] for i in first.images))

    def is_bijective(self) -> bool:
        return self.source.n == self.target.n and len(set(self.images)) == self.target.n

    def inverse(self) -> "SetMap":
        if not self.is_bijective():
            raise InvariantError("Only bijections can be inverted")
        inverse = [0] * self.target.n
        for point, image in enumerate(self.images):
            inverse[image] = point
        return SetMap(self.target, self.source, tuple(inverse))


class StructureRelation(Enum):
    """Outcome of comparing two structures on one ground set."""

    EQUAL = "equal"
    FINER = "finer"
    COARSER = "coarser"
    INCOMPARABLE = "incomparable"


class ConnectivitySpace:
    """
    Finite connectivity space.

    A space is either generated (its connected sets are [generators]_0, or
    [generators]_1 when integral) or delegated (a membership predicate
    decides connectedness and the generating family is materialized only on
    demand, under the size guard). Instances are immutable.
    """

    def __init__(
        self,
        ground: GroundSet,
        generators: Iterable[Subset] = (),
        integral: bool = True,
        membership: Optional[Callable[[Subset], bool]] = None,
    ):
        """
        Create a space.

        Args:
            ground: Carrier of the space
            generators: Generating family (ignored members: the empty set)
            integral: Whether singletons are connected by convention
            membership: Optional predicate replacing generation

        Raises:
            CarrierMismatchError: If a generator is not a part of the ground set
            InvariantError: If both generators and a predicate are given
        """
        declared = []
        for generator in generators:
            ground.check(generator)
            if generator:
                declared.append(generator)

        if membership is not None and declared:
            raise InvariantError("A delegated space takes no explicit generators")

        self._ground = ground
        self._declared = sort_family(declared)
        self._integral = bool(integral)
        self._membership = membership

    @property
    def ground(self) -> GroundSet:
        return self._ground

    @property
    def integral(self) -> bool:
        return self._integral

    @property
    def delegated(self) -> bool:
        return self._membership is not None

    @cached_property
    def generators(self) -> Family:
        """
        Generating family of the structure.

        For delegated spaces this is every nonempty connected set, which is
        only computed for carriers within the materialization guard.
        """
        if not self.delegated:
            return self._declared

        guard_size(self._ground.n, MATERIALIZE_LIMIT, "Materializing a delegated structure")
        decide = self._membership
        return sort_family(k for k in range(1, self._ground.full + 1) if decide(k))

    def generating_family(self) -> Family:
        """Generators plus singletons when the space is integral."""
        if self.delegated or not self._integral:
            return self.generators
        singles = (1 << i for i in range(self._ground.n))
        return sort_family((*self.generators, *singles))

    def decide(self, mask: Subset) -> bool:
        """Raw delegated decision; callers go through ``membership``."""
        return bool(self._membership(mask))

    def __repr__(self):
        kind = "delegated" if self.delegated else f"{len(self._declared)} generators"
        return f"ConnectivitySpace({self._ground.n} points, {kind}, integral={self._integral})"


def overlap_blocks(pieces: Iterable[Subset]) -> List[Subset]:
    """Merge pieces sharing a point; return the resulting blocks."""
    forest = UnionFind()
    for piece in pieces:
        forest.union(*iter_points(piece))
    return [mask_of(group) for group in forest.to_sets()]


def _pieces(space: ConnectivitySpace, a: Subset) -> List[Subset]:
    """Connected building blocks contained in ``a``."""
    if space.delegated:
        guard_size(a.bit_count(), MATERIALIZE_LIMIT, "Scanning a delegated structure")
        return [k for k in submasks(a) if k and space.decide(k)]

    pieces = [g for g in space.generators if g & ~a == 0]
    if space.integral:
        pieces.extend(1 << i for i in iter_points(a))
    return pieces


def membership(space: ConnectivitySpace, a: Subset) -> bool:
    """
    Decide whether ``a`` is connected in ``space``.

    Generated spaces are decided by union-find over the generators contained
    in ``a``: ``a`` is connected iff those generators cover ``a`` and merge
    into a single block. No enumeration of the structure takes place.

    Raises:
        CarrierMismatchError: If ``a`` is not a part of the ground set
    """
    space.ground.check(a)
    if a == 0:
        return True
    if space.delegated:
        return space.decide(a)
    if a & (a - 1) == 0 and space.integral:
        return True

    pieces = [g for g in space.generators if g & ~a == 0]
    return overlap_blocks(pieces) == [a]


def components(space: ConnectivitySpace, a: Subset) -> Family:
    """
    Maximal nonempty connected subsets of ``a``.

    Points of ``a`` lying in no nonempty connected subset of ``a`` belong to
    no component.
    """
    space.ground.check(a)
    return sort_family(overlap_blocks(_pieces(space, a)))


def induced(space: ConnectivitySpace, a: Subset) -> ConnectivitySpace:
    """Space induced on ``a``; membership is delegated back to ``space``."""
    space.ground.check(a)
    points = tuple(iter_points(a))

    def lifted(mask: Subset) -> bool:
        return membership(space, mask_of(points[i] for i in iter_points(mask)))

    return ConnectivitySpace(space.ground.restrict(a), integral=space.integral, membership=lifted)


def _require_same_ground(a: ConnectivitySpace, b: ConnectivitySpace) -> None:
    if a.ground != b.ground:
        raise CarrierMismatchError("Structures live on different ground sets")


def is_morphism(f: SetMap, x: ConnectivitySpace, y: ConnectivitySpace) -> bool:
    """
    Check that ``f`` sends connected sets of ``x`` to connected sets of ``y``.

    Only the generating family of ``x`` is inspected: the image of a union of
    overlapping blocks is a union of overlapping images.
    """
    if f.source != x.ground or f.target != y.ground:
        raise CarrierMismatchError("Map carriers do not match the spaces")
    return all(membership(y, f.image(k)) for k in x.generating_family())


def _contained(a: ConnectivitySpace, b: ConnectivitySpace) -> bool:
    return all(membership(b, k) for k in a.generating_family())


def compare(a: ConnectivitySpace, b: ConnectivitySpace) -> StructureRelation:
    """
    Compare two structures on one ground set.

    FINER means every connected set of a is connected in b.
    """
    _require_same_ground(a, b)
    a_in_b = _contained(a, b)
    b_in_a = _contained(b, a)

    if a_in_b and b_in_a:
        return StructureRelation.EQUAL
    if a_in_b:
        return StructureRelation.FINER
    if b_in_a:
        return StructureRelation.COARSER
    return StructureRelation.INCOMPARABLE


def join(a: ConnectivitySpace, b: ConnectivitySpace) -> ConnectivitySpace:
    """Least structure containing both."""
    _require_same_ground(a, b)
    return ConnectivitySpace(
        a.ground, (*a.generators, *b.generators), integral=a.integral or b.integral
    )


def meet(a: ConnectivitySpace, b: ConnectivitySpace) -> ConnectivitySpace:
    """Structure of the sets connected in both."""
    _require_same_ground(a, b)
    return ConnectivitySpace(
        a.ground,
        integral=a.integral and b.integral,
        membership=lambda k: membership(a, k) and membership(b, k),
    )


def connected_sets(space: ConnectivitySpace) -> Family:
    """Explicit structure (empty set included), guarded."""
    guard_size(space.ground.n, MATERIALIZE_LIMIT, "Materializing a structure")
    return sort_family(k for k in range(space.ground.full + 1) if membership(space, k))


def topological_obstruction_witness(space: ConnectivitySpace) -> Optional[Witness]:
    """
    Search for a shape no topology can realize.

    Returns ``(a, b, x)`` with ``a`` and ``b`` nonempty connected, ``x`` outside
    their union, ``a + x`` and ``b + x`` not connected but ``a + b + x``
    connected. ``None`` only means no witness of this shape exists.

    Raises:
        SizeGuardError: If the carrier exceeds the materialization guard
    """
    kappa = [k for k in connected_sets(space) if k]
    full = space.ground.full

    for i, a in enumerate(kappa):
        for b in kappa[i + 1 :]:
            union = a | b
            for x in iter_points(full & ~union):
                bit = 1 << x
                if (
                    not membership(space, a | bit)
                    and not membership(space, b | bit)
                    and membership(space, union | bit)
                ):
                    return a, b, x
    return None


def is_integral(space: ConnectivitySpace) -> bool:
    return all(membership(space, 1 << i) for i in range(space.ground.n))


def is_diffeologizable(space: ConnectivitySpace) -> bool:
    # finite carriers: a space comes from a diffeology exactly when it is integral
    return is_integral(space)


def present_part(space: ConnectivitySpace) -> Subset:
    """Points lying in some nonempty connected set."""
    present = 0
    for k in space.generating_family():
        present |= k
    return present


def discrete_space(ground: GroundSet, integral: bool = True) -> ConnectivitySpace:
    """Discrete structure; non-integral gives kappa_D where only the empty set is connected."""
    return ConnectivitySpace(ground, (), integral=integral)


def coarse_space(ground: GroundSet, integral: bool = True) -> ConnectivitySpace:
    """
    Coarse structure generated by every pair.

    Integral gives kappa_G where every subset is connected; non-integral
    leaves the singletons out and connects every part of two points or more.
    """
    pairs = (mask_of(pair) for pair in combinations(range(ground.n), 2))
    return ConnectivitySpace(ground, pairs, integral=integral)


def brunnian_space(ground: GroundSet) -> ConnectivitySpace:
    """Only the empty set, the singletons and the whole carrier are connected."""
    generators = (ground.full,) if ground.n >= 2 else ()
    return ConnectivitySpace(ground, generators, integral=True)


def relabel(space: ConnectivitySpace, bijection: SetMap) -> ConnectivitySpace:
    """
    Transport a structure along a bijection of carriers.

    Raises:
        CarrierMismatchError: If the bijection does not start at the space's carrier
        InvariantError: If the map is not bijective
    """
    if bijection.source != space.ground:
        raise CarrierMismatchError("Relabelling must start at the space's ground set")
    if not bijection.is_bijective():
        raise InvariantError("Relabelling requires a bijection")

    if not space.delegated:
        images = (bijection.image(g) for g in space.generators)
        return ConnectivitySpace(bijection.target, images, integral=space.integral)

    back = bijection.inverse()
    return ConnectivitySpace(
        bijection.target,
        integral=space.integral,
        membership=lambda k: membership(space, back.image(k)),
    )
