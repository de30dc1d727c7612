# /usr/bin/env python3
# Separation Devices and Finite Topologies
# Devices, the integral structures they define, group-acted devices, and the functors U_T and V_T

from collections import deque
from dataclasses import dataclass
from typing import Iterable, List, Tuple

from src.constants import GROUP_ORDER_LIMIT, MATERIALIZE_LIMIT
from src.core import (
    ConnectivityError,
    ConnectivitySpace,
    Family,
    GroundSet,
    IntegralityError,
    SetMap,
    Subset,
    components,
    guard_size,
    is_integral,
    sort_family,
    subset_key,
    submasks,
)


# Custom Exceptions
class DeviceError(ConnectivityError):
    """Raised when a separating pair is empty on one side or not disjoint."""


class TopologyError(ConnectivityError):
    """Raised when a family of opens is not a topology."""


class GroupError(ConnectivityError):
    """Raised when a permutation group is malformed or too large."""


Pair = Tuple[Subset, Subset]


def _normalize_pair(s: Subset, t: Subset) -> Pair:
    return (s, t) if subset_key(s) <= subset_key(t) else (t, s)


@dataclass(frozen=True)
class SeparationDevice:
    """Family of unordered pairs {S, T} of disjoint nonempty parts."""

    ground: GroundSet
    pairs: Tuple[Pair, ...]

    def __post_init__(self):
        normalized = set()
        for s, t in self.pairs:
            self.ground.check(s)
            self.ground.check(t)
            if not s or not t:
                raise DeviceError("Separating pairs need two nonempty sides")
            if s & t:
                raise DeviceError(
                    f"Sides {self.ground.format(s)} and {self.ground.format(t)} are not disjoint"
                )
            normalized.add(_normalize_pair(s, t))

        ordered = sorted(normalized, key=lambda pair: (subset_key(pair[0]), subset_key(pair[1])))
        object.__setattr__(self, "pairs", tuple(ordered))


def separated(device: SeparationDevice, a: Subset) -> bool:
    """True iff some pair covers ``a`` and both of its sides meet ``a``."""
    device.ground.check(a)
    return any(a & ~(s | t) == 0 and a & s and a & t for s, t in device.pairs)


def structure_of_device(device: SeparationDevice) -> ConnectivitySpace:
    """Integral space whose connected sets are the parts the device does not separate."""
    return ConnectivitySpace(
        device.ground, integral=True, membership=lambda k: not separated(device, k)
    )


def device_of_structure(space: ConnectivitySpace) -> SeparationDevice:
    """
    Maximal device defining an integral space.

    Collects every unordered pair {A, B} of disjoint nonempty parts such
    that each component of A + B lies inside A or inside B.

    Raises:
        IntegralityError: If the space is not integral
        SizeGuardError: If the carrier exceeds the materialization guard
    """
    ground = space.ground
    guard_size(ground.n, MATERIALIZE_LIMIT, "Device extraction")
    if not is_integral(space):
        raise IntegralityError("Only integral spaces are defined by separation devices")

    pairs: List[Pair] = []
    for union in range(1, ground.full + 1):
        if union.bit_count() < 2:
            continue
        blocks = components(space, union)
        lowest = union & -union
        for a in submasks(union):
            # each unordered pair once: the side holding the lowest point
            if not a & lowest or a == union:
                continue
            b = union ^ a
            if all(block & ~a == 0 or block & ~b == 0 for block in blocks):
                pairs.append((a, b))

    return SeparationDevice(ground, tuple(pairs))


@dataclass(frozen=True)
class PermutationGroup:
    """Group generated by bijections of one ground set."""

    ground: GroundSet
    generators: Tuple[SetMap, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for permutation in self.generators:
            if permutation.source != self.ground or permutation.target != self.ground:
                raise GroupError("Group generators must permute the group's ground set")
            if not permutation.is_bijective():
                raise GroupError(f"Generator {permutation.images} is not a permutation")

    def elements(self) -> List[SetMap]:
        """
        Breadth-first closure of the generators under composition.

        Raises:
            GroupError: If the group has more than 10^5 elements
        """
        identity = SetMap.identity(self.ground)
        seen = {identity.images: identity}
        frontier = deque([identity])

        while frontier:
            current = frontier.popleft()
            for generator in self.generators:
                product = generator.compose(current)
                if product.images not in seen:
                    if len(seen) >= GROUP_ORDER_LIMIT:
                        raise GroupError(
                            f"Group closure exceeds {GROUP_ORDER_LIMIT} elements"
                        )
                    seen[product.images] = product
                    frontier.append(product)

        return [seen[key] for key in sorted(seen)]


def orbit_device(group: PermutationGroup, device: SeparationDevice) -> SeparationDevice:
    """Device of every pair {phi(S), phi(T)} for phi in the group."""
    if group.ground != device.ground:
        raise DeviceError("Group and device live on different ground sets")

    pairs = [
        (phi.image(s), phi.image(t)) for phi in group.elements() for s, t in device.pairs
    ]
    return SeparationDevice(device.ground, tuple(pairs))


@dataclass(frozen=True)
class FiniteTopology:
    """Finite topology given by its opens, validated at construction."""

    ground: GroundSet
    opens: Family

    def __post_init__(self):
        for mask in self.opens:
            self.ground.check(mask)
        opens = sort_family(self.opens)
        object.__setattr__(self, "opens", opens)

        members = set(opens)
        if 0 not in members or self.ground.full not in members:
            raise TopologyError("A topology must contain the empty set and the full carrier")

        for i, u in enumerate(opens):
            for v in opens[i + 1 :]:
                for derived, word in ((u | v, "union"), (u & v, "intersection")):
                    if derived not in members:
                        raise TopologyError(
                            f"Opens are not closed under {word}: "
                            f"{self.ground.format(u)} and {self.ground.format(v)} give "
                            f"{self.ground.format(derived)}"
                        )

    @classmethod
    def from_opens(cls, ground: GroundSet, opens: Iterable[Subset]) -> "FiniteTopology":
        """Add the empty set and the full carrier, then validate."""
        return cls(ground, (0, ground.full, *opens))

    def traces(self, k: Subset) -> set:
        return {u & k for u in self.opens}


def close_topology(ground: GroundSet, opens: Iterable[Subset]) -> FiniteTopology:
    """Smallest topology containing the given opens (explicit completion helper)."""
    members = {0, ground.full}
    for mask in opens:
        ground.check(mask)
        members.add(mask)

    changed = True
    while changed:
        changed = False
        for u in list(members):
            for v in list(members):
                for derived in (u | v, u & v):
                    if derived not in members:
                        members.add(derived)
                        changed = True

    return FiniteTopology(ground, tuple(members))


def is_continuous(f: SetMap, source: FiniteTopology, target: FiniteTopology) -> bool:
    if f.source != source.ground or f.target != target.ground:
        raise TopologyError("Map carriers do not match the topologies")
    opens = set(source.opens)
    return all(f.preimage(v) in opens for v in target.opens)


def u_t(top: FiniteTopology) -> ConnectivitySpace:
    """
    Classical topological connectedness.

    A part is connected unless it splits into two disjoint nonempty
    relatively open traces.
    """

    def connected(k: Subset) -> bool:
        traces = top.traces(k)
        return not any(t and t != k and (k ^ t) in traces for t in traces)

    return ConnectivitySpace(top.ground, integral=True, membership=connected)


def v_t(top: FiniteTopology) -> ConnectivitySpace:
    """Structure of the device made of every pair of disjoint nonempty opens."""
    opens = [u for u in top.opens if u]
    pairs = [(u, v) for i, u in enumerate(opens) for v in opens[i + 1 :] if not u & v]
    return structure_of_device(SeparationDevice(top.ground, tuple(pairs)))
