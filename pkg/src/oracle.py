# /usr/bin/env python3
# Brute-Force Oracle
# Definition-level reference implementations used to cross-check the fast algorithms

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import FrozenSet, Iterable, List, Tuple

from src.constants import (
    MATERIALIZE_LIMIT,
    MORPHISM_ENUMERATION_BUDGET,
    ORACLE_IRREDUCIBLE_LIMIT,
    STRUCTURE_ENUMERATION_LIMIT,
)
from src.core import (
    ConnectivitySpace,
    Family,
    GroundSet,
    SetMap,
    SizeGuardError,
    Subset,
    guard_size,
    is_morphism,
    sort_family,
)


@dataclass(frozen=True)
class MaterializedStructure:
    """A structure written out in extenso."""

    ground: GroundSet
    kappa: Family

    members: FrozenSet[Subset] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.kappa))

    def __contains__(self, mask: Subset) -> bool:
        return mask in self.members

    def to_space(self) -> ConnectivitySpace:
        integral = all(1 << i in self.members for i in range(self.ground.n))
        return ConnectivitySpace(self.ground, self.kappa, integral=integral)


def closure(
    generators: Iterable[Subset], integral: bool, ground: GroundSet
) -> MaterializedStructure:
    """
    Least structure containing the generators, by fixpoint iteration.

    Starts from the empty set, the generators and (when integral) the
    singletons, then adds the union of any two intersecting members until
    nothing new appears.

    Raises:
        SizeGuardError: If the ground set has more than 16 points
    """
    guard_size(ground.n, MATERIALIZE_LIMIT, "Oracle closure")

    seeds = [0]
    for generator in generators:
        ground.check(generator)
        seeds.append(generator)
    if integral:
        seeds.extend(1 << i for i in range(ground.n))

    kappa = set()
    pending = deque()
    for seed in seeds:
        if seed not in kappa:
            kappa.add(seed)
            pending.append(seed)

    while pending:
        current = pending.popleft()
        for other in list(kappa):
            if current & other:
                union = current | other
                if union not in kappa:
                    kappa.add(union)
                    pending.append(union)

    return MaterializedStructure(ground, sort_family(kappa))


def closure_membership(
    generators: Iterable[Subset], integral: bool, ground: GroundSet, a: Subset
) -> bool:
    ground.check(a)
    return a in closure(generators, integral, ground)


def materialize(space: ConnectivitySpace) -> MaterializedStructure:
    """Closure of the generators for generated spaces, predicate scan otherwise."""
    if not space.delegated:
        return closure(space.generators, space.integral, space.ground)

    guard_size(space.ground.n, MATERIALIZE_LIMIT, "Oracle materialization")
    members = [k for k in range(1, space.ground.full + 1) if space.decide(k)]
    return MaterializedStructure(space.ground, sort_family([0, *members]))


def enumerate_morphisms(x: ConnectivitySpace, y: ConnectivitySpace) -> List[SetMap]:
    """
    Every connective map x -> y, in lexicographic order of image tuples.

    Raises:
        SizeGuardError: If n(y)^n(x) exceeds the enumeration budget
    """
    total = y.ground.n ** x.ground.n
    if total > MORPHISM_ENUMERATION_BUDGET:
        raise SizeGuardError(
            f"Enumerating {total} maps exceeds the budget of {MORPHISM_ENUMERATION_BUDGET}"
        )

    maps = []
    for images in product(range(y.ground.n), repeat=x.ground.n):
        candidate = SetMap(x.ground, y.ground, images)
        if is_morphism(candidate, x, y):
            maps.append(candidate)
    return maps


def irreducibles_by_definition(space: ConnectivitySpace) -> Family:
    """
    Nonempty connected sets not generated by the other connected sets.

    Membership of k in a generated structure only depends on generators
    contained in k, so each closure is taken over the members below k.
    """
    guard_size(space.ground.n, ORACLE_IRREDUCIBLE_LIMIT, "Oracle irreducibles")
    kappa = materialize(space).kappa

    irreducible = []
    for k in kappa:
        if not k:
            continue
        others = [c for c in kappa if c != k and c & ~k == 0]
        if k not in closure(others, False, space.ground):
            irreducible.append(k)
    return sort_family(irreducible)


def _longest_chain(elements: Family) -> int:
    best = {}
    for element in elements:  # canonical order lists every subset before its supersets
        below = [best[other] for other in best if other != element and other & ~element == 0]
        best[element] = 1 + max(below, default=0)
    return max(best.values(), default=0)


def order_by_definition(space: ConnectivitySpace) -> int:
    """Omega = number of finite alpha such that a chain of alpha + 2 irreducibles exists."""
    height = _longest_chain(irreducibles_by_definition(space))
    return sum(1 for alpha in range(height + 1) if alpha + 2 <= height)


def enumerate_structures(ground: GroundSet, integral: bool = True) -> List[MaterializedStructure]:
    """
    Every distinct connectivity structure on a small carrier.

    Each generator family is closed and the results are deduplicated.
    Integral enumeration only varies the sets with two or more points.

    Raises:
        SizeGuardError: If the carrier has more than 4 points
    """
    guard_size(ground.n, STRUCTURE_ENUMERATION_LIMIT, "Structure enumeration")

    smallest = 2 if integral else 1
    candidates: List[Subset] = [
        mask for mask in range(1, ground.full + 1) if mask.bit_count() >= smallest
    ]

    seen = set()
    structures = []
    for choice in product((False, True), repeat=len(candidates)):
        generators = [mask for mask, chosen in zip(candidates, choice) if chosen]
        structure = closure(generators, integral, ground)
        if structure.kappa not in seen:
            seen.add(structure.kappa)
            structures.append(structure)

    structures.sort(key=lambda s: (len(s.kappa), s.kappa))
    return structures


def connected_subsets_of(structure: MaterializedStructure, a: Subset) -> Tuple[Subset, ...]:
    """Nonempty members of the structure contained in ``a``."""
    return tuple(k for k in structure.kappa if k and k & ~a == 0)


def components_by_definition(space: ConnectivitySpace, a: Subset) -> Family:
    """Maximal nonempty connected subsets of ``a`` from the materialized structure."""
    inside = connected_subsets_of(materialize(space), a)
    maximal = [k for k in inside if not any(k != other and k & ~other == 0 for other in inside)]
    return sort_family(maximal)

