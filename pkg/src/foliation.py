# /usr/bin/env python3
# Connective Foliations
# Leaves, the induced leaf space, the functors R-down and Phi, and the R-down / Phi-kappa adjunction checker

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from src.constants import CLARITY_LIMIT
from src.core import (
    ConnectivityError,
    ConnectivitySpace,
    Family,
    GroundSet,
    InvariantError,
    SetMap,
    Subset,
    coarse_space,
    components,
    discrete_space,
    is_integral,
    is_morphism,
    membership,
    overlap_blocks,
)
from src.oracle import enumerate_morphisms
from src.representation import (
    RepMorphism,
    RepMorphismError,
    Representation,
    compose_rep_morphisms,
    is_clear,
    is_distinct,
    validate_rep_morphism,
    validate_representation,
)
from src.separation import FiniteTopology, u_t


# Custom Exceptions
class FoliationError(ConnectivityError):
    """Raised when the two structures of a foliation or a foliation map do not line up."""


class GammaOrderError(ConnectivityError):
    """Raised when gamma0 is not below gamma1."""


class PreconditionError(ConnectivityError):
    """Raised when an operation's regularity, clarity or distinctness requirement fails."""


class FunctorialStructure(Enum):
    """Functorial structures, ordered DESINTEGRATED < IDENTITY < COARSE."""

    DESINTEGRATED = 0
    IDENTITY = 1
    COARSE = 2

    def __le__(self, other: "FunctorialStructure") -> bool:
        return self.value <= other.value

    def __lt__(self, other: "FunctorialStructure") -> bool:
        return self.value < other.value

    def apply(self, space: ConnectivitySpace) -> ConnectivitySpace:
        """kappa_D, kappa or kappa_G on the carrier of ``space``."""
        if self is FunctorialStructure.DESINTEGRATED:
            return discrete_space(space.ground, integral=False)
        if self is FunctorialStructure.COARSE:
            return coarse_space(space.ground)
        return space


@dataclass(frozen=True)
class Foliation:
    """Pair (internal kappa0, external kappa1) of structures on one carrier."""

    internal: ConnectivitySpace
    external: ConnectivitySpace

    def __post_init__(self):
        if self.internal.ground != self.external.ground:
            raise FoliationError("Internal and external structures need the same points")

    @property
    def ground(self) -> GroundSet:
        return self.internal.ground


def is_regular(z: Foliation) -> bool:
    """Every internally connected set is externally connected."""
    return all(membership(z.external, k) for k in z.internal.generating_family())


def leaves(z: Foliation) -> Family:
    return components(z.internal, z.ground.full)


def domain_of(z: Foliation) -> Subset:
    domain = 0
    for leaf in leaves(z):
        domain |= leaf
    return domain


def foliation_of_partition(top: FiniteTopology, blocks: Sequence[Subset]) -> Foliation:
    """
    Foliation of a topological space by an equivalence relation.

    The external structure is U_T(top). Internally a part is connected iff it
    lies inside one block; points outside every block are absent.

    Raises:
        FoliationError: If blocks are empty or overlap
    """
    seen = 0
    for block in blocks:
        top.ground.check(block)
        if not block or block & seen:
            raise FoliationError("Partition blocks must be nonempty and pairwise disjoint")
        seen |= block

    blocks = tuple(blocks)
    internal = ConnectivitySpace(
        top.ground,
        integral=seen == top.ground.full,
        membership=lambda k: any(k & ~block == 0 for block in blocks),
    )
    return Foliation(internal, u_t(top))


def _require_lined_up(f: SetMap, z: Foliation, z_prime: Foliation) -> None:
    if f.source != z.ground or f.target != z_prime.ground:
        raise FoliationError("Map carriers do not match the foliations")


def is_foliation_morphism(f: SetMap, z: Foliation, z_prime: Foliation) -> bool:
    _require_lined_up(f, z, z_prime)
    return is_morphism(f, z.internal, z_prime.internal) and is_morphism(
        f, z.external, z_prime.external
    )


def is_strict(f: SetMap, z: Foliation, z_prime: Foliation) -> bool:
    """Morphism sending every leaf exactly onto a leaf."""
    if not is_foliation_morphism(f, z, z_prime):
        return False
    targets = set(leaves(z_prime))
    return all(f.image(leaf) in targets for leaf in leaves(z))


def _leaf_label(ground: GroundSet, leaf: Subset) -> str:
    return "{" + ",".join(ground.labels_of(leaf)) + "}"


@dataclass(frozen=True)
class LeafSpace:
    """
    Induced space of leaves.

    A set of leaves is connected iff the union of its members is connected
    in the external structure.
    """

    foliation: Foliation
    leaves: Family

    def union_of(self, chosen: Subset) -> Subset:
        union = 0
        for i, leaf in enumerate(self.leaves):
            if chosen >> i & 1:
                union |= leaf
        return union

    def is_connected(self, chosen: Subset) -> bool:
        return membership(self.foliation.external, self.union_of(chosen))

    def to_space(self) -> ConnectivitySpace:
        ground = GroundSet(tuple(_leaf_label(self.foliation.ground, leaf) for leaf in self.leaves))
        integral = all(membership(self.foliation.external, leaf) for leaf in self.leaves)
        return ConnectivitySpace(ground, integral=integral, membership=self.is_connected)


def induced_leaf_space(z: Foliation) -> LeafSpace:
    return LeafSpace(z, leaves(z))


def r_down(z: Foliation) -> Representation:
    """
    Induced representation Z-down ~> Z1, each leaf represented by itself.

    Raises:
        InvariantError: If the result is not clear and distinct
    """
    leaf_space = induced_leaf_space(z)
    rep = validate_representation(leaf_space.to_space(), z.external, leaf_space.leaves)

    if not is_distinct(rep):
        raise InvariantError("Leaves of a foliation must be pairwise disjoint")
    if len(leaf_space.leaves) <= CLARITY_LIMIT and not is_clear(rep):
        raise InvariantError("The induced representation of a foliation must be clear")
    return rep


def _containing_leaf(targets: Family, part: Subset) -> int:
    for index, leaf in enumerate(targets):
        if part & ~leaf == 0:
            return index
    raise InvariantError("Image of a leaf lies in no leaf of the target")


def r_down_on_morphism(f: SetMap, z: Foliation, z_prime: Foliation) -> RepMorphism:
    """
    (phi0, phi1): phi0 sends a leaf to the leaf containing its image, phi1 = f.

    Raises:
        FoliationError: If f is not a foliation morphism
        RepMorphismError: If the induced leaf map is not connective
    """
    if not is_foliation_morphism(f, z, z_prime):
        raise FoliationError("Only foliation morphisms have an induced representation morphism")

    source, target = r_down(z), r_down(z_prime)
    images = tuple(_containing_leaf(target.images, f.image(leaf)) for leaf in source.images)
    phi0 = SetMap(source.object.ground, target.object.ground, images)
    return validate_rep_morphism(phi0, f, source, target)


def phi(
    gamma0: FunctorialStructure, gamma1: FunctorialStructure, rho: Representation
) -> Foliation:
    """
    Foliation Phi_(gamma0, gamma1)(rho) on the carrier of sp(rho).

    The external structure is sp(rho). The internal one is generated
    (non-integrally) by the gamma-connected parts of each rho(a): gamma0 for
    the non-connected points a of ob(rho), gamma1 for the connected ones.
    A part k is internally connected iff those generators inside k cover k
    and overlap into one block, which only needs k & rho(a) for each a.

    Raises:
        GammaOrderError: If gamma0 is above gamma1
    """
    if not gamma0 <= gamma1:
        raise GammaOrderError(f"gamma0 ({gamma0.name}) must be below gamma1 ({gamma1.name})")

    space = rho.space
    gammas = tuple(
        gamma1 if membership(rho.object, 1 << a) else gamma0 for a in range(rho.object.ground.n)
    )

    def pieces(k: Subset) -> List[Subset]:
        found: List[Subset] = []
        for image, gamma in zip(rho.images, gammas):
            part = k & image
            if not part or gamma is FunctorialStructure.DESINTEGRATED:
                continue
            if gamma is FunctorialStructure.COARSE:
                found.append(part)
            else:
                found.extend(components(space, part))
        return found

    def connected(k: Subset) -> bool:
        return overlap_blocks(pieces(k)) == [k]

    internal = ConnectivitySpace(space.ground, integral=False, membership=connected)
    return Foliation(internal, space)


def phi_kappa(rho: Representation) -> Foliation:
    return phi(FunctorialStructure.IDENTITY, FunctorialStructure.IDENTITY, rho)


@dataclass(frozen=True)
class AdjunctionReport:
    """
    Outcome of comparing Hom(R-down Z, rho) with Hom(Z, Phi-kappa rho).

    Maps are recorded as image tuples in enumeration order.
    """

    rio_count: int
    fr_count: int
    projection_lands: bool
    beta_determines_alpha: bool
    unique_lift: bool
    rio_pairs: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]
    fr_maps: Tuple[Tuple[int, ...], ...]
    failure: Optional[str] = None

    @property
    def bijection(self) -> bool:
        return (
            self.projection_lands
            and self.unique_lift
            and self.beta_determines_alpha
            and self.rio_count == self.fr_count
        )

    @property
    def holds(self) -> bool:
        return self.bijection


def _is_rep_morphism(alpha: SetMap, beta: SetMap, rho: Representation, target: Representation):
    try:
        validate_rep_morphism(alpha, beta, rho, target)
    except RepMorphismError:
        return False
    return True


def check_adjunction(z: Foliation, rho: Representation) -> AdjunctionReport:
    """
    Exhaustively compare both hom-sets of the adjunction.

    Checks that projecting (alpha, beta) to beta lands among foliation
    morphisms, that beta determines alpha, and that every foliation
    morphism lifts to exactly one representation morphism.

    Raises:
        PreconditionError: If z is not regular or rho is not clear, distinct
            and of integral object
        SizeGuardError: If the enumeration exceeds its budget
    """
    if not is_regular(z):
        raise PreconditionError("The foliation must be regular")
    if not (is_distinct(rho) and is_clear(rho)):
        raise PreconditionError("The representation must be clear and distinct")
    if not is_integral(rho.object):
        raise PreconditionError("The representation must have an integral object")

    down = r_down(z)
    target = phi_kappa(rho)

    betas = enumerate_morphisms(z.external, rho.space)
    alphas = enumerate_morphisms(down.object, rho.object)

    rio = [
        (alpha, beta)
        for beta in betas
        for alpha in alphas
        if _is_rep_morphism(alpha, beta, down, rho)
    ]
    fr = [beta for beta in betas if is_morphism(beta, z.internal, target.internal)]
    fr_keys = {beta.images for beta in fr}

    lifts = {}
    for alpha, beta in rio:
        lifts.setdefault(beta.images, []).append(alpha.images)

    failure = None
    projection_lands = all(beta.images in fr_keys for _, beta in rio)
    if not projection_lands:
        failure = "a representation morphism projects outside the foliation morphisms"

    beta_determines_alpha = all(len(found) == 1 for found in lifts.values())
    if failure is None and not beta_determines_alpha:
        failure = "two representation morphisms share the same beta"

    unique_lift = all(len(lifts.get(beta.images, ())) == 1 for beta in fr)
    if failure is None and not unique_lift:
        failure = "a foliation morphism has no unique lift"

    return AdjunctionReport(
        rio_count=len(rio),
        fr_count=len(fr),
        projection_lands=projection_lands,
        beta_determines_alpha=beta_determines_alpha,
        unique_lift=unique_lift,
        rio_pairs=tuple((alpha.images, beta.images) for alpha, beta in rio),
        fr_maps=tuple(beta.images for beta in fr),
        failure=failure,
    )


def iso_rho_down_g(rho: Representation) -> Tuple[RepMorphism, RepMorphism]:
    """
    Isomorphism between rho and R-down(Phi_G(rho)).

    alpha sends a to the leaf rho(a) and beta is the identity of sp(rho).

    Raises:
        PreconditionError: If rho is not clear and distinct
        InvariantError: If a composite is not an identity
    """
    if not is_distinct(rho):
        raise PreconditionError("The representation must be distinct")
    if not is_clear(rho):
        raise PreconditionError("The representation must be clear")

    coarse = FunctorialStructure.COARSE
    down = r_down(phi(coarse, coarse, rho))
    position = {leaf: index for index, leaf in enumerate(down.images)}

    try:
        alpha = SetMap(
            rho.object.ground,
            down.object.ground,
            tuple(position[image] for image in rho.images),
        )
    except KeyError:
        raise InvariantError("An image of rho is not a leaf of Phi_G(rho)") from None

    beta = SetMap.identity(rho.space.ground)
    forward = validate_rep_morphism(alpha, beta, rho, down)
    backward = validate_rep_morphism(alpha.inverse(), beta, down, rho)

    there_and_back = compose_rep_morphisms(backward, forward)
    back_and_there = compose_rep_morphisms(forward, backward)
    if (
        there_and_back.alpha != SetMap.identity(rho.object.ground)
        or back_and_there.alpha != SetMap.identity(down.object.ground)
        or there_and_back.beta != beta
        or back_and_there.beta != beta
    ):
        raise InvariantError("Composites of the isomorphism are not identities")
    return forward, backward

