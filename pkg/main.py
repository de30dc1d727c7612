# /usr/bin/env python3
# Connectivity Space Engine CLI
# Command-line access to spaces, separation devices, representations, foliations and the connectivity order

import argparse
import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from src.cache_manager import CacheManager
from src.constants import (
    EXIT_NEGATIVE,
    EXIT_ORACLE_MISMATCH,
    EXIT_SIZE_GUARD,
    EXIT_SUCCESS,
    EXIT_USAGE,
    GAMMA_CHOICES,
)
from src.core import (
    ConnectivityError,
    ConnectivitySpace,
    SizeGuardError,
    compare,
    components,
    induced,
    is_diffeologizable,
    is_morphism,
    membership,
    topological_obstruction_witness,
)
from src.document_parser import (
    Document,
    DocumentError,
    NamedFoliation,
    NamedRepresentation,
    family_lines,
    parse,
    render,
    render_device,
    render_foliation,
    render_representation,
    render_space,
    render_topology,
)
from src.foliation import (
    check_adjunction,
    induced_leaf_space,
    iso_rho_down_g,
    leaves,
    phi,
    r_down,
)
from src.input_validator import (
    EnvironmentValidator,
    FileValidator,
    GammaValidator,
    Settings,
    SizeValidator,
    SubsetValidator,
    ValidationError,
    format_error_message,
)
from src.oracle import (
    components_by_definition,
    irreducibles_by_definition,
    materialize,
    order_by_definition,
)
from src.order import (
    GenericGraph,
    connectivity_order,
    foliation_order,
    hasse_edges,
    irreducibles,
    leaf_space_of,
)
from src.report_builder import format_survey, summarize_orders, survey_structures
from src.representation import (
    canonical_representation,
    is_clear,
    is_distinct,
    kleisli_compose,
    rep_points,
)
from src.separation import (
    device_of_structure,
    orbit_device,
    structure_of_device,
    u_t,
    v_t,
)


@dataclass
class Outcome:
    """Lines for stdout and the exit status of one command."""

    lines: List[str] = field(default_factory=list)
    code: int = EXIT_SUCCESS


@dataclass
class Context:
    args: argparse.Namespace
    document: Document
    settings: Settings

    def cache(self) -> Optional[CacheManager]:
        return CacheManager(self.settings.cache_dir) if self.settings.use_cache else None


def verdict(value: bool) -> Outcome:
    return Outcome(["true" if value else "false"], EXIT_SUCCESS if value else EXIT_NEGATIVE)


def _space(ctx: Context) -> ConnectivitySpace:
    return ctx.document.select("space", ctx.args.space)


def _space_name(ctx: Context) -> str:
    if ctx.args.space:
        return ctx.args.space
    _space(ctx)
    return next(iter(ctx.document.spaces))


def _other_space(ctx: Context) -> ConnectivitySpace:
    """--other, or the first space that is not --space."""
    if ctx.args.other:
        return ctx.document.select("space", ctx.args.other)
    chosen = _space_name(ctx)
    for name, space in ctx.document.spaces.items():
        if name != chosen:
            return space
    raise ValidationError("compare needs two spaces (use --space and --other)")


def _subset(ctx: Context, space: ConnectivitySpace, required: bool = True) -> int:
    if ctx.args.set is None:
        if required:
            raise ValidationError("This command needs --set POINT ...")
        return space.ground.full
    return SubsetValidator.parse(space.ground, ctx.args.set)


def _rep(ctx: Context, name: Optional[str] = None) -> NamedRepresentation:
    return ctx.document.select("representation", name or ctx.args.rep)


def _foliation(ctx: Context) -> NamedFoliation:
    return ctx.document.select("foliation", ctx.args.foliation)


def _foliation_name(ctx: Context) -> str:
    _foliation(ctx)
    return ctx.args.foliation or next(iter(ctx.document.foliations))


def _rep_name(ctx: Context) -> str:
    _rep(ctx)
    return ctx.args.rep or next(iter(ctx.document.representations))


def _cached(ctx: Context, operation: str, compute: Callable):
    cache = ctx.cache()
    if cache is None:
        return compute()
    text = render(ctx.document)
    value = cache.get_cached(text, operation)
    if value is None:
        value = compute()
        cache.save_to_cache(value, text, operation)
    return value


# Commands on spaces
def cmd_is_connected(ctx: Context) -> Outcome:
    space = _space(ctx)
    return verdict(membership(space, _subset(ctx, space)))


def oracle_is_connected(ctx: Context) -> Outcome:
    space = _space(ctx)
    return verdict(_subset(ctx, space) in materialize(space))


def cmd_components(ctx: Context) -> Outcome:
    space = _space(ctx)
    return Outcome(family_lines(space.ground, components(space, _subset(ctx, space, False))))


def oracle_components(ctx: Context) -> Outcome:
    space = _space(ctx)
    a = _subset(ctx, space, False)
    return Outcome(family_lines(space.ground, components_by_definition(space, a)))


def cmd_induced(ctx: Context) -> Outcome:
    space = _space(ctx)
    part = induced(space, _subset(ctx, space))
    return Outcome(render_space(f"{_space_name(ctx)}_induced", part))


def cmd_compare(ctx: Context) -> Outcome:
    return Outcome([compare(_space(ctx), _other_space(ctx)).value])


def oracle_compare(ctx: Context) -> Outcome:
    a = set(materialize(_space(ctx)).kappa)
    b = set(materialize(_other_space(ctx)).kappa)
    if a == b:
        word = "equal"
    elif a <= b:
        word = "finer"
    elif b <= a:
        word = "coarser"
    else:
        word = "incomparable"
    return Outcome([word])


def cmd_obstruction(ctx: Context) -> Outcome:
    space = _space(ctx)
    witness = topological_obstruction_witness(space)
    if witness is None:
        return Outcome(["none"], EXIT_NEGATIVE)
    a, b, x = witness
    ground = space.ground
    return Outcome([f"{ground.format(a)} {ground.format(b)} {ground.labels[x]}"])


def cmd_diffeologizable(ctx: Context) -> Outcome:
    return verdict(is_diffeologizable(_space(ctx)))


def cmd_is_morphism(ctx: Context) -> Outcome:
    named = ctx.document.select("map", ctx.args.map)
    source = ctx.document.select("space", named.source)
    target = ctx.document.select("space", named.target)
    return verdict(is_morphism(named.map, source, target))


# Commands on topologies and devices
def _topology_space(ctx: Context, functor) -> Outcome:
    top = ctx.document.select("topology", ctx.args.topology)
    space = functor(top)
    if ctx.args.set is not None:
        return verdict(membership(space, SubsetValidator.parse(top.ground, ctx.args.set)))
    name = ctx.args.topology or next(iter(ctx.document.topologies))
    return Outcome(render_space(f"{name}_{functor.__name__}", space))


def cmd_u_t(ctx: Context) -> Outcome:
    return _topology_space(ctx, u_t)


def cmd_v_t(ctx: Context) -> Outcome:
    return _topology_space(ctx, v_t)


def cmd_close_topology(ctx: Context) -> Outcome:
    lines: List[str] = []
    for name, top in ctx.document.topologies.items():
        if lines:
            lines.append("")
        lines.extend(render_topology(name, top))
    if not lines:
        raise ValidationError("close-topology needs a topology block")
    return Outcome(lines)


def cmd_to_device(ctx: Context) -> Outcome:
    return Outcome(render_device(f"{_space_name(ctx)}_device", device_of_structure(_space(ctx))))


def cmd_from_device(ctx: Context) -> Outcome:
    device = ctx.document.select("device", ctx.args.device)
    name = ctx.args.device or next(iter(ctx.document.devices))
    return Outcome(render_space(f"{name}_structure", structure_of_device(device)))


def cmd_orbit_device(ctx: Context) -> Outcome:
    device = ctx.document.select("device", ctx.args.device)
    group = ctx.document.select("group", ctx.args.group)
    name = ctx.args.device or next(iter(ctx.document.devices))
    return Outcome(render_device(f"{name}_orbit", orbit_device(group, device)))


# Commands on representations
def cmd_validate_rep(ctx: Context) -> Outcome:
    _rep(ctx)
    return Outcome(["valid"])


def cmd_clear(ctx: Context) -> Outcome:
    return verdict(is_clear(_rep(ctx).rep))


def cmd_distinct(ctx: Context) -> Outcome:
    return verdict(is_distinct(_rep(ctx).rep))


def cmd_compose(ctx: Context) -> Outcome:
    """--inner rho: X ~> Y and --outer tau: Y ~> Z (defaults: first and second)."""
    names = list(ctx.document.representations)
    inner_name = ctx.args.inner or (names[0] if names else None)
    outer_name = ctx.args.outer or (names[1] if len(names) > 1 else None)
    if inner_name is None or outer_name is None:
        raise ValidationError("compose needs two representations (use --inner and --outer)")

    inner, outer = _rep(ctx, inner_name), _rep(ctx, outer_name)
    composite = kleisli_compose(outer.rep, inner.rep)
    named = NamedRepresentation(inner.source, outer.target, composite)
    return Outcome(render_representation(f"{outer_name}_after_{inner_name}", named))


def cmd_canonical_rep(ctx: Context) -> Outcome:
    name = _space_name(ctx)
    rep = canonical_representation(_space(ctx))
    lines = render_space(name, rep.object) + [""]
    lines += render_space(f"{name}_canonical", rep.space) + [""]
    lines += render_representation(
        f"{name}_rep", NamedRepresentation(name, f"{name}_canonical", rep)
    )
    return Outcome(lines)


def cmd_rep_points(ctx: Context) -> Outcome:
    rep = _rep(ctx).rep
    points = rep_points(rep)
    lines = [f"{rep.object.ground.labels[p]} {rep.space.ground.labels[q]}" for p, q in points]
    return Outcome(lines, EXIT_SUCCESS if points else EXIT_NEGATIVE)


def cmd_iso_rho_down_g(ctx: Context) -> Outcome:
    named = _rep(ctx)
    forward, _ = iso_rho_down_g(named.rep)
    leaf_ground = forward.target.object.ground
    lines = [
        f"{named.rep.object.ground.labels[a]} -> {leaf_ground.labels[leaf]}"
        for a, leaf in enumerate(forward.alpha.images)
    ]
    lines.append("isomorphism verified")
    return Outcome(lines)


# Commands on foliations
def cmd_leaves(ctx: Context) -> Outcome:
    z = _foliation(ctx).foliation
    return Outcome(family_lines(z.ground, leaves(z)))


def cmd_leaf_space(ctx: Context) -> Outcome:
    z = _foliation(ctx).foliation
    return Outcome(render_space(f"{_foliation_name(ctx)}_leaves", induced_leaf_space(z).to_space()))


def cmd_phi(ctx: Context) -> Outcome:
    named = _rep(ctx)
    gamma0, gamma1 = GammaValidator.validate_pair(ctx.args.gamma0, ctx.args.gamma1)
    z = phi(gamma0, gamma1, named.rep)

    name = f"{_rep_name(ctx)}_phi"
    lines = render_space(named.target, named.rep.space) + [""]
    lines += render_space(f"{name}_internal", z.internal) + [""]
    lines += render_foliation(name, NamedFoliation(f"{name}_internal", named.target, z))
    return Outcome(lines)


def cmd_r_down(ctx: Context) -> Outcome:
    named = _foliation(ctx)
    name = _foliation_name(ctx)
    rep = r_down(named.foliation)
    lines = render_space(f"{name}_leaves", rep.object) + [""]
    lines += render_space(named.external, rep.space) + [""]
    lines += render_representation(
        f"{name}_down", NamedRepresentation(f"{name}_leaves", named.external, rep)
    )
    return Outcome(lines)


def cmd_check_adjunction(ctx: Context) -> Outcome:
    z = _foliation(ctx).foliation
    rho = _rep(ctx).rep
    report = check_adjunction(z, rho)

    lines = [
        f"hom_rio {report.rio_count}",
        f"hom_fr {report.fr_count}",
        f"projection {str(report.projection_lands).lower()}",
        f"beta_determines_alpha {str(report.beta_determines_alpha).lower()}",
        f"unique_lift {str(report.unique_lift).lower()}",
        f"bijection {str(report.bijection).lower()}",
    ]
    if report.failure:
        lines.append(f"failure {report.failure}")

    cache = ctx.cache()
    if cache is not None and report.holds:
        text = render(ctx.document)
        operation = f"check-adjunction {_foliation_name(ctx)} {_rep_name(ctx)}"
        golden = cache.get_cached(text, operation)
        if golden is None:
            cache.save_to_cache(report, text, operation)
        elif (golden.rio_count, golden.fr_count) != (report.rio_count, report.fr_count):
            print(
                f"Warning: hom-set sizes differ from the recorded run "
                f"({golden.rio_count}/{golden.fr_count})",
                file=sys.stderr,
            )
            return Outcome(lines, EXIT_ORACLE_MISMATCH)

    return Outcome(lines, EXIT_SUCCESS if report.holds else EXIT_NEGATIVE)


# Commands on the connectivity order
def cmd_irreducibles(ctx: Context) -> Outcome:
    space = _space(ctx)
    graph = _cached(ctx, f"irreducibles {_space_name(ctx)}", lambda: irreducibles(space))
    return Outcome(graph.labels())


def oracle_irreducibles(ctx: Context) -> Outcome:
    space = _space(ctx)
    return Outcome(family_lines(space.ground, irreducibles_by_definition(space)))


def _covering_lines(graph: GenericGraph) -> List[str]:
    ground = graph.ground
    return [f"{ground.format(low)} < {ground.format(high)}" for low, high in hasse_edges(graph)]


def cmd_order(ctx: Context) -> Outcome:
    space = _space(ctx)
    lines = [str(connectivity_order(space))]
    if ctx.args.hasse:
        lines += _covering_lines(irreducibles(space))
    return Outcome(lines)


def oracle_order(ctx: Context) -> Outcome:
    space = _space(ctx)
    lines = [str(order_by_definition(space))]
    if ctx.args.hasse:
        lines += _covering_lines(GenericGraph(space.ground, irreducibles_by_definition(space)))
    return Outcome(lines)


def cmd_foliation_order(ctx: Context) -> Outcome:
    return Outcome([str(foliation_order(_foliation(ctx).foliation))])


def oracle_foliation_order(ctx: Context) -> Outcome:
    return Outcome([str(order_by_definition(leaf_space_of(_foliation(ctx).foliation)))])


# Commands on documents
def cmd_render(ctx: Context) -> Outcome:
    return Outcome(render(ctx.document).splitlines())


def cmd_survey(ctx: Context) -> Outcome:
    n = SizeValidator.validate_survey_size(ctx.args.size)
    survey = survey_structures(n, integral=not ctx.args.non_integral)
    lines = format_survey(survey).splitlines()
    if not survey.empty:
        lines += ["", summarize_orders(survey).to_string(index=False)]
    return Outcome(lines)


COMMANDS: Dict[str, Callable[[Context], Outcome]] = {
    "is-connected": cmd_is_connected,
    "components": cmd_components,
    "induced": cmd_induced,
    "compare": cmd_compare,
    "u-t": cmd_u_t,
    "v-t": cmd_v_t,
    "close-topology": cmd_close_topology,
    "to-device": cmd_to_device,
    "from-device": cmd_from_device,
    "orbit-device": cmd_orbit_device,
    "validate-rep": cmd_validate_rep,
    "clear": cmd_clear,
    "distinct": cmd_distinct,
    "compose": cmd_compose,
    "canonical-rep": cmd_canonical_rep,
    "rep-points": cmd_rep_points,
    "iso-rho-down-g": cmd_iso_rho_down_g,
    "leaves": cmd_leaves,
    "leaf-space": cmd_leaf_space,
    "phi": cmd_phi,
    "r-down": cmd_r_down,
    "check-adjunction": cmd_check_adjunction,
    "irreducibles": cmd_irreducibles,
    "order": cmd_order,
    "foliation-order": cmd_foliation_order,
    "obstruction": cmd_obstruction,
    "diffeologizable": cmd_diffeologizable,
    "is-morphism": cmd_is_morphism,
    "render": cmd_render,
    "survey": cmd_survey,
}

ORACLES: Dict[str, Callable[[Context], Outcome]] = {
    "is-connected": oracle_is_connected,
    "components": oracle_components,
    "compare": oracle_compare,
    "irreducibles": oracle_irreducibles,
    "order": oracle_order,
    "foliation-order": oracle_foliation_order,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("files", nargs="*", help="Input documents (UTF-8)")
    common.add_argument("--set", nargs="*", metavar="POINT", help="Subset given by point labels")
    for selector in ("space", "other", "device", "topology", "rep", "outer", "inner"):
        common.add_argument(f"--{selector}", metavar="NAME", help=f"Select a {selector} by name")
    common.add_argument("--foliation", metavar="NAME", help="Select a foliation by name")
    common.add_argument("--map", metavar="NAME", help="Select a map by name")
    common.add_argument("--group", metavar="NAME", help="Select a group by name")
    common.add_argument(
        "--oracle", action="store_true", help="Recompute with the brute-force oracle and compare"
    )

    parser = argparse.ArgumentParser(
        prog="main.py", description="Finite connectivity spaces from the command line"
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name in COMMANDS:
        if name == "survey":
            sub = commands.add_parser(name, help="tabulate every structure on n points")
            sub.add_argument("size", type=int, help="Number of points (0 to 4)")
            sub.add_argument("--non-integral", action="store_true")
            sub.set_defaults(files=[], oracle=False)
            continue
        sub = commands.add_parser(name, parents=[common], help=name.replace("-", " "))
        if name == "phi":
            for flag in ("--gamma0", "--gamma1"):
                sub.add_argument(flag, default="k", choices=sorted(GAMMA_CHOICES))
        elif name == "order":
            sub.add_argument("--hasse", action="store_true", help="Also list the covering pairs")
    return parser


def load_documents(paths: Sequence[str], complete_topologies: bool = False) -> Document:
    """
    Parse every file into one namespace; later files may refer to earlier ones.

    Raises:
        ValidationError: If a file cannot be read
        DocumentError: With the file name prefixed to the location
    """
    merged = Document()
    for path in paths:
        text = FileValidator.read_text(path)
        try:
            merged.merge(parse(text, context=merged, complete_topologies=complete_topologies))
        except DocumentError as error:
            located = DocumentError(f"{path}: {error}", invariant=error.invariant)
            located.line, located.column = error.line, error.column
            raise located from None
    return merged


def execute(ctx: Context) -> Outcome:
    outcome = COMMANDS[ctx.args.command](ctx)
    if ctx.args.oracle:
        if ctx.args.command not in ORACLES:
            print(f"Warning: --oracle has no effect on {ctx.args.command}", file=sys.stderr)
        elif ORACLES[ctx.args.command](ctx).lines != outcome.lines:
            print("Error: oracle result differs from the fast path", file=sys.stderr)
            return Outcome(outcome.lines, EXIT_ORACLE_MISMATCH)
    return outcome


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command and print its result.

    Returns:
        Exit status: 0 success, 1 negative verdict, 2 usage or parse error,
        3 size guard, 4 oracle divergence
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exit_request:
        return EXIT_SUCCESS if exit_request.code == 0 else EXIT_USAGE

    try:
        settings = EnvironmentValidator.load_settings()
        if args.command != "survey" and not args.files:
            raise ValidationError(f"{args.command} needs at least one input file")
        document = load_documents(args.files, complete_topologies=args.command == "close-topology")
        outcome = execute(Context(args, document, settings))
    except DocumentError as e:
        print(format_error_message(e), file=sys.stderr)
        if args.command == "validate-rep" and e.invariant:
            print("invalid")
            return EXIT_NEGATIVE
        return EXIT_USAGE
    except SizeGuardError as e:
        print(format_error_message(e), file=sys.stderr)
        return EXIT_SIZE_GUARD
    except (ValidationError, ConnectivityError) as e:
        print(format_error_message(e), file=sys.stderr)
        return EXIT_USAGE

    for line in outcome.lines:
        print(line)
    return outcome.code


def main():
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        print("\n\nInterrupted by user.", file=sys.stderr)
        sys.exit(EXIT_USAGE)


if __name__ == "__main__":
    main()
