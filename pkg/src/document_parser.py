# /usr/bin/env python3
# Document Parser for Connectivity Files
# Line-oriented grammar for spaces, topologies, devices, groups, maps, representations and foliations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from src.constants import ARROW, BLOCK_KEYWORDS, BOOLEAN_WORDS, COMMENT_CHAR, PAIR_SEPARATOR
from src.core import (
    ConnectivityError,
    ConnectivitySpace,
    GroundSet,
    SetMap,
    is_integral,
    sort_family,
)
from src.foliation import Foliation
from src.representation import Representation, validate_representation
from src.separation import FiniteTopology, PermutationGroup, SeparationDevice, close_topology


# Custom Exceptions
class DocumentError(ConnectivityError):
    """Parse or reference error, located by line and column when known."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        invariant: bool = False,
    ):
        self.message = message
        self.invariant = invariant
        self.line = line
        self.column = column
        if line is None:
            super().__init__(message)
        elif column is None:
            super().__init__(f"line {line}: {message}")
        else:
            super().__init__(f"line {line}, column {column}: {message}")


# (text, 1-based column)
Token = Tuple[str, int]

_TOKEN_PATTERN = re.compile(r"\||[^\s|]+")

# body keywords accepted inside each block
_BODY_KEYWORDS = {
    "space": ("points", "integral", "generator"),
    "topology": ("points", "open"),
    "device": ("points", "pair"),
    "group": ("points", "cycle"),
    "map": ("send",),
    "representation": ("image",),
    "foliation": (),
}

# blocks that only refer to objects defined elsewhere are built last
_REFERRING_BLOCKS = ("map", "representation", "foliation")


@dataclass(frozen=True)
class NamedMap:
    source: str
    target: str
    map: SetMap


@dataclass(frozen=True)
class NamedRepresentation:
    source: str
    target: str
    rep: Representation


@dataclass(frozen=True)
class NamedFoliation:
    internal: str
    external: str
    foliation: Foliation


@dataclass
class Document:
    """Named objects of one or more files, in definition order."""

    spaces: Dict[str, ConnectivitySpace] = field(default_factory=dict)
    topologies: Dict[str, FiniteTopology] = field(default_factory=dict)
    devices: Dict[str, SeparationDevice] = field(default_factory=dict)
    groups: Dict[str, PermutationGroup] = field(default_factory=dict)
    maps: Dict[str, NamedMap] = field(default_factory=dict)
    representations: Dict[str, NamedRepresentation] = field(default_factory=dict)
    foliations: Dict[str, NamedFoliation] = field(default_factory=dict)
    order: List[Tuple[str, str]] = field(default_factory=list)

    def table(self, kind: str) -> Dict:
        return {
            "space": self.spaces,
            "topology": self.topologies,
            "device": self.devices,
            "group": self.groups,
            "map": self.maps,
            "representation": self.representations,
            "foliation": self.foliations,
        }[kind]

    def add(self, kind: str, name: str, value, line: Optional[int] = None) -> None:
        """
        Register a named object.

        Raises:
            DocumentError: If the name is already used by any object
        """
        if any(name == existing for _, existing in self.order):
            raise DocumentError(f"Duplicate name: {name}", line)
        self.table(kind)[name] = value
        self.order.append((kind, name))

    def select(self, kind: str, name: Optional[str] = None):
        """
        Fetch an object by name, or the first one of its kind.

        Raises:
            DocumentError: If no such object exists
        """
        table = self.table(kind)
        if name is None:
            if not table:
                raise DocumentError(f"No {kind} defined in the input files")
            return next(iter(table.values()))
        if name not in table:
            known = ", ".join(table) or "none"
            raise DocumentError(f"Unknown {kind} '{name}' (defined: {known})")
        return table[name]

    def merge(self, other: "Document") -> "Document":
        for kind, name in other.order:
            self.add(kind, name, other.table(kind)[name])
        return self


@dataclass
class _Block:
    kind: str
    header: List[Token]
    line: int
    body: List[Tuple[List[Token], int]] = field(default_factory=list)

    @property
    def name(self) -> str:
        return self.header[1][0]


def _tokenize(text: str) -> List[Token]:
    if COMMENT_CHAR in text:
        text = text[: text.index(COMMENT_CHAR)]
    return [(match.group(), match.start() + 1) for match in _TOKEN_PATTERN.finditer(text)]


def _split_blocks(text: str) -> List[_Block]:
    blocks: List[_Block] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(raw)
        if not tokens:
            continue

        keyword, column = tokens[0]
        if keyword in BLOCK_KEYWORDS:
            if len(tokens) < 2:
                raise DocumentError(f"'{keyword}' needs a name", number, column + len(keyword))
            blocks.append(_Block(keyword, tokens, number))
            continue

        if not blocks:
            raise DocumentError(f"Expected a block keyword, got '{keyword}'", number, column)
        current = blocks[-1]
        if keyword not in _BODY_KEYWORDS[current.kind]:
            raise DocumentError(
                f"'{keyword}' is not allowed in a {current.kind} block", number, column
            )
        current.body.append((tokens, number))
    return blocks


def _expect_header(block: _Block, shape: Sequence[Optional[str]]) -> List[str]:
    """Check fixed header words; return the tokens in the None slots."""
    tokens = block.header
    if len(tokens) != len(shape):
        words = " ".join(word if word else "NAME" for word in shape)
        raise DocumentError(f"Expected '{words}'", block.line, tokens[0][1])
    found = []
    for (text, column), expected in zip(tokens, shape):
        if expected is None:
            found.append(text)
        elif text != expected:
            raise DocumentError(f"Expected '{expected}', got '{text}'", block.line, column)
    return found


def _ground_of(block: _Block) -> GroundSet:
    points = [(tokens, line) for tokens, line in block.body if tokens[0][0] == "points"]
    if not points:
        raise DocumentError(f"{block.kind} '{block.name}' has no points line", block.line)
    if len(points) > 1:
        raise DocumentError("Only one points line is allowed", points[1][1])

    tokens, line = points[0]
    try:
        return GroundSet(tuple(text for text, _ in tokens[1:]))
    except ConnectivityError as error:
        raise DocumentError(str(error), line, tokens[0][1]) from None


def _resolve(ground: GroundSet, tokens: Sequence[Token], line: int) -> int:
    mask = 0
    for text, column in tokens:
        if text not in ground.labels:
            raise DocumentError(f"Unknown point: {text}", line, column)
        mask |= 1 << ground.index(text)
    return mask


def _lines(block: _Block, keyword: str) -> List[Tuple[List[Token], int]]:
    return [(tokens, line) for tokens, line in block.body if tokens[0][0] == keyword]


def _build_space(block: _Block) -> ConnectivitySpace:
    _expect_header(block, ("space", None))
    ground = _ground_of(block)

    integral = True
    flags = _lines(block, "integral")
    if len(flags) > 1:
        raise DocumentError("Only one integral line is allowed", flags[1][1])
    for tokens, line in flags:
        if len(tokens) != 2 or tokens[1][0] not in BOOLEAN_WORDS:
            raise DocumentError("Expected 'integral true' or 'integral false'", line, tokens[0][1])
        integral = BOOLEAN_WORDS[tokens[1][0]]

    generators = []
    for tokens, line in _lines(block, "generator"):
        if len(tokens) < 2:
            raise DocumentError("A generator needs at least one point", line, tokens[0][1])
        generators.append(_resolve(ground, tokens[1:], line))
    return ConnectivitySpace(ground, generators, integral=integral)


def _build_topology(block: _Block, complete: bool = False) -> FiniteTopology:
    _expect_header(block, ("topology", None))
    ground = _ground_of(block)
    opens = [_resolve(ground, tokens[1:], line) for tokens, line in _lines(block, "open")]
    if complete:
        return close_topology(ground, opens)
    try:
        return FiniteTopology.from_opens(ground, opens)
    except ConnectivityError as error:
        raise DocumentError(
            f"{error} (run close-topology to complete the opens)", block.line, invariant=True
        ) from None


def _parse_pair(ground: GroundSet, tokens: List[Token], line: int) -> Tuple[int, int]:
    """``pair | a b | c d |`` with exactly three separators."""
    separators = [i for i, (text, _) in enumerate(tokens) if text == PAIR_SEPARATOR]
    if len(separators) != 3 or separators[0] != 1 or separators[2] != len(tokens) - 1:
        raise DocumentError("Expected 'pair | points | points |'", line, tokens[0][1])
    first = _resolve(ground, tokens[2 : separators[1]], line)
    second = _resolve(ground, tokens[separators[1] + 1 : separators[2]], line)
    return first, second


def _build_device(block: _Block) -> SeparationDevice:
    _expect_header(block, ("device", None))
    ground = _ground_of(block)
    pairs = [_parse_pair(ground, tokens, line) for tokens, line in _lines(block, "pair")]
    try:
        return SeparationDevice(ground, tuple(pairs))
    except ConnectivityError as error:
        raise DocumentError(str(error), block.line, invariant=True) from None


def _cycle_map(ground: GroundSet, tokens: List[Token], line: int) -> SetMap:
    cycle = []
    for text, column in tokens[1:]:
        if text not in ground.labels:
            raise DocumentError(f"Unknown point: {text}", line, column)
        if ground.index(text) in cycle:
            raise DocumentError(f"Point {text} appears twice in a cycle", line, column)
        cycle.append(ground.index(text))
    if not cycle:
        raise DocumentError("A cycle needs at least one point", line, tokens[0][1])

    images = list(range(ground.n))
    for position, point in enumerate(cycle):
        images[point] = cycle[(position + 1) % len(cycle)]
    return SetMap(ground, ground, tuple(images))


def _build_group(block: _Block) -> PermutationGroup:
    _expect_header(block, ("group", None))
    ground = _ground_of(block)
    cycles = [_cycle_map(ground, tokens, line) for tokens, line in _lines(block, "cycle")]
    return PermutationGroup(ground, tuple(cycles))


def _space_ref(document: Document, name: str, block: _Block) -> ConnectivitySpace:
    if name not in document.spaces:
        column = next(column for text, column in block.header[2:] if text == name)
        raise DocumentError(f"Unknown space: {name}", block.line, column)
    return document.spaces[name]


def _arrow_lines(block: _Block, keyword: str) -> Dict[str, Tuple[List[Token], int]]:
    """Collect ``keyword p -> ...`` lines keyed by p."""
    found: Dict[str, Tuple[List[Token], int]] = {}
    for tokens, line in _lines(block, keyword):
        if len(tokens) < 4 or tokens[2][0] != ARROW:
            raise DocumentError(f"Expected '{keyword} POINT {ARROW} ...'", line, tokens[0][1])
        point, column = tokens[1]
        if point in found:
            raise DocumentError(f"Point {point} is assigned twice", line, column)
        found[point] = (tokens, line)
    return found


def _check_total(
    source: GroundSet, assigned: Dict[str, Tuple[List[Token], int]], block: _Block
) -> None:
    for point, (tokens, line) in assigned.items():
        if point not in source.labels:
            raise DocumentError(f"Unknown point: {point}", line, tokens[1][1])
    missing = [label for label in source.labels if label not in assigned]
    if missing:
        raise DocumentError(f"No image for {', '.join(missing)}", block.line)


def _build_map(block: _Block, document: Document) -> NamedMap:
    source_name, target_name = _expect_header(block, ("map", None, "from", None, "to", None))[1:]
    source = _space_ref(document, source_name, block)
    target = _space_ref(document, target_name, block)

    sends = _arrow_lines(block, "send")
    _check_total(source.ground, sends, block)

    images = []
    for label in source.ground.labels:
        tokens, line = sends[label]
        if len(tokens) != 4:
            raise DocumentError("A point is sent to exactly one point", line, tokens[4][1])
        images.append(_resolve(target.ground, tokens[3:], line).bit_length() - 1)
    return NamedMap(source_name, target_name, SetMap(source.ground, target.ground, tuple(images)))


def _build_representation(block: _Block, document: Document) -> NamedRepresentation:
    shape = ("representation", None, "from", None, "to", None)
    source_name, target_name = _expect_header(block, shape)[1:]
    obj = _space_ref(document, source_name, block)
    space = _space_ref(document, target_name, block)

    assigned = _arrow_lines(block, "image")
    _check_total(obj.ground, assigned, block)

    images = []
    for label in obj.ground.labels:
        tokens, line = assigned[label]
        images.append(_resolve(space.ground, tokens[3:], line))
    try:
        rep = validate_representation(obj, space, images)
    except ConnectivityError as error:
        raise DocumentError(str(error), block.line, invariant=True) from None
    return NamedRepresentation(source_name, target_name, rep)


def _build_foliation(block: _Block, document: Document) -> NamedFoliation:
    shape = ("foliation", None, "internal", None, "external", None)
    internal_name, external_name = _expect_header(block, shape)[1:]
    internal = _space_ref(document, internal_name, block)
    external = _space_ref(document, external_name, block)
    try:
        foliation = Foliation(internal, external)
    except ConnectivityError as error:
        raise DocumentError(str(error), block.line, invariant=True) from None
    return NamedFoliation(internal_name, external_name, foliation)


_STANDALONE_BUILDERS = {
    "space": _build_space,
    "device": _build_device,
    "group": _build_group,
}

_REFERRING_BUILDERS = {
    "map": _build_map,
    "representation": _build_representation,
    "foliation": _build_foliation,
}


def parse(
    text: str, context: Optional[Document] = None, complete_topologies: bool = False
) -> Document:
    """
    Parse a connectivity document.

    Args:
        text: File contents
        context: Objects already loaded from other files, usable as references
        complete_topologies: Close opens under union and intersection instead
            of rejecting topologies that are not closed

    Returns:
        Document holding the objects defined in ``text``

    Raises:
        DocumentError: With line and column on any syntax, reference or
            invariant error
    """
    blocks = _split_blocks(text)
    document = Document()
    lookup = Document() if context is None else Document().merge(context)

    def register(block: _Block, value) -> None:
        document.add(block.kind, block.name, value, block.line)
        lookup.add(block.kind, block.name, value, block.line)

    # first pass: names in file order for duplicate detection
    seen: Dict[str, int] = {}
    for block in blocks:
        if block.name in seen or any(block.name == name for _, name in lookup.order):
            raise DocumentError(f"Duplicate name: {block.name}", block.line, block.header[1][1])
        seen[block.name] = block.line

    for block in blocks:
        if block.kind == "topology":
            register(block, _build_topology(block, complete_topologies))
        elif block.kind not in _REFERRING_BLOCKS:
            register(block, _STANDALONE_BUILDERS[block.kind](block))
    for block in blocks:
        if block.kind in _REFERRING_BLOCKS:
            register(block, _REFERRING_BUILDERS[block.kind](block, lookup))

    # keep file order for rendering
    document.order.sort(key=lambda entry: seen[entry[1]])
    return document


def _words(ground: GroundSet, mask: int) -> str:
    return " ".join(ground.labels_of(mask))


def render_space(name: str, space: ConnectivitySpace) -> List[str]:
    """Canonical lines of a space; delegated spaces list every connected set."""
    integral = is_integral(space) if space.delegated else space.integral
    lines = [f"space {name}", f"points {' '.join(space.ground.labels)}"]
    lines.append(f"integral {'true' if integral else 'false'}")
    singles = {1 << i for i in range(space.ground.n)} if integral else set()
    for generator in space.generators:
        if generator not in singles:
            lines.append(f"generator {_words(space.ground, generator)}")
    return lines


def render_topology(name: str, top: FiniteTopology) -> List[str]:
    lines = [f"topology {name}", f"points {' '.join(top.ground.labels)}"]
    for mask in top.opens:
        if mask and mask != top.ground.full:
            lines.append(f"open {_words(top.ground, mask)}")
    return lines


def render_device(name: str, device: SeparationDevice) -> List[str]:
    lines = [f"device {name}", f"points {' '.join(device.ground.labels)}"]
    for s, t in device.pairs:
        lines.append(f"pair | {_words(device.ground, s)} | {_words(device.ground, t)} |")
    return lines


def _cycle_of(permutation: SetMap) -> List[int]:
    moved = [point for point, image in enumerate(permutation.images) if image != point]
    if not moved:
        return [0]
    cycle = [moved[0]]
    while permutation(cycle[-1]) != cycle[0]:
        cycle.append(permutation(cycle[-1]))
    return cycle


def render_group(name: str, group: PermutationGroup) -> List[str]:
    lines = [f"group {name}", f"points {' '.join(group.ground.labels)}"]
    for generator in group.generators:
        labels = " ".join(group.ground.labels[point] for point in _cycle_of(generator))
        lines.append(f"cycle {labels}")
    return lines


def render_map(name: str, entry: NamedMap) -> List[str]:
    f = entry.map
    lines = [f"map {name} from {entry.source} to {entry.target}"]
    for point, image in enumerate(f.images):
        lines.append(f"send {f.source.labels[point]} {ARROW} {f.target.labels[image]}")
    return lines


def render_representation(name: str, entry: NamedRepresentation) -> List[str]:
    rep = entry.rep
    lines = [f"representation {name} from {entry.source} to {entry.target}"]
    for point, image in enumerate(rep.images):
        lines.append(
            f"image {rep.object.ground.labels[point]} {ARROW} {_words(rep.space.ground, image)}"
        )
    return lines


def render_foliation(name: str, entry: NamedFoliation) -> List[str]:
    return [f"foliation {name} internal {entry.internal} external {entry.external}"]


_RENDERERS = {
    "space": render_space,
    "topology": render_topology,
    "device": render_device,
    "group": render_group,
    "map": render_map,
    "representation": render_representation,
    "foliation": render_foliation,
}


def render(document: Document) -> str:
    """Canonical text of a document; ``parse(render(d))`` rebuilds ``d``."""
    chunks = []
    for kind, name in document.order:
        chunks.append("\n".join(_RENDERERS[kind](name, document.table(kind)[name])))
    return "\n\n".join(chunks) + ("\n" if chunks else "")


def family_lines(ground: GroundSet, family) -> List[str]:
    return [ground.format(mask) for mask in sort_family(family)]
