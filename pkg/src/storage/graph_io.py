"""Edge-list serialization of relationship graphs.

Format: a header line `#graphdr v1 N=<n> semantics=<s>`, then one edge per line
as `i<TAB>j<TAB>w` with i < j and w in shortest round-trippable decimal form.
"""

import logging
import re
from pathlib import Path
from typing import List, Set, Tuple, Union

from src.models.graph_models import RelationGraph, WeightSemantics
from src.storage.atomic import atomic_write_text
from src.utils.config import GRAPH_FORMAT_VERSION
from src.utils.errors import DataError

logger = logging.getLogger(__name__)

HEADER_PATTERN = re.compile(r"^#graphdr (?P<version>v\d+) N=(?P<n>\d+) semantics=(?P<semantics>[a-z_]+)$")


def format_graph(g: RelationGraph) -> str:
    lines = [f"#graphdr {GRAPH_FORMAT_VERSION} N={g.n_vertices} semantics={g.semantics.value}"]
    for i, j, w in zip(g.rows.tolist(), g.cols.tolist(), g.weights.tolist()):
        lines.append(f"{i}\t{j}\t{w!r}")
    return "\n".join(lines) + "\n"


def write_graph(g: RelationGraph, path: Union[str, Path]) -> Path:
    out = atomic_write_text(path, format_graph(g))
    logger.info("Wrote graph %s: %d vertices, %d edges (%s)", out, g.n_vertices, g.n_edges, g.semantics.value)
    return out


def parse_graph(text: str, source: str = "<graph>") -> RelationGraph:
    lines = text.splitlines()
    if not lines:
        raise DataError(f"{source}: empty graph file, missing '#graphdr' header")
    match = HEADER_PATTERN.match(lines[0].strip())
    if match is None:
        raise DataError(f"{source}: line 1: missing or malformed header, expected "
                        f"'#graphdr {GRAPH_FORMAT_VERSION} N=<n> semantics=<s>'")
    if match["version"] != GRAPH_FORMAT_VERSION:
        raise DataError(f"{source}: unsupported graph format {match['version']}")
    n = int(match["n"])
    try:
        semantics = WeightSemantics(match["semantics"])
    except ValueError:
        raise DataError(f"{source}: unknown semantics '{match['semantics']}'") from None

    edges: List[Tuple[int, int, float]] = []
    seen: Set[Tuple[int, int]] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise DataError(f"{source}: line {lineno}: expected 'i<TAB>j<TAB>w', got {line!r}")
        try:
            i, j, w = int(fields[0]), int(fields[1]), float(fields[2])
        except ValueError:
            raise DataError(f"{source}: line {lineno}: cannot parse {line!r}") from None
        if i >= j:
            raise DataError(f"{source}: line {lineno}: edge ({i}, {j}) must have i < j")
        if i < 0 or j >= n:
            raise DataError(f"{source}: line {lineno}: vertex id out of range [0, {n})")
        if (i, j) in seen:
            raise DataError(f"{source}: line {lineno}: duplicate edge ({i}, {j})")
        seen.add((i, j))
        edges.append((i, j, w))

    return RelationGraph.from_edges(n, edges, semantics)


def read_graph(path: Union[str, Path]) -> RelationGraph:
    path = Path(path)
    if not path.exists():
        raise DataError(f"Graph file not found: {path}")
    g = parse_graph(path.read_text(encoding="utf-8"), str(path))
    logger.info("Read graph %s: %d vertices, %d edges", path, g.n_vertices, g.n_edges)
    return g
