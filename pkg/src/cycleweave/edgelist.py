"""Plain-text edge lists.

Format::

    # comments start with '#'
    n m          <- header: vertex count, declared edge count
    u v          <- one edge per line, 0-based ids

The declared ``m`` is advisory: a mismatch is logged as a warning and the
actual number of distinct edges is used.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, TextIO

from .graph import Graph, GraphValidationError, from_edge_list

log = logging.getLogger(__name__)


def parse_edge_list(text: str, source: str = "<string>") -> Graph:
    header: tuple[int, int] | None = None
    pairs: list[tuple[int, int]] = []
    lines: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise GraphValidationError(f"{source}:{lineno}: expected two integers, got {line!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise GraphValidationError(f"{source}:{lineno}: expected two integers, got {line!r}") from None
        if header is None:
            header = (u, v)
        else:
            pairs.append((u, v))
            lines.append(lineno)
    if header is None:
        raise GraphValidationError(f"{source}: missing 'n m' header line")
    n, m = header
    try:
        g = from_edge_list(n, pairs, lines=lines)
    except GraphValidationError as err:
        raise GraphValidationError(f"{source}: {err}") from None
    if g.edge_count != m:
        log.warning("%s: header declares %d edges, found %d distinct", source, m, g.edge_count)
    return g


def read_edge_list(path: str | Path) -> Graph:
    path = Path(path)
    return parse_edge_list(path.read_text(encoding="utf-8"), str(path))


def format_edge_list(n: int, edges: list[tuple[int, int]]) -> str:
    """Canonical form: header, then sorted ``u v`` lines with ``u < v``."""
    canon = sorted({(min(u, v), max(u, v)) for u, v in edges})
    out = [f"{n} {len(canon)}"]
    out.extend(f"{u} {v}" for u, v in canon)
    return "\n".join(out) + "\n"


def write_edge_list(g: Graph, path: str | Path | TextIO, *, original_ids: bool = False) -> None:
    """Write ``g`` canonically.  With ``original_ids`` the edges use ``g.labels``.

    In that case the header's vertex count is ``max label + 1`` so the file
    stays readable as a graph on the input's id range.
    """
    if original_ids:
        edges = g.original_edges()
        n = max(g.labels, default=-1) + 1
    else:
        edges = list(g.edges())
        n = g.vertex_count
    text = format_edge_list(n, edges)
    if hasattr(path, "write"):
        path.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def write_metadata(path: str | Path, meta: dict[str, Any]) -> Path:
    """Write the generator sidecar ``<path>.meta.json`` next to an instance."""
    side = Path(str(path) + ".meta.json")
    side.write_text(json.dumps(meta, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return side
