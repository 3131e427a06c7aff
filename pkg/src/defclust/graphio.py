"""Serialization: edge-list text, graph6, DIMACS .col, colouring files,
DOT export, and the stable key-value run report.

Formats are line-oriented and diff-friendly; reports print keys in a fixed
order so identical runs produce identical bytes.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

from .colouring import Certificate, Colouring
from .errors import GraphFormatError
from .graphs import Graph, PlaneTriangulation

FORMATS = ("edgelist", "graph6", "dimacs")


def read_graph(text: str, fmt: str) -> Graph:
    if fmt == "edgelist":
        return _read_edgelist(text)
    if fmt == "graph6":
        return _read_graph6(text.strip())
    if fmt == "dimacs":
        return _read_dimacs(text)
    raise GraphFormatError(f"unknown format {fmt!r}; pick one of {FORMATS}")


def write_graph(G: Graph, fmt: str) -> str:
    if fmt == "edgelist":
        # the vertex-count comment is needed when isolated vertices exist
        tail = f"# n {G.n}\n" if G.n and _has_isolated(G) else ""
        return "".join(f"{u} {v}\n" for u, v in G.edges()) + tail
    if fmt == "graph6":
        return _write_graph6(G) + "\n"
    if fmt == "dimacs":
        lines = [f"p edge {G.n} {G.m}"]
        lines += [f"e {u + 1} {v + 1}" for u, v in G.edges()]
        return "\n".join(lines) + "\n"
    raise GraphFormatError(f"unknown format {fmt!r}; pick one of {FORMATS}")


def _has_isolated(G: Graph) -> bool:
    return any(G.degree(v) == 0 for v in range(G.n))


def _read_edgelist(text: str) -> Graph:
    edges = []
    dupes = 0
    n = 0
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if raw.strip().startswith("# n "):
            try:
                n = max(n, int(raw.strip().split()[2]))
            except (IndexError, ValueError):
                raise GraphFormatError(f"line {lineno}: malformed vertex-count comment")
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer vertex in {raw!r}")
        if u < 0 or v < 0:
            raise GraphFormatError(f"line {lineno}: negative vertex id")
        if u == v:
            raise GraphFormatError(f"line {lineno}: loop at {u}")
        e = (min(u, v), max(u, v))
        if e in seen:
            dupes += 1
        seen.add(e)
        n = max(n, u + 1, v + 1)
        edges.append(e)
    if dupes:
        warnings.warn(f"collapsed {dupes} duplicate edge(s)")
    return Graph(n, seen)


def _write_graph6(G: Graph) -> str:
    n = G.n
    if n > 62:
        if n > 258047:
            raise GraphFormatError("graph6 writer supports n <= 258047")
        header = [126, 63 + (n >> 12 & 63), 63 + (n >> 6 & 63), 63 + (n & 63)]
    else:
        header = [63 + n]
    bits = []
    for v in range(1, n):
        for u in range(v):
            bits.append(1 if G.has_edge(u, v) else 0)
    while len(bits) % 6:
        bits.append(0)
    out = bytes(header) + bytes(
        63 + int("".join(map(str, bits[i : i + 6])), 2)
        for i in range(0, len(bits), 6)
    )
    return out.decode("ascii")


def _read_graph6(line: str) -> Graph:
    if not line:
        raise GraphFormatError("empty graph6 input")
    data = [ord(c) - 63 for c in line]
    if any(d < 0 or d > 63 for d in data):
        raise GraphFormatError("invalid graph6 character")
    if data[0] == 63:  # '~'
        if len(data) < 4:
            raise GraphFormatError("truncated graph6 header")
        n = (data[1] << 12) + (data[2] << 6) + data[3]
        body = data[4:]
    else:
        n = data[0]
        body = data[1:]
    bits = []
    for d in body:
        bits.extend((d >> shift) & 1 for shift in range(5, -1, -1))
    need = n * (n - 1) // 2
    if len(bits) < need:
        raise GraphFormatError("graph6 body too short")
    edges = []
    i = 0
    for v in range(1, n):
        for u in range(v):
            if bits[i]:
                edges.append((u, v))
            i += 1
    return Graph(n, edges)


def _read_dimacs(text: str) -> Graph:
    n = None
    edges = set()
    dupes = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "edge":
                raise GraphFormatError(f"line {lineno}: bad problem line {raw!r}")
            n = int(parts[2])
        elif parts[0] == "e":
            if n is None:
                raise GraphFormatError(f"line {lineno}: edge before problem line")
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: bad edge line {raw!r}")
            u, v = int(parts[1]) - 1, int(parts[2]) - 1
            if u == v:
                raise GraphFormatError(f"line {lineno}: loop at {u + 1}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"line {lineno}: vertex out of range")
            e = (min(u, v), max(u, v))
            if e in edges:
                dupes += 1
            edges.add(e)
        else:
            raise GraphFormatError(f"line {lineno}: unknown line {raw!r}")
    if n is None:
        raise GraphFormatError("missing problem line")
    if dupes:
        warnings.warn(f"collapsed {dupes} duplicate edge(s)")
    return Graph(n, edges)


# -- triangulation text format (embeddings are inputs) -------------------------------


def read_triangulation(text: str) -> PlaneTriangulation:
    """Face-list format: 'f a b c' per internal face, 'outer v1 v2 ...' once."""
    faces = []
    outer: Optional[tuple[int, ...]] = None
    n = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "f" and len(parts) == 4:
            tri = tuple(int(x) for x in parts[1:])
            faces.append(tri)
            n = max(n, max(tri) + 1)
        elif parts[0] == "outer":
            outer = tuple(int(x) for x in parts[1:])
            n = max(n, max(outer) + 1)
        else:
            raise GraphFormatError(f"line {lineno}: unknown line {raw!r}")
    if outer is None:
        raise GraphFormatError("missing outer line")
    edges = set()
    for f in faces:
        a, b, c = f
        edges.update({(min(a, b), max(a, b)), (min(b, c), max(b, c)), (min(a, c), max(a, c))})
    for i in range(len(outer)):
        u, v = outer[i], outer[(i + 1) % len(outer)]
        edges.add((min(u, v), max(u, v)))
    return PlaneTriangulation(Graph(n, edges), tuple(faces), outer)


def write_triangulation(T: PlaneTriangulation) -> str:
    lines = [f"f {a} {b} {c}" for a, b, c in T.faces]
    lines.append("outer " + " ".join(str(v) for v in T.outer))
    return "\n".join(lines) + "\n"


# -- colouring files -------------------------------------------------------------------


def read_colouring(text: str, n: int) -> Colouring:
    """Line-oriented 'vertex colour' pairs; '#' comments."""
    values: list[Optional[int]] = [None] * n
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'vertex colour'")
        v, c = int(parts[0]), int(parts[1])
        if not 0 <= v < n:
            raise GraphFormatError(f"line {lineno}: vertex {v} out of range")
        values[v] = c
    return Colouring(values)


def write_colouring(chi: Colouring) -> str:
    return "".join(f"{v} {c}\n" for v, c in enumerate(chi.values))


# -- reports and DOT --------------------------------------------------------------------


def write_report(G: Graph, chi: Colouring, cert: Certificate, extra: Optional[dict] = None) -> str:
    """Stable key-value report; identical runs emit identical bytes."""
    lines = [
        f"vertices: {G.n}",
        f"edges: {G.m}",
        f"colours: {cert.k}",
        f"defect: {cert.defect}",
        f"clustering: {cert.clustering}",
        f"all_paths: {'true' if cert.all_paths else 'false'}",
    ]
    sizes: dict[int, int] = {}
    for c in chi.values:
        sizes[c] = sizes.get(c, 0) + 1
    lines.append(
        "class_sizes: " + " ".join(f"{c}:{sizes[c]}" for c in sorted(sizes))
    )
    for key in sorted(extra or {}):
        lines.append(f"{key}: {extra[key]}")
    return "\n".join(lines) + "\n"


_DOT_COLOURS = (
    "red", "blue", "green", "orange", "purple", "brown", "cyan",
    "magenta", "gold", "gray", "pink", "olive",
)


def write_dot(G: Graph, chi: Optional[Colouring] = None) -> str:
    lines = ["graph G {"]
    for v in range(G.n):
        if chi is not None and chi[v] is not None:
            col = _DOT_COLOURS[chi[v] % len(_DOT_COLOURS)]
            lines.append(f'  {v} [color="{col}", colour_id={chi[v]}];')
        else:
            lines.append(f"  {v};")
    for u, v in G.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- experiment manifests -----------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentManifest:
    """A fully reproducible run: same manifest, byte-identical report."""

    engine: str
    graph: dict
    params: dict = field(default_factory=dict)
    seed: int = 0
    expect: dict = field(default_factory=dict)

    @staticmethod
    def from_json(text: str) -> "ExperimentManifest":
        import json

        obj = json.loads(text)
        if "engine" not in obj or "graph" not in obj:
            raise GraphFormatError("manifest needs 'engine' and 'graph'")
        if "seed" not in obj and obj.get("params", {}).get("randomized"):
            raise GraphFormatError("randomized engines need an explicit seed")
        return ExperimentManifest(
            engine=obj["engine"],
            graph=obj["graph"],
            params=obj.get("params", {}),
            seed=obj.get("seed", 0),
            expect=obj.get("expect", {}),
        )

    def to_json(self) -> str:
        import json

        return json.dumps(
            {
                "engine": self.engine,
                "graph": self.graph,
                "params": self.params,
                "seed": self.seed,
                "expect": self.expect,
            },
            indent=2,
            sort_keys=True,
        )
