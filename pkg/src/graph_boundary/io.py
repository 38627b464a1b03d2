"""graph6 and edge-list ingestion, DOT output."""

from __future__ import annotations

import os
from typing import Iterator, TextIO

from .boundary import BoundarySet
from .errors import (
    BadChecksumLength,
    Disconnected,
    DisconnectedAfterParse,
    InputError,
    NonPrintableByte,
    ParseError,
)
from .graph import Graph, build_graph

GRAPH6_HEADER = ">>graph6<<"


def _decode_n(data: bytes) -> tuple[int, int]:
    """Vertex count and the offset where the adjacency bytes start."""
    if not data:
        raise ParseError("empty graph6 string")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        if len(data) < 8:
            raise BadChecksumLength("truncated 36-bit vertex count")
        n = 0
        for b in data[2:8]:
            n = (n << 6) | (b - 63)
        return n, 8
    if len(data) < 4:
        raise BadChecksumLength("truncated 18-bit vertex count")
    n = 0
    for b in data[1:4]:
        n = (n << 6) | (b - 63)
    return n, 4


def _encode_n(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])


def decode_graph6(line: str) -> tuple[int, list[tuple[int, int]]]:
    """Vertex count and edge list of one graph6 string (no connectivity check)."""
    text = line.strip()
    if text.startswith(GRAPH6_HEADER):
        text = text[len(GRAPH6_HEADER):]
    if text.startswith(":") or text.startswith(";"):
        raise ParseError("sparse6/incremental sparse6 input is not supported")
    try:
        data = text.encode("ascii")
    except UnicodeEncodeError as exc:
        raise NonPrintableByte(f"non-ASCII character at position {exc.start}") from None
    for i, b in enumerate(data):
        if not 63 <= b <= 126:
            raise NonPrintableByte(f"byte {b!r} at position {i} outside the graph6 range 63..126")
    n, offset = _decode_n(data)
    body = data[offset:]
    nbits = n * (n - 1) // 2
    expected = (nbits + 5) // 6
    if len(body) != expected:
        raise BadChecksumLength(
            f"n={n} needs {expected} adjacency bytes, found {len(body)}"
        )
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[k // 6] - 63
            if (byte >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    return n, edges


def parse_graph6(line: str) -> Graph:
    n, edges = decode_graph6(line)
    try:
        return build_graph(n, edges)
    except Disconnected as exc:
        raise DisconnectedAfterParse(str(exc)) from None


def encode_graph6(g: Graph) -> str:
    n = g.n
    bits = []
    for j in range(1, n):
        nbrs = set(g.adjacency[j])
        for i in range(j):
            bits.append(1 if i in nbrs else 0)
    bits += [0] * (-len(bits) % 6)
    body = bytes(
        63 + int("".join(map(str, bits[k : k + 6])), 2) for k in range(0, len(bits), 6)
    )
    return (_encode_n(n) + body).decode("ascii")


def iter_graph6(stream: TextIO) -> Iterator[tuple[int, str]]:
    """``(line number, text)`` of each non-blank line."""
    for lineno, line in enumerate(stream, start=1):
        text = line.strip()
        if text:
            yield lineno, text


def parse_edgelist(text: str) -> Graph:
    """Parse ``u v`` lines with ``#`` comments and an optional ``n=<int>`` header.

    With the header, vertices are the integers ``0..n-1``.  Without it, the
    labels seen are compacted to ``0..k-1`` (numeric order when all labels
    are integers, first appearance otherwise) and kept on ``Graph.labels``.
    """
    n_header = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.replace(" ", "").startswith("n="):
            if n_header is not None or pairs:
                raise ParseError("the n=<int> header must come first and only once", lineno)
            try:
                n_header = int(line.replace(" ", "")[2:])
            except ValueError:
                raise ParseError(f"bad vertex count {line!r}", lineno) from None
            continue
        toks = line.split()
        if len(toks) != 2:
            raise ParseError(f"expected two vertex labels, got {line!r}", lineno)
        pairs.append((toks[0], toks[1], lineno))

    if n_header is not None:
        edges = []
        for a, b, lineno in pairs:
            try:
                edges.append((int(a), int(b)))
            except ValueError:
                raise ParseError(f"non-integer vertex in {a!r} {b!r}", lineno) from None
        return build_graph(n_header, edges)

    labels: list = []
    seen = {}
    for a, b, _ in pairs:
        for t in (a, b):
            if t not in seen:
                seen[t] = len(labels)
                labels.append(t)
    if all(_is_int(t) for t in labels):
        labels = sorted({int(t) for t in labels})
        rank = {x: i for i, x in enumerate(labels)}
        index = {t: rank[int(t)] for t in seen}
    else:
        index = seen
    if not labels:
        raise ParseError("no edges found")
    edges = [(index[a], index[b]) for a, b, _ in pairs]
    return build_graph(len(labels), edges, labels=labels)


def _is_int(tok: str) -> bool:
    try:
        int(tok)
    except ValueError:
        return False
    return True


def dot_text(g: Graph, boundary: BoundarySet) -> str:
    lines = ["graph G {"]
    for v in range(g.n):
        attrs = []
        if g.labels is not None:
            attrs.append(f'label="{g.labels[v]}"')
        if v in boundary:
            attrs.append("color=red, style=filled, fillcolor=red")
        lines.append(f"  {v}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for u, v in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_dot(g: Graph, boundary: BoundarySet, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dot_text(g, boundary))


def read_graph(text: str, fmt: str) -> Graph:
    if fmt == "graph6":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) != 1:
            raise ParseError(f"expected exactly one graph6 line, found {len(lines)}")
        return parse_graph6(lines[0])
    if fmt == "edgelist":
        return parse_edgelist(text)
    raise InputError(f"unknown format {fmt!r}")
