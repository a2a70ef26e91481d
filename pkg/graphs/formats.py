import os
from typing import Union

import networkx as nx

from graphs.graph import Graph, GraphError


class GraphFormatError(GraphError):
    pass


def to_networkx(g: Graph) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(range(g.n))
    out.add_edges_from(g.edges())
    return out


def from_networkx(h: nx.Graph) -> Graph:
    nodes = sorted(h.nodes())
    index = {v: i for i, v in enumerate(nodes)}
    return Graph.from_edges(len(nodes), ((index[u], index[v]) for u, v in h.edges() if u != v))


def to_graph6(g: Graph) -> bytes:
    """Header-less graph6 encoding, without the trailing newline."""
    return nx.to_graph6_bytes(to_networkx(g), header=False).rstrip(b"\n")


def from_graph6(data: Union[bytes, str]) -> Graph:
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.strip()
    try:
        return from_networkx(nx.from_graph6_bytes(data))
    except (ValueError, nx.NetworkXError) as e:
        raise GraphFormatError(f"invalid graph6 data: {e}") from e


def to_edge_list(g: Graph) -> str:
    lines = [str(g.n)]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def from_edge_list(text: str) -> Graph:
    """
    Parse the plain edge-list format: n on the first line, then one "u v" per line

    Parameters:
    - text: file contents

    Returns:
    - Graph
    """
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphFormatError("edge list is empty; expected the vertex count on line 1")
    try:
        n = int(lines[0])
    except ValueError:
        raise GraphFormatError(f"first line must be the vertex count, got {lines[0]!r}")
    edges = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer vertex in {line!r}")
    try:
        return Graph.from_edges(n, edges)
    except GraphError as e:
        raise GraphFormatError(str(e)) from e


def format_for_path(path: str) -> str:
    ext = os.path.splitext(path)[1].lower()
    return "graph6" if ext in (".g6", ".graph6") else "edgelist"


def read_graph(path: str) -> Graph:
    with open(path, "rb") as f:
        data = f.read()
    if format_for_path(path) == "graph6":
        return from_graph6(data)
    return from_edge_list(data.decode("utf-8"))


def dumps_graph(g: Graph, fmt: str) -> bytes:
    if fmt == "graph6":
        return to_graph6(g) + b"\n"
    if fmt == "edgelist":
        return to_edge_list(g).encode("utf-8")
    raise GraphFormatError(f"unknown graph format {fmt!r}")
