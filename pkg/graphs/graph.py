from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

MAX_VERTICES = 4096


class GraphError(Exception):
    pass


class GraphSizeError(GraphError):
    pass


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class VertexSet:
    """
    Subset of the vertices {0..n-1} of a host graph

    Parameters:
    - members: vertices in the subset
    """
    members: FrozenSet[int]

    @staticmethod
    def of(vertices: Iterable[int]) -> "VertexSet":
        return VertexSet(frozenset(int(v) for v in vertices))

    def validate(self, n: int) -> None:
        bad = [v for v in self.members if v < 0 or v >= n]
        if bad:
            raise GraphError(f"vertices {sorted(bad)} outside 0..{n - 1}")

    def mask(self) -> int:
        m = 0
        for v in self.members:
            m |= 1 << v
        return m

    def sorted(self) -> List[int]:
        return sorted(self.members)

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True, eq=False)
class Graph:
    """
    Simple undirected graph with one bit row per vertex

    Parameters:
    - n: vertex count
    - rows: rows[v] has bit u set iff u ~ v
    - labels: original vertex id of each vertex (None means identity)
    """
    n: int
    rows: Tuple[int, ...]
    labels: Optional[Tuple[int, ...]] = field(default=None)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("vertex count must be nonnegative")
        if self.n > MAX_VERTICES:
            raise GraphSizeError(f"graph has {self.n} vertices; the hard cap is {MAX_VERTICES}")
        if len(self.rows) != self.n:
            raise GraphError(f"expected {self.n} adjacency rows, got {len(self.rows)}")
        if self.labels is not None and len(self.labels) != self.n:
            raise GraphError("label map length differs from vertex count")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.rows):
            if row & ~full:
                raise GraphError(f"row {v} references a vertex outside 0..{self.n - 1}")
            if (row >> v) & 1:
                raise GraphError(f"loop at vertex {v}")
            for u in _bits(row):
                if not (self.rows[u] >> v) & 1:
                    raise GraphError(f"adjacency not symmetric at ({v}, {u})")

    @staticmethod
    def from_edges(n: int, edges: Iterable[Tuple[int, int]], labels: Optional[Sequence[int]] = None) -> "Graph":
        if n > MAX_VERTICES:
            raise GraphSizeError(f"graph has {n} vertices; the hard cap is {MAX_VERTICES}")
        rows = [0] * n
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) outside 0..{n - 1}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return Graph(n, tuple(rows), tuple(labels) if labels is not None else None)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, e={self.num_edges})"

    @property
    def num_edges(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.rows[u] >> v) & 1)

    def neighbors(self, v: int) -> List[int]:
        return list(_bits(self.rows[v]))

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def degrees(self) -> List[int]:
        return [row.bit_count() for row in self.rows]

    def min_degree(self) -> int:
        return min(self.degrees()) if self.n else 0

    def max_degree(self) -> int:
        return max(self.degrees()) if self.n else 0

    def edges(self) -> List[Tuple[int, int]]:
        out = []
        for u, row in enumerate(self.rows):
            for v in _bits(row >> (u + 1)):
                out.append((u, u + 1 + v))
        return out

    def label_of(self, v: int) -> int:
        return self.labels[v] if self.labels is not None else v

    def label_map(self) -> Dict[int, int]:
        """Original vertex id -> vertex index in this graph."""
        return {self.label_of(v): v for v in range(self.n)}

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=float)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1.0
        return a

    def degree_histogram(self) -> Dict[int, int]:
        hist: Dict[int, int] = {}
        for d in self.degrees():
            hist[d] = hist.get(d, 0) + 1
        return dict(sorted(hist.items()))


def bits(mask: int) -> List[int]:
    return list(_bits(mask))


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    rows = tuple(full & ~row & ~(1 << v) for v, row in enumerate(g.rows))
    return Graph(g.n, rows, g.labels)


def power(g: Graph, k: int) -> Graph:
    """
    k-th power: u ~ v iff their distance in g is between 1 and k

    Parameters:
    - g: graph
    - k: positive integer

    Returns:
    - Graph on the same vertices
    """
    if k < 1:
        raise GraphError("power requires k >= 1")
    rows = []
    for v in range(g.n):
        reach = 1 << v
        frontier = 1 << v
        for _ in range(k):
            nxt = 0
            for u in _bits(frontier):
                nxt |= g.rows[u]
            frontier = nxt & ~reach
            if not frontier:
                break
            reach |= frontier
        rows.append(reach & ~(1 << v))
    return Graph(g.n, tuple(rows), g.labels)


def join(g: Graph, h: Graph) -> Graph:
    """
    Disjoint union of g and h plus every edge between them; h is shifted by v(g)

    Parameters:
    - g: first graph (vertices 0..v(g)-1)
    - h: second graph (vertices v(g)..v(g)+v(h)-1)

    Returns:
    - Graph with e(g) + e(h) + v(g)v(h) edges
    """
    n = g.n + h.n
    g_all = (1 << g.n) - 1
    h_all = ((1 << h.n) - 1) << g.n
    rows = [row | h_all for row in g.rows]
    rows.extend((row << g.n) | g_all for row in h.rows)
    return Graph(n, tuple(rows))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    rows = list(g.rows) + [row << g.n for row in h.rows]
    return Graph(g.n + h.n, tuple(rows))


def induced(g: Graph, x) -> Graph:
    """
    Restriction of g to a vertex subset; the result records the original labels

    Parameters:
    - g: host graph
    - x: VertexSet or iterable of vertices

    Returns:
    - Graph on |x| vertices, new vertex i is old vertex sorted(x)[i]
    """
    vs = x if isinstance(x, VertexSet) else VertexSet.of(x)
    vs.validate(g.n)
    order = vs.sorted()
    index = {old: new for new, old in enumerate(order)}
    keep = vs.mask()
    rows = []
    for old in order:
        row = 0
        for u in _bits(g.rows[old] & keep):
            row |= 1 << index[u]
        rows.append(row)
    return Graph(len(order), tuple(rows), tuple(g.label_of(v) for v in order))


def _pivot_search(g: Graph, r: int, clique: List[int], cand: int, excl: int) -> Optional[List[int]]:
    if len(clique) >= r:
        return clique[:r]
    if len(clique) + cand.bit_count() < r:
        return None
    if not cand and not excl:
        return None
    pool = cand | excl
    pivot = max(_bits(pool), key=lambda u: ((g.rows[u] & cand).bit_count(), -u))
    for v in _bits(cand & ~g.rows[pivot]):
        found = _pivot_search(g, r, clique + [v], cand & g.rows[v], excl & g.rows[v])
        if found is not None:
            return found
        cand &= ~(1 << v)
        excl |= 1 << v
    return None


def clique_exists(g: Graph, r: int) -> Tuple[bool, Optional[Tuple[int, ...]]]:
    """
    Decide whether g contains K_r

    Parameters:
    - g: graph
    - r: clique order, at least 2

    Returns:
    - (found, witness) with witness a sorted r-tuple of vertices when found
    """
    if r < 2:
        raise GraphError("clique order must be at least 2")
    if r > g.n:
        return False, None
    found = _pivot_search(g, r, [], (1 << g.n) - 1, 0)
    if found is None:
        return False, None
    return True, tuple(sorted(found))


def find_cliques(g: Graph, r: int) -> List[Tuple[int, ...]]:
    """All r-cliques of g as increasing tuples, in lexicographic order."""
    out: List[Tuple[int, ...]] = []

    def extend(clique: Tuple[int, ...], cand: int) -> None:
        if len(clique) == r:
            out.append(clique)
            return
        if len(clique) + cand.bit_count() < r:
            return
        for v in _bits(cand):
            later = g.rows[v] & ~((1 << (v + 1)) - 1)
            extend(clique + (v,), cand & later)

    if r >= 1 and r <= g.n:
        extend((), (1 << g.n) - 1)
    return out


def clique_number(g: Graph) -> int:
    if g.n == 0:
        return 0
    best = 1
    while clique_exists(g, best + 1)[0]:
        best += 1
    return best
