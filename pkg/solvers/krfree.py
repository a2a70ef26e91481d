import time
from itertools import combinations
from typing import Collection, Dict, List, Optional, Sequence, Tuple

from graphs.constructions import turan_number
from graphs.graph import Graph, bits, clique_exists, find_cliques
from solvers import emit
from solvers.caps import CapGuard, SolverError
from solvers.certificates import CertificateError, CliqueSurvivesError, EdgeSubsetCertificate
from solvers.partition import _elapsed_ms, max_kcut_local


def _clique_masks(g: Graph, r: int, edge_id: Dict[Tuple[int, int], int]) -> List[int]:
    masks = []
    for clique in find_cliques(g, r):
        m = 0
        for u, v in combinations(clique, 2):
            m |= 1 << edge_id[(u, v)]
        masks.append(m)
    return masks


def _packing(cliques: Sequence[int], forbidden: int = 0) -> int:
    """Greedy count of cliques with pairwise disjoint allowed edge sets."""
    used = 0
    count = 0
    for c in cliques:
        allowed = c & ~forbidden
        if not allowed & used:
            used |= allowed
            count += 1
    return count


def _greedy_transversal(cliques: Sequence[int], m: int) -> int:
    chosen = 0
    unhit = list(cliques)
    while unhit:
        hits = [0] * m
        for c in unhit:
            for e in bits(c):
                hits[e] += 1
        best = max(range(m), key=lambda e: (hits[e], -e))
        chosen |= 1 << best
        unhit = [c for c in unhit if not (c >> best) & 1]
    return chosen


class _TransversalSearch:
    def __init__(self, cliques: List[int], best: int, best_set: int, floor: int):
        self.cliques = cliques
        self.best = best
        self.best_set = best_set
        self.floor = floor
        self.nodes = 0

    def run(self) -> Tuple[int, int]:
        if self.best > self.floor:
            self._dfs(0, 0, 0)
        return self.best, self.best_set

    def _dfs(self, chosen: int, count: int, forbidden: int) -> None:
        self.nodes += 1
        if self.best <= self.floor or count >= self.best:
            return
        unhit = [c for c in self.cliques if not c & chosen]
        if not unhit:
            self.best, self.best_set = count, chosen
            return
        if any(not c & ~forbidden for c in unhit):
            return
        if count + _packing(unhit, forbidden) >= self.best:
            return
        target = min(unhit, key=lambda c: (c & ~forbidden).bit_count())
        blocked = forbidden
        for e in bits(target & ~forbidden):
            self._dfs(chosen | (1 << e), count + 1, blocked)
            blocked |= 1 << e


def max_krfree_exact(g: Graph, r: int, guard: CapGuard = None, on_event=None, debug: bool = False) -> EdgeSubsetCertificate:
    """
    Exact K_r f(G) through a minimum edge transversal of the K_r copies

    Parameters:
    - g: graph within the cap for r
    - r: forbidden clique order, at least 3
    - guard: CapGuard holding the size caps
    - on_event: optional event callback

    Returns:
    - EdgeSubsetCertificate of a largest K_r-free subgraph (deterministic)
    """
    if r < 3:
        raise SolverError(f"max_krfree_exact needs r >= 3, got {r}")
    (guard or CapGuard()).require("max_krfree", g.n, r)
    start = time.perf_counter()
    edges = g.edges()
    edge_id = {e: i for i, e in enumerate(edges)}
    cliques = _clique_masks(g, r, edge_id)
    m = len(edges)

    if not cliques:
        best_set = 0
    else:
        floor = max(_packing(cliques), m - turan_number(g.n, r - 1))
        best_set = _greedy_transversal(cliques, m)
        cut = max_kcut_local(g, r - 1, seed=0, restarts=8)
        inside = 0
        for i, (u, v) in enumerate(edges):
            if cut.assignment[u] == cut.assignment[v]:
                inside |= 1 << i
        if inside.bit_count() < best_set.bit_count():
            best_set = inside
        emit(on_event, type="incumbent", solver="max_krfree_exact", removed=best_set.bit_count(), floor=floor,
             cliques=len(cliques))
        search = _TransversalSearch(cliques, best_set.bit_count(), best_set, floor)
        _, best_set = search.run()
        if debug:
            print(f"DEBUG: transversal search over {len(cliques)} copies of K_{r} visited {search.nodes} nodes")

    kept = tuple(e for i, e in enumerate(edges) if not (best_set >> i) & 1)
    cert = EdgeSubsetCertificate(r, g.n, kept, len(kept), "max_krfree_exact", True, _elapsed_ms(start))
    try:
        cert.verify(g)
    except CliqueSurvivesError as e:
        raise CertificateError(f"transversal search left a K_{r}: {list(e.witness)}") from e
    emit(on_event, type="optimum", solver="max_krfree_exact", value=cert.value)
    return cert


def krfree_from_parts(g: Graph, parts: Sequence[Sequence[int]], r: int,
                      allowed_pairs: Optional[Collection[Tuple[int, int]]] = None) -> EdgeSubsetCertificate:
    """
    Keep the edges between distinct parts and certify that no K_r survives

    Parameters:
    - g: graph
    - parts: disjoint vertex classes covering V(G)
    - r: forbidden clique order
    - allowed_pairs: optional (a, b) part-index pairs with a < b; other cross edges are dropped too

    Returns:
    - EdgeSubsetCertificate; raises CliqueSurvivesError carrying the surviving clique otherwise
    """
    start = time.perf_counter()
    owner = [-1] * g.n
    for i, part in enumerate(parts):
        for v in part:
            if not 0 <= v < g.n:
                raise SolverError(f"part {i} names vertex {v} outside 0..{g.n - 1}")
            if owner[v] >= 0:
                raise SolverError(f"vertex {v} lies in parts {owner[v]} and {i}")
            owner[v] = i
    uncovered = [v for v, o in enumerate(owner) if o < 0]
    if uncovered:
        raise SolverError(f"parts do not cover vertices {uncovered[:10]}")
    pairs = None if allowed_pairs is None else {tuple(sorted(p)) for p in allowed_pairs}
    kept = []
    for u, v in g.edges():
        a, b = owner[u], owner[v]
        if a == b:
            continue
        if pairs is not None and (min(a, b), max(a, b)) not in pairs:
            continue
        kept.append((u, v))
    h = Graph.from_edges(g.n, kept)
    found, witness = clique_exists(h, r)
    if found:
        raise CliqueSurvivesError(r, witness)
    return EdgeSubsetCertificate(r, g.n, tuple(kept), len(kept), "krfree_from_parts", True, _elapsed_ms(start))
