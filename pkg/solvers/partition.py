import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from graphs.constructions import turan_number
from graphs.graph import Graph, bits
from graphs.utils import ceil_fraction
from solvers import emit
from solvers.caps import CapGuard, SolverError
from solvers.certificates import CertificateError, PartitionCertificate, cut_value


def _elapsed_ms(start: float) -> float:
    return round((time.perf_counter() - start) * 1000.0, 3)


def guaranteed_cut(e: int, k: int) -> int:
    """ceil((k-1)/k * e), the value every greedy placement reaches."""
    return ceil_fraction(Fraction((k - 1) * e, k))


def degeneracy_order(g: Graph) -> List[int]:
    """Repeatedly remove a minimum-degree vertex (lowest index on ties)."""
    alive = (1 << g.n) - 1
    deg = g.degrees()
    order = []
    while alive:
        v = min(bits(alive), key=lambda u: (deg[u], u))
        order.append(v)
        alive &= ~(1 << v)
        for u in bits(g.rows[v] & alive):
            deg[u] -= 1
    return order


class _CutSearch:
    """
    Depth-first branch and bound over canonical k-colourings in a fixed vertex order

    A vertex may only open the next unused part, which removes the k! relabelings.
    """

    def __init__(self, g: Graph, k: int, order: Sequence[int]):
        self.g = g
        self.k = k
        self.order = list(order)
        n = g.n
        self.suffix_edges = [0] * (n + 1)
        later = 0
        for i in range(n - 1, -1, -1):
            v = self.order[i]
            self.suffix_edges[i] = self.suffix_edges[i + 1] + (g.rows[v] & later).bit_count()
            later |= 1 << v
        self.turan = [turan_number(m, k) for m in range(n + 1)]
        self.nodes = 0

    def _bound(self, i: int, cur: int, masks: List[int], assigned: int, used: int) -> int:
        rows = self.g.rows
        extra = 0
        for v in self.order[i:]:
            row = rows[v]
            to_assigned = (row & assigned).bit_count()
            if not to_assigned:
                continue
            if used < self.k:
                extra += to_assigned
            else:
                extra += to_assigned - min((row & m).bit_count() for m in masks[:used])
        rest = self.n_left(i)
        return cur + extra + min(self.suffix_edges[i], self.turan[rest])

    def n_left(self, i: int) -> int:
        return len(self.order) - i

    def run(self, target: int, strict: bool, prefix: Sequence[int] = ()) -> Tuple[int, Optional[List[int]]]:
        """
        Search for an assignment beating (strict) or matching (not strict) target

        Parameters:
        - target: value to beat or match
        - strict: True keeps improving past target, False stops at the first match
        - prefix: forced parts for the first len(prefix) vertices of the order

        Returns:
        - (best value found, its assignment) or (target, None) when nothing qualifies
        """
        n = self.g.n
        self.best = target
        self.best_assign: Optional[List[int]] = None
        self.strict = strict
        self.done = False
        assign = [-1] * n
        masks = [0] * self.k
        assigned = 0
        cur = 0
        used = 0
        for i, p in enumerate(prefix):
            v = self.order[i]
            cur += (self.g.rows[v] & assigned).bit_count() - (self.g.rows[v] & masks[p]).bit_count()
            masks[p] |= 1 << v
            assigned |= 1 << v
            assign[v] = p
            used = max(used, p + 1)
        self._dfs(len(prefix), cur, assign, masks, assigned, used)
        return self.best, self.best_assign

    def _dfs(self, i: int, cur: int, assign: List[int], masks: List[int], assigned: int, used: int) -> None:
        self.nodes += 1
        if i == len(self.order):
            if (cur > self.best) if self.strict else (cur >= self.best):
                self.best = cur
                self.best_assign = list(assign)
                if not self.strict:
                    self.done = True
            return
        bound = self._bound(i, cur, masks, assigned, used)
        if (bound <= self.best) if self.strict else (bound < self.best):
            return
        v = self.order[i]
        row = self.g.rows[v]
        to_assigned = (row & assigned).bit_count()
        bit = 1 << v
        for p in range(min(used + 1, self.k)):
            gain = to_assigned - (row & masks[p]).bit_count()
            masks[p] |= bit
            assign[v] = p
            self._dfs(i + 1, cur + gain, assign, masks, assigned | bit, max(used, p + 1))
            masks[p] &= ~bit
            assign[v] = -1
            if self.done:
                return


def _subtree_best(args):
    n, rows, k, order, prefix, target = args
    search = _CutSearch(Graph(n, rows), k, order)
    return search.run(target, strict=True, prefix=prefix)


def _canonical_prefixes(k: int, depth: int) -> List[Tuple[int, ...]]:
    out = [()]
    for _ in range(depth):
        nxt = []
        for pre in out:
            used = max(pre) + 1 if pre else 0
            nxt.extend(pre + (p,) for p in range(min(used + 1, k)))
        out = nxt
    return out


def max_kcut_exact(g: Graph, k: int, guard: CapGuard = None, threads: int = 1, on_event=None,
                   debug: bool = False) -> PartitionCertificate:
    """
    Exact maximum k-cut P_k(G)

    Parameters:
    - g: graph within the cap for k
    - k: part count, at least 2
    - guard: CapGuard holding the size caps
    - threads: worker processes for the value search; above 1 the certificate is not canonical
    - on_event: optional event callback

    Returns:
    - PartitionCertificate; single-threaded it is the lexicographically smallest optimal assignment
    """
    if k < 2:
        raise SolverError(f"max_kcut_exact needs k >= 2, got {k}")
    (guard or CapGuard()).require("max_kcut", g.n, k)
    start = time.perf_counter()
    n = g.n
    ceiling = min(g.num_edges, turan_number(n, k))

    incumbent = max_kcut_local(g, k, seed=0, restarts=8)
    greedy = greedy_partition(g, k)
    if greedy.value > incumbent.value:
        incumbent = greedy
    best_value = incumbent.value
    best_assign = list(incumbent.assignment)
    emit(on_event, type="incumbent", solver="max_kcut_exact", value=best_value, ceiling=ceiling)

    order = list(reversed(degeneracy_order(g)))
    parallel = threads > 1 and n > 8
    if best_value < ceiling:
        if parallel:
            depth = min(n, 4)
            prefixes = _canonical_prefixes(k, depth)
            jobs = [(n, g.rows, k, order, pre, best_value) for pre in prefixes]
            with ProcessPoolExecutor(max_workers=threads) as pool:
                for value, assign in pool.map(_subtree_best, jobs):
                    if assign is not None and value > best_value:
                        best_value, best_assign = value, assign
        else:
            search = _CutSearch(g, k, order)
            value, assign = search.run(best_value, strict=True)
            if assign is not None:
                best_value, best_assign = value, assign
            if debug:
                print(f"DEBUG: value search visited {search.nodes} nodes")
    emit(on_event, type="optimum", solver="max_kcut_exact", value=best_value)

    if parallel:
        cert = PartitionCertificate(k, tuple(best_assign), best_value, "max_kcut_exact", False, _elapsed_ms(start))
        cert.verify(g)
        return cert

    canonical = _CutSearch(g, k, range(n))
    value, assign = canonical.run(best_value, strict=False)
    if assign is None or value != best_value:
        raise CertificateError(f"canonical search failed to reach the optimum {best_value}")
    if debug:
        print(f"DEBUG: canonical search visited {canonical.nodes} nodes")
    cert = PartitionCertificate(k, tuple(assign), value, "max_kcut_exact", True, _elapsed_ms(start))
    cert.verify(g)
    return cert


def _neighbour_counts(g: Graph, k: int, assign: Sequence[int]) -> List[List[int]]:
    counts = [[0] * k for _ in range(g.n)]
    for u, v in g.edges():
        counts[u][assign[v]] += 1
        counts[v][assign[u]] += 1
    return counts


def improving_moves(g: Graph, assignment: Sequence[int], k: int) -> List[Tuple[int, int, int, int]]:
    """
    Single-vertex reassignments that increase the cut

    Parameters:
    - g: graph
    - assignment: complete assignment into parts 0..k-1
    - k: part count

    Returns:
    - (vertex, from part, to part, gain) for every strictly improving move
    """
    if k < 2:
        return []
    counts = _neighbour_counts(g, k, assignment)
    moves = []
    for v in range(g.n):
        p = assignment[v]
        for q in range(k):
            gain = counts[v][p] - counts[v][q]
            if q != p and gain > 0:
                moves.append((v, p, q, gain))
    return moves


def is_move_optimal(g: Graph, assignment: Sequence[int], k: int) -> bool:
    return not improving_moves(g, assignment, k)


def _local_ascent(g: Graph, k: int, assign: List[int]) -> None:
    counts = _neighbour_counts(g, k, assign)
    improved = True
    while improved:
        improved = False
        for v in range(g.n):
            p = assign[v]
            q = min(range(k), key=lambda c: (counts[v][c], c))
            if counts[v][p] - counts[v][q] > 0:
                assign[v] = q
                for u in g.neighbors(v):
                    counts[u][p] -= 1
                    counts[u][q] += 1
                improved = True


def max_kcut_local(g: Graph, k: int, seed: int = 0, restarts: int = 10) -> PartitionCertificate:
    """
    Multi-start single-vertex-move local search for a large k-cut

    Parameters:
    - g: graph
    - k: part count (k = 1 gives the trivial cut 0)
    - seed: numpy generator seed
    - restarts: number of random starting assignments

    Returns:
    - Best vertex-move-optimal PartitionCertificate found
    """
    start = time.perf_counter()
    if k <= 1 or g.n == 0:
        return PartitionCertificate(max(k, 1), (0,) * g.n, 0, "max_kcut_local", True, _elapsed_ms(start))
    rng = np.random.default_rng(seed)
    best_value, best_assign = -1, None
    for _ in range(max(1, restarts)):
        assign = [int(p) for p in rng.integers(0, k, size=g.n)]
        _local_ascent(g, k, assign)
        value = cut_value(g, assign)
        if value > best_value:
            best_value, best_assign = value, assign
    return PartitionCertificate(k, tuple(best_assign), best_value, "max_kcut_local", True, _elapsed_ms(start))


def _place_greedily(g: Graph, k: int, assign: List[int], vertices: Sequence[int]) -> None:
    for v in vertices:
        counts = [0] * k
        for u in g.neighbors(v):
            if assign[u] >= 0:
                counts[assign[u]] += 1
        assign[v] = min(range(k), key=lambda c: (counts[c], c))


def greedy_partition(g: Graph, k: int) -> PartitionCertificate:
    """
    Conditional-expectation placement: each vertex, in index order, joins the part holding
    the fewest of its already placed neighbours

    Parameters:
    - g: graph
    - k: part count, at least 2

    Returns:
    - PartitionCertificate with value >= ceil((k-1)/k * e(G))
    """
    if k < 2:
        raise SolverError(f"greedy_partition needs k >= 2, got {k}")
    start = time.perf_counter()
    assign = [-1] * g.n
    _place_greedily(g, k, assign, range(g.n))
    return PartitionCertificate(k, tuple(assign), cut_value(g, assign), "greedy_partition", True, _elapsed_ms(start))


def partial_certificate(g: Graph, assignment: Sequence[int], k: int) -> PartitionCertificate:
    """Certificate for a partial assignment (-1 = unassigned); value counts cross edges inside S."""
    assign = tuple(int(p) for p in assignment)
    return PartitionCertificate(k, assign, cut_value(g, assign), "partial")


def extension_bound(g: Graph, partial: PartitionCertificate) -> int:
    """Cross edges inside S plus ceil((k-1)/k * m), m the number of edges meeting V \\ S."""
    m = sum(1 for u, v in g.edges() if partial.assignment[u] < 0 or partial.assignment[v] < 0)
    return partial.value + guaranteed_cut(m, partial.k)


def extend_partition(g: Graph, partial: PartitionCertificate, k: int = None) -> PartitionCertificate:
    """
    Extend a partition of S to all of V, placing V \\ S greedily in increasing vertex order

    Parameters:
    - g: graph
    - partial: certificate with -1 on the vertices outside S
    - k: part count; must equal partial.k when given

    Returns:
    - PartitionCertificate agreeing with partial on S, value >= extension_bound(g, partial)
    """
    if k is not None and k != partial.k:
        raise CertificateError(f"partial certificate has k={partial.k}, extension asked for k={k}")
    partial.verify(g)
    start = time.perf_counter()
    assign = list(partial.assignment)
    _place_greedily(g, partial.k, assign, [v for v in range(g.n) if assign[v] < 0])
    return PartitionCertificate(partial.k, tuple(assign), cut_value(g, assign), "extend_partition", True,
                                _elapsed_ms(start))
