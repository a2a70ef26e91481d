import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from graphs.constructions import complete_graph, make_F, make_wheel
from graphs.graph import Graph, bits, clique_exists, join
from graphs.utils import format_fraction
from solvers import emit
from solvers.caps import CapExceededError, CapGuard, SolverError


class CollapseError(SolverError):
    def __init__(self, message: str, edge: Tuple[int, int] = None):
        self.edge = edge
        super().__init__(message)


@dataclass(frozen=True)
class HomomorphismMap:
    """
    Vertex map from a source graph to a target graph

    Parameters:
    - source_n: source vertex count
    - target_n: target vertex count
    - mapping: image of each source vertex
    """
    source_n: int
    target_n: int
    mapping: Tuple[int, ...]

    def broken_edge(self, g: Graph, h: Graph) -> Optional[Tuple[int, int]]:
        for u, v in g.edges():
            if not h.has_edge(self.mapping[u], self.mapping[v]):
                return (u, v)
        return None

    def is_edge_preserving(self, g: Graph, h: Graph) -> bool:
        return len(self.mapping) == g.n and self.broken_edge(g, h) is None

    def image(self) -> List[int]:
        return sorted(set(self.mapping))

    def missing(self) -> List[int]:
        hit = set(self.mapping)
        return [t for t in range(self.target_n) if t not in hit]

    def to_dict(self) -> Dict:
        return {"source_n": self.source_n, "target_n": self.target_n, "map": list(self.mapping)}

    def to_json(self) -> str:
        return json.dumps(list(self.mapping))

    @staticmethod
    def from_dict(d: Dict) -> "HomomorphismMap":
        return HomomorphismMap(int(d["source_n"]), int(d["target_n"]), tuple(int(t) for t in d["map"]))


def is_surjective(h: HomomorphismMap) -> bool:
    return not h.missing()


def find_homomorphism(g: Graph, h: Graph, guard: CapGuard = None) -> Optional[HomomorphismMap]:
    """
    Backtracking search for an edge-preserving map g -> h with forward checking

    Parameters:
    - g: source graph
    - h: target graph (at most 16 vertices)
    - guard: CapGuard holding the size caps

    Returns:
    - First map found (source vertices by descending degree, target values ascending), or None
    """
    (guard or CapGuard()).require("homomorphism", g.n, h.n)
    if g.n == 0:
        return HomomorphismMap(0, h.n, ())
    if h.n == 0:
        return None
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    domains = [(1 << h.n) - 1] * g.n
    image = [-1] * g.n

    def search(i: int) -> bool:
        if i == g.n:
            return True
        v = order[i]
        for t in bits(domains[v]):
            saved = []
            ok = True
            for u in bits(g.rows[v]):
                if image[u] >= 0:
                    continue
                narrowed = domains[u] & h.rows[t]
                saved.append((u, domains[u]))
                domains[u] = narrowed
                if not narrowed:
                    ok = False
                    break
            if ok:
                image[v] = t
                if search(i + 1):
                    return True
                image[v] = -1
            for u, old in reversed(saved):
                domains[u] = old
        return False

    if not search(0):
        return None
    hom = HomomorphismMap(g.n, h.n, tuple(image))
    if not hom.is_edge_preserving(g, h):
        raise SolverError(f"search returned a map breaking edge {hom.broken_edge(g, h)}")
    return hom


def chromatic_at_most(g: Graph, k: int, guard: CapGuard = None) -> bool:
    if k >= g.n:
        return True
    if k <= 0:
        return g.n == 0
    return find_homomorphism(g, complete_graph(k), guard) is not None


def chromatic_number(g: Graph, guard: CapGuard = None) -> int:
    k = 0
    while not chromatic_at_most(g, k, guard):
        k += 1
    return k


def collapse_map(d: int, missing: int) -> Dict[int, int]:
    """
    Map F_d + K_1 minus one vertex onto F_{d-1} + K_1

    A missing rim vertex is first rotated to 3d-2; then j -> j for j <= 3d-5, 3d-4 -> 0,
    3d-3 -> 1 and the apex 3d-1 -> 3d-4. A missing apex sends rim vertex 3d-2 to the new apex.

    Parameters:
    - d: at least 2
    - missing: vertex of F_d + K_1 (apex = 3d-1) with no preimage

    Returns:
    - Original vertex label -> vertex of F_{d-1} + K_1, verified edge-preserving
    """
    if d < 2:
        raise SolverError(f"collapse_map needs d >= 2, got {d}")
    rim = 3 * d - 1
    apex = rim
    new_apex = 3 * d - 4
    if not 0 <= missing <= apex:
        raise SolverError(f"vertex {missing} is not in F_{d} + K_1")

    def base(j: int) -> int:
        if j <= 3 * d - 5:
            return j
        if j == 3 * d - 4:
            return 0
        if j == 3 * d - 3:
            return 1
        return new_apex

    if missing == apex:
        out = {v: base(v) for v in range(rim)}
    else:
        shift = (3 * d - 2 - missing) % rim
        out = {v: base((v + shift) % rim) for v in range(rim) if v != missing}
        out[apex] = new_apex

    source, target = make_wheel(d), make_wheel(d - 1)
    for u, v in source.edges():
        if u in out and v in out and not target.has_edge(out[u], out[v]):
            raise CollapseError(f"collapse of F_{d} + K_1 minus {missing} breaks edge ({u}, {v})", (u, v))
    return out


def collapse_homomorphism(g: Graph, phi: HomomorphismMap, d: int) -> HomomorphismMap:
    """
    Compose a non-surjective map g -> F_d + K_1 with the collapse onto F_{d-1} + K_1

    Parameters:
    - g: source graph
    - phi: homomorphism g -> F_d + K_1 missing at least one target vertex
    - d: at least 2

    Returns:
    - Verified homomorphism g -> F_{d-1} + K_1
    """
    wheel = make_wheel(d)
    if phi.target_n != wheel.n or not phi.is_edge_preserving(g, wheel):
        raise SolverError(f"phi is not a homomorphism into F_{d} + K_1")
    missing = phi.missing()
    if not missing:
        raise SolverError("phi is surjective; there is no vertex to collapse")
    g_map = collapse_map(d, missing[0])
    composed = HomomorphismMap(g.n, 3 * d - 3, tuple(g_map[t] for t in phi.mapping))
    broken = composed.broken_edge(g, make_wheel(d - 1))
    if broken is not None:
        raise CollapseError(f"composed collapse breaks edge {broken}", broken)
    return composed


def minimal_wheel_type(g: Graph, d_max: int = 4, guard: CapGuard = None) -> Optional[Tuple[int, HomomorphismMap]]:
    """Least d <= d_max with g -> F_d + K_1 (d = 1 is K_3), with the map; None when there is none."""
    for d in range(1, d_max + 1):
        hom = find_homomorphism(g, make_wheel(d), guard)
        if hom is not None:
            return d, hom
    return None


def degree_threshold(n: int, r: int, d: int) -> Fraction:
    return (1 - Fraction(2 * d - 1, (2 * d - 1) * r - d + 1)) * n


@dataclass
class DegreeHypothesisReport:
    r: int
    d: int
    n: int
    hypothesis_met: bool
    krfree: bool
    delta: int
    threshold: Fraction
    map_found: Optional[bool] = None
    mapping: Optional[HomomorphismMap] = None
    refused: Optional[str] = None

    @property
    def bug(self) -> bool:
        return self.hypothesis_met and self.krfree and self.map_found is False

    def to_dict(self) -> Dict:
        return {
            "r": self.r,
            "d": self.d,
            "n": self.n,
            "hypothesis_met": self.hypothesis_met,
            "krfree": self.krfree,
            "delta": self.delta,
            "threshold": format_fraction(self.threshold),
            "map_found": self.map_found,
            "map": list(self.mapping.mapping) if self.mapping is not None else None,
            "bug": self.bug,
            "refused": self.refused,
        }


def check_degree_hypothesis(g: Graph, r: int, d: int, guard: CapGuard = None, on_event=None) -> DegreeHypothesisReport:
    """
    Test the minimum-degree hypothesis for maps into F_d + K_{r-2} and run the search when it holds

    Parameters:
    - g: graph
    - r: at least 2; g should be K_{r+1}-free
    - d: 1..9

    Returns:
    - DegreeHypothesisReport; equality with the threshold counts as unmet. A search past the homomorphism cap
      leaves map_found at None and records the refusal
    """
    if not 1 <= d <= 9:
        raise SolverError(f"d must lie in 1..9, got {d}")
    if r < 2:
        raise SolverError(f"r must be at least 2, got {r}")
    threshold = degree_threshold(g.n, r, d)
    delta = g.min_degree()
    met = g.n > 0 and delta > threshold
    krfree = not clique_exists(g, r + 1)[0]
    report = DegreeHypothesisReport(r, d, g.n, met, krfree, delta, threshold)
    if met and krfree:
        target = join(make_F(d), complete_graph(r - 2))
        try:
            report.mapping = find_homomorphism(g, target, guard)
        except CapExceededError as e:
            report.refused = str(e)
            emit(on_event, type="refused", solver="check_degree_hypothesis", r=r, d=d, n=g.n, target=target.n)
            return report
        report.map_found = report.mapping is not None
        if report.bug:
            emit(on_event, type="bug", solver="check_degree_hypothesis", r=r, d=d, n=g.n)
    return report
