from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Sequence, Tuple

import numpy as np

from graphs.graph import Graph, GraphError, join
from graphs.utils import apportion, format_fraction, round_half_up, to_fraction

MODES = ("seeded-random", "quasirandom")
DEFAULT_THETA = Fraction(1, 8)


class SpecError(GraphError):
    pass


# Standard graphs

def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) for v in range(n)))


def circulant(n: int, steps: Sequence[int]) -> Graph:
    edges = set()
    for v in range(n):
        for s in steps:
            u = (v + s) % n
            if u != v:
                edges.add((min(u, v), max(u, v)))
    return Graph.from_edges(n, sorted(edges))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise SpecError("a cycle needs at least 3 vertices")
    return circulant(n, [1])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def part_ranges(sizes: Sequence[int]) -> List[List[int]]:
    out = []
    start = 0
    for s in sizes:
        out.append(list(range(start, start + s)))
        start += s
    return out


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    n = sum(sizes)
    rows = []
    for part in part_ranges(sizes):
        mask = 0
        for v in part:
            mask |= 1 << v
        rows.extend([((1 << n) - 1) & ~mask] * len(part))
    return Graph(n, tuple(rows))


def blowup(h: Graph, sizes: Sequence[int]) -> Graph:
    """
    Replace vertex i of h by an independent set of sizes[i] vertices

    Parameters:
    - h: pattern graph
    - sizes: part size for each vertex of h

    Returns:
    - Graph with parts laid out consecutively, complete bipartite between parts adjacent in h
    """
    if len(sizes) != h.n:
        raise SpecError(f"blowup needs {h.n} part sizes, got {len(sizes)}")
    parts = part_ranges(sizes)
    edges = []
    for a, b in h.edges():
        edges.extend((u, v) for u in parts[a] for v in parts[b])
    return Graph.from_edges(sum(sizes), edges)


# Families

def make_F(d: int) -> Graph:
    """
    F_1 = K_2; for d >= 2 the circulant on Z_{3d-1} with steps 1, 4, 7, ..., 3d-2

    Parameters:
    - d: positive integer

    Returns:
    - d-regular triangle-free graph on 3d-1 vertices
    """
    if d < 1:
        raise SpecError(f"F_d needs d >= 1, got {d}")
    if d == 1:
        return complete_graph(2)
    return circulant(3 * d - 1, list(range(1, 3 * d - 1, 3)))


def make_wheel(d: int) -> Graph:
    """F_d + K_1 with the apex labelled 3d-1."""
    return join(make_F(d), complete_graph(1))


def make_turan(n: int, k: int) -> Graph:
    if n < 0 or k < 1:
        raise SpecError(f"Turan graph needs n >= 0 and k >= 1, got n={n}, k={k}")
    return complete_multipartite(turan_part_sizes(n, k))


def turan_part_sizes(n: int, k: int) -> List[int]:
    q, rem = divmod(n, k)
    return [q + 1] * rem + [q] * (k - rem)


def turan_number(n: int, k: int) -> int:
    """Edge count of the Turan graph T_k(n)."""
    sizes = turan_part_sizes(n, k)
    return (n * n - sum(s * s for s in sizes)) // 2


@dataclass(frozen=True)
class BlowupSpec:
    """
    Pentagon blowup parameters

    Parameters:
    - part_sizes: |V_0|..|V_4|
    - theta: density of the V_i - V_{i+2} edges
    - seed: sampling seed for seeded-random mode
    - mode: seeded-random or quasirandom
    """
    part_sizes: Tuple[int, ...]
    theta: Fraction = DEFAULT_THETA
    seed: int = 0
    mode: str = "seeded-random"

    def __post_init__(self):
        object.__setattr__(self, "part_sizes", tuple(int(s) for s in self.part_sizes))
        object.__setattr__(self, "theta", to_fraction(self.theta))
        self.validate()

    def validate(self):
        if len(self.part_sizes) != 5:
            raise SpecError(f"a pentagon blowup has 5 parts, got {len(self.part_sizes)}")
        if any(s < 0 for s in self.part_sizes):
            raise SpecError("part sizes must be nonnegative")
        if not (0 <= self.theta <= 1):
            raise SpecError(f"theta must lie in [0, 1], got {self.theta}")
        if self.mode not in MODES:
            raise SpecError(f"mode must be one of {MODES}, got {self.mode!r}")

    def to_dict(self) -> Dict:
        return {
            "part_sizes": list(self.part_sizes),
            "theta": format_fraction(self.theta),
            "seed": self.seed,
            "mode": self.mode,
        }

    @staticmethod
    def from_dict(d: Dict) -> "BlowupSpec":
        return BlowupSpec(tuple(d["part_sizes"]), d.get("theta", DEFAULT_THETA), int(d.get("seed", 0)),
                          d.get("mode", "seeded-random"))


@dataclass(frozen=True)
class RecursiveSpec:
    """
    Parameters for G_r: a pentagon blowup plus apex parts V_5..V_{r+1}

    Parameters:
    - r: forbidden clique order, at least 4
    - base: pentagon blowup spec
    - apex_sizes: r-3 apex part sizes
    """
    r: int
    base: BlowupSpec
    apex_sizes: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "apex_sizes", tuple(int(s) for s in self.apex_sizes))
        if self.r < 4:
            raise SpecError(f"G_r needs r >= 4, got {self.r}")
        if len(self.apex_sizes) != self.r - 3:
            raise SpecError(f"G_{self.r} needs {self.r - 3} apex part sizes, got {len(self.apex_sizes)}")
        if any(s < 0 for s in self.apex_sizes):
            raise SpecError("apex part sizes must be nonnegative")

    @property
    def sizes(self) -> List[int]:
        return list(self.base.part_sizes) + list(self.apex_sizes)

    def to_dict(self) -> Dict:
        return {"r": self.r, "base": self.base.to_dict(), "apex_sizes": list(self.apex_sizes)}

    @staticmethod
    def from_dict(d: Dict) -> "RecursiveSpec":
        return RecursiveSpec(int(d["r"]), BlowupSpec.from_dict(d["base"]), tuple(d["apex_sizes"]))


def theta_edge_count(theta: Fraction, a: int, b: int) -> int:
    return round_half_up(theta * a * b)


def _theta_indices(spec: BlowupSpec, pair: int, total: int, count: int) -> List[int]:
    if count == 0:
        return []
    if spec.mode == "quasirandom":
        return [(j * total) // count for j in range(count)]
    rng = np.random.default_rng([spec.seed & 0xFFFFFFFFFFFFFFFF, pair])
    return sorted(int(i) for i in rng.choice(total, size=count, replace=False))


def make_pentagon_blowup(spec: BlowupSpec) -> Graph:
    """
    Five parts in a cycle: V_i u V_{i+1} is a clique, V_i - V_{i+2} carries round(theta |V_i||V_{i+2}|) edges

    Parameters:
    - spec: BlowupSpec

    Returns:
    - Graph with V_0 first, parts laid out consecutively
    """
    parts = part_ranges(spec.part_sizes)
    edges = []
    for i in range(5):
        a, b = parts[i], parts[(i + 1) % 5]
        edges.extend((u, v) for j, u in enumerate(a) for v in a[j + 1:])
        edges.extend((u, v) for u in a for v in b)
    for i in range(5):
        a, b = parts[i], parts[(i + 2) % 5]
        total = len(a) * len(b)
        count = theta_edge_count(spec.theta, len(a), len(b))
        for idx in _theta_indices(spec, i, total, count):
            edges.append((a[idx // len(b)], b[idx % len(b)]))
    return Graph.from_edges(sum(spec.part_sizes), edges)


def make_G4(spec: BlowupSpec, apex_size: int) -> Graph:
    if apex_size < 0:
        raise SpecError("apex size must be nonnegative")
    return join(make_pentagon_blowup(spec), empty_graph(apex_size))


def make_Gr(spec: RecursiveSpec) -> Graph:
    g = make_G4(spec.base, spec.apex_sizes[0])
    for size in spec.apex_sizes[1:]:
        g = join(g, empty_graph(size))
    return g


class GrLayout:
    """
    Vertex ranges of the consecutive parts V_0, V_1, ... of a construction

    Parameters:
    - sizes: part sizes in layout order
    """

    def __init__(self, sizes: Sequence[int]):
        self.sizes = [int(s) for s in sizes]
        self.parts = part_ranges(self.sizes)
        self._owner = [i for i, part in enumerate(self.parts) for _ in part]

    @property
    def n(self) -> int:
        return len(self._owner)

    def part_of(self, v: int) -> int:
        return self._owner[v]

    def to_dict(self) -> Dict:
        return {"sizes": self.sizes, "ranges": [[p[0], p[-1] + 1] if p else [] for p in self.parts]}


def gr_parts(spec: RecursiveSpec) -> List[List[int]]:
    return GrLayout(spec.sizes).parts


def construction_part_weights(r: int) -> List[Fraction]:
    """Relative part sizes of G_r: 8/55 for each pentagon part, 3/11 for each apex part."""
    if r < 4:
        raise SpecError(f"G_r needs r >= 4, got {r}")
    return [Fraction(8, 55)] * 5 + [Fraction(3, 11)] * (r - 3)


def suggest_part_sizes(n: int, r: int = 4, weights: Sequence = None) -> List[int]:
    return apportion(n, weights if weights is not None else construction_part_weights(r))


def recursive_spec_for(n: int, r: int, theta=DEFAULT_THETA, seed: int = 0, mode: str = "seeded-random") -> RecursiveSpec:
    sizes = suggest_part_sizes(n, r)
    return RecursiveSpec(r, BlowupSpec(tuple(sizes[:5]), theta, seed, mode), tuple(sizes[5:]))


def construction_pair_filter(num_parts: int) -> FrozenSet[Tuple[int, int]]:
    """
    Part pairs whose cross edges form the K_r-free witness of G_r

    Parameters:
    - num_parts: 5 pentagon parts plus the apex parts

    Returns:
    - Consecutive pentagon pairs and every pair touching an apex part, as (a, b) with a < b
    """
    pairs = {tuple(sorted((i, (i + 1) % 5))) for i in range(5)}
    for apex in range(5, num_parts):
        pairs.update((p, apex) for p in range(apex))
    return frozenset(pairs)


def witness_edge_count(sizes: Sequence[int]) -> int:
    """Sum |V_i||V_{i+1}| over the pentagon plus each apex part times everything before it."""
    total = sum(sizes[i] * sizes[(i + 1) % 5] for i in range(5))
    before = sum(sizes[:5])
    for s in sizes[5:]:
        total += s * before
        before += s
    return total


def build_family(params: Dict) -> Graph:
    """
    Build a graph from a construction document (the sidecar spec of the construct command)

    Parameters:
    - params: {"family": ..., family-specific fields}

    Returns:
    - Graph
    """
    family = params.get("family")
    if family == "F":
        return make_F(int(params["d"]))
    if family == "wheel":
        return make_wheel(int(params["d"]))
    if family == "turan":
        return make_turan(int(params["n"]), int(params["k"]))
    if family == "complete":
        return complete_graph(int(params["n"]))
    if family == "cycle":
        return cycle_graph(int(params["n"]))
    if family == "petersen":
        return petersen_graph()
    if family == "pentagon":
        return make_pentagon_blowup(BlowupSpec.from_dict(params["spec"]))
    if family == "G4":
        return make_G4(BlowupSpec.from_dict(params["spec"]), int(params["apex"]))
    if family == "Gr":
        return make_Gr(RecursiveSpec.from_dict(params["spec"]))
    raise SpecError(f"unknown family {family!r}")
