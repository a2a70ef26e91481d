import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from graphs.graph import Graph, clique_exists
from graphs.utils import format_fraction, to_fraction
from solvers.caps import SolverError


class CertificateError(SolverError):
    pass


class CliqueSurvivesError(SolverError):
    def __init__(self, r: int, witness: Tuple[int, ...]):
        self.r = r
        self.witness = witness
        super().__init__(f"a K_{r} survives in the kept edges: {list(witness)}")


def cut_value(g: Graph, assignment: Sequence[int]) -> int:
    """Number of edges whose endpoints are assigned (to parts >= 0) and lie in different parts."""
    return sum(1 for u, v in g.edges()
               if assignment[u] >= 0 and assignment[v] >= 0 and assignment[u] != assignment[v])


@dataclass
class PartitionCertificate:
    """
    Vertex -> part assignment witnessing a k-partite subgraph

    Parameters:
    - k: part count
    - assignment: part of each vertex, -1 for vertices left unassigned
    - value: number of cross edges
    - solver: name of the procedure that produced it
    - deterministic: False when the assignment depends on scheduling
    - wall_time_ms: time spent producing it
    """
    k: int
    assignment: Tuple[int, ...]
    value: int
    solver: str = "given"
    deterministic: bool = True
    wall_time_ms: float = 0.0

    @property
    def n(self) -> int:
        return len(self.assignment)

    def assigned(self) -> List[int]:
        return [v for v, p in enumerate(self.assignment) if p >= 0]

    def is_complete(self) -> bool:
        return all(p >= 0 for p in self.assignment)

    def parts(self) -> List[List[int]]:
        out: List[List[int]] = [[] for _ in range(self.k)]
        for v, p in enumerate(self.assignment):
            if p >= 0:
                out[p].append(v)
        return out

    def verify(self, g: Graph) -> None:
        if self.n != g.n:
            raise CertificateError(f"assignment covers {self.n} vertices, graph has {g.n}")
        bad = [v for v, p in enumerate(self.assignment) if not -1 <= p < self.k]
        if bad:
            raise CertificateError(f"vertices {bad} assigned outside parts 0..{self.k - 1}")
        actual = cut_value(g, self.assignment)
        if actual != self.value:
            raise CertificateError(f"certificate claims {self.value} cross edges, assignment gives {actual}")

    def to_dict(self) -> Dict:
        return {
            "problem": "max_kcut",
            "n": self.n,
            "k_or_r": self.k,
            "value": self.value,
            "assignment_or_edges": list(self.assignment),
            "solver": self.solver,
            "deterministic": self.deterministic,
            "wall_time_ms": self.wall_time_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @staticmethod
    def from_dict(d: Dict) -> "PartitionCertificate":
        return PartitionCertificate(int(d["k_or_r"]), tuple(int(p) for p in d["assignment_or_edges"]), int(d["value"]),
                                    d.get("solver", "given"), bool(d.get("deterministic", True)),
                                    float(d.get("wall_time_ms", 0.0)))

    @staticmethod
    def from_json(s: str) -> "PartitionCertificate":
        return PartitionCertificate.from_dict(json.loads(s))


@dataclass
class EdgeSubsetCertificate:
    """
    Edge set witnessing a K_r-free subgraph

    Parameters:
    - r: forbidden clique order
    - n: vertex count of the host graph
    - kept_edges: edges of the K_r-free subgraph, each (u, v) with u < v
    - value: number of kept edges
    """
    r: int
    n: int
    kept_edges: Tuple[Tuple[int, int], ...]
    value: int
    solver: str = "given"
    deterministic: bool = True
    wall_time_ms: float = 0.0

    @property
    def t(self) -> Fraction:
        return Fraction(self.value, self.n * self.n) if self.n else Fraction(0)

    def subgraph(self) -> Graph:
        return Graph.from_edges(self.n, self.kept_edges)

    def verify(self, g: Graph) -> None:
        if self.n != g.n:
            raise CertificateError(f"certificate is on {self.n} vertices, graph has {g.n}")
        missing = [e for e in self.kept_edges if not g.has_edge(*e)]
        if missing:
            raise CertificateError(f"kept edges {missing[:5]} are not edges of the graph")
        if len(set(self.kept_edges)) != self.value:
            raise CertificateError(f"certificate claims {self.value} edges, lists {len(set(self.kept_edges))}")
        found, witness = clique_exists(self.subgraph(), self.r)
        if found:
            raise CliqueSurvivesError(self.r, witness)

    def to_dict(self) -> Dict:
        return {
            "problem": "max_krfree",
            "n": self.n,
            "k_or_r": self.r,
            "value": self.value,
            "assignment_or_edges": [list(e) for e in self.kept_edges],
            "solver": self.solver,
            "deterministic": self.deterministic,
            "wall_time_ms": self.wall_time_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @staticmethod
    def from_dict(d: Dict) -> "EdgeSubsetCertificate":
        edges = tuple((int(u), int(v)) for u, v in d["assignment_or_edges"])
        return EdgeSubsetCertificate(int(d["k_or_r"]), int(d["n"]), edges, int(d["value"]),
                                     d.get("solver", "given"), bool(d.get("deterministic", True)),
                                     float(d.get("wall_time_ms", 0.0)))


@dataclass
class PeelTrace:
    """
    Record of a min-degree peeling run

    Parameters:
    - gamma: degree-fraction threshold
    - n: vertex count of the input graph
    - e: edge count of the input graph
    - deleted: (original label, degree at deletion, vertex count at deletion) in deletion order
    - final: the surviving graph, carrying original labels
    """
    gamma: Fraction
    n: int
    e: int
    deleted: List[Tuple[int, int, int]] = field(default_factory=list)
    final: Optional[Graph] = None

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.final.n, self.n) if self.n else Fraction(0)

    @property
    def beta(self) -> Fraction:
        v = self.final.n
        return Fraction(self.final.num_edges, v * v) if v else Fraction(0)

    @property
    def edge_loss_bound(self) -> Fraction:
        """Lower bound e(G) - gamma * (sum of sizes at deletion) on the surviving edge count."""
        return self.e - self.gamma * sum(size for _, _, size in self.deleted)

    def check_edge_bound(self) -> bool:
        return self.final.num_edges >= self.edge_loss_bound

    def to_dict(self) -> Dict:
        return {
            "gamma": format_fraction(self.gamma),
            "n": self.n,
            "e": self.e,
            "deleted": [list(step) for step in self.deleted],
            "final_labels": [self.final.label_of(v) for v in range(self.final.n)],
            "final_edges": self.final.num_edges,
            "final_min_degree": self.final.min_degree(),
            "alpha": format_fraction(self.alpha),
            "beta": format_fraction(self.beta),
            "edge_loss_bound": format_fraction(self.edge_loss_bound),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @staticmethod
    def parse_gamma(value) -> Fraction:
        gamma = to_fraction(value)
        if not 0 <= gamma <= 1:
            raise SolverError(f"gamma must lie in [0, 1], got {gamma}")
        return gamma
